# containers
from typing import Any

from monty.json import MSONable

from .exceptions import DataNotFound, InvalidResult
from .util import cc_logger, dict_decode


class Result(MSONable):
    """Container for archiving named values, e.g. the verdicts of a
    verification run or the outcome of a symmetry check. Values added under
    an existing name are archived rather than overwritten, and a Result may
    own child Results, forming a tree.

    Attributes:
        name (str): identifier for result
        depth (int): 1 for a root, 2 for its children, etc.

    Private attributes:
        _data (dict): name -> list of values, most recent last
        _children (list): child Result objects
    """

    def __init__(self, name: str = 'Empty'):
        self.name = name
        self._data = {}
        self._children = []
        self._depth = 1

    def __str__(self) -> str:
        string = f"{self.name}\n"
        for k, values in self._data.items():
            string += f"  {k} = {values[-1]}\n"
        spacer = "::" * self._depth
        for child in self._children:
            string += spacer + str(child)
        return string

    @property
    def depth(self) -> int:
        return self._depth

    @depth.setter
    def depth(self, value: int):
        self._depth = value
        for c in self._children:
            c.depth = value + 1

    def add_data(self, name: str, value: Any):
        """Adds a value, archiving any previous value with the same name"""
        self._data.setdefault(name, []).append(value)

    def get_data(self, name: str, step_back: int = 0) -> Any:
        """Retrieves a value; step_back counts back through the archive and
        stops at the oldest entry

        Raises:
             DataNotFound if nothing has been stored under that name
        """
        if name not in self._data:
            raise DataNotFound(name)
        values = self._data[name]
        return values[max(0, len(values) - 1 - step_back)]

    def has_data(self, name: str) -> bool:
        return name in self._data

    def add_child(self, child: object):
        if not isinstance(child, Result):
            raise InvalidResult(f"cannot add a {type(child).__name__} as a child Result")
        child.depth = self.depth + 1
        self._children.append(child)

    def get_child(self, name: str) -> object:
        for c in self._children:
            if c.name == name:
                return c
        raise DataNotFound(name)

    @property
    def children(self) -> list:
        return list(self._children)

    def search(self, name: str) -> dict[str, Any]:
        """Collects the latest value stored under `name` in this Result and
        all its descendants, keyed by the owning Result's name
        """
        results = {}
        if name in self._data:
            results[self.name] = self._data[name][-1]
        for c in self._children:
            results.update(c.search(name))
        return results

    def as_dict(self) -> dict[str, Any]:
        d = {
            "@module": type(self).__module__,
            "@class": type(self).__name__,
            "name": self.name,
            "data": self._data,
            "depth": self.depth,
            "children": [c.as_dict() for c in self._children],
        }
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> object:
        d = dict_decode(d)
        instance = cls(name=d.get("name", "Empty"))
        instance._data = {k: list(v) for k, v in d.get("data", {}).items()}
        for c in d.get("children", []):
            child = c if isinstance(c, Result) else Result.from_dict(c)
            instance.add_child(child)
        instance.depth = d.get("depth", 1)
        cc_logger.debug("Loaded Result %s with %d children", instance.name, len(instance._children))
        return instance
