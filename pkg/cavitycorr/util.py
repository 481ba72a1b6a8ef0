# utility functions
import json
import logging
from typing import Any

import numpy as np
from monty.json import MontyDecoder, MontyEncoder, MSONable

cc_logger = logging.getLogger('cavitycorr')  # internal logging object


def read_json(filename: str) -> MSONable:
    """Reads an MSONable object from file

    Arguments:
         filename (str): path to JSON file

    Returns:
         object
    """
    with open(filename, 'r', encoding='utf-8') as f:
        obj = json.load(f, cls=MontyDecoder)
    cc_logger.info("Read %s from %s", type(obj).__name__, filename)
    return obj


def write_json(filename: str, obj: Any):
    """Writes an MSONable object (or a plain dict/list of them) to file

    Arguments:
         filename (str): path to JSON file
         obj: object to be written
    """
    obj_type = type(obj).__name__
    if isinstance(obj, (MSONable, dict, list)):
        cc_logger.info("Writing %s to %s", obj_type, filename)
        with open(filename, 'w', encoding='utf-8') as f:
            json.dump(obj, f, cls=MontyEncoder, sort_keys=True)
    else:
        cc_logger.error("%s cannot be converted to JSON format", obj_type)


def dict_decode(d: dict[str, Any]) -> dict[str, Any]:
    decoder = MontyDecoder()
    return {k: decoder.process_decoded(v) for k, v in d.items()}


def format_float(x: float) -> str:
    """Shortest string that parses back to the same double"""
    return repr(float(x))


def complex_to_pairs(z: np.ndarray) -> list[list[float]]:
    """Splits a complex vector into [re, im] pairs for JSON"""
    return [[float(v.real), float(v.imag)] for v in np.asarray(z, dtype=complex)]


def pairs_to_complex(pairs: list[list[float]]) -> np.ndarray:
    """Inverse of complex_to_pairs"""
    return np.array([complex(re, im) for re, im in pairs], dtype=complex)
