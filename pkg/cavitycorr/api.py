import logging
from typing import Optional, Union

import colorlog

from .correlations import CorrelationRecord
from .dynamics import EvolutionMethod, available_methods, get_method, register_method
from .scenarios import Scenario, run

cc_logger = logging.getLogger('cavitycorr')

try:
    import dask
    import distributed

    _PARALLEL = True
except ImportError:
    _PARALLEL = False

_N_WORKERS = 3


def set_parallel(value: bool = True, workers: int = 3):
    """Turns parallel scenario sweeps on/off"""
    global _PARALLEL, _N_WORKERS
    _N_WORKERS = max(1, workers)
    if value:
        try:
            import dask
            import distributed

            _PARALLEL = True
        except ImportError:
            _PARALLEL = False
            cc_logger.warning("Could not import dask, parallelism turned off")
    else:
        _PARALLEL = False


def is_parallel() -> bool:
    return _PARALLEL


def set_logger(level: int = logging.INFO, filename: Optional[str] = None):
    """Initialises Python logging, formatting it nicely,
    and optionally printing to a file.
    """
    log_format = '%(asctime)s - ' '%(funcName)s - ' '%(levelname)s - ' '%(message)s'
    bold_seq = '\033[1m'
    colorlog_format = f'{bold_seq} ' '%(log_color)s ' f'{log_format}'
    colorlog.basicConfig(format=colorlog_format)
    cc_logger.setLevel(level)

    if filename is not None:
        fh = logging.FileHandler(filename)
        fh.setLevel(level)
        fh.setFormatter(logging.Formatter(log_format))
        cc_logger.addHandler(fh)


def _one_run(
    scenario: Scenario, method: str = 'closed-form', dt: Optional[float] = None
) -> tuple[str, list[CorrelationRecord]]:
    """Internal helper to run a single scenario in a distributed sweep"""
    return scenario.name.value, run(scenario, method=method, dt=dt)


def run_all(
    scenarios: list[Scenario],
    method: Union[EvolutionMethod, str] = EvolutionMethod.CLOSED_FORM,
    dt: Optional[float] = None,
    parallel: bool = False,
) -> dict[str, list[CorrelationRecord]]:
    """Runs a set of independent scenarios, optionally in parallel

    Arguments:
         scenarios (list): Scenario objects to run
         method: evolution method for every run
         dt (float): RK4 step, defaults per scenario
         parallel (bool): if True, will try to run distributed

    Returns:
         a dictionary of the form {scenario name: records}
    """
    method = EvolutionMethod(method).value
    names = [s.name.value for s in scenarios]
    if len(set(names)) < len(names):
        cc_logger.warning("Duplicate scenario names in sweep, later runs overwrite earlier ones")

    if parallel and _PARALLEL:
        from .parallelise import distribute

        with dask.config.set({"multiprocessing.context": "fork"}):
            pairs = distribute(_N_WORKERS, _one_run, scenarios, method=method, dt=dt)
    else:
        pairs = [_one_run(s, method=method, dt=dt) for s in scenarios]
    return dict(pairs)
