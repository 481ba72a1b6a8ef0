# flake8: noqa
from .api import *
from .correlations import CorrelationRecord, record, reduce, wootters_concurrence
from .coupling import CouplingSchedule, CouplingWindow, Model, Pulse, PulseShape
from .dynamics import evolve_scenario, trapping_time
from .qstate import (
    DensityMatrix,
    ExcitationSubspace,
    PureState,
    new_initial_state,
    norm,
    pure_density,
)
from .scenarios import ScenarioName, build_scenario, symmetry_check
from .util import read_json, write_json

__version__ = "1.0.0"
set_logger()
