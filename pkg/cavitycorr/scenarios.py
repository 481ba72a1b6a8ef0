# named preparation recipes
from enum import Enum
from typing import Any, Optional, Union

import numpy as np
from monty.json import MSONable
from scipy.optimize import brentq

from . import data
from .containers import Result
from .correlations import CorrelationRecord, record
from .coupling import CouplingSchedule, CouplingWindow, Model, Pulse, PulseShape, rabi_angle
from .dynamics import EvolutionMethod, evolve_scenario
from .exceptions import InvalidConfig, InvalidSchedule, InvalidWindow, UnreachableTarget
from .qstate import ExcitationSubspace
from .util import cc_logger, dict_decode


class ScenarioName(str, Enum):
    SINGLET_DJC = 'singlet-djc'
    WSTATE_DJC = 'wstate-djc'
    TRIPLET_DD = 'triplet-dd'
    CUSTOM = 'custom'


class Scenario(MSONable):
    """A preparation recipe: a schedule, the subspace it runs in, and how
    densely to sample it.

    Attributes:
         name (ScenarioName): which recipe
         schedule (CouplingSchedule): the couplings
         targets (dict): target angles ('theta1', 'theta2') or ('ratio', 'theta')
         samples (int): samples per coupling window, >= 2
         excitations (int): N of the subspace
    """

    def __init__(
        self,
        name: Union[ScenarioName, str],
        schedule: CouplingSchedule,
        targets: Optional[dict[str, float]] = None,
        samples: int = data.DEFAULT_SAMPLES,
        excitations: int = 1,
    ):
        if int(samples) != samples or samples < 2:
            raise InvalidConfig('samples', f"need at least 2 samples per window, got {samples}")
        self.name = ScenarioName(name)
        self.schedule = schedule
        self.targets = dict(targets or {})
        self.samples = int(samples)
        self.excitations = int(excitations)

    @property
    def model(self) -> Model:
        return self.schedule.model

    @property
    def subspace(self) -> ExcitationSubspace:
        return ExcitationSubspace(self.excitations)

    def windows(self) -> list[CouplingWindow]:
        if self.model == Model.DD:
            return [self.schedule.window2]
        return [self.schedule.window1, self.schedule.window2]

    def sample_times(self) -> np.ndarray:
        """Uniform samples over each window, including every window edge"""
        grids = [np.linspace(w.inject_time, w.end, self.samples) for w in self.windows()]
        return np.unique(np.concatenate(grids))

    def as_dict(self) -> dict[str, Any]:
        return {
            "@module": type(self).__module__,
            "@class": type(self).__name__,
            "name": self.name.value,
            "schedule": self.schedule.as_dict(),
            "targets": self.targets,
            "samples": self.samples,
            "excitations": self.excitations,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> object:
        d = dict_decode(d)
        schedule = d.get("schedule")
        if isinstance(schedule, dict):
            schedule = CouplingSchedule.from_dict(schedule)
        return cls(
            d.get("name", 'custom'),
            schedule,
            targets=d.get("targets", {}),
            samples=d.get("samples", data.DEFAULT_SAMPLES),
            excitations=d.get("excitations", 1),
        )


def solve_duration(pulse: Pulse, target: float) -> float:
    """Finds the window duration tau for which a pulse starting at t_i
    accumulates exactly `target` radians

    Raises:
         UnreachableTarget if no duration reaches the target
    """
    if target < 0:
        raise UnreachableTarget(f"negative target angle {target}")
    if pulse.strength <= 0:
        raise UnreachableTarget("a pulse with zero strength never rotates")
    if pulse.shape == PulseShape.CONSTANT:
        return target / pulse.strength

    def residual(tau: float) -> float:
        return rabi_angle(CouplingWindow(0.0, tau, pulse), tau) - target

    lo = 1e-12
    hi = target / pulse.strength
    for _ in range(60):
        if residual(hi) >= 0:
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise UnreachableTarget(f"pulse cannot accumulate {target} radians")

    tau = brentq(residual, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    if abs(residual(tau)) > data.ROOT_TOL:
        raise UnreachableTarget(f"duration search stalled {residual(tau):.2e} from the target")
    return tau


def build_scenario(
    name: Union[ScenarioName, str],
    shape: Union[PulseShape, str] = PulseShape.CONSTANT,
    strength: float = 1.0,
    ramp: float = data.DEFAULT_RAMP,
    samples: int = data.DEFAULT_SAMPLES,
    schedule: Optional[CouplingSchedule] = None,
    excitations: int = 1,
) -> Scenario:
    """Builds one of the named recipes by solving for the window durations
    that make the Rabi angles hit their targets.

    singlet-djc: theta1 = pi/4, theta2 = pi/2 sequentially
    wstate-djc:  theta1 = arccos(1/sqrt 3), theta2 = pi/4 sequentially
    triplet-dd:  gamma1 = (sqrt 2 + 1) gamma2 simultaneously, stopped at theta = pi
    custom:      passes `schedule` straight through

    Arguments:
         name: the recipe
         shape: pulse shape for every window
         strength (float): peak coupling; for triplet-dd this is gamma2
         ramp (float): ramp fraction of sine-squared pulses
         samples (int): samples per window
         schedule (CouplingSchedule): required for custom scenarios
         excitations (int): subspace N

    Returns:
         Scenario

    Raises:
         InvalidWindow for strength <= 0, UnreachableTarget, InvalidConfig
    """
    name = ScenarioName(name)
    if name == ScenarioName.CUSTOM:
        if schedule is None:
            raise InvalidConfig('schedule', "custom scenarios need an explicit schedule")
        return Scenario(name, schedule, samples=samples, excitations=excitations)

    if not strength > 0:
        raise InvalidWindow(f"strength must be > 0, got {strength}")
    pulse = Pulse(shape, strength, ramp)

    if name == ScenarioName.TRIPLET_DD:
        r = data.R_PLUS
        # gamma1 = r gamma2, so omega = sqrt(1 + r^2) gamma2
        tau = solve_duration(pulse, data.TRAPPING_ANGLE / np.sqrt(1.0 + r * r))
        sched = CouplingSchedule.simultaneous(CouplingWindow(0.0, tau, pulse), ratio=r)
        targets = {'ratio': r, 'theta': data.TRAPPING_ANGLE}
        cc_logger.info("%s: tau* = %.12f", name.value, tau)
    else:
        angles = data.SINGLET_ANGLES if name == ScenarioName.SINGLET_DJC else data.WSTATE_ANGLES
        tau1 = solve_duration(pulse, angles[0])
        tau2 = solve_duration(pulse, angles[1])
        sched = CouplingSchedule.sequential(CouplingWindow(0.0, tau1, pulse), tau2, pulse)
        targets = {'theta1': angles[0], 'theta2': angles[1]}
        cc_logger.info("%s: tau1 = %.12f, tau2 = %.12f", name.value, tau1, tau2)

    return Scenario(name, sched, targets=targets, samples=samples, excitations=excitations)


def run(
    scenario: Scenario,
    method: Union[EvolutionMethod, str] = EvolutionMethod.CLOSED_FORM,
    dt: Optional[float] = None,
) -> list[CorrelationRecord]:
    """Evolves a scenario and computes the correlation record at every sample time"""
    times = scenario.sample_times()
    cc_logger.info(
        "Running %s with %s over %d samples",
        scenario.name.value,
        EvolutionMethod(method).value,
        len(times),
    )
    trajectory = evolve_scenario(
        scenario.schedule, scenario.subspace, method, list(times), dt=dt
    )
    return [record(state, t) for t, state in trajectory]


def symmetry_time(scenario: Scenario) -> float:
    """Time t' at which atom 2's running angle reaches pi/4, where the atom 2
    and field entropies cross in a sequential run with constant couplings

    Raises:
         InvalidSchedule for simultaneous or non-constant schedules
    """
    sched = scenario.schedule
    if sched.model != Model.DJC:
        raise InvalidSchedule("the temporal symmetry is a property of the sequential model")
    for w in (sched.window1, sched.window2):
        if w.pulse.shape != PulseShape.CONSTANT:
            raise InvalidSchedule("the temporal symmetry needs constant couplings")
    w2 = sched.window2
    return w2.inject_time + 0.25 * np.pi / w2.pulse.strength


def symmetry_check(
    scenario: Scenario,
    points: int = 65,
    method: Union[EvolutionMethod, str] = EvolutionMethod.CLOSED_FORM,
) -> Result:
    """Compares M_a2(t' + dt) with M_f(t' - dt) and E_aa(t' + dt) with
    E_a1f(t' - dt) for dt from 0 up to the largest offset that keeps both
    instants inside atom 2's window.

    Returns:
         a Result holding 't_prime', 'max_offset', 'entropy_deviation',
         'entanglement_deviation' and 'passed'

    Raises:
         InvalidSchedule for non-constant or simultaneous schedules, or when atom 2 leaves
         before t'
    """
    t_prime = symmetry_time(scenario)
    w2 = scenario.schedule.window2
    max_offset = min(t_prime - w2.inject_time, w2.end - t_prime)
    if max_offset < 0:
        raise InvalidSchedule(
            f"atom 2 leaves at {w2.end} before its angle reaches pi/4 at t' = {t_prime}"
        )
    offsets = np.linspace(0.0, max_offset, max(points, 2))
    later = evolve_scenario(scenario.schedule, scenario.subspace, method, list(t_prime + offsets))
    earlier = evolve_scenario(scenario.schedule, scenario.subspace, method, list(t_prime - offsets))

    m_dev, e_dev = 0.0, 0.0
    for (tp, sp), (tm, sm) in zip(later, earlier):
        rp, rm = record(sp, tp), record(sm, tm)
        m_dev = max(m_dev, abs(rp.M_a2 - rm.M_f))
        e_dev = max(e_dev, abs(rp.E_aa - rm.E_a1f))

    result = Result(name='temporal-symmetry')
    result.add_data('t_prime', t_prime)
    result.add_data('max_offset', max_offset)
    result.add_data('entropy_deviation', m_dev)
    result.add_data('entanglement_deviation', e_dev)
    result.add_data('passed', max(m_dev, e_dev) < data.SYMMETRY_TOL)
    cc_logger.info("Temporal symmetry about t' = %.6f: dM = %.2e, dE = %.2e", t_prime, m_dev, e_dev)
    return result
