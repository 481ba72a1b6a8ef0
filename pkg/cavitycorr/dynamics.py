# Hamiltonians and time evolution in the excitation subspaces
import math
from enum import Enum
from typing import Callable, Optional, Union

import numpy as np
from scipy.optimize import brentq

from . import data
from .coupling import (
    CouplingSchedule,
    Model,
    collective_angle,
    evaluate,
    rabi_angle,
    ratio_mean,
)
from .exceptions import (
    InvalidSchedule,
    InvalidSubspace,
    InvalidTime,
    MethodNotAvailable,
    NotNormalised,
    StepSizeError,
    UnreachableTarget,
)
from .qstate import (
    ExcitationSubspace,
    PureState,
    SubspaceLike,
    as_subspace,
    new_initial_state,
    norm,
)
from .util import cc_logger


class EvolutionMethod(str, Enum):
    CLOSED_FORM = 'closed-form'
    RK4 = 'rk4'


class DJCPhase(str, Enum):
    ATOM_ONE_INSIDE = 'atom-one-inside'
    ATOM_TWO_INSIDE = 'atom-two-inside'


Trajectory = list[tuple[float, PureState]]


def coupling_matrix(subspace: ExcitationSubspace, f1: float, f2: float) -> np.ndarray:
    """Interaction Hamiltonian f1 (a^dag s1^- + h.c.) + f2 (a^dag s2^- + h.c.)
    restricted to the subspace, real symmetric in the basis order of
    ExcitationSubspace.
    """
    H = np.zeros((subspace.dim, subspace.dim))
    if subspace.N == 1:
        H[0, 2] = f1
        H[1, 2] = f2
    else:
        n = subspace.n
        H[0, 1] = f2 * np.sqrt(n)
        H[0, 2] = f1 * np.sqrt(n)
        H[1, 3] = f1 * np.sqrt(n + 1)
        H[2, 3] = f2 * np.sqrt(n + 1)
    return H + H.T


class SubspaceHamiltonian:
    """Time-dependent Hamiltonian of a schedule within one excitation subspace

    Attributes:
         schedule (CouplingSchedule): the couplings driving the atoms
         subspace (ExcitationSubspace): the invariant subspace
    """

    def __init__(self, schedule: CouplingSchedule, subspace: ExcitationSubspace):
        self.schedule = schedule
        self.subspace = subspace

    @property
    def dim(self) -> int:
        return self.subspace.dim

    def __call__(self, t: float) -> np.ndarray:
        f1, f2 = evaluate(self.schedule, t)
        return coupling_matrix(self.subspace, f1, f2)

    def breakpoints(self) -> list[float]:
        return self.schedule.breakpoints()

    def segment(self, a: float, b: float) -> Callable[[float], np.ndarray]:
        """Returns H(t) for a < t < b extended continuously onto [a, b].
        The interval must not contain a breakpoint in its interior, so each
        window is either switched on or off throughout it.
        """
        mid = 0.5 * (a + b)
        w1, w2 = self.schedule.window1, self.schedule.window2
        on1, on2 = w1.contains(mid), w2.contains(mid)
        ratio = self.schedule.ratio

        def H(t: float) -> np.ndarray:
            g2 = w2._inside(t) if on2 else 0.0
            if ratio is not None:
                g1 = ratio * g2
            else:
                g1 = w1._inside(t) if on1 else 0.0
            return coupling_matrix(self.subspace, g1, g2)

        return H


def build_hamiltonian(schedule: CouplingSchedule, subspace: SubspaceLike) -> SubspaceHamiltonian:
    """Builds the subspace Hamiltonian for a schedule

    Raises:
         InvalidSubspace if N = 0
    """
    space = as_subspace(subspace)
    if space.N < 1:
        raise InvalidSubspace("no Hamiltonian in the N = 0 subspace")
    return SubspaceHamiltonian(schedule, space)


def _rk4_segment(
    H: Callable[[float], np.ndarray],
    psi: np.ndarray,
    a: float,
    b: float,
    dt: float,
    dense: Optional[list],
) -> np.ndarray:
    nsteps = max(1, math.ceil((b - a) / dt - 1e-9))
    h = (b - a) / nsteps
    t = a
    for i in range(nsteps):
        Ht = H(t)
        Hmid = H(t + 0.5 * h)
        Hend = H(t + h)
        k1 = -1.0j * (Ht @ psi)
        k2 = -1.0j * (Hmid @ (psi + 0.5 * h * k1))
        k3 = -1.0j * (Hmid @ (psi + 0.5 * h * k2))
        k4 = -1.0j * (Hend @ (psi + h * k3))
        psi = psi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = a + (i + 1) * h
        if dense is not None:
            dense.append((t, psi.copy()))
    return psi


def integrate(
    H: SubspaceHamiltonian,
    psi0: PureState,
    t0: float,
    t1: float,
    dt: float,
    dense_output: bool = False,
) -> Union[PureState, tuple[PureState, Trajectory]]:
    """Propagates i d(psi)/dt = H(t) psi from t0 to t1 with fixed-step RK4.
    Integration is split at the coupling breakpoints so that no step straddles
    a discontinuity; the final state is not renormalised.

    Arguments:
         H (SubspaceHamiltonian): the Hamiltonian
         psi0 (PureState): normalised initial state
         t0, t1 (float): start and end times, t1 >= t0
         dt (float): maximum step size
         dense_output (bool): if True, also return the state after every step

    Returns:
         the final PureState, or (final state, list of (t, PureState)) if dense_output

    Raises:
         StepSizeError if the norm drifts by more than 1e-6
    """
    if dt <= 0:
        raise StepSizeError(f"step size must be positive, got {dt}")
    if t1 < t0:
        raise InvalidTime(f"cannot integrate backwards from {t0} to {t1}")
    if psi0.subspace != H.subspace:
        raise InvalidSubspace(f"state in N={psi0.N} but Hamiltonian in N={H.subspace.N}")
    start_norm = norm(psi0)
    if abs(start_norm - 1.0) > data.NORMALISED_INPUT_TOL:
        raise NotNormalised(f"initial state has norm {start_norm!r}")

    edges = [t0] + [p for p in H.breakpoints() if t0 < p < t1] + [t1]
    dense = [] if dense_output else None
    psi = np.array(psi0.amplitudes)
    for a, b in zip(edges[:-1], edges[1:]):
        if b > a:
            psi = _rk4_segment(H.segment(a, b), psi, a, b, dt, dense)

    final = PureState(H.subspace, psi)
    drift = abs(norm(final) - start_norm)
    cc_logger.debug("RK4 from %g to %g, norm drift %.2e", t0, t1, drift)
    if drift > data.NORM_DRIFT_LIMIT:
        raise StepSizeError(f"norm drifted by {drift:.2e} with dt = {dt}; reduce the step size")

    if dense_output:
        trajectory = [(t, PureState(H.subspace, v)) for t, v in dense]
        return final, trajectory
    return final


def closed_form_djc(
    theta1: float, theta2: float = 0.0, phase: DJCPhase = DJCPhase.ATOM_ONE_INSIDE
) -> PureState:
    """Sequential-model state from |e1, g2, 0> in the N = 1 subspace.

    While atom 1 is inside, theta1 is its running angle and theta2 is ignored:
    (cos th1, 0, -i sin th1). Once atom 2 is inside, theta1 is atom 1's final
    angle and theta2 atom 2's running angle:
    (cos th1, -sin th1 sin th2, -i sin th1 cos th2).
    """
    c1, s1 = np.cos(theta1), np.sin(theta1)
    if DJCPhase(phase) == DJCPhase.ATOM_ONE_INSIDE:
        return PureState(1, [c1, 0.0, -1.0j * s1])
    return PureState(1, [c1, -s1 * np.sin(theta2), -1.0j * s1 * np.cos(theta2)])


def closed_form_dd(r: float, theta: float) -> PureState:
    """Simultaneous-model state from |e1, g2, 0> with gamma1 = r gamma2, as a
    function of the collective angle theta:
    a2 = -2 alpha sin^2(theta/2), a1 = 1 + r a2, a3 = -i sqrt(r alpha) sin(theta)

    Raises:
         InvalidSchedule if r <= 0
    """
    if not r > 0:
        raise InvalidSchedule(f"coupling ratio must be > 0, got {r}")
    alpha = ratio_mean(r)
    a2 = -2.0 * alpha * np.sin(0.5 * theta) ** 2
    a1 = 1.0 + r * a2
    a3 = -1.0j * np.sqrt(r * alpha) * np.sin(theta)
    return PureState(1, [a1, a2, a3])


def trapping_time(schedule: CouplingSchedule) -> float:
    """Time tau* at which the collective angle first reaches pi, where the field
    returns to the vacuum

    Raises:
         UnreachableTarget if the schedule never accumulates an angle of pi
    """
    if schedule.model != Model.DD:
        raise InvalidSchedule("trapping only occurs in the simultaneous model")
    target = data.TRAPPING_ANGLE
    total = collective_angle(schedule, schedule.end)
    if total < target - data.ROOT_TOL:
        raise UnreachableTarget(f"collective angle only reaches {total:.6f} < pi")
    if abs(total - target) <= data.ROOT_TOL:
        return schedule.end
    return brentq(
        lambda t: collective_angle(schedule, t) - target,
        schedule.start,
        schedule.end,
        xtol=1e-14,
        rtol=4 * np.finfo(float).eps,
    )


_METHODS = {}


def register_method(func: Callable) -> Callable:
    """Registers a propagation method under its EvolutionMethod value"""
    _METHODS[func.__name__.replace('_', '-')] = func
    return func


def available_methods() -> list[str]:
    return list(_METHODS.keys())


def get_method(name: Union[EvolutionMethod, str]) -> Callable:
    """Looks up a registered propagation method, ignoring case

    Raises:
         MethodNotAvailable if nothing is registered under that name
    """
    key = name.value if isinstance(name, EvolutionMethod) else str(name).lower().replace('_', '-')
    if key not in _METHODS:
        raise MethodNotAvailable(key, "not registered")
    return _METHODS[key]


def _closed_form_state(schedule: CouplingSchedule, t: float) -> PureState:
    if schedule.model == Model.DD:
        return closed_form_dd(schedule.ratio, collective_angle(schedule, t))
    w1, w2 = schedule.window1, schedule.window2
    if t < w1.inject_time:
        return closed_form_djc(0.0)
    if t < w2.inject_time:
        return closed_form_djc(rabi_angle(w1, t))
    theta1 = rabi_angle(w1, w1.end)
    return closed_form_djc(theta1, rabi_angle(w2, t), DJCPhase.ATOM_TWO_INSIDE)


@register_method
def closed_form(
    schedule: CouplingSchedule,
    subspace: ExcitationSubspace,
    sample_times: list[float],
    initial: Optional[PureState] = None,
    dt: Optional[float] = None,
) -> Trajectory:
    """Evaluates the analytic N = 1 solutions at each sample time"""
    if subspace.N != 1:
        raise MethodNotAvailable('closed-form', f"no closed form for N = {subspace.N}")
    if initial is not None and not np.array_equal(
        initial.amplitudes, new_initial_state(subspace).amplitudes
    ):
        raise MethodNotAvailable('closed-form', "closed forms start from |e1, g2, 0>")
    if schedule.model == Model.DD and schedule.ratio is None:
        raise MethodNotAvailable('closed-form', "simultaneous model needs a fixed coupling ratio")
    return [(t, _closed_form_state(schedule, t)) for t in sample_times]


@register_method
def rk4(
    schedule: CouplingSchedule,
    subspace: ExcitationSubspace,
    sample_times: list[float],
    initial: Optional[PureState] = None,
    dt: Optional[float] = None,
) -> Trajectory:
    """Integrates from the schedule start through the sorted sample times

    Raises:
         StepSizeError if the norm drifts by more than 1e-6 over the whole run
    """
    H = build_hamiltonian(schedule, subspace)
    psi = initial if initial is not None else new_initial_state(subspace)
    start_norm = norm(psi)
    if dt is None:
        dt = default_step(schedule)

    order = np.argsort(sample_times, kind='stable')
    t = min(schedule.start, sample_times[order[0]])
    if t < schedule.start:
        cc_logger.warning("Sample times begin before the schedule starts at %g", schedule.start)
    states = [None] * len(sample_times)
    for ix in order:
        target = sample_times[ix]
        psi = integrate(H, psi, t, target, dt)
        drift = abs(norm(psi) - start_norm)
        if drift > data.NORM_DRIFT_LIMIT:
            raise StepSizeError(
                f"norm drifted by {drift:.2e} by t = {target} with dt = {dt}; reduce the step size"
            )
        t = target
        states[ix] = (target, psi)
    return states


def default_step(schedule: CouplingSchedule) -> float:
    """dt = 1e-3 / max coupling strength"""
    peak = schedule.max_strength
    return data.DT_FACTOR / peak if peak > 0 else data.DT_FACTOR


def evolve_scenario(
    schedule: CouplingSchedule,
    subspace: SubspaceLike,
    method: Union[EvolutionMethod, str],
    sample_times: list[float],
    dt: Optional[float] = None,
    initial: Optional[PureState] = None,
) -> Trajectory:
    """Evolves |e1, g2, n> (or `initial`) under a schedule and returns the
    state at each requested time, in the order given.

    Arguments:
         schedule (CouplingSchedule): couplings, sequential or simultaneous
         subspace: excitation subspace (or its N)
         method: 'closed-form' (N = 1 only) or 'rk4'
         sample_times (list): times at which to report the state
         dt (float): RK4 step, defaults to 1e-3 / max coupling
         initial (PureState): alternative starting state, RK4 only

    Returns:
         list of (t, PureState)

    Raises:
         MethodNotAvailable for closed forms outside N = 1 from |e1, g2, 0>
    """
    space = as_subspace(subspace)
    if space.N < 1:
        raise InvalidSubspace("the N = 0 subspace has no dynamics")
    propagate = get_method(method)
    times = [float(t) for t in sample_times]
    if len(times) == 0:
        return []
    return propagate(schedule, space, times, initial=initial, dt=dt)
