# entropies, concurrences and intrinsic entanglement
from enum import Enum
from typing import Any, Iterable

import numpy as np
from monty.json import MSONable
from scipy.linalg import eigh, svdvals

from . import data
from .exceptions import (
    InvalidDensityMatrix,
    InvalidSubspace,
    InvalidSubsystem,
    InvariantViolation,
    NotNormalised,
)
from .qstate import DensityMatrix, PureState, norm
from .util import complex_to_pairs, pairs_to_complex


class Subsystem(str, Enum):
    A1 = 'A1'
    A2 = 'A2'
    F = 'F'


_ORDER = [Subsystem.A1, Subsystem.A2, Subsystem.F]

"""Atom-atom, atom 1-field and atom 2-field pairings with the subsystem left out"""
PAIRINGS = {
    'aa': ((Subsystem.A1, Subsystem.A2), Subsystem.F),
    'a1f': ((Subsystem.A1, Subsystem.F), Subsystem.A2),
    'a2f': ((Subsystem.A2, Subsystem.F), Subsystem.A1),
}


def _as_subsystems(keep: Iterable[Any]) -> list[Subsystem]:
    try:
        chosen = {Subsystem(k) for k in keep}
    except ValueError as e:
        raise InvalidSubsystem(str(e))
    if len(chosen) == 0 or len(chosen) == len(_ORDER):
        raise InvalidSubsystem("keep must be a nonempty proper subset of {A1, A2, F}")
    return [s for s in _ORDER if s in chosen]


def reduce(state: PureState, keep: Iterable[Any]) -> DensityMatrix:
    """Partial trace of |psi><psi| over the subsystems not in `keep`

    Arguments:
         state (PureState): a normalised state
         keep (iterable): subsystems to keep, from 'A1', 'A2', 'F'

    Returns:
         DensityMatrix on the kept subsystems, in the order (A1, A2, F); atoms
         are qubits and the field has 2 (N = 1) or 3 (N >= 2) levels

    Raises:
         InvalidSubsystem, NotNormalised
    """
    kept = _as_subsystems(keep)
    nrm = norm(state)
    if abs(nrm - 1.0) > data.NORMALISED_INPUT_TOL:
        raise NotNormalised(f"state has norm {nrm!r}")
    psi = state.as_tensor() / np.sqrt(nrm)
    kept_axes = [_ORDER.index(s) for s in kept]
    traced = [ax for ax in range(3) if ax not in kept_axes]
    rho = np.tensordot(psi, psi.conj(), axes=(traced, traced))
    dim = int(np.prod([psi.shape[ax] for ax in kept_axes]))
    return DensityMatrix(rho.reshape(dim, dim), labels=tuple(s.value for s in kept))


def linear_entropy(rho: DensityMatrix) -> float:
    """M = 1 - Tr(rho^2), between 0 (pure) and 1 - 1/dim (maximally mixed)"""
    return max(0.0, 1.0 - rho.purity())


def closed_form_entropies(state: PureState) -> tuple[float, float, float]:
    """Linear entropies (M_a1, M_a2, M_f) of an N = 1 state from its amplitudes"""
    if state.N != 1:
        raise InvalidSubspace("closed-form entropies only hold for N = 1")
    p1, p2, p3 = state.populations()
    m_a1 = 1.0 - ((p2 + p3) ** 2 + p1**2)
    m_a2 = 1.0 - ((p1 + p3) ** 2 + p2**2)
    m_f = 1.0 - ((p1 + p2) ** 2 + p3**2)
    return m_a1, m_a2, m_f


def wootters_concurrence(rho: DensityMatrix) -> float:
    """Concurrence max(0, l1 - l2 - l3 - l4) of a two-qubit state.

    The l_i are the square roots of the eigenvalues of the Hermitian matrix
    R = sqrt(rho) rho~ sqrt(rho), with rho~ = (Y x Y) rho* (Y x Y). They are
    computed as the singular values of sqrt(rho) (Y x Y) sqrt(rho)*, whose
    product with its adjoint is R. Eigenvalues of rho below 1e-13 (down to
    -1e-10) are treated as zero, so rank-deficient reduced states do not pick
    up square roots of rounding noise.

    Raises:
         InvalidDensityMatrix if rho is not 4 x 4 or has a negative eigenvalue
    """
    if rho.dim != 4:
        raise InvalidDensityMatrix(f"concurrence needs a two-qubit state, got dim {rho.dim}")
    w, V = eigh(rho.matrix)
    if np.min(w) < data.EIGEN_CLAMP:
        raise InvalidDensityMatrix(f"negative eigenvalue {np.min(w):.2e}")
    w = np.where(w > data.EIGEN_CUTOFF, w, 0.0)
    root = (V * np.sqrt(w)) @ V.conj().T
    lam = np.sort(svdvals(root @ data.SPIN_FLIP @ root.conj()))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def closed_form_concurrences(state: PureState) -> tuple[float, float, float]:
    """(C_aa, C_a1f, C_a2f) = (2|a1 a2|, 2|a1 a3|, 2|a2 a3|) for N = 1"""
    if state.N != 1:
        raise InvalidSubspace("closed-form concurrences only hold for N = 1")
    a1, a2, a3 = np.abs(state.amplitudes)
    return 2.0 * a1 * a2, 2.0 * a1 * a3, 2.0 * a2 * a3


def intrinsic_entanglement(m_a: float, m_b: float, m_ab: float) -> float:
    """E_AB = M_A + M_B - M_AB; for a pure tripartite state pass the entropy
    of the third subsystem as M_AB
    """
    return m_a + m_b - m_ab


def intrinsic_entanglement_n(state: PureState) -> float:
    """Atom-atom E = 4|b1 b2|^2 + 2|b0 b3|^2 for N >= 2"""
    if state.N < 2:
        raise InvalidSubspace("this expression needs N >= 2")
    b0, b1, b2, b3 = np.abs(state.amplitudes)
    return 4.0 * (b1 * b2) ** 2 + 2.0 * (b0 * b3) ** 2


def concurrence_aa_n(state: PureState) -> float:
    """Atom-atom concurrence for N >= 2, from the reduced atom pair"""
    if state.N < 2:
        raise InvalidSubspace("this expression needs N >= 2")
    return wootters_concurrence(reduce(state, (Subsystem.A1, Subsystem.A2)))


def x_state_concurrence_n(state: PureState) -> float:
    """max(0, 2(|b1 b2| - |b0 b3|)): the reduced atom pair for N >= 2 is an
    X state with no |ee><gg| coherence, so this must agree with
    concurrence_aa_n
    """
    if state.N < 2:
        raise InvalidSubspace("this expression needs N >= 2")
    b0, b1, b2, b3 = np.abs(state.amplitudes)
    return max(0.0, 2.0 * (b1 * b2 - b0 * b3))


def single_entropies(state: PureState) -> dict[Subsystem, float]:
    return {s: linear_entropy(reduce(state, (s,))) for s in _ORDER}


class CorrelationRecord(MSONable):
    """All entropies, concurrences and intrinsic entanglements at one time.
    Atom-field concurrences are NaN for N >= 2, where the field is not a qubit.

    Attributes:
         t (float): sample time
         state (PureState): the state sampled
         M_a1, M_a2, M_f (float): linear entropies
         C_aa, C_a1f, C_a2f (float): concurrences
         E_aa, E_a1f, E_a2f (float): intrinsic entanglements
    """

    FIELDS = ('M_a1', 'M_a2', 'M_f', 'C_aa', 'C_a1f', 'C_a2f', 'E_aa', 'E_a1f', 'E_a2f')

    def __init__(self, t: float, state: PureState, **values: float):
        self.t = float(t)
        self.state = state
        for name in self.FIELDS:
            setattr(self, name, float(values.get(name, np.nan)))

    def values(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in self.FIELDS}

    def concurrence(self, pairing: str) -> float:
        return getattr(self, 'C_' + pairing)

    def entanglement(self, pairing: str) -> float:
        return getattr(self, 'E_' + pairing)

    def as_dict(self) -> dict[str, Any]:
        d = {
            "@module": type(self).__module__,
            "@class": type(self).__name__,
            "t": self.t,
            "N": self.state.N,
            "amplitudes": complex_to_pairs(self.state.amplitudes),
        }
        d.update(self.values())
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> object:
        state = PureState(d.get("N", 1), pairs_to_complex(d.get("amplitudes", [])))
        values = {k: d[k] for k in cls.FIELDS if k in d}
        return cls(d.get("t", 0.0), state, **values)


def record(state: PureState, t: float) -> CorrelationRecord:
    """Computes every measure at one time through partial traces, and checks
    the N = 1 closed forms (or the N >= 2 entanglement formula) against them

    Raises:
         InvariantViolation if a closed form disagrees with the partial-trace value
    """
    M = single_entropies(state)
    m_a1, m_a2, m_f = M[Subsystem.A1], M[Subsystem.A2], M[Subsystem.F]
    values = {
        'M_a1': m_a1,
        'M_a2': m_a2,
        'M_f': m_f,
        'E_aa': intrinsic_entanglement(m_a1, m_a2, m_f),
        'E_a1f': intrinsic_entanglement(m_a1, m_f, m_a2),
        'E_a2f': intrinsic_entanglement(m_a2, m_f, m_a1),
    }

    # RK4 states are not renormalised; the closed forms assume unit norm
    unit = PureState(state.subspace, state.amplitudes / np.sqrt(norm(state)))
    if state.N == 1:
        for key, (pair, _) in PAIRINGS.items():
            values['C_' + key] = wootters_concurrence(reduce(state, pair))
        closed_m = closed_form_entropies(unit)
        dev = max(abs(x - y) for x, y in zip(closed_m, (m_a1, m_a2, m_f)))
        if dev > data.ENTROPY_TOL:
            raise InvariantViolation("closed-form entropies", dev, data.ENTROPY_TOL)
        closed_c = closed_form_concurrences(unit)
        dev = max(abs(x - values['C_' + k]) for x, k in zip(closed_c, PAIRINGS))
        if dev > data.CROSS_PATH_TOL:
            raise InvariantViolation("closed-form concurrences", dev, data.CROSS_PATH_TOL)
    else:
        values['C_aa'] = concurrence_aa_n(state)
        dev = abs(intrinsic_entanglement_n(unit) - values['E_aa'])
        if dev > data.CROSS_PATH_TOL:
            raise InvariantViolation("N>1 entanglement paths", dev, data.CROSS_PATH_TOL)

    return CorrelationRecord(t, state, **values)
