# states in the conserved-excitation subspaces
from typing import Any, Union

import numpy as np
from monty.json import MSONable

from . import data
from .exceptions import InvalidDensityMatrix, InvalidSubspace, NotNormalised
from .util import complex_to_pairs, dict_decode, pairs_to_complex

"""A basis ket (atom 1, atom 2, photon number), atoms labelled 'e' or 'g'"""
BasisKet = tuple[str, str, int]

_ATOM_INDEX = {'e': 0, 'g': 1}


class ExcitationSubspace(MSONable):
    """The invariant subspace with a fixed eigenvalue N of the excitation
    number operator a^dag a + sum_i sigma_i^+ sigma_i^-.

    For N = 1 the basis is {|e,g,0>, |g,e,0>, |g,g,1>}; for N = n+1 >= 2 it is
    {|e,e,n-1>, |e,g,n>, |g,e,n>, |g,g,n+1>}. The ordering is fixed and every
    amplitude vector in the package follows it.

    Attributes:
         N (int): number of excitations
    """

    def __init__(self, N: int = 1):
        if int(N) != N or N < 0:
            raise InvalidSubspace(f"excitation number must be a nonnegative integer, got {N}")
        self.N = int(N)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ExcitationSubspace) and other.N == self.N

    def __hash__(self) -> int:
        return hash(self.N)

    def __repr__(self) -> str:
        return f"ExcitationSubspace(N={self.N})"

    @property
    def n(self) -> int:
        """Photon label n of the N = n+1 parametrisation"""
        return self.N - 1

    @property
    def basis(self) -> list[BasisKet]:
        if self.N == 0:
            return [('g', 'g', 0)]
        if self.N == 1:
            return [('e', 'g', 0), ('g', 'e', 0), ('g', 'g', 1)]
        n = self.n
        return [('e', 'e', n - 1), ('e', 'g', n), ('g', 'e', n), ('g', 'g', n + 1)]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def photon_labels(self) -> list[int]:
        """Photon numbers the field can occupy, in increasing order"""
        return sorted({k[2] for k in self.basis})

    @property
    def field_dim(self) -> int:
        return len(self.photon_labels)

    def index_of(self, ket: BasisKet) -> int:
        return self.basis.index(ket)

    def as_dict(self) -> dict[str, Any]:
        return {"@module": type(self).__module__, "@class": type(self).__name__, "N": self.N}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> object:
        return cls(N=d.get("N", 1))


SubspaceLike = Union[ExcitationSubspace, int]


def as_subspace(subspace: SubspaceLike) -> ExcitationSubspace:
    if isinstance(subspace, ExcitationSubspace):
        return subspace
    return ExcitationSubspace(subspace)


class PureState(MSONable):
    """A pure state of atoms + field, stored as its amplitudes over the
    basis of an ExcitationSubspace, i.e. (a1, a2, a3) for N = 1 or
    (b0, b1, b2, b3) for N >= 2. Amplitudes are copied on construction and
    the stored array is read-only. Global phases are kept as given.

    Attributes:
         subspace (ExcitationSubspace): the subspace the state lives in
         amplitudes (numpy array, complex): amplitude vector in basis order
    """

    def __init__(self, subspace: SubspaceLike, amplitudes: Any):
        self.subspace = as_subspace(subspace)
        amps = np.array(amplitudes, dtype=complex).reshape(-1)
        if amps.size != self.subspace.dim:
            raise InvalidSubspace(
                f"{amps.size} amplitudes given for a {self.subspace.dim}-dim subspace"
            )
        amps.setflags(write=False)
        self._amplitudes = amps

    @property
    def amplitudes(self) -> np.ndarray:
        return self._amplitudes

    @property
    def N(self) -> int:
        return self.subspace.N

    @property
    def dim(self) -> int:
        return self.subspace.dim

    def __len__(self) -> int:
        return self.dim

    def __getitem__(self, i: int) -> complex:
        return self._amplitudes[i]

    def __repr__(self) -> str:
        return f"PureState(N={self.N}, amplitudes={np.array2string(self._amplitudes)})"

    def populations(self) -> np.ndarray:
        return np.abs(self._amplitudes) ** 2

    def is_normalised(self, tol: float = data.NORM_TOL) -> bool:
        return abs(norm(self) - 1.0) < tol

    def as_tensor(self) -> np.ndarray:
        """Embeds the amplitudes in the product space of the three
        subsystems, with shape (2, 2, field_dim) and index order
        (atom 1, atom 2, field); atom index 0 is |e>, 1 is |g>, and the
        field index counts photons from the lowest label in the subspace.
        """
        n0 = self.subspace.photon_labels[0]
        psi = np.zeros((2, 2, self.subspace.field_dim), dtype=complex)
        for amp, (s1, s2, p) in zip(self._amplitudes, self.subspace.basis):
            psi[_ATOM_INDEX[s1], _ATOM_INDEX[s2], p - n0] = amp
        return psi

    def as_dict(self) -> dict[str, Any]:
        return {
            "@module": type(self).__module__,
            "@class": type(self).__name__,
            "N": self.N,
            "amplitudes": complex_to_pairs(self._amplitudes),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> object:
        d = dict_decode(d)
        return cls(d.get("N", 1), pairs_to_complex(d.get("amplitudes", [])))


class DensityMatrix(MSONable):
    """Hermitian, unit-trace, positive semidefinite matrix describing a
    (reduced) state. The constructor checks all three properties.

    Attributes:
         matrix (numpy array, complex): dim x dim matrix, read-only
         labels (tuple): names of the subsystems it describes, in tensor order
    """

    _ALLOWED_DIMS = (2, 3, 4, 6)

    def __init__(self, matrix: Any, labels: tuple[str, ...] = (), check: bool = True):
        rho = np.array(matrix, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise InvalidDensityMatrix(f"density matrix must be square, got shape {rho.shape}")
        if rho.shape[0] not in self._ALLOWED_DIMS:
            raise InvalidDensityMatrix(f"unsupported dimension {rho.shape[0]}")
        rho.setflags(write=False)
        self._matrix = rho
        self.labels = tuple(labels)
        if check:
            self.validate()

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    def validate(self):
        """Checks Hermiticity, trace and positivity

        Raises:
             InvalidDensityMatrix
        """
        rho = self._matrix
        herm = np.max(np.abs(rho - rho.conj().T))
        if herm > data.HERMITIAN_TOL:
            raise InvalidDensityMatrix(f"not Hermitian (deviation {herm:.2e})")
        trace = np.real(np.trace(rho))
        if abs(trace - 1.0) > data.TRACE_TOL:
            raise InvalidDensityMatrix(f"trace {trace!r} differs from 1")
        lowest = np.min(np.linalg.eigvalsh(rho))
        if lowest < -data.EIGEN_TOL:
            raise InvalidDensityMatrix(f"negative eigenvalue {lowest:.2e}")

    def purity(self) -> float:
        """Tr(rho^2), which for Hermitian rho is the squared Frobenius norm"""
        return float(np.sum(np.abs(self._matrix) ** 2))

    def as_dict(self) -> dict[str, Any]:
        return {
            "@module": type(self).__module__,
            "@class": type(self).__name__,
            "matrix": [complex_to_pairs(row) for row in self._matrix],
            "labels": list(self.labels),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> object:
        rows = [pairs_to_complex(row) for row in d.get("matrix", [])]
        return cls(np.array(rows), labels=tuple(d.get("labels", ())))


def new_initial_state(subspace: SubspaceLike) -> PureState:
    """Returns |e1, g2, 0> for N = 1, or |e1, g2, n> for N = n+1

    Raises:
         InvalidSubspace if N = 0, where nothing evolves
    """
    space = as_subspace(subspace)
    if space.N < 1:
        raise InvalidSubspace("the N = 0 subspace has no dynamics")
    amps = np.zeros(space.dim, dtype=complex)
    amps[space.index_of(('e', 'g', space.n))] = 1.0
    return PureState(space, amps)


def norm(state: PureState) -> float:
    """Returns the squared norm sum_i |a_i|^2"""
    return float(np.sum(state.populations()))


def pure_density(state: PureState) -> DensityMatrix:
    """Returns |psi><psi| in the subspace basis. The state must be
    normalised to within 1e-6; the result is divided by the norm so that it
    satisfies the density-matrix invariants exactly.

    Raises:
         NotNormalised
    """
    nrm = norm(state)
    if abs(nrm - 1.0) > data.NORMALISED_INPUT_TOL:
        raise NotNormalised(f"state has norm {nrm!r}")
    psi = state.amplitudes
    return DensityMatrix(np.outer(psi, psi.conj()) / nrm)


def local_phase_rotation(state: PureState, phi1: float, phi2: float) -> PureState:
    """Applies exp(i phi_k sigma_z) to atom k = 1, 2. These local unitaries
    commute with the excitation number, so the result stays in the subspace.
    """
    signs = {'e': 1.0, 'g': -1.0}
    phases = np.array(
        [
            np.exp(1.0j * (signs[s1] * phi1 + signs[s2] * phi2))
            for s1, s2, _ in state.subspace.basis
        ]
    )
    return PureState(state.subspace, phases * state.amplitudes)
