# data
import numpy as np

# Tolerance tiers
NORM_TOL = 1e-9
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-9
EIGEN_TOL = 1e-9
NORMALISED_INPUT_TOL = 1e-6
ALGEBRAIC_TOL = 1e-12
ENTROPY_TOL = 1e-10
CROSS_PATH_TOL = 1e-9
INTEGRATOR_TOL = 1e-7
SYMMETRY_TOL = 1e-8
NORM_DRIFT_LIMIT = 1e-6
NORM_DRIFT_TARGET = 1e-8
ROOT_TOL = 1e-10
QUAD_TOL = 1e-10

"""Reduced-state eigenvalues below this (negative) value are rejected"""
EIGEN_CLAMP = -1e-10
"""Reduced-state eigenvalues below this are rounding noise and set to zero"""
EIGEN_CUTOFF = 1e-13

# Numerical defaults
DT_FACTOR = 1e-3
DEFAULT_SAMPLES = 512
DEFAULT_RAMP = 0.25

"""Coupling ratios giving maximally entangled atoms at theta = pi in the Dicke model"""
R_PLUS = np.sqrt(2.0) + 1.0
R_MINUS = np.sqrt(2.0) - 1.0

"""Target Rabi angles (theta_1, theta_2) for sequential preparations"""
SINGLET_ANGLES = (0.25 * np.pi, 0.5 * np.pi)
WSTATE_ANGLES = (np.arccos(1.0 / np.sqrt(3.0)), 0.25 * np.pi)
TRAPPING_ANGLE = np.pi

"""Subsystem labels: atom 1, atom 2, field"""
SUBSYSTEMS = ('A1', 'A2', 'F')

"""Pauli Y tensor Y, real in the (e, g) product basis"""
_SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
SPIN_FLIP = np.real(np.kron(_SIGMA_Y, _SIGMA_Y))
