"""Equivariant degree invariants for symmetric networks of second-order ODEs.

The package computes, for systems with O(2) x Gamma x Z_2 symmetry
(Gamma a dihedral group acting on a coupled-oscillator network), the
Burnside-ring degree invariant whose nonzero coefficients at orbit types
of maximal kind certify non-stationary periodic solutions, and confirms
the certificates numerically with a symmetry-reduced Fourier-Galerkin
solver.
"""

from .errors import (
    ComputationError,
    ConvergenceFailureError,
    DegenerateSymmetryError,
    InternalConsistencyError,
    InvalidParameterError,
    LatticeIncompleteError,
    ResonanceError,
    SymdegError,
    TruncationGuardError,
    UnsupportedOperationError,
    ValidationError,
)

__all__ = [
    "SymdegError",
    "ValidationError",
    "InvalidParameterError",
    "ResonanceError",
    "TruncationGuardError",
    "UnsupportedOperationError",
    "ComputationError",
    "LatticeIncompleteError",
    "InternalConsistencyError",
    "DegenerateSymmetryError",
    "ConvergenceFailureError",
]

__version__ = "0.1.0"
