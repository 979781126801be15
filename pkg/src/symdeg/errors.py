"""Error taxonomy.

Two families matter to callers: validation errors (bad input or violated
precondition; CLI exit code 2) and computation errors (the algorithm could
not complete soundly; CLI exit code 3).
"""

from __future__ import annotations


class SymdegError(Exception):
    """Base class for all package errors."""


class ValidationError(SymdegError):
    """Invalid input or violated precondition (CLI exit code 2)."""


class InvalidParameterError(ValidationError):
    """A parameter is outside its documented domain."""


class ResonanceError(InvalidParameterError):
    """Non-resonance assumption violated: some operator eigenvalue
    mu_{m,j} is zero (or numerically indistinguishable from zero).

    Carries the offending (m, j) pairs in ``offending``.
    """

    def __init__(self, message: str, offending: list[tuple[int, int]] | None = None):
        super().__init__(message)
        self.offending = list(offending or [])


class TruncationGuardError(InvalidParameterError):
    """The configured mode-truncation guard binds: the spectrum demands
    more Fourier modes than the cap allows."""


class UnsupportedOperationError(ValidationError):
    """Operation requested outside the supported scope (e.g. element
    enumeration of a subgroup with infinite O(2) part)."""


class ComputationError(SymdegError):
    """The computation could not be completed soundly (CLI exit code 3)."""


class LatticeIncompleteError(ComputationError):
    """A Burnside recurrence division was not exact: the working orbit-type
    lattice is missing a dominating type."""

    def __init__(self, message: str, missing_hint: object | None = None):
        super().__init__(message)
        self.missing_hint = missing_hint


class InternalConsistencyError(ComputationError):
    """An internal invariant failed (e.g. a character average that must be
    an integer is not), signalling a broken construction."""


class DegenerateSymmetryError(ComputationError):
    """A symmetry-reduced space turned out empty where a nonzero subspace
    was required."""


class ConvergenceFailureError(ComputationError):
    """The iterative solver did not reach the residual tolerance.

    Carries the final residual norm in ``final_residual``.
    """

    def __init__(self, message: str, final_residual: float | None = None):
        super().__init__(message)
        self.final_residual = final_residual
