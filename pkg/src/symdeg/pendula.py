"""Dihedral pendula networks: coupling Laplacians and existence reports.

A ring of N identical pendula coupled along a cycle graph is the model
D_N-symmetric system.  The coupling matrix is the cycle Laplacian L
(circulant, diagonal -2, +1 on the two neighbour positions); under the
dihedral permutation action the vertex space R^N splits into one copy of
each isotypic component j in {0, ..., floor(N/2)}, and L acts on the
j-th component by the scalar -z_j with

    z_j = 4 sin^2(pi j / N) = 2 - 2 cos(2 pi j / N).

This module builds that spectral data exactly (``cycle_laplacian``, or
``custom_laplacian`` for any user-supplied D_N-equivariant integer
coupling), assembles the degree-analysis configuration with operator
rows mu_j = -(z_j + 1) (``pendula_config``), and produces the existence
report (``existence_report``): for every negative-spectrum index (m, j)
with m >= 1 and every orbit type of maximal kind in V_{m,j}, the
coefficient of that type in the degree invariant; a nonzero coefficient
certifies a non-stationary periodic solution whose symmetry group
contains the type.

Sign convention: the network matrix is A = L - id, so its eigenvalues
are mu_j = -(z_j + 1) and the operator eigenvalues are

    mu_{m,j} = (m^2 - beta^2 (z_j + 1)) / (1 + m^2).

The opposite convention A = -(L + id) would give mu_j = z_j - 1 and is
not used; the report metadata records this choice.

Resonance policy: mu_{m,j} = 0 violates the non-resonance precondition.
By default every operation raises ``ResonanceError`` (``on_resonance=
"error"``).  With ``on_resonance="exclude"`` the exact zero crossings
(and, for float data, sign-ambiguous values inside the epsilon band)
are dropped from the index sets and reported separately -- the limit
convention "beta approaching the resonant value from below".

Coefficients in the report are computed in the spectral row labelling,
the one in which the closed-form coefficient equals the coefficient of
the honestly multiplied invariant (all rows carry the antipodal sign
character, which the physical Z_2 action -id forces; stationary factors
are then inert on maximal-kind coefficients).
"""

from dataclasses import dataclass, field
from fractions import Fraction

import sympy as sp

from .amalgam import get_context
from .burnside import WEYL_CATALOG
from .degrees import (
    AnalysisConfig,
    SpectralIndex,
    coeff_maximal_fast,
    operator_eigenvalue,
    sigma_sets,
)
from .errors import (
    InternalConsistencyError,
    InvalidParameterError,
    ResonanceError,
    TruncationGuardError,
)
from .representations import (
    SPECTRAL,
    IrrepLabel,
    irrep_index_set,
    maximal_orbit_types,
)

RESONANCE_MODES = ("error", "exclude")

SIGN_NOTE = (
    "network matrix A = L - id with eigenvalues mu_j = -(z_j + 1); "
    "the opposite convention A = -(L + id) would give mu_j = z_j - 1 "
    "and is not used"
)


# ---------------------------------------------------------------------------
# coupling Laplacians and their exact spectra
# ---------------------------------------------------------------------------


def _check_n(N) -> int:
    if isinstance(N, bool) or not isinstance(N, int) or N < 3:
        raise InvalidParameterError(f"N must be an integer >= 3, got {N!r}")
    return N


@dataclass(frozen=True)
class SpectrumEntry:
    """One isotypic eigenvalue of the coupling: z_j is exact (a sympy
    expression) and the eigenvector field describes the real basis of
    the component."""

    j: int
    z: object
    eigenvector: str


def _check_matrix(n: int, matrix) -> tuple:
    """Validate an NxN integer coupling matrix: rows sum to 0 and the
    matrix commutes with the vertex shift and the vertex reflection.
    Returns the matrix as a tuple of tuples."""
    rows = []
    try:
        entries = [list(row) for row in matrix]
    except TypeError:
        raise InvalidParameterError(
            "matrix must be an NxN nested sequence"
        ) from None
    if len(entries) != n or any(len(row) != n for row in entries):
        raise InvalidParameterError(f"matrix must be {n}x{n}")
    for row in entries:
        for e in row:
            if isinstance(e, bool) or not isinstance(e, int):
                raise InvalidParameterError(
                    f"matrix entries must be integers, got {e!r}"
                )
        if sum(row) != 0:
            raise InvalidParameterError("matrix rows must sum to 0")
        rows.append(tuple(row))
    m = rows
    for i in range(n):
        for k in range(n):
            if m[(i + 1) % n][(k + 1) % n] != m[i][k]:
                raise InvalidParameterError(
                    "coupling matrix is not invariant under the cyclic "
                    "shift of the vertices (gamma-equivariance fails at "
                    f"entry ({i}, {k}))"
                )
            if m[(-i) % n][(-k) % n] != m[i][k]:
                raise InvalidParameterError(
                    "coupling matrix is not invariant under the vertex "
                    "reflection (kappa-equivariance fails at entry "
                    f"({i}, {k}))"
                )
    return tuple(rows)


@dataclass(frozen=True)
class LaplacianSpec:
    """A D_N-equivariant integer coupling matrix with its exact isotypic
    spectrum (one entry per j, the coupling acting there by -z_j)."""

    N: int
    matrix: tuple
    spectrum: tuple

    def __post_init__(self):
        n = _check_n(self.N)
        object.__setattr__(self, "matrix", _check_matrix(n, self.matrix))
        spectrum = tuple(self.spectrum)
        js = list(irrep_index_set(n))
        if [e.j for e in spectrum] != js:
            raise InvalidParameterError(
                f"spectrum must list j = {js[0]}..{js[-1]} exactly once each"
            )
        object.__setattr__(self, "spectrum", spectrum)


def _eigenvector_description(N: int, j: int) -> str:
    if j == 0:
        return "constant vector: u_k = 1"
    if 2 * j == N:
        return "alternating vector: u_k = (-1)^k"
    return (
        f"planar pair: u_k = cos(2*pi*{j}*k/{N}) and u_k = sin(2*pi*{j}*k/{N})"
    )


def _circulant_spectrum(N: int, first_row) -> tuple:
    """Exact isotypic spectrum of a symmetric circulant: the eigenvalue
    on component j is sum_r c_r cos(2 pi j r / N), and z_j is its
    negative."""
    entries = []
    for j in irrep_index_set(N):
        lam = sum(
            c * sp.cos(2 * sp.pi * j * r / N) for r, c in enumerate(first_row)
        )
        z = sp.simplify(-lam)
        entries.append(SpectrumEntry(j, z, _eigenvector_description(N, j)))
    return tuple(entries)


def custom_laplacian(N, matrix) -> LaplacianSpec:
    """Wrap a user-supplied coupling matrix, checking D_N-equivariance.

    The matrix must be NxN with integer entries, rows summing to 0, and
    commute with the permutation matrices of the vertex shift gamma and
    the vertex reflection kappa (equivalently: circulant with a
    reflection-symmetric first row).  The exact spectrum follows from
    the first row.
    """
    N = _check_n(N)
    rows = _check_matrix(N, matrix)
    return LaplacianSpec(N, rows, _circulant_spectrum(N, rows[0]))


def cycle_laplacian(N) -> LaplacianSpec:
    """The cycle-graph Laplacian: diagonal -2, +1 at the two neighbour
    positions of each vertex (the corners of the matrix couple vertex 0
    to vertex N-1).  Its isotypic eigenvalues are -z_j with
    z_j = 4 sin^2(pi j / N); in particular z_0 = 0 and, for even N,
    z_{N/2} = 4.
    """
    N = _check_n(N)
    matrix = [[0] * N for _ in range(N)]
    for i in range(N):
        matrix[i][i] = -2
        matrix[i][(i + 1) % N] += 1
        matrix[i][(i - 1) % N] += 1
    return custom_laplacian(N, matrix)


def _exact_or_float(expr):
    """sympy rational -> Fraction (exact); anything else -> float."""
    expr = sp.simplify(expr)
    if isinstance(expr, sp.Rational):
        return Fraction(int(expr.p), int(expr.q))
    return float(expr)


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------


def _check_mode(on_resonance: str) -> str:
    if on_resonance not in RESONANCE_MODES:
        raise InvalidParameterError(
            f"on_resonance must be one of {RESONANCE_MODES}, got {on_resonance!r}"
        )
    return on_resonance


def pendula_config(
    N,
    beta,
    q,
    *,
    coupling: str = "cycle",
    laplacian=None,
    on_resonance: str = "error",
    truncation_guard=None,
) -> AnalysisConfig:
    """Degree-analysis configuration of the pendula ring.

    Rows are mu_j = -(z_j + 1) with multiplicity 1 for every isotypic
    index j (the vertex representation contains each component exactly
    once).  Exact z_j stay exact (Fraction); irrational ones are carried
    as floats with banded sign decisions.  The nonlinearity exponent q
    must be an even integer >= 2 (the potential grows superlinearly and
    evenly); it does not enter the spectral data.

    The non-resonance precondition is validated eagerly: with
    ``on_resonance="error"`` (default) a vanishing operator eigenvalue
    raises ``ResonanceError`` listing the offending (m, j); with
    ``"exclude"`` the scan drops zero crossings instead (pass the same
    mode to ``index_sets``/``existence_report`` afterwards).  A
    ``truncation_guard`` bounds the Fourier modes the scan may need.
    """
    N = _check_n(N)
    if isinstance(q, bool) or not isinstance(q, int) or q < 2 or q % 2:
        raise InvalidParameterError(
            f"q must be an even integer >= 2, got {q!r}"
        )
    _check_mode(on_resonance)
    if coupling != "cycle":
        raise InvalidParameterError(
            f"unknown coupling {coupling!r}: only 'cycle' is built in "
            "(pass laplacian= for a custom matrix)"
        )
    spec = custom_laplacian(N, laplacian) if laplacian is not None else cycle_laplacian(N)
    rows = []
    for entry in spec.spectrum:
        z = _exact_or_float(entry.z)
        rows.append((entry.j, -(z + 1), 1))
    config = AnalysisConfig(N, beta, tuple(rows), truncation_guard)
    index_sets(config, on_resonance=on_resonance)
    return config


# ---------------------------------------------------------------------------
# index sets with resonance exclusion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IndexSets:
    """Negative-spectrum scan result: Sigma_minus, its odd-multiplicity
    part Sigma_zero, and the crossings excluded as resonant (each with
    mu_mj = 0.0)."""

    minus: tuple
    zero: tuple
    excluded: tuple


def index_sets(config: AnalysisConfig, *, on_resonance: str = "error") -> IndexSets:
    """Sigma sets of the configuration under the chosen resonance policy.

    ``"error"`` delegates to the plain scan (``sigma_sets``) and raises
    on any vanishing eigenvalue.  ``"exclude"`` records each zero
    crossing in the third component and keeps scanning past it; the
    truncation guard applies to negative crossings exactly as in the
    plain scan.
    """
    if not isinstance(config, AnalysisConfig):
        raise InvalidParameterError("config must be an AnalysisConfig")
    _check_mode(on_resonance)
    if on_resonance == "error":
        minus, zero = sigma_sets(config)
        return IndexSets(minus, zero, ())
    guard = config.truncationGuard
    minus, zero, excluded = [], [], []
    for j, _mu, mult in config.eigenvalues:
        m = 0
        while True:
            try:
                val = operator_eigenvalue(m, j, config)
            except ResonanceError:
                excluded.append(SpectralIndex(m, j, 0.0))
                m += 1
                continue
            if val > 0:
                break
            if guard is not None and m > guard:
                raise TruncationGuardError(
                    f"row j={j} has a negative eigenvalue at mode m={m}, "
                    f"beyond the truncation guard {guard}"
                )
            minus.append(SpectralIndex(m, j, val))
            if mult % 2:
                zero.append(SpectralIndex(m, j, val))
            m += 1
    key = lambda s: (s.m, s.j)  # noqa: E731
    return IndexSets(
        tuple(sorted(minus, key=key)),
        tuple(sorted(zero, key=key)),
        tuple(sorted(excluded, key=key)),
    )


# ---------------------------------------------------------------------------
# existence report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExistenceEntry:
    """One certified solution class: the orbit type, the (m, j) member of
    Sigma_zero whose maximal set lists it, the invariant coefficient,
    and the guarantee statement."""

    orbit_type: str
    m: int
    j: int
    coefficient: int
    guarantee: str


@dataclass(frozen=True)
class ExistenceReport:
    """Existence report: entries with nonzero invariant coefficient at
    orbit types of maximal kind, plus the scan metadata."""

    entries: tuple
    metadata: dict = field(compare=False)

    def __post_init__(self):
        entries = tuple(self.entries)
        for e in entries:
            if e.coefficient == 0:
                raise InternalConsistencyError(
                    f"report entry {e.orbit_type} has coefficient 0"
                )
        object.__setattr__(self, "entries", entries)


def existence_report(
    config: AnalysisConfig,
    *,
    on_resonance: str = "error",
    weyl_convention: str = WEYL_CATALOG,
) -> ExistenceReport:
    """Existence certificates for non-stationary periodic solutions.

    For every (m, j) in Sigma_zero with m >= 1 and every orbit type H of
    maximal kind in V_{m,j}, the coefficient of H in the degree
    invariant is computed by the closed form over the scanned index set
    (spectral row labelling, in which the closed form agrees with the
    multiplied-out invariant).  Each nonzero coefficient yields an
    entry: a solution u exists with symmetry group containing H, and
    maximal-kind membership forces u to be non-stationary.

    A type listed by several (m, j) is reported once, under the first
    member in the (m, j) ordering; a type whose coefficient vanishes is
    omitted (at overlapping maximal sets the parity count can cancel --
    the degree then certifies nothing for that symmetry class).
    """
    if not isinstance(config, AnalysisConfig):
        raise InvalidParameterError("config must be an AnalysisConfig")
    sets_ = index_sets(config, on_resonance=on_resonance)
    ctx = get_context(config.gammaN)
    zero_pairs = [(s.m, s.j) for s in sets_.zero]
    entries, seen = [], set()
    for idx in sets_.zero:
        if idx.m < 1:
            continue
        for t in maximal_orbit_types(ctx, IrrepLabel(idx.m, idx.j), SPECTRAL).members:
            if t.name in seen:
                continue
            seen.add(t.name)
            c = coeff_maximal_fast(
                t, 1, config, SPECTRAL, weyl_convention, zero_indices=zero_pairs
            )
            if c:
                entries.append(
                    ExistenceEntry(
                        t.name,
                        idx.m,
                        idx.j,
                        c,
                        "non-stationary periodic solution with symmetry "
                        f"group containing {t.name}",
                    )
                )
    metadata = {
        "gammaN": config.gammaN,
        "beta": float(config.beta),
        "rows": [
            {"j": j, "mu_j": float(mu), "multiplicity": mult}
            for j, mu, mult in config.eigenvalues
        ],
        "labelling": "spectral",
        "weyl_convention": weyl_convention,
        "on_resonance": on_resonance,
        "sigma_zero": [{"m": s.m, "j": s.j} for s in sets_.zero],
        "excluded": [{"m": s.m, "j": s.j} for s in sets_.excluded],
        "sign_note": SIGN_NOTE,
    }
    return ExistenceReport(tuple(entries), metadata)


def report_json(report: ExistenceReport) -> dict:
    """JSON-ready dict of a report (deterministic field order)."""
    if not isinstance(report, ExistenceReport):
        raise InvalidParameterError("expected an ExistenceReport")
    return {
        "entries": [
            {
                "orbit_type": e.orbit_type,
                "m": e.m,
                "j": e.j,
                "coefficient": e.coefficient,
                "guarantee": e.guarantee,
            }
            for e in report.entries
        ],
        "metadata": {k: v for k, v in report.metadata.items()},
    }
