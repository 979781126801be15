"""Operator spectrum, index sets, basic degrees, and the degree invariant.

The linearization of the periodic problem acts on each isotypic block
V_{m,j} (Fourier mode m, network isotypic index j) with the single
eigenvalue

    mu_{m,j} = (m^2 + beta^2 mu_j) / (1 + m^2),

so its negative spectrum is the finite set Sigma_minus = {(m, j) :
m^2 < -beta^2 mu_j} and the degree invariant is the Burnside-ring product
of the basic degrees over Sigma_zero, the odd-multiplicity part of
Sigma_minus.  This module computes:

* ``operator_eigenvalue`` / ``sigma_sets`` -- the spectrum side.  All
  arithmetic is exact (rationals); float inputs are carried exactly and
  only their *sign decisions* are guarded by an epsilon band of 1e-12,
  inside which the non-resonance precondition counts as violated.

* ``basic_degree`` -- the degree of -id on the unit ball of one block,
  by the closed recurrence over the orbit-type lattice of V_{m,j}:
  walking types from largest to smallest,

      n_H = [(-1)^{dim V^H} - sum_{H < K} n_K n(H,K) |W(K)|] / |W(H)|,

  with an exactness check on every division.  For m >= 1 the lattice is
  the finite-kind one; for m = 0 the O(2)-factor acts trivially and the
  lattice consists of the full products O(2) x K over subgroup classes K
  of the finite part.

* ``degree_product`` / ``degree_invariant`` -- Burnside products of
  distinct basic degrees, reduced in a deterministic sorted order.

* ``product_coeff`` / ``coeff_maximal_fast`` -- closed forms for the
  coefficient at (the s0-fold of) a maximal-kind orbit type h without
  multiplying anything out.  Both share one skeleton: with x0 = 2/|W(h)|
  and per-fold parity bits p_s,

      -x0 [p_{s0}]  +  2 x0  sum_I  (-2)^{|I|-2},

  the sum running over subsets I (|I| >= 2) of odd-parity folds with
  gcd(I) = s0 that pass the boolean bracket B_m(I + {s0}) -- the bracket
  is evaluated with the gcd *adjoined* to the subset, which is the form
  consistent with honest products (pairwise-only checks differ first at
  kernel index 8 with folds {3,5}).  For ``product_coeff`` the parity
  bits are fixed-space dimension parities of explicit factors; for
  ``coeff_maximal_fast`` they are parities of the counts n^s(h) of
  Sigma_zero members with odd fixed dimension at the s-fold of h, where
  only modes m = m0*s can contribute (m0 = h's witness mode).

Row-labelling conventions: the ``catalog`` labelling matches the printed
reference tables and is the default everywhere.  For configuration-level
analysis the ``spectral`` labelling is the physically consistent one --
its rows all carry the antipodal sign character, which makes every
stationary (m = 0) basic degree act trivially on maximal-kind
coefficients, exactly what the fast coefficient formula assumes.  The
catalog labelling attaches the trivial antipodal character to some rows
(0, 3, 4 for N = 8), whose stationary degrees flip signs globally; pass
``row_convention=SPECTRAL`` when feeding configurations end to end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd

from .amalgam import (
    OrbitType,
    amalgam_n_count,
    boolean_B,
    fold,
    full_product,
    get_context,
    group_class,
    m_of,
    subconjugate,
)
from .burnside import (
    WEYL_CATALOG,
    amalgam_ring,
    coeff,
    effective_weyl_order,
    element_json,
    multiply,
)
from .errors import (
    InternalConsistencyError,
    InvalidParameterError,
    LatticeIncompleteError,
    ResonanceError,
    TruncationGuardError,
)
from .finite_group import subgroup_conjugacy_classes
from .representations import (
    CATALOG,
    IrrepLabel,
    fixed_point_dim,
    irrep_index_set,
    is_maximal_kind,
    maximal_orbit_types,
    orbit_type_lattice,
)

__all__ = [
    "AnalysisConfig",
    "SpectralIndex",
    "SIGN_EPSILON",
    "operator_eigenvalue",
    "sigma_sets",
    "basic_degree",
    "degree_product",
    "degree_invariant",
    "product_coeff",
    "coeff_maximal_fast",
    "analysis_report",
]

#: Half-width of the band around zero inside which the sign of an
#: eigenvalue computed from float inputs is considered undecidable.
SIGN_EPSILON = Fraction(1, 10**12)


def _as_exact(value, what: str) -> tuple[Fraction, bool]:
    """Exact rational value of a numeric input and whether it was a float."""
    if isinstance(value, bool):
        raise InvalidParameterError(f"{what} must be a number, not a bool")
    if isinstance(value, float):
        if not math.isfinite(value):
            raise InvalidParameterError(f"{what} must be finite, got {value!r}")
        return Fraction(value), True
    if isinstance(value, (int, Fraction)):
        return Fraction(value), False
    raise InvalidParameterError(
        f"{what} must be an exact rational or a float, got {type(value).__name__}"
    )


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AnalysisConfig:
    """One symmetric system: dihedral order N, period scale beta = p/2pi,
    and the eigenvalue rows (j, mu_j, multiplicity) of the network matrix.

    Exact inputs (int, Fraction) stay exact; float inputs are kept as
    floats so downstream sign decisions know to apply the epsilon band.
    """

    gammaN: int
    beta: "int | float | Fraction"
    eigenvalues: tuple
    truncationGuard: "int | None" = None

    def __post_init__(self):
        n = self.gammaN
        if isinstance(n, bool) or not isinstance(n, int) or n < 3:
            raise InvalidParameterError(
                f"gammaN must be an integer >= 3, got {n!r}"
            )
        bval, _ = _as_exact(self.beta, "beta")
        if bval <= 0:
            raise InvalidParameterError(f"beta must be positive, got {self.beta!r}")
        js = irrep_index_set(n)
        rows, seen = [], set()
        for row in self.eigenvalues:
            try:
                j, mu, mult = row
            except (TypeError, ValueError):
                raise InvalidParameterError(
                    "eigenvalue rows must be (j, mu_j, multiplicity) triples"
                ) from None
            if isinstance(j, bool) or not isinstance(j, int) or j not in js:
                raise InvalidParameterError(
                    f"isotypic index j={j!r} outside 0..{js[-1]} for D{n}"
                )
            if j in seen:
                raise InvalidParameterError(f"duplicate eigenvalue row j={j}")
            seen.add(j)
            mu_exact, mu_inexact = _as_exact(mu, f"mu_{j}")
            if isinstance(mult, bool) or not isinstance(mult, int) or mult < 1:
                raise InvalidParameterError(
                    f"multiplicity of row j={j} must be a positive integer"
                )
            rows.append((j, mu if mu_inexact else mu_exact, mult))
        object.__setattr__(self, "eigenvalues", tuple(rows))
        g = self.truncationGuard
        if g is not None and (
            isinstance(g, bool) or not isinstance(g, int) or g < 0
        ):
            raise InvalidParameterError(
                f"truncationGuard must be a nonnegative integer or None, got {g!r}"
            )


@dataclass(frozen=True)
class SpectralIndex:
    """One negative-spectrum member: Fourier mode, isotypic index, and the
    operator eigenvalue mu_{m,j} there."""

    m: int
    j: int
    mu_mj: "Fraction | float"


def _row_map(config: AnalysisConfig) -> dict:
    """j -> (exact mu_j, inexact flag, multiplicity)."""
    out = {}
    for j, mu, mult in config.eigenvalues:
        exact, inexact = _as_exact(mu, f"mu_{j}")
        out[j] = (exact, inexact, mult)
    return out


def _mu_value(
    config: AnalysisConfig, m: int, j: int, rows: dict, b2: Fraction, b_inexact: bool
) -> tuple[Fraction, bool]:
    """Exact mu_{m,j} with its inexactness flag; raises on a vanishing or
    sign-ambiguous value (non-resonance precondition)."""
    mu, mu_inexact, _ = rows[j]
    val = Fraction(m * m + b2 * mu, 1 + m * m)
    inexact = b_inexact or mu_inexact
    if val == 0 or (inexact and abs(val) <= SIGN_EPSILON):
        raise ResonanceError(
            f"operator eigenvalue vanishes at (m={m}, j={j}): "
            "the non-resonance precondition is violated",
            offending=[(m, j)],
        )
    return val, inexact


def operator_eigenvalue(m: int, j: int, config: AnalysisConfig):
    """mu_{m,j} = (m^2 + beta^2 mu_j)/(1 + m^2).

    Exact (Fraction) when beta and mu_j are exact, float otherwise.
    Raises when the value vanishes or, for float inputs, falls inside the
    sign-decision band.
    """
    if isinstance(m, bool) or not isinstance(m, int) or m < 0:
        raise InvalidParameterError(f"mode m must be a nonnegative integer, got {m!r}")
    rows = _row_map(config)
    if j not in rows:
        raise InvalidParameterError(f"no eigenvalue row j={j!r} in the configuration")
    b2, b_inexact = _as_exact(config.beta, "beta")
    val, inexact = _mu_value(config, m, j, rows, b2 * b2, b_inexact)
    return float(val) if inexact else val


def sigma_sets(config: AnalysisConfig) -> tuple[tuple, tuple]:
    """(Sigma_minus, Sigma_zero) as sorted tuples of SpectralIndex.

    Sigma_minus collects every (m, j) with mu_{m,j} < 0; since mu_{m,j}
    increases to 1 with m, the per-row scan stops at the first
    nonnegative mode (bound m < beta*sqrt(-mu_j)).  Sigma_zero keeps the
    rows of odd multiplicity.  A configured truncationGuard raises as
    soon as some row needs a mode beyond it.
    """
    if not isinstance(config, AnalysisConfig):
        raise InvalidParameterError("config must be an AnalysisConfig")
    rows = _row_map(config)
    b, b_inexact = _as_exact(config.beta, "beta")
    b2 = b * b
    guard = config.truncationGuard
    minus, zero = [], []
    for j, (mu, inexact, mult) in rows.items():
        m = 0
        while True:
            val, val_inexact = _mu_value(config, m, j, rows, b2, b_inexact)
            if val > 0:
                break
            if guard is not None and m > guard:
                raise TruncationGuardError(
                    f"row j={j} has a negative eigenvalue at mode m={m}, "
                    f"beyond the truncation guard {guard}"
                )
            out = float(val) if val_inexact else val
            minus.append(SpectralIndex(m, j, out))
            if mult % 2:
                zero.append(SpectralIndex(m, j, out))
            m += 1
    key = lambda s: (s.m, s.j)  # noqa: E731
    return tuple(sorted(minus, key=key)), tuple(sorted(zero, key=key))


# ---------------------------------------------------------------------------
# basic degrees
# ---------------------------------------------------------------------------


def _check_label(ctx, label) -> IrrepLabel:
    if not isinstance(label, IrrepLabel):
        try:
            m, j = label
            label = IrrepLabel(m, j)
        except (TypeError, ValueError):
            raise InvalidParameterError(
                f"expected an IrrepLabel or an (m, j) pair, got {label!r}"
            ) from None
    if label.j not in irrep_index_set(ctx.gamma_n):
        raise InvalidParameterError(
            f"isotypic index j={label.j} out of range for D{ctx.gamma_n}"
        )
    return label


def basic_degree(
    ctx,
    label: IrrepLabel,
    row_convention: str = CATALOG,
    weyl_convention: str = WEYL_CATALOG,
):
    """Degree of -id on the unit ball of V_{m,j}, as a Burnside element.

    Computed by the top-down recurrence over the orbit-type lattice of the
    block; every division by |W(H)| is checked for exactness.  The result
    is an involution (its Burnside square is the unit).
    """
    label = _check_label(ctx, label)
    return _basic_degree(ctx, label.m, label.j, row_convention, weyl_convention)


@lru_cache(maxsize=None)
def _basic_degree(ctx, m: int, j: int, row_convention: str, weyl_convention: str):
    ring = amalgam_ring(ctx, weyl_convention)
    label = IrrepLabel(m, j)
    if m == 0:
        # The circle factor acts trivially on stationary blocks, so the
        # orbit types are the full products O(2) x K over subgroup classes
        # of the finite part.
        classes = [
            full_product(ctx, c.representative)
            for c in subgroup_conjugacy_classes(ctx.gz)
        ]
    else:
        classes = [group_class(ctx)]
        classes.extend(t for t, _ in orbit_type_lattice(ctx, label, row_convention))
    order = sorted(classes, key=lambda t: t.size_rank())
    coeffs: dict = {}
    kept: list = []
    for hh in order:
        dim = fixed_point_dim(ctx, label, hh, row_convention)
        if dim < 1 and not hh.is_group_class:
            continue
        src = -1 if dim % 2 else 1
        acc = 0
        for kk in kept:
            if subconjugate(hh, kk):
                acc += (
                    coeffs[kk]
                    * amalgam_n_count(hh, kk)
                    * effective_weyl_order(kk, weyl_convention)
                )
        w = effective_weyl_order(hh, weyl_convention)
        q, r = divmod(src - acc, w)
        if r:
            raise LatticeIncompleteError(
                f"degree recurrence division not exact at {hh.name}: "
                f"({src - acc})/{w}",
                missing_hint=hh.name,
            )
        if q:
            coeffs[hh] = q
            kept.append(hh)
    return ring.element(coeffs)


# ---------------------------------------------------------------------------
# products and the invariant
# ---------------------------------------------------------------------------


def degree_product(
    ctx,
    pairs,
    row_convention: str = CATALOG,
    weyl_convention: str = WEYL_CATALOG,
):
    """Burnside product of the basic degrees at the given distinct (m, j)
    pairs, reduced in sorted order (deterministic).  Duplicates are
    rejected: a repeated factor would square to the unit and silently
    drop out."""
    keys, seen = [], set()
    for p in pairs:
        lab = _check_label(ctx, p)
        key = (lab.m, lab.j)
        if key in seen:
            raise InvalidParameterError(
                f"duplicate degree factor (m={key[0]}, j={key[1]})"
            )
        seen.add(key)
        keys.append(key)
    keys.sort()
    out = amalgam_ring(ctx, weyl_convention).unit()
    for m, j in keys:
        out = multiply(out, _basic_degree(ctx, m, j, row_convention, weyl_convention))
    return out


def degree_invariant(
    config: AnalysisConfig,
    row_convention: str = CATALOG,
    weyl_convention: str = WEYL_CATALOG,
):
    """The full degree invariant: product of basic degrees over Sigma_zero
    (unit element when the set is empty).

    For end-to-end analysis pass ``row_convention=SPECTRAL``; see the
    module docstring on stationary rows.
    """
    if not isinstance(config, AnalysisConfig):
        raise InvalidParameterError("config must be an AnalysisConfig")
    ctx = get_context(config.gammaN)
    _, zero = sigma_sets(config)
    return degree_product(
        ctx, [(s.m, s.j) for s in zero], row_convention, weyl_convention
    )


# ---------------------------------------------------------------------------
# closed-form coefficients at maximal-kind types
# ---------------------------------------------------------------------------


def _maximal_witness(h: OrbitType, row_convention: str) -> IrrepLabel:
    if not isinstance(h, OrbitType):
        raise InvalidParameterError(f"expected an orbit type, got {h!r}")
    ok, witness = is_maximal_kind(h.ctx, h, row_convention)
    if not ok:
        raise InvalidParameterError(
            f"{h.name} is not of maximal kind in the {row_convention!r} labelling"
        )
    return witness


def _x0(h: OrbitType, weyl_convention: str) -> int:
    w = effective_weyl_order(h, weyl_convention)
    if w not in (1, 2):
        raise InternalConsistencyError(
            f"maximal-kind type {h.name} has Weyl order {w}, expected 1 or 2"
        )
    return 2 // w


def _check_fold(s0) -> int:
    if isinstance(s0, bool) or not isinstance(s0, int) or s0 < 1:
        raise InvalidParameterError(
            f"fold index must be a positive integer, got {s0!r}"
        )
    return s0


def _closed_form(h: OrbitType, s0: int, parities: dict, x0: int) -> int:
    """Shared skeleton of both coefficient shortcuts.

    ``parities`` maps each participating fold s to a parity bit.  The
    boolean bracket is always evaluated with the subset gcd adjoined.
    """
    total = -x0 if parities.get(s0) else 0
    odd = sorted(s for s, p in parities.items() if p)
    mm = m_of(h)
    for r in range(2, len(odd) + 1):
        for subset in combinations(odd, r):
            if gcd(*subset) != s0:
                continue
            if not boolean_B(mm, frozenset(subset) | {s0}):
                continue
            total += 2 * x0 * (-2) ** (r - 2)
    return total


def product_coeff(
    h: OrbitType,
    s0: int,
    factors,
    row_convention: str = CATALOG,
    weyl_convention: str = WEYL_CATALOG,
) -> int:
    """Coefficient of the s0-fold of maximal-kind h in the product of the
    basic degrees at modes s_k*m0 (m0 = h's witness mode), rows j_k.

    ``factors`` is a list of (s_k, j_k) with distinct fold indices s_k;
    the parity data are the fixed-space dimension parities
    dim V_{m0, j_k}^h mod 2.
    """
    s0 = _check_fold(s0)
    witness = _maximal_witness(h, row_convention)
    ctx = h.ctx
    m0 = witness.m
    flist, seen = [], set()
    for f in factors:
        try:
            s, j = f
        except (TypeError, ValueError):
            raise InvalidParameterError(
                f"factors must be (fold, j) pairs, got {f!r}"
            ) from None
        s = _check_fold(s)
        if j not in irrep_index_set(ctx.gamma_n):
            raise InvalidParameterError(
                f"isotypic index j={j!r} out of range for D{ctx.gamma_n}"
            )
        if s in seen:
            raise InvalidParameterError(
                f"repeated fold index s={s}: the closed form requires "
                "distinct foldings"
            )
        seen.add(s)
        flist.append((s, j))
    if not flist:
        raise InvalidParameterError("at least one degree factor is required")
    parities = {
        s: fixed_point_dim(ctx, IrrepLabel(m0, j), h, row_convention) % 2
        for s, j in flist
    }
    return _closed_form(h, s0, parities, _x0(h, weyl_convention))


def _normalize_zero_indices(ctx, zero_indices) -> list:
    """Validate an explicit index set: (m, j) pairs or SpectralIndex
    entries, m a nonnegative integer, j in range, no duplicates."""
    pairs, seen = [], set()
    js = irrep_index_set(ctx.gamma_n)
    for item in zero_indices:
        if isinstance(item, SpectralIndex):
            m, j = item.m, item.j
        else:
            try:
                m, j = item
            except (TypeError, ValueError):
                raise InvalidParameterError(
                    f"zero_indices entries must be (m, j) pairs, got {item!r}"
                ) from None
        if isinstance(m, bool) or not isinstance(m, int) or m < 0:
            raise InvalidParameterError(
                f"mode m must be a nonnegative integer, got {m!r}"
            )
        if j not in js:
            raise InvalidParameterError(
                f"isotypic index j={j!r} out of range for D{ctx.gamma_n}"
            )
        if (m, j) in seen:
            raise InvalidParameterError(f"duplicate index (m={m}, j={j})")
        seen.add((m, j))
        pairs.append((m, j))
    return pairs


def coeff_maximal_fast(
    h: OrbitType,
    s0: int,
    config: AnalysisConfig,
    row_convention: str = CATALOG,
    weyl_convention: str = WEYL_CATALOG,
    *,
    zero_indices=None,
) -> int:
    """Coefficient of the s0-fold of maximal-kind h in the full degree
    invariant of ``config``, without multiplying the product out.

    For each fold s, n^s(h) counts the Sigma_zero members with odd fixed
    dimension at the s-fold of h; only modes m = m0*s can contribute.
    The closed form runs on the parities of these counts and equals
    ``coeff(degree_invariant(config), fold(h, s0))`` in the spectral
    labelling, where stationary factors are inert on maximal-kind
    coefficients and the per-row anchoring hypotheses hold.  In the
    catalog labelling the closed form can differ from the multiplied
    product once several rows combine (the mixed antipodal characters
    break the anchoring; see the module docstring).

    ``zero_indices`` overrides the Sigma_zero set derived from the
    configuration: an iterable of (m, j) pairs or SpectralIndex entries.
    This is for callers that filter the index set themselves -- e.g. a
    resonance-exclusion scan, where ``sigma_sets`` would raise on the
    configuration -- and ``config`` then only fixes the group order.
    """
    s0 = _check_fold(s0)
    witness = _maximal_witness(h, row_convention)
    ctx = h.ctx
    if not isinstance(config, AnalysisConfig):
        raise InvalidParameterError("config must be an AnalysisConfig")
    if config.gammaN != ctx.gamma_n:
        raise InvalidParameterError(
            f"configuration is for D{config.gammaN}, orbit type for D{ctx.gamma_n}"
        )
    m0 = witness.m
    if zero_indices is None:
        _, zero = sigma_sets(config)
        pairs = [(idx.m, idx.j) for idx in zero]
    else:
        pairs = _normalize_zero_indices(ctx, zero_indices)
    by_mode: dict = {}
    for m, j in pairs:
        by_mode.setdefault(m, []).append(j)
    max_m = max(by_mode, default=0)
    parities = {}
    s = 1
    while m0 * s <= max_m:
        js = by_mode.get(m0 * s, ())
        if js:
            hs = fold(h, s)
            count = sum(
                1
                for j in js
                if fixed_point_dim(ctx, IrrepLabel(m0 * s, j), hs, row_convention) % 2
            )
            if count:
                parities[s] = count % 2
        s += 1
    return _closed_form(h, s0, parities, _x0(h, weyl_convention))


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------


def _index_json(indices) -> list[dict]:
    return [{"m": s.m, "j": s.j, "mu_mj": float(s.mu_mj)} for s in indices]


def analysis_report(
    config: AnalysisConfig,
    row_convention: str = CATALOG,
    weyl_convention: str = WEYL_CATALOG,
) -> dict:
    """JSON-ready summary: both index sets, the full invariant, and the
    nonzero coefficients at maximal-kind orbit types with the (m, j)
    witness that certifies each type."""
    if not isinstance(config, AnalysisConfig):
        raise InvalidParameterError("config must be an AnalysisConfig")
    ctx = get_context(config.gammaN)
    minus, zero = sigma_sets(config)
    inv = degree_invariant(config, row_convention, weyl_convention)
    maximal, seen = [], set()
    for idx in zero:
        if idx.m < 1:
            continue
        label = IrrepLabel(idx.m, idx.j)
        for t in maximal_orbit_types(ctx, label, row_convention).members:
            if t.name in seen:
                continue
            c = coeff(inv, t)
            if c:
                seen.add(t.name)
                maximal.append(
                    {
                        "orbit_type": t.name,
                        "coeff": c,
                        "witness": {"m": idx.m, "j": idx.j},
                    }
                )
    return {
        "sigma_minus": _index_json(minus),
        "sigma_zero": _index_json(zero),
        "invariant": element_json(inv),
        "maximal_kind_nonzero": maximal,
    }
