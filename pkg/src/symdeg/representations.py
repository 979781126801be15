"""Irreducible representations of O(2) x Gamma x Z_2 and their orbit-type data.

The group G = O(2) x Gamma x Z_2 (Gamma = D_N) acts on the real irreducible
spaces V_{m,j} = W_m (x) R_j, where W_m is the two-dimensional O(2)-module on
which a rotation by angle q acts as rotation by m*q and reflections act with
trace zero (W_0 is the one-dimensional trivial module), and R_j is a real
irreducible Gamma x Z_2 module.

Two j-indexing conventions for R_j are supported:

* ``"catalog"`` — the row labelling used by the frozen N = 8 reference tables
  (and hence by all bundled fixtures).  For N != 8 it coincides with
  ``"spectral"``.
* ``"spectral"`` — R_j is the j-th ring-Laplacian eigenspace representation of
  Gamma tensored with the antipodal Z_2-character (the convention under which
  the linearized pendula operator decomposes mode by mode).

This module computes exact characters, fixed-point-space dimensions via exact
cyclotomic character averaging, the lattice of orbit types with nonzero fixed
spaces, and the maximal orbit types of each irreducible space.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm

import numpy as np

from .amalgam import (
    GroupContext,
    O2Element,
    OrbitType,
    ROTATION,
    fold,
    make_finite,
    subconjugate,
)
from .cyclotomic import CycloValue, rational_from_reduced, reduce_zeta_counts
from .errors import (
    InternalConsistencyError,
    InvalidParameterError,
    UnsupportedOperationError,
)
from .finite_group import (
    all_subgroups,
    build_dihedral,
    conjugate_subgroup,
    isomorphisms,
    quotient_group,
    subgroup_conjugacy_classes,
)

CATALOG = "catalog"
SPECTRAL = "spectral"
CONVENTIONS = (CATALOG, SPECTRAL)


# ---------------------------------------------------------------------------
# labels and rows
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IrrepLabel:
    """Index (m, j) of the G-module V_{m,j}."""

    m: int
    j: int

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 0:
            raise InvalidParameterError(f"folding mode m must be a nonnegative integer, got {self.m!r}")
        if not isinstance(self.j, int) or self.j < 0:
            raise InvalidParameterError(f"irrep index j must be a nonnegative integer, got {self.j!r}")


@dataclass(frozen=True)
class GammaZRow:
    """A real irreducible character of Gamma x Z_2 = D_N x Z_2.

    One-dimensional rows are determined by the signs on the rotation and
    reflection generators; two-dimensional rows are the geometric characters
    2cos(2*pi*j*k/N) vanishing on reflections.  ``z_sign`` is the action of
    the Z_2 generator.
    """

    kind: str                 # "one" | "geo"
    rot_sign: int = 1
    refl_sign: int = 1
    geo_j: int = 0
    z_sign: int = 1

    @property
    def dim(self) -> int:
        return 1 if self.kind == "one" else 2


def irrep_index_set(n: int) -> range:
    """The valid j-range for Gamma = D_n: 0 .. floor(n/2)."""
    return range(n // 2 + 1)


def _row(ctx: GroupContext, j: int, convention: str) -> GammaZRow:
    n = ctx.gamma_n
    if convention not in CONVENTIONS:
        raise InvalidParameterError(f"unknown irrep convention {convention!r}")
    if j not in irrep_index_set(n):
        raise InvalidParameterError(f"irrep index j={j} out of range for D{n} (0..{n // 2})")
    if convention == CATALOG and n == 8:
        # Row labelling of the frozen reference tables: rows 1 and 2 swap the
        # two smallest geometric characters, and rows 0, 3, 4 carry the
        # trivial Z_2-action.
        return {
            0: GammaZRow("one", 1, 1, z_sign=1),
            1: GammaZRow("geo", geo_j=2, z_sign=-1),
            2: GammaZRow("geo", geo_j=1, z_sign=-1),
            3: GammaZRow("geo", geo_j=3, z_sign=1),
            4: GammaZRow("one", -1, -1, z_sign=1),
        }[j]
    if j == 0:
        return GammaZRow("one", 1, 1, z_sign=-1)
    if n % 2 == 0 and j == n // 2:
        # Alternating row; the reflection sign matches the edge-centered
        # reflection of the ring (kappa: i -> 1 - i).
        return GammaZRow("one", -1, -1, z_sign=-1)
    return GammaZRow("geo", geo_j=j, z_sign=-1)


def irrep_dim(ctx: GroupContext, label: IrrepLabel, convention: str = CATALOG) -> int:
    """Real dimension of V_{m,j}."""
    row = _row(ctx, label.j, convention)
    return row.dim * (2 if label.m >= 1 else 1)


# ---------------------------------------------------------------------------
# characters
# ---------------------------------------------------------------------------

def _decode_gz(ctx: GroupContext, y: int) -> tuple[int, bool, int]:
    """Split a Gamma x Z_2 element id into (rotation power, is_reflection, z_sign)."""
    n = ctx.gamma_n
    eps = -1 if y >= 2 * n else 1
    x = y % (2 * n)
    return x % n, x >= n, eps


def irrep_character(
    ctx: GroupContext,
    label: IrrepLabel,
    element: tuple[O2Element, int],
    convention: str = CATALOG,
) -> CycloValue:
    """Exact character of V_{m,j} at a group element ((O(2) part, GammaZ2 id))."""
    o2, y = element
    row = _row(ctx, label.j, convention)
    k, refl, eps = _decode_gz(ctx, y)
    n = ctx.gamma_n

    if label.m >= 1:
        if o2.kind != ROTATION:
            return CycloValue.from_rational(0)
        o2_val = CycloValue.two_cos2pi(label.m * o2.q)
    else:
        o2_val = CycloValue.from_rational(1)

    if row.kind == "one":
        g_val = CycloValue.from_rational(
            (row.rot_sign ** k) * (row.refl_sign if refl else 1)
        )
    elif refl:
        g_val = CycloValue.from_rational(0)
    else:
        g_val = CycloValue.two_cos2pi(Fraction(row.geo_j * k, n))

    z_val = CycloValue.from_rational(eps if row.z_sign == -1 else 1)
    return o2_val * g_val * z_val


def _gz_row_terms(ctx: GroupContext, row: GammaZRow, y: int, L: int):
    """(weight, zeta exponents) of the row character at GammaZ element y,
    or None when the character vanishes there."""
    k, refl_g, eps = _decode_gz(ctx, y)
    sign = eps if row.z_sign == -1 else 1
    if row.kind == "one":
        sign *= row.rot_sign ** k
        if refl_g:
            sign *= row.refl_sign
        return sign, [0]              # zeta^0 with weight `sign`
    if refl_g:
        return None                   # geometric rows vanish on reflections
    t = (row.geo_j * k * (L // ctx.gamma_n)) % L
    return sign, [t, (-t) % L]


def _average_counts(name: str, L: int, counts, size: int) -> int:
    total = rational_from_reduced(reduce_zeta_counts(L, counts))
    if total is None:
        raise InternalConsistencyError(
            f"character sum over {name} is not rational"
        )
    q, r = divmod(total, size)
    if r != 0 or q < 0:
        raise InternalConsistencyError(
            f"character average over {name} is not a nonnegative integer: {total}/{size}"
        )
    return q


def fixed_point_dim(
    ctx: GroupContext,
    label: IrrepLabel,
    h: OrbitType,
    convention: str = CATALOG,
) -> int:
    """dim of the H-fixed subspace of V_{m,j}, by exact character averaging."""
    row = _row(ctx, label.j, convention)
    if h.kind != "finite":
        if label.m >= 1:
            return 0
        # m = 0: O(2) acts trivially on W_0, so its Haar average is 1 and the
        # fixed dim is the character average of the row over the GammaZ part.
        L = lcm(2, ctx.gamma_n)
        counts = np.zeros(L, dtype=np.int64)
        for y in h.gz_sub:
            terms = _gz_row_terms(ctx, row, y, L)
            if terms is None:
                continue
            sign, g_terms = terms
            for b in g_terms:
                counts[b] += sign
        return _average_counts(h.name, L, counts, len(h.gz_sub))
    n_o2 = h.n
    gz_order = ctx.gz_order
    L = lcm(2, n_o2, ctx.gamma_n)

    counts = np.zeros(L, dtype=np.int64)
    for i in h.elements_idx:
        x, y = i // gz_order, i % gz_order
        terms = _gz_row_terms(ctx, row, y, L)
        if terms is None:
            continue
        sign, g_terms = terms
        if label.m >= 1:
            if x >= n_o2:
                continue              # reflections have trace zero on W_m
            u = (label.m * x * (L // n_o2)) % L
            o2_terms = [u, (-u) % L]
        else:
            o2_terms = [0]
        for a in o2_terms:
            for b in g_terms:
                counts[(a + b) % L] += sign

    return _average_counts(h.name, L, counts, h.order)


# ---------------------------------------------------------------------------
# candidate orbit types
# ---------------------------------------------------------------------------

def _divisors(x: int) -> list[int]:
    return [d for d in range(1, x + 1) if x % d == 0]


def _normal_o2_subgroups(n: int) -> list[frozenset[int]]:
    """Normal subgroups of D_n <= O(2), as sets of dihedral element ids."""
    out = [frozenset(k * (n // d) for k in range(d)) for d in _divisors(n)]
    if n % 2 == 0:
        rot = frozenset(range(0, n, 2))
        out.append(rot | frozenset(n + k for k in range(0, n, 2)))
        out.append(rot | frozenset(n + k for k in range(1, n, 2)))
    out.append(frozenset(range(2 * n)))
    return out


@lru_cache(maxsize=None)
def _gz_class_reps(ctx: GroupContext) -> tuple[frozenset[int], ...]:
    return tuple(c.representative for c in subgroup_conjugacy_classes(ctx.gz))


@lru_cache(maxsize=None)
def _gz_normal_subs_of(ctx: GroupContext, k: frozenset[int]) -> tuple[frozenset[int], ...]:
    return tuple(
        z
        for z in all_subgroups(ctx.gz)
        if z <= k and all(conjugate_subgroup(ctx.gz, z, a) == z for a in k)
    )


@lru_cache(maxsize=None)
def candidate_orbit_types(ctx: GroupContext, m: int) -> tuple[OrbitType, ...]:
    """Every finite-amalgam orbit type that can stabilize a point of some
    V_{m,j} \\ {0}: a fixed vector forces exp(2*pi*i*m/n) to be an eigenvalue
    of a Gamma x Z_2 element, so n divides m * lcm(N, 2)."""
    if m < 1:
        raise InvalidParameterError("candidate enumeration requires m >= 1")
    seen: dict = {}
    for n in _divisors(m * lcm(ctx.gamma_n, 2)):
        dg = build_dihedral(n)
        full_dn = frozenset(dg.elements())
        for z_o2 in _normal_o2_subgroups(n):
            q_o, _, _ = quotient_group(dg, full_dn, z_o2)
            for k_gz in _gz_class_reps(ctx):
                if len(k_gz) % q_o.order:
                    continue
                target = len(k_gz) // q_o.order
                for z_gz in _gz_normal_subs_of(ctx, k_gz):
                    if len(z_gz) != target:
                        continue
                    q_g, _, _ = quotient_group(ctx.gz, k_gz, z_gz)
                    for theta in isomorphisms(q_o, q_g):
                        t = make_finite(ctx, n, z_o2, k_gz, z_gz, theta)
                        seen.setdefault(t.key, t)
    return tuple(sorted(seen.values(), key=lambda t: (-t.order, t.name)))


@lru_cache(maxsize=None)
def orbit_type_lattice(
    ctx: GroupContext, label: IrrepLabel, convention: str = CATALOG
) -> tuple[tuple[OrbitType, int], ...]:
    """All finite orbit types with nonzero fixed space in V_{m,j}, with dims."""
    if label.m < 1:
        raise UnsupportedOperationError(
            "the orbit-type lattice is defined for the non-stationary modes m >= 1"
        )
    out = []
    for t in candidate_orbit_types(ctx, label.m):
        d = fixed_point_dim(ctx, label, t, convention)
        if d >= 1:
            out.append((t, d))
    return tuple(out)


# ---------------------------------------------------------------------------
# maximal orbit types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MaximalSet:
    """The maximal orbit types of V_{m,j} (excluding (G))."""

    label: IrrepLabel
    convention: str
    members: tuple[OrbitType, ...]

    def names(self) -> list[str]:
        return [t.name for t in self.members]


@lru_cache(maxsize=None)
def maximal_orbit_types(
    ctx: GroupContext, label: IrrepLabel, convention: str = CATALOG
) -> MaximalSet:
    """Maximal elements (under subconjugacy, (G) excluded) among the orbit
    types with nonzero fixed space in V_{m,j}."""
    if label.m < 1:
        raise UnsupportedOperationError(
            "maximal orbit types are defined for the non-stationary modes m >= 1"
        )
    lat = orbit_type_lattice(ctx, label, convention)
    members = [
        t
        for t, _ in lat
        if not any(k.key != t.key and subconjugate(t, k) for k, _ in lat)
    ]
    members.sort(key=lambda t: (-t.order, t.name))
    return MaximalSet(label, convention, tuple(members))


def is_maximal_kind(
    ctx: GroupContext, h: OrbitType, convention: str = CATALOG
) -> tuple[bool, IrrepLabel | None]:
    """Whether h lies in some maximal set M_{m,j} (m >= 1); returns the witness.

    Membership is decided through the folding structure: M_{m,j} is the image
    of M_{1,j} under the m-fold pullback, so h is of maximal kind iff it is
    the m-fold of a base maximal type with m = n(h)/n(base).
    """
    if h.kind != "finite":
        return False, None
    for j in irrep_index_set(ctx.gamma_n):
        base = maximal_orbit_types(ctx, IrrepLabel(1, j), convention)
        for t in base.members:
            if h.n % t.n == 0:
                s = h.n // t.n
                if s >= 1 and fold(t, s).key == h.key:
                    return True, IrrepLabel(s, j)
    return False, None


def maximal_set_json(ms: MaximalSet) -> dict:
    return {
        "m": ms.label.m,
        "j": ms.label.j,
        "convention": ms.convention,
        "members": ms.names(),
    }
