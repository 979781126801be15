"""Closed subgroups of G = O(2) x Gamma x Z_2 with finite Weyl group.

The finite-Weyl orbit types of G fall into two families:

* finite amalgams  K_O ^{phi_O}x^{phi_Gamma} K_Gamma  with K_O a dihedral
  subgroup D_n < O(2) (rotations k/n, reflections on the offset grid) and
  K_Gamma <= Gamma x Z_2, glued along an isomorphism of quotients;
* full products  O(2) x K  for K <= Gamma x Z_2 (the formal lattice tops,
  including the full group itself).

Angles are exact rationals q in [0,1) meaning 2*pi*q; no floating point
appears anywhere in lattice code.  Conjugacy is decided by an exhaustive
scan over a finite conjugator grid that is provably sufficient: once a
dihedral K_O is gauge-fixed so its reflection offsets lie on the (1/n)
grid, any conjugation between such subgroups can be realized by
r(j/(2n)) or s(j/(2n)) times an element of Gamma x Z_2.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import InvalidParameterError, InternalConsistencyError, UnsupportedOperationError
from .finite_group import (
    FiniteGroup,
    SubgroupConjugacyClass,
    _dihedral_part_name,
    adjoin_z2,
    all_subgroups,
    build_dihedral,
    class_of_subgroup,
    closure,
    isomorphisms,
    n_count,
    quotient_group,
    subgroup_conjugacy_classes,
    weyl_order,
)


# ---------------------------------------------------------------------------
# O(2) elements (exact)
# ---------------------------------------------------------------------------

ROTATION = 0
REFLECTION = 1


@dataclass(frozen=True)
class O2Element:
    """r(q) (kind 0) or s(q) (kind 1), with q in [0,1) meaning angle 2*pi*q.

    s(q) := s(0) r(q) where s(0) is the base reflection; the composition
    rules below follow from that convention.
    """

    kind: int
    q: Fraction

    def __post_init__(self):
        object.__setattr__(self, "q", Fraction(self.q) % 1)

    def __mul__(self, other: "O2Element") -> "O2Element":
        a, b = self.q, other.q
        if self.kind == ROTATION and other.kind == ROTATION:
            return O2Element(ROTATION, a + b)
        if self.kind == ROTATION and other.kind == REFLECTION:
            return O2Element(REFLECTION, b - a)
        if self.kind == REFLECTION and other.kind == ROTATION:
            return O2Element(REFLECTION, a + b)
        return O2Element(ROTATION, b - a)

    def inverse(self) -> "O2Element":
        if self.kind == ROTATION:
            return O2Element(ROTATION, -self.q)
        return self

    def conj(self, other: "O2Element") -> "O2Element":
        """self * other * self^{-1}"""
        return self * other * self.inverse()

    def act_time(self, t: Fraction) -> Fraction:
        """Action on the circle R/Z (time normalized so q=1 is a full period)."""
        if self.kind == ROTATION:
            return (t + self.q) % 1
        return (-t - self.q) % 1

    def __repr__(self) -> str:
        return f"{'r' if self.kind == ROTATION else 's'}({self.q})"


# ---------------------------------------------------------------------------
# group context: Gamma x Z_2 caches and conjugator permutation tables
# ---------------------------------------------------------------------------

class GroupContext:
    """Caches for a fixed Gamma = D_N: the finite part Gamma x Z_2, its
    subgroup classes, and the conjugator permutation tables used by
    canonicalization."""

    def __init__(self, gamma_n: int):
        if not isinstance(gamma_n, int) or gamma_n < 1:
            raise InvalidParameterError(f"gamma_n must be a positive integer, got {gamma_n!r}")
        self.gamma_n = gamma_n
        self.gamma = build_dihedral(gamma_n)
        self.gz = adjoin_z2(self.gamma)
        self.gz_order = self.gz.order
        self.gz_classes = subgroup_conjugacy_classes(self.gz)
        self.class_by_name = {c.name: c for c in self.gz_classes}
        self.full_gz = frozenset(self.gz.elements())
        # gz conjugation permutations: P[g][y] = g y g^{-1}
        m = self.gz_order
        perm = np.empty((m, m), dtype=np.int32)
        for g in range(m):
            for y in range(m):
                perm[g, y] = self.gz.conjugate(y, g)
        perm.setflags(write=False)
        self.gz_conj = perm
        self._o2_perm: dict[int, np.ndarray] = {}
        self._canon: dict[tuple, "OrbitType"] = {}
        self._quad: dict[tuple, tuple] = {}

    def o2_perm(self, n: int) -> np.ndarray:
        """(2n, 2n) index maps of the O(2)-side conjugator grid in base n.

        Row j < n: conjugation by r(j/(2n)); row n+j: by s(j/(2n)).
        Indices encode (kind, a): rotation r(a/n) = a, reflection
        s(a/n) = n + a.
        """
        tab = self._o2_perm.get(n)
        if tab is None:
            tab = np.empty((2 * n, 2 * n), dtype=np.int32)
            for j in range(n):
                for a in range(n):
                    tab[j, a] = a                          # r-conj fixes rotations
                    tab[j, n + a] = n + (a - j) % n        # s(b) -> s(b - j/n)
                    tab[n + j, a] = (-a) % n               # s-conj inverts rotations
                    tab[n + j, n + a] = n + (j - a) % n    # s(b) -> s(j/n - b)
            tab.setflags(write=False)
            self._o2_perm[n] = tab
        return tab

    def conjugated_rows(self, n: int, idx: np.ndarray) -> np.ndarray:
        """Apply every grid conjugator to a set of universe indices.

        Universe index = x * |GZ| + y where x encodes the O(2) part in
        base n and y the Gamma x Z_2 part.  Result: (2n * |GZ|, len(idx)).
        """
        m = self.gz_order
        x, y = idx // m, idx % m
        o2 = self.o2_perm(n)[:, x].astype(np.int64)       # (2n, L)
        gz = self.gz_conj[:, y].astype(np.int64)          # (m, L)
        rows = o2[:, None, :] * m + gz[None, :, :]        # (2n, m, L)
        return rows.reshape(-1, idx.shape[0])


@lru_cache(maxsize=None)
def get_context(gamma_n: int) -> GroupContext:
    return GroupContext(gamma_n)


# ---------------------------------------------------------------------------
# orbit types
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AmalgamSubgroup:
    """Concrete amalgam data (the canonical class representative).

    kO is D_n with reflection offsets on the (1/n) grid (gauge-fixed);
    z_o2 are element ids of the kernel inside ``build_dihedral(n)``;
    k_gz / z_gz are subgroups of Gamma x Z_2; theta maps cosets of z_o2
    to cosets of z_gz (identity coset first on both sides).
    """

    n: int
    z_o2: frozenset[int]
    k_gz: frozenset[int]
    z_gz: frozenset[int]
    theta: tuple[int, ...]


class OrbitType:
    """A conjugacy class of finite-Weyl subgroups of O(2) x Gamma x Z_2.

    Equality and hashing use the canonical key, so two values are equal
    iff their representatives are conjugate in G.
    """

    __slots__ = ("ctx", "kind", "key", "n", "rep", "elements_idx", "gz_sub", "weyl", "_name")

    def __init__(self, ctx, kind, key, n=None, rep=None, elements_idx=None, gz_sub=None, weyl=None):
        self.ctx = ctx
        self.kind = kind          # "finite" | "full"
        self.key = key
        self.n = n                # base of kO = D_n (finite kinds)
        self.rep = rep            # AmalgamSubgroup (finite kinds)
        self.elements_idx = elements_idx  # canonical universe indices, sorted
        self.gz_sub = gz_sub      # frozenset (full kinds): class rep of K
        self.weyl = weyl
        self._name = None

    # -- identity ----------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, OrbitType) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"OrbitType({self.name})"

    # -- basic data ---------------------------------------------------------

    @property
    def order(self) -> int:
        """|H| for finite types; full products are infinite (returns 0)."""
        return len(self.elements_idx) if self.kind == "finite" else 0

    @property
    def is_group_class(self) -> bool:
        return self.kind == "full" and self.gz_sub == self.ctx.full_gz

    def size_rank(self) -> tuple:
        """Sort key placing dominating types first (full products by
        decreasing Gamma-part, then finite types by decreasing order)."""
        if self.kind == "full":
            return (0, -len(self.gz_sub), self.name)
        return (1, -len(self.elements_idx), self.name)

    @property
    def name(self) -> str:
        if self._name is None:
            self._name = _render_name(self)
        return self._name


# ---------------------------------------------------------------------------
# canonicalization
# ---------------------------------------------------------------------------

def _decode_elements(ctx: GroupContext, n: int, idx) -> list[tuple[int, int]]:
    """Universe indices -> (o2_id in build_dihedral(n) encoding, gz id)."""
    m = ctx.gz_order
    return [(int(i) // m, int(i) % m) for i in idx]


def _rep_from_elements(ctx: GroupContext, n: int, idx) -> AmalgamSubgroup:
    pairs = _decode_elements(ctx, n, idx)
    xs = {x for x, _ in pairs}
    if xs != set(range(2 * n)):
        raise InternalConsistencyError("amalgam does not project onto its dihedral part")
    z_o2 = frozenset(x for x, y in pairs if y == 0)
    k_gz = frozenset(y for _, y in pairs)
    z_gz = frozenset(y for x, y in pairs if x == 0)
    dg = build_dihedral(n)
    _, _, coset_o = quotient_group(dg, frozenset(dg.elements()), z_o2)
    qg, _, coset_g = quotient_group(ctx.gz, k_gz, z_gz)
    theta = [None] * (2 * n // len(z_o2))
    for x, y in pairs:
        co, cg = coset_o[x], coset_g[y]
        if theta[co] is None:
            theta[co] = cg
        elif theta[co] != cg:
            raise InternalConsistencyError("amalgam pairing is not single-valued")
    return AmalgamSubgroup(n, z_o2, k_gz, z_gz, tuple(theta))


def _canonical_finite(ctx: GroupContext, n: int, idx: np.ndarray) -> OrbitType:
    """Canonicalize a finite amalgam given by its universe indices."""
    idx = np.sort(np.asarray(idx, dtype=np.int64))
    cache_key = (n, idx.tobytes())
    hit = ctx._canon.get(cache_key)
    if hit is not None:
        return hit

    rows = ctx.conjugated_rows(n, idx)
    rows.sort(axis=1)
    base = idx[None, :]
    norm_hits = int((rows == base).all(axis=1).sum())
    size = idx.shape[0]
    if (2 * norm_hits) % size != 0:
        raise InternalConsistencyError("normalizer count incompatible with subgroup order")
    weyl = (2 * norm_hits) // size

    enc = np.ascontiguousarray(rows.astype(">i4"))
    best = min(range(rows.shape[0]), key=lambda i: enc[i].tobytes())
    canon = rows[best]
    key = ("finite", n, canon.tobytes())
    hit = ctx._canon.get(key)
    if hit is None:
        rep = _rep_from_elements(ctx, n, canon)
        hit = OrbitType(
            ctx, "finite", key, n=n, rep=rep,
            elements_idx=tuple(int(v) for v in canon), weyl=weyl,
        )
        ctx._canon[key] = hit
    ctx._canon[cache_key] = hit
    return hit


def make_finite(ctx: GroupContext, n: int, z_o2, k_gz, z_gz, theta) -> OrbitType:
    """Build (and canonicalize) a finite amalgam from its quadruple data."""
    dg = build_dihedral(n)
    z_o2, k_gz, z_gz = frozenset(z_o2), frozenset(k_gz), frozenset(z_gz)
    _, _, coset_o = quotient_group(dg, frozenset(dg.elements()), z_o2)
    _, _, coset_g = quotient_group(ctx.gz, k_gz, z_gz)
    m = ctx.gz_order
    idx = [
        x * m + y
        for x in dg.elements()
        for y in sorted(k_gz)
        if theta[coset_o[x]] == coset_g[y]
    ]
    if len(idx) != 2 * n * len(z_gz):
        raise InternalConsistencyError("amalgam element count mismatch")
    return _canonical_finite(ctx, n, np.array(idx, dtype=np.int64))


def full_product(ctx: GroupContext, k_gz) -> OrbitType:
    """The orbit type of O(2) x K for K <= Gamma x Z_2."""
    cls = class_of_subgroup(ctx.gz, frozenset(k_gz))
    rep = cls.representative
    key = ("full", tuple(sorted(rep)))
    hit = ctx._canon.get(key)
    if hit is None:
        w = weyl_order(ctx.gz, rep)
        hit = OrbitType(ctx, "full", key, gz_sub=rep, weyl=w)
        ctx._canon[key] = hit
    return hit


def group_class(ctx: GroupContext) -> OrbitType:
    """(G) — the class of the full group."""
    return full_product(ctx, ctx.full_gz)


# ---------------------------------------------------------------------------
# spec'd operations
# ---------------------------------------------------------------------------

def realize_elements(h: OrbitType) -> list[tuple[O2Element, int]]:
    """All elements of the canonical representative of a finite amalgam,
    as (O(2) element, Gamma x Z_2 element id) pairs."""
    if h.kind != "finite":
        raise UnsupportedOperationError("cannot enumerate an orbit type with infinite kO")
    n, m = h.n, h.ctx.gz_order
    out = []
    for i in h.elements_idx:
        x, y = i // m, i % m
        if x < n:
            out.append((O2Element(ROTATION, Fraction(x, n)), y))
        else:
            out.append((O2Element(REFLECTION, Fraction(x - n, n)), y))
    return out


def m_of(h: OrbitType) -> int:
    """The order of the rotation image in kO/zO (1 for full products)."""
    if h.kind == "full":
        return 1
    rot_z = sum(1 for x in h.rep.z_o2 if x < h.n)
    return h.n // rot_z


def fold(h: OrbitType, s: int) -> OrbitType:
    """Pull the O(2) part back through the s-fold cover r(q) -> r(s q)."""
    if not isinstance(s, int) or s < 1:
        raise InvalidParameterError(f"fold parameter must be a positive integer, got {s!r}")
    if h.kind == "full" or s == 1:
        return h
    ctx, n, m = h.ctx, h.n, h.ctx.gz_order
    new_idx = []
    for i in h.elements_idx:
        x, y = i // m, i % m
        kind, a = (0, x) if x < n else (1, x - n)
        for k in range(s):
            xa = kind * (s * n) + (a + k * n)
            new_idx.append(xa * m + y)
    return _canonical_finite(ctx, s * n, np.array(new_idx, dtype=np.int64))


def _embed_idx(ctx: GroupContext, idx, n_from: int, n_to: int) -> np.ndarray:
    """Re-encode universe indices from base n_from to base n_to (n_from | n_to)."""
    scale = n_to // n_from
    m = ctx.gz_order
    out = np.empty(len(idx), dtype=np.int64)
    for p, i in enumerate(idx):
        x, y = i // m, i % m
        kind, a = (0, x) if x < n_from else (1, x - n_from)
        out[p] = (kind * n_to + a * scale) * m + y
    return out


def subconjugate(h: OrbitType, k: OrbitType, o2_only: bool = False) -> bool:
    """(H) <= (K): some G-conjugate of H is contained in K.

    With ``o2_only`` the conjugator search is restricted to elements of the
    form (a, e, 1) — pure O(2) conjugators — to let tests compare the full
    scan against that reduced set.
    """
    if h.ctx is not k.ctx:
        raise InvalidParameterError("orbit types from different group contexts")
    ctx = h.ctx
    if h.key == k.key:
        return True
    if k.kind == "full":
        h_gz = h.rep.k_gz if h.kind == "finite" else h.gz_sub
        if o2_only:
            return h_gz <= k.gz_sub
        return _gz_subconjugate(ctx, h_gz, k.gz_sub)
    if h.kind == "full":
        return False
    if k.n % h.n != 0:
        return False
    h_idx = _embed_idx(ctx, h.elements_idx, h.n, k.n)
    universe = 2 * k.n * ctx.gz_order
    k_bool = np.zeros(universe, dtype=bool)
    k_bool[np.array(k.elements_idx, dtype=np.int64)] = True
    rows = ctx.conjugated_rows(k.n, h_idx)
    if o2_only:
        rows = rows[:: ctx.gz_order]
    return bool(k_bool[rows].all(axis=1).any())


def _gz_subconjugate(ctx: GroupContext, a: frozenset, b: frozenset) -> bool:
    if len(b) % len(a) != 0:
        return False
    gz = ctx.gz
    return any(
        all(gz.conjugate(x, g) in b for x in a) for g in gz.elements()
    )


def amalgam_weyl_order(h: OrbitType) -> int:
    return h.weyl


def amalgam_n_count(h: OrbitType, k: OrbitType) -> int:
    """n(H, K): the number of distinct members of class (K) containing
    the canonical representative of H."""
    ctx = h.ctx
    if h.key == k.key:
        return 1
    if k.kind == "full":
        h_gz = h.rep.k_gz if h.kind == "finite" else h.gz_sub
        cls = class_of_subgroup(ctx.gz, k.gz_sub)
        return n_count(ctx.gz, h_gz, cls)
    if h.kind == "full":
        return 0
    if k.n % h.n != 0:
        return 0
    h_idx = _embed_idx(ctx, h.elements_idx, h.n, k.n)
    k_idx = np.array(k.elements_idx, dtype=np.int64)
    rows = ctx.conjugated_rows(k.n, k_idx)   # images of K under each conjugator
    universe = 2 * k.n * ctx.gz_order
    nrows = rows.shape[0]
    member = np.zeros((nrows, universe), dtype=bool)
    member[np.arange(nrows)[:, None], rows] = True
    hits = member[:, h_idx].all(axis=1)
    if not hits.any():
        return 0
    images = np.sort(rows[hits], axis=1)
    distinct = {r.tobytes() for r in np.ascontiguousarray(images)}
    return len(distinct)


def boolean_B(m: int, index_set) -> bool:
    """True iff every pair x,y of the index set satisfies
    m | (x-y)/gcd(x,y) or m | (x+y)/gcd(x,y)."""
    from math import gcd

    items = sorted(set(int(x) for x in index_set))
    if not items or any(x < 1 for x in items):
        raise InvalidParameterError("index set must be a nonempty set of positive integers")
    if m < 1:
        raise InvalidParameterError("m must be a positive integer")
    for i, x in enumerate(items):
        for y in items[i + 1:]:
            g = gcd(x, y)
            if ((y - x) // g) % m != 0 and ((y + x) // g) % m != 0:
                return False
    return True


def folding_relation(h: OrbitType, s0: int, s1: int) -> bool:
    """The divisibility disjunction m(H) | (s0-s1)/gcd or m(H) | (s0+s1)/gcd."""
    if s0 < 1 or s1 < 1:
        raise InvalidParameterError("fold indices must be positive")
    if s1 > s0:
        s0, s1 = s1, s0
    return boolean_B(m_of(h), {s0, s1}) if s0 != s1 else True


# ---------------------------------------------------------------------------
# intersections (for the working lattice)
# ---------------------------------------------------------------------------

def intersection_classes(h: OrbitType, k: OrbitType) -> list[OrbitType]:
    """All finite-Weyl orbit types arising as H ∩ gKg^{-1}.

    Intersections whose O(2) part is purely rotational have infinite Weyl
    group and never carry Burnside-ring coefficients, so they are dropped.
    """
    ctx = h.ctx
    if h.kind == "full" and k.kind == "full":
        out = {}
        gz = ctx.gz
        for g in gz.elements():
            inter = frozenset(
                x for x in h.gz_sub if gz.conjugate(x, gz.inv(g)) in k.gz_sub
            )
            t = full_product(ctx, inter)
            out[t.key] = t
        return list(out.values())
    if h.kind == "full":
        return intersection_classes(k, h)
    if k.kind == "full":
        # H ∩ (O(2) x gKg^{-1}): keep elements whose Gamma part lies in the conjugate
        gz = ctx.gz
        m = ctx.gz_order
        out = {}
        for g in gz.elements():
            target = {gz.conjugate(y, g) for y in k.gz_sub}
            sub = [i for i in h.elements_idx if (i % m) in target]
            if not any((i // m) >= h.n for i in sub):
                continue  # purely rotational: infinite Weyl group
            t = _canonical_restricted(ctx, h.n, np.array(sub, dtype=np.int64))
            if t is not None:
                out[t.key] = t
        return list(out.values())

    from math import lcm

    L = lcm(h.n, k.n)
    h_idx = _embed_idx(ctx, h.elements_idx, h.n, L)
    k_idx = _embed_idx(ctx, k.elements_idx, k.n, L)
    universe = 2 * L * ctx.gz_order
    h_bool = np.zeros(universe, dtype=bool)
    h_bool[h_idx] = True
    rows = ctx.conjugated_rows(L, k_idx)
    raw: dict[bytes, np.ndarray] = {}
    for r in rows:
        inter = r[h_bool[r]]
        if inter.size == 0:
            continue
        inter = np.sort(inter)
        raw.setdefault(inter.tobytes(), inter)
    out = {}
    m = ctx.gz_order
    for inter in raw.values():
        if not ((inter // m) >= L).any():
            continue  # no reflections: infinite Weyl group
        # restrict the base so the rotation part is the full grid of D_n'
        t = _canonical_restricted(ctx, L, inter)
        if t is not None:
            out[t.key] = t
    return list(out.values())


def _canonical_restricted(ctx: GroupContext, L: int, idx: np.ndarray) -> OrbitType | None:
    """Canonicalize a subgroup given in base L whose rotation part may be a
    proper subgrid: rebase to the actual dihedral order first."""
    m = ctx.gz_order
    xs = np.unique(idx // m)
    rots = sorted(int(x) for x in xs if x < L)
    refls = sorted(int(x) - L for x in xs if x >= L)
    n_new = len(rots)
    if n_new == 0 or len(refls) != n_new:
        raise InternalConsistencyError("intersection is not a gauge-compatible dihedral set")
    step = L // n_new
    if any(r % step != 0 for r in rots):
        raise InternalConsistencyError("rotation part is not a subgroup grid")
    off = min(r % step for r in refls)
    # gauge-fix the reflection offsets to multiples of step
    if any((r - off) % step != 0 for r in refls):
        raise InternalConsistencyError("reflection offsets do not form a single coset")
    new_idx = []
    for i in idx:
        x, y = int(i) // m, int(i) % m
        if x < L:
            new_idx.append((x // step) * m + y)
        else:
            a = (x - L - off) // step
            new_idx.append((n_new + a) * m + y)
    return _canonical_finite(ctx, n_new, np.array(new_idx, dtype=np.int64))


# ---------------------------------------------------------------------------
# names: rendering and parsing
# ---------------------------------------------------------------------------

def _gz_name_to_literal(name: str, gamma_n: int) -> str:
    """Class name -> literal token: the tilde moves to a prefix "t" except
    for the full-image twisted classes where it marks the kernel."""
    if name.endswith("t") and name != f"D{gamma_n}dt":
        return "t" + name[:-1]
    return name


def _literal_to_gz_name(tok: str) -> str:
    if tok.startswith("t"):
        return tok[1:] + "t"
    return tok


def _o2_part_name(n: int, ids: frozenset[int]) -> str:
    base, tilde = _dihedral_part_name(n, ids)
    return ("t" + base) if tilde else base


def _render_name(h: OrbitType) -> str:
    ctx = h.ctx
    if h.kind == "full":
        if h.gz_sub == ctx.full_gz:
            return "(G)"
        return f"(O2 x {_gz_name_to_literal(class_of_subgroup(ctx.gz, h.gz_sub).name, ctx.gamma_n)})"
    rep = h.rep
    n = h.n
    k1 = f"D{n}"
    k2 = _gz_name_to_literal(class_of_subgroup(ctx.gz, rep.k_gz).name, ctx.gamma_n)
    if len(rep.z_o2) == 2 * n and rep.z_gz == rep.k_gz:
        body = f"({k1} x {k2})"
    else:
        z1 = _o2_part_name(n, rep.z_o2)
        z2 = _gz_name_to_literal(class_of_subgroup(ctx.gz, rep.z_gz).name, ctx.gamma_n)
        body = f"({k1} ^{z1} x^{z2} {k2})"
    siblings = _classes_for_quadruple(ctx, _quadruple_of(h))
    if len(siblings) > 1:
        body += f"@{siblings.index(h.key)}"
    return body


def _quadruple_of(h: OrbitType) -> tuple:
    ctx, rep = h.ctx, h.rep
    return (
        h.n,
        _o2_part_name(h.n, rep.z_o2),
        class_of_subgroup(ctx.gz, rep.k_gz).name,
        class_of_subgroup(ctx.gz, rep.z_gz).name,
    )


def _o2_subgroups_named(n: int, token: str) -> list[frozenset[int]]:
    """Subgroups of D_n (ids of build_dihedral(n)) matching an O(2)-side
    literal token ("Z<d>", "D<r>", "tD<r>"), restricted to normal ones."""
    dg = build_dihedral(n)
    want = token
    out = []
    for s in all_subgroups(dg):
        if _o2_part_name(n, s) == want:
            # kernels are normal in D_n
            if all(frozenset(dg.conjugate(x, a) for x in s) == s for a in dg.elements()):
                out.append(s)
    return out


def _classes_for_quadruple(ctx: GroupContext, quad: tuple) -> list[tuple]:
    """Canonical keys (sorted) of all orbit-type classes whose canonical
    quadruple equals ``quad``."""
    hit = ctx._quad.get(quad)
    if hit is not None:
        return hit
    n, z1_tok, k2_name, z2_name = quad
    found = {}
    for t in _realize_quadruple(ctx, n, z1_tok, k2_name, z2_name):
        found[t.key] = t
    keys = sorted(k for k, t in found.items() if _quadruple_of(t) == quad)
    ctx._quad[quad] = keys
    return keys


def _realize_quadruple(ctx: GroupContext, n: int, z1_tok: str, k2_name: str, z2_name: str):
    """Every orbit type realizing the (possibly non-canonical) quadruple."""
    if k2_name not in ctx.class_by_name:
        raise InvalidParameterError(f"unknown Gamma x Z2 class name {k2_name!r}")
    if z2_name not in ctx.class_by_name:
        raise InvalidParameterError(f"unknown Gamma x Z2 class name {z2_name!r}")
    k_gz = ctx.class_by_name[k2_name].representative
    z_candidates = [
        s for s in ctx.class_by_name[z2_name].members
        if s <= k_gz and all(
            frozenset(ctx.gz.conjugate(x, a) for x in s) == s for a in k_gz
        )
    ]
    dg = build_dihedral(n)
    out = []
    for z_o2 in _o2_subgroups_named(n, z1_tok):
        q_o, _, _ = quotient_group(dg, frozenset(dg.elements()), z_o2)
        for z_gz in z_candidates:
            if (2 * n) * len(z_gz) != len(z_o2) * len(k_gz):
                continue
            q_g, _, _ = quotient_group(ctx.gz, k_gz, z_gz)
            for theta in isomorphisms(q_o, q_g):
                out.append(make_finite(ctx, n, z_o2, k_gz, z_gz, theta))
    if not out:
        raise InvalidParameterError(
            f"quadruple (D{n} ^{z1_tok} x^{z2_name} {k2_name}) has no realization"
        )
    return out


_LITERAL_RE = re.compile(r"^\((.+)\)(?:@(\d+))?$")


def parse_literal(ctx: GroupContext, text: str) -> OrbitType:
    """Parse an orbit-type literal: "(G)", "(O2 x D4p)", "(D1 x D8p)",
    "(D4 ^Z1 x^Z4d D8p)", optionally with a trailing "@k" selecting among
    classes that share the same quadruple."""
    s = text.strip()
    m = _LITERAL_RE.match(s)
    if not m:
        raise InvalidParameterError(f"malformed orbit-type literal {text!r}")
    body, pick = m.group(1).strip(), m.group(2)
    if body == "G":
        if pick is not None:
            raise InvalidParameterError("(G) admits no @ selector")
        return group_class(ctx)
    parts = body.split()
    if len(parts) == 3 and parts[1] == "x":
        k1_tok, k2_tok = parts[0], parts[2]
        k2_name = _literal_to_gz_name(k2_tok)
        if k1_tok == "O2":
            if k2_name not in ctx.class_by_name:
                raise InvalidParameterError(f"unknown Gamma x Z2 class name {k2_name!r}")
            return full_product(ctx, ctx.class_by_name[k2_name].representative)
        n = _parse_dn(k1_tok)
        z1_tok, z2_name = f"D{n}", k2_name
    elif len(parts) == 4 and parts[1].startswith("^") and parts[2].startswith("x^"):
        k1_tok = parts[0]
        n = _parse_dn(k1_tok)
        z1_tok = parts[1][1:]
        z2_name = _literal_to_gz_name(parts[2][2:])
        k2_name = _literal_to_gz_name(parts[3])
    else:
        raise InvalidParameterError(f"malformed orbit-type literal {text!r}")

    types = {t.key: t for t in _realize_quadruple(ctx, n, z1_tok, k2_name, z2_name)}
    ordered = [types[k] for k in sorted(types)]
    if pick is not None:
        quad = (n, z1_tok, k2_name, z2_name)
        keys = _classes_for_quadruple(ctx, quad)
        i = int(pick)
        if i >= len(keys):
            raise InvalidParameterError(f"@{i} out of range for {text!r} ({len(keys)} classes)")
        return types.get(keys[i]) or next(t for t in ordered if t.key == keys[i])
    return ordered[0]


def _parse_dn(tok: str) -> int:
    if not (tok.startswith("D") and tok[1:].isdigit()):
        raise InvalidParameterError(f"O(2)-side token {tok!r} must be D<n>")
    n = int(tok[1:])
    if n < 1:
        raise InvalidParameterError("dihedral order must be positive")
    return n


def strip_ambiguity_suffix(name: str) -> str:
    """Drop a trailing @k selector (fixture comparison is quadruple-level)."""
    return re.sub(r"@\d+$", "", name)
