"""Burnside ring elements over a configurable orbit-type lattice.

Elements are finite integer combinations a = n_1(H_1) + ... + n_N(H_N) of
orbit types.  Products are computed by the mark recurrence: iterating the
working lattice dominating-types-first,

    n_L = [ n(L,H) |W(H)| n(L,K) |W(K)|
            - sum over already-computed L~ of n_{L~} n(L,L~) |W(L~)| ] / |W(L)|

with every division required to be exact.  An inexact division means a
dominating orbit type is missing from the working lattice
(``LatticeIncompleteError``); ``multiply`` recovers once by closing the
lattice under pairwise intersection classes and retrying.

Two lattice providers are defined: ``AmalgamLattice`` over the finite-Weyl
orbit types of O(2) x Gamma x Z_2 (with a Weyl-order convention knob) and
``FiniteGroupLattice`` over the subgroup conjugacy classes of a small finite
group.  The latter supports ``brute_force_product``, a direct orbit count on
G/H x G/K that serves as the oracle for ``multiply``.

Weyl-order conventions: ``"group"`` uses the plain group-theoretic order
|N(H)/H|.  ``"catalog"`` (the default, matching the frozen reference tables)
halves it for finite amalgams whose O(2)-kernel is purely rotational: such
types are twisted by a free temporal phase, and the reference tables count
their Weyl group modulo that phase.

The catalog rescaling amounts to the basis change (L) -> d_L (L) with
d_L in {1, 1/2}, so a single generator product picks up the factor
d_H d_K / d_L per coefficient.  Consequently the catalog ring is exactly
closed on elements carrying even coefficients at halved (phase-twisted)
types — the reference degree rows are of this form — while a raw product
of two twisted generators can have half-integer coefficients at deeper
types.  ``multiply`` therefore runs the recurrence over exact rationals
per generator pair and enforces integrality on the assembled result,
where the rescaling cancels; under the ``"group"`` convention (and on
finite-group lattices) every single division is already exact and is
checked step by step.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

from .amalgam import (
    GroupContext,
    OrbitType,
    amalgam_n_count,
    boolean_B,
    group_class,
    intersection_classes,
    m_of,
    subconjugate,
)
from .errors import (
    InternalConsistencyError,
    InvalidParameterError,
    LatticeIncompleteError,
)
from .finite_group import (
    FiniteGroup,
    SubgroupConjugacyClass,
    class_of_subgroup,
    n_count,
    subgroup_conjugacy_classes,
    weyl_order,
)
from .representations import CATALOG, SPECTRAL, is_maximal_kind

WEYL_CATALOG = "catalog"
WEYL_GROUP = "group"
WEYL_CONVENTIONS = (WEYL_CATALOG, WEYL_GROUP)

__all__ = [
    "WEYL_CATALOG",
    "WEYL_CONVENTIONS",
    "WEYL_GROUP",
    "AmalgamLattice",
    "BurnsideElement",
    "BurnsideRing",
    "FiniteGroupLattice",
    "amalgam_ring",
    "brute_force_product",
    "coeff",
    "effective_weyl_order",
    "element_json",
    "finite_group_ring",
    "generator_product_coeff",
    "multiply",
    "render",
    "unit",
]


def effective_weyl_order(t: OrbitType, convention: str = WEYL_CATALOG) -> int:
    """|W(t)| under the given convention (see the module docstring)."""
    if convention not in WEYL_CONVENTIONS:
        raise InvalidParameterError(f"unknown Weyl convention {convention!r}")
    if convention == WEYL_CATALOG and t.kind == "finite" and all(
        x < t.n for x in t.rep.z_o2
    ):
        if t.weyl % 2:
            raise InternalConsistencyError(
                f"cannot halve the odd Weyl order {t.weyl} of {t.name}"
            )
        return t.weyl // 2
    return t.weyl


# ---------------------------------------------------------------------------
# lattice providers
# ---------------------------------------------------------------------------

class AmalgamLattice:
    """The finite-Weyl orbit types of O(2) x Gamma x Z_2."""

    def __init__(self, ctx: GroupContext, weyl_convention: str = WEYL_CATALOG):
        if weyl_convention not in WEYL_CONVENTIONS:
            raise InvalidParameterError(
                f"unknown Weyl convention {weyl_convention!r}"
            )
        self.ctx = ctx
        self.weyl_convention = weyl_convention
        # halved Weyl orders are a basis rescaling: single divisions may be
        # fractional even over a complete lattice (see the module docstring)
        self.exact_divisions = weyl_convention == WEYL_GROUP

    def unit_class(self) -> OrbitType:
        return group_class(self.ctx)

    @staticmethod
    def key(t: OrbitType):
        return t.key

    @staticmethod
    def sort_key(t: OrbitType):
        return t.size_rank()

    @staticmethod
    def display(t: OrbitType) -> str:
        return t.name

    def weyl(self, t: OrbitType) -> int:
        return effective_weyl_order(t, self.weyl_convention)

    @staticmethod
    def n_count(h: OrbitType, k: OrbitType) -> int:
        return amalgam_n_count(h, k)

    @staticmethod
    def subconjugate(h: OrbitType, k: OrbitType) -> bool:
        return subconjugate(h, k)

    @staticmethod
    def intersections(h: OrbitType, k: OrbitType) -> list[OrbitType]:
        return intersection_classes(h, k)

    def ensure_class(self, x) -> OrbitType:
        if not isinstance(x, OrbitType):
            raise InvalidParameterError(f"expected an orbit type, got {x!r}")
        return x


class FiniteGroupLattice:
    """The subgroup conjugacy classes of a finite group."""

    exact_divisions = True  # the honest Burnside ring: divisions always exact

    def __init__(self, group: FiniteGroup):
        self.group = group
        self.classes = subgroup_conjugacy_classes(group)
        self._class_of = {
            member: c for c in self.classes for member in c.members
        }
        self._weyl = {
            c.representative: weyl_order(group, c.representative)
            for c in self.classes
        }

    def unit_class(self) -> SubgroupConjugacyClass:
        return self._class_of[frozenset(self.group.elements())]

    @staticmethod
    def key(c: SubgroupConjugacyClass):
        return (len(c.representative), tuple(sorted(c.representative)))

    @staticmethod
    def sort_key(c: SubgroupConjugacyClass):
        return (-len(c.representative), c.name, tuple(sorted(c.representative)))

    @staticmethod
    def display(c: SubgroupConjugacyClass) -> str:
        return f"({c.name})"

    def weyl(self, c: SubgroupConjugacyClass) -> int:
        return self._weyl[c.representative]

    def n_count(self, h: SubgroupConjugacyClass, k: SubgroupConjugacyClass) -> int:
        return n_count(self.group, h.representative, k)

    @staticmethod
    def subconjugate(h: SubgroupConjugacyClass, k: SubgroupConjugacyClass) -> bool:
        return any(h.representative <= m for m in k.members)

    def intersections(
        self, h: SubgroupConjugacyClass, k: SubgroupConjugacyClass
    ) -> list[SubgroupConjugacyClass]:
        out = {}
        for m in k.members:
            c = self._class_of[frozenset(h.representative & m)]
            out[c.representative] = c
        return list(out.values())

    def ensure_class(self, x) -> SubgroupConjugacyClass:
        if isinstance(x, SubgroupConjugacyClass):
            return x
        if isinstance(x, (frozenset, set)):
            return class_of_subgroup(self.group, frozenset(x))
        raise InvalidParameterError(f"expected a subgroup class, got {x!r}")


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------

class BurnsideElement:
    """A sparse integer combination of orbit types, in canonical term order."""

    __slots__ = ("ring", "_terms")

    def __init__(self, ring: "BurnsideRing", terms: tuple):
        self.ring = ring
        self._terms = terms          # tuple of (class, coeff), canonical order

    @property
    def terms(self) -> dict:
        return {t: c for t, c in self._terms}

    def coeff(self, h) -> int:
        h = self.ring.lattice.ensure_class(h)
        key = self.ring.lattice.key(h)
        for t, c in self._terms:
            if self.ring.lattice.key(t) == key:
                return c
        return 0

    def __mul__(self, other: "BurnsideElement") -> "BurnsideElement":
        return self.ring.multiply(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BurnsideElement):
            return NotImplemented
        if self.ring is not other.ring:
            return False
        lk = self.ring.lattice.key
        return [(lk(t), c) for t, c in self._terms] == [
            (lk(t), c) for t, c in other._terms
        ]

    def __hash__(self):
        lk = self.ring.lattice.key
        return hash(tuple((lk(t), c) for t, c in self._terms))

    def __repr__(self):
        return f"BurnsideElement({render(self)})"


class BurnsideRing:
    """Burnside-ring arithmetic over one lattice provider."""

    def __init__(self, lattice):
        self.lattice = lattice
        self._pair_cache: dict = {}

    # -- construction -------------------------------------------------------

    def element(self, terms) -> BurnsideElement:
        """Build an element from an iterable of (class, coeff) pairs or a
        mapping; merges duplicates and drops zero coefficients."""
        items = terms.items() if hasattr(terms, "items") else terms
        acc: dict = {}
        for t, c in items:
            t = self.lattice.ensure_class(t)
            if not isinstance(c, int):
                raise InvalidParameterError(
                    f"coefficients must be integers, got {c!r}"
                )
            k = self.lattice.key(t)
            if k in acc:
                acc[k] = (t, acc[k][1] + c)
            else:
                acc[k] = (t, c)
        kept = [(t, c) for t, c in acc.values() if c != 0]
        kept.sort(key=lambda tc: self.lattice.sort_key(tc[0]))
        return BurnsideElement(self, tuple(kept))

    def unit(self) -> BurnsideElement:
        return self.element([(self.lattice.unit_class(), 1)])

    def zero(self) -> BurnsideElement:
        return self.element([])

    # -- multiplication -----------------------------------------------------

    def multiply(self, a: BurnsideElement, b: BurnsideElement) -> BurnsideElement:
        if a.ring is not self or b.ring is not self:
            raise InvalidParameterError(
                "operands belong to a different Burnside ring"
            )
        try:
            return self._multiply_once(a, b, force_closure=False)
        except LatticeIncompleteError:
            # a dominating type was missing from some pair lattice: close the
            # working lattices under pairwise intersections and retry once
            return self._multiply_once(a, b, force_closure=True)

    def _multiply_once(
        self, a: BurnsideElement, b: BurnsideElement, force_closure: bool
    ) -> BurnsideElement:
        acc: dict = {}
        for h, ch in a._terms:
            for k, ck in b._terms:
                for t, c in self._generator_product(h, k, force_closure):
                    key = self.lattice.key(t)
                    cur = acc.get(key)
                    acc[key] = (t, (cur[1] if cur else 0) + ch * ck * c)
        terms = []
        for t, c in acc.values():
            c = Fraction(c)
            if c.denominator != 1:
                raise LatticeIncompleteError(
                    f"product coefficient at {self.lattice.display(t)} is "
                    f"{c}, not an integer: either a dominating orbit type is "
                    "missing from the working lattice, or (in the catalog "
                    "Weyl convention) the operands carry odd coefficients at "
                    "phase-twisted types, which the halved convention does "
                    "not close over"
                )
            terms.append((t, int(c)))
        return self.element(terms)

    def _generator_product(self, h, k, force_closure: bool = False) -> tuple:
        lat = self.lattice
        kh, kk = lat.key(h), lat.key(k)
        if not force_closure:
            hit = self._pair_cache.get((kh, kk))
            if hit is not None:
                return hit
        classes = {kh: h, kk: k}
        for t in lat.intersections(h, k):
            classes.setdefault(lat.key(t), t)
        if force_closure:
            frontier = list(classes.values())
            for x in frontier:
                for y in frontier:
                    for t in lat.intersections(x, y):
                        classes.setdefault(lat.key(t), t)
        out = self._recurrence(h, k, list(classes.values()))
        self._pair_cache[(kh, kk)] = out
        self._pair_cache[(kk, kh)] = out
        return out

    def _recurrence(self, h, k, classes: list, tiebreak=None) -> tuple:
        """Generator product (h)(k) over the given working lattice.

        When the lattice guarantees exact divisions, each recurrence step is
        checked and an inexact division raises ``LatticeIncompleteError``
        (a dominating orbit type is missing).  Otherwise coefficients are
        exact rationals, validated downstream where the convention's
        rescaling cancels.

        ``tiebreak`` optionally refines the dominating-first order among
        incomparable classes; any linear extension of subconjugacy yields the
        same product (asserted by tests).
        """
        lat = self.lattice
        if tiebreak is None:
            classes = sorted(classes, key=lat.sort_key)
        else:
            classes = sorted(classes, key=tiebreak)
        strict = lat.exact_divisions
        wh, wk = lat.weyl(h), lat.weyl(k)
        computed: list = []          # (class, coeff), dominating types first
        for L in classes:
            # the support of (h)(k) consists of classes subconjugate to both
            # factors; anything else has every term zero
            if not (lat.subconjugate(L, h) and lat.subconjugate(L, k)):
                continue
            num = lat.n_count(L, h) * wh * lat.n_count(L, k) * wk
            for Lt, c in computed:
                num -= c * lat.n_count(L, Lt) * lat.weyl(Lt)
            if strict:
                q, r = divmod(num, lat.weyl(L))
                if r != 0:
                    raise LatticeIncompleteError(
                        f"recurrence division at {lat.display(L)} is not "
                        f"exact ({num} / {lat.weyl(L)}): a dominating orbit "
                        "type is missing from the working lattice"
                    )
            else:
                q = Fraction(num, lat.weyl(L))
            if q != 0:
                computed.append((L, q))
        return tuple(computed)


def amalgam_ring(ctx: GroupContext, weyl_convention: str = WEYL_CATALOG) -> BurnsideRing:
    # normalize the default before caching so amalgam_ring(ctx) and
    # amalgam_ring(ctx, WEYL_CATALOG) return the same ring object
    return _amalgam_ring(ctx, weyl_convention)


@lru_cache(maxsize=None)
def _amalgam_ring(ctx: GroupContext, weyl_convention: str) -> BurnsideRing:
    return BurnsideRing(AmalgamLattice(ctx, weyl_convention))


@lru_cache(maxsize=None)
def finite_group_ring(group: FiniteGroup) -> BurnsideRing:
    return BurnsideRing(FiniteGroupLattice(group))


# ---------------------------------------------------------------------------
# spec'd operations
# ---------------------------------------------------------------------------

def unit(ring: BurnsideRing) -> BurnsideElement:
    """1·(G), the multiplicative identity."""
    return ring.unit()


def multiply(a: BurnsideElement, b: BurnsideElement) -> BurnsideElement:
    return a.ring.multiply(a, b)


def coeff(a: BurnsideElement, h) -> int:
    """The coefficient of orbit type h in a (0 when absent)."""
    return a.coeff(h)


def generator_product_coeff(
    h: OrbitType, s0: int, s1: int, s: int, weyl_convention: str = WEYL_CATALOG
) -> int:
    """Coefficient of the s-fold class in the product of the s0- and s1-fold
    classes of a maximal-kind orbit type:

        |W(h)| * [s == gcd(s0, s1)] * [B_m(h)({s, s0, s1})].

    The boolean bracket adjoins the target fold s (= the gcd) to the index
    set.  This matters: with the fold invariant m(h) = 8 and (s0, s1) =
    (3, 5) one has B_8({3,5}) true but B_8({1,3,5}) false, and the honest
    ring product of the 3- and 5-folds has coefficient 0 at the 1-fold (it
    lands on the twist-twin class instead), so the adjoined form is the
    correct one.
    """
    for v in (s0, s1, s):
        if not isinstance(v, int) or v < 1:
            raise InvalidParameterError(
                f"fold indices must be positive integers, got {v!r}"
            )
    # maximal kind with respect to either row-labelling convention
    ok = is_maximal_kind(h.ctx, h, CATALOG)[0] or is_maximal_kind(h.ctx, h, SPECTRAL)[0]
    if not ok:
        raise InvalidParameterError(
            f"{h.name} is not of maximal kind; the generator product formula "
            "does not apply"
        )
    if s != gcd(s0, s1):
        return 0
    if not boolean_B(m_of(h), {s, s0, s1}):
        return 0
    return effective_weyl_order(h, weyl_convention)


def brute_force_product(g: FiniteGroup, h, k) -> BurnsideElement:
    """The product (H)(K) in A(g) by direct orbit counting on G/H x G/K.

    Enumerates all pairs of cosets, computes each point's stabilizer
    aHa^-1 ∩ bKb^-1, and buckets orbits by subgroup conjugacy class.
    """
    if g.order > 64:
        raise InvalidParameterError(
            f"brute-force products are limited to |G| <= 64, got {g.order}"
        )
    ring = finite_group_ring(g)
    lat: FiniteGroupLattice = ring.lattice
    h, k = frozenset(h), frozenset(k)

    def coset_stabilizers(sub: frozenset) -> list[frozenset]:
        seen: dict[frozenset, frozenset] = {}
        for a in g.elements():
            coset = frozenset(g.mul(a, x) for x in sub)
            if coset not in seen:
                ai = g.inv(a)
                seen[coset] = frozenset(
                    g.mul(g.mul(a, x), ai) for x in sub
                )
        return list(seen.values())

    counts: dict[frozenset, int] = {}
    for s1 in coset_stabilizers(h):
        for s2 in coset_stabilizers(k):
            stab = lat._class_of[s1 & s2].representative
            counts[stab] = counts.get(stab, 0) + 1
    terms = []
    for rep, points in counts.items():
        n_orbits, r = divmod(points * len(rep), g.order)
        if r != 0:
            raise InternalConsistencyError(
                "orbit bucket size is not a multiple of the orbit length"
            )
        terms.append((lat._class_of[rep], n_orbits))
    return ring.element(terms)


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def render(a: BurnsideElement) -> str:
    """Deterministic text form, e.g. ``1(G) - 2(D4 ^Z1 x^Z4d D8p)``."""
    if not a._terms:
        return "0"
    lat = a.ring.lattice
    parts = []
    for i, (t, c) in enumerate(a._terms):
        mag, name = abs(c), lat.display(t)
        if i == 0:
            parts.append(f"{c}{name}")
        else:
            parts.append(f"{'+' if c > 0 else '-'} {mag}{name}")
    return " ".join(parts)


def element_json(a: BurnsideElement) -> list[dict]:
    lat = a.ring.lattice
    return [{"orbit_type": lat.display(t), "coeff": c} for t, c in a._terms]
