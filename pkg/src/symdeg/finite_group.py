"""Finite symmetry groups: dihedral groups D_N, their Z_2 extensions
D_N x Z_2, subgroup lattices, conjugacy classes of subgroups with the
standard abbreviated names, and exact character tables.

Element encoding for D_N: ids 0..N-1 are rotations g^k, ids N..2N-1 are
reflections k*g^k (g = rotation by 2*pi/N, k = a fixed reflection).
For D_N x Z_2, an element (x, eps) is encoded as x + 2N*eps.
The identity always has id 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .cyclotomic import CycloValue
from .errors import InvalidParameterError


# ---------------------------------------------------------------------------
# groups
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group given by multiplication and inverse tables.

    ``kind`` is "dihedral" or "dihedral_z2" for the structured builders
    (``n`` then holds the dihedral parameter N); generic tables use
    kind "generic".
    """

    name: str
    order: int
    mul_table: np.ndarray
    inv_table: np.ndarray
    element_names: tuple[str, ...]
    generators: tuple[int, ...]
    kind: str = "generic"
    n: int | None = None

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inv_table[a])

    @property
    def identity(self) -> int:
        return 0

    def elements(self) -> range:
        return range(self.order)

    def conjugate(self, x: int, a: int) -> int:
        """a x a^{-1}"""
        return self.mul(self.mul(a, x), self.inv(a))

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != 0:
            y = self.mul(y, x)
            k += 1
        return k

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"


def _tables_from_mul(order: int, mul) -> tuple[np.ndarray, np.ndarray]:
    table = np.empty((order, order), dtype=np.int16)
    for a in range(order):
        for b in range(order):
            table[a, b] = mul(a, b)
    inv = np.empty(order, dtype=np.int16)
    for a in range(order):
        hits = np.where(table[a] == 0)[0]
        inv[a] = hits[0]
    table.setflags(write=False)
    inv.setflags(write=False)
    return table, inv


@lru_cache(maxsize=None)
def build_dihedral(n: int) -> FiniteGroup:
    """The dihedral group D_n of order 2n (rotations g^k, reflections k*g^k)."""
    if not isinstance(n, int) or n < 1:
        raise InvalidParameterError(f"dihedral parameter must be a positive integer, got {n!r}")

    def mul(a: int, b: int) -> int:
        ra, ka = a % n, a >= n
        rb, kb = b % n, b >= n
        if not ka and not kb:          # g^a g^b
            return (ra + rb) % n
        if not ka and kb:              # g^a (k g^b) = k g^{b-a}
            return n + (rb - ra) % n
        if ka and not kb:              # (k g^a) g^b = k g^{a+b}
            return n + (ra + rb) % n
        return (rb - ra) % n           # (k g^a)(k g^b) = g^{b-a}

    names = tuple(
        [("e" if k == 0 else "g" if k == 1 else f"g{k}") for k in range(n)]
        + [("k" if k == 0 else "kg" if k == 1 else f"kg{k}") for k in range(n)]
    )
    table, inv = _tables_from_mul(2 * n, mul)
    gens = (1, n) if n > 1 else (n,)
    return FiniteGroup(
        name=f"D{n}", order=2 * n, mul_table=table, inv_table=inv,
        element_names=names, generators=gens, kind="dihedral", n=n,
    )


@lru_cache(maxsize=None)
def adjoin_z2(g: FiniteGroup) -> FiniteGroup:
    """The direct product g x Z_2; (x, eps) is encoded as x + |g|*eps."""
    m = g.order

    def mul(a: int, b: int) -> int:
        xa, ea = a % m, a // m
        xb, eb = b % m, b // m
        return g.mul(xa, xb) + m * (ea ^ eb)

    names = tuple(
        [g.element_names[x] for x in range(m)]
        + [g.element_names[x] + "*z" for x in range(m)]
    )
    table, inv = _tables_from_mul(2 * m, mul)
    gens = tuple(g.generators) + (m,)
    kind = "dihedral_z2" if g.kind == "dihedral" else "generic"
    return FiniteGroup(
        name=g.name + "xZ2", order=2 * m, mul_table=table, inv_table=inv,
        element_names=names, generators=gens, kind=kind, n=g.n,
    )


def parse_group_spec(spec: str) -> FiniteGroup:
    """Parse a CLI group spec: "D<N>" or "D<N>xZ2"."""
    s = spec.strip()
    z2 = False
    if s.endswith("xZ2"):
        z2 = True
        s = s[: -len("xZ2")]
    if not (s.startswith("D") and s[1:].isdigit()):
        raise InvalidParameterError(f"unrecognized group spec {spec!r} (expected D<N> or D<N>xZ2)")
    g = build_dihedral(int(s[1:]))
    return adjoin_z2(g) if z2 else g


# ---------------------------------------------------------------------------
# subgroups
# ---------------------------------------------------------------------------

def closure(g: FiniteGroup, seed) -> frozenset[int]:
    """Subgroup generated by ``seed``."""
    cur = {0}
    cur.update(seed)
    frontier = list(cur)
    while frontier:
        new = []
        for a in frontier:
            for b in list(cur):
                for c in (g.mul(a, b), g.mul(b, a)):
                    if c not in cur:
                        cur.add(c)
                        new.append(c)
        frontier = new
    # seeds are group elements, so inverses are reached by powers
    return frozenset(cur)


def is_subgroup(g: FiniteGroup, s: frozenset[int]) -> bool:
    if 0 not in s:
        return False
    return all(g.mul(a, b) in s for a in s for b in s)


@lru_cache(maxsize=None)
def all_subgroups(g: FiniteGroup) -> tuple[frozenset[int], ...]:
    """Every subgroup of g, by breadth-first closure of generator extensions."""
    trivial = frozenset({0})
    found = {trivial}
    frontier = [trivial]
    while frontier:
        nxt = []
        for s in frontier:
            for x in g.elements():
                if x in s:
                    continue
                t = closure(g, s | {x})
                if t not in found:
                    found.add(t)
                    nxt.append(t)
        frontier = nxt
    return tuple(sorted(found, key=lambda s: (len(s), tuple(sorted(s)))))


def conjugate_subgroup(g: FiniteGroup, s: frozenset[int], a: int) -> frozenset[int]:
    return frozenset(g.conjugate(x, a) for x in s)


def normalizer_order(g: FiniteGroup, s: frozenset[int]) -> int:
    return sum(1 for a in g.elements() if conjugate_subgroup(g, s, a) == s)


def weyl_order(g: FiniteGroup, h: frozenset[int]) -> int:
    """|N_g(h)| / |h|."""
    h = frozenset(h)
    if not is_subgroup(g, h):
        raise InvalidParameterError("weyl_order: h is not a subgroup")
    return normalizer_order(g, h) // len(h)


@dataclass(frozen=True, eq=False)
class SubgroupConjugacyClass:
    representative: frozenset[int]
    members: tuple[frozenset[int], ...]
    name: str

    @property
    def class_size(self) -> int:
        return len(self.members)

    @property
    def order(self) -> int:
        return len(self.representative)

    def __repr__(self) -> str:
        return f"SubgroupConjugacyClass({self.name}, order={self.order}, size={self.class_size})"


@lru_cache(maxsize=None)
def subgroup_conjugacy_classes(g: FiniteGroup) -> tuple[SubgroupConjugacyClass, ...]:
    """Conjugacy classes of subgroups, sorted by (subgroup order, canonical
    member set), with structural names for dihedral and dihedral x Z_2 groups.
    """
    subs = all_subgroups(g)
    remaining = set(subs)
    classes: list[tuple[frozenset[int], tuple[frozenset[int], ...]]] = []
    while remaining:
        s = min(remaining, key=lambda x: (len(x), tuple(sorted(x))))
        members = {conjugate_subgroup(g, s, a) for a in g.elements()}
        remaining -= members
        members_sorted = tuple(sorted(members, key=lambda x: tuple(sorted(x))))
        classes.append((members_sorted[0], members_sorted))
    classes.sort(key=lambda c: (len(c[0]), tuple(sorted(c[0]))))

    named = []
    seen_names: dict[str, int] = {}
    for rep, members in classes:
        base = subgroup_class_name(g, rep)
        if base in seen_names:  # disambiguate (never hit for D_N, D_N x Z_2)
            seen_names[base] += 1
            base = f"{base}#{seen_names[base]}"
        else:
            seen_names[base] = 0
        named.append(SubgroupConjugacyClass(rep, members, base))
    return tuple(named)


def class_of_subgroup(g: FiniteGroup, s: frozenset[int]) -> SubgroupConjugacyClass:
    s = frozenset(s)
    for c in subgroup_conjugacy_classes(g):
        if len(c.representative) == len(s) and s in c.members:
            return c
    raise InvalidParameterError("not a subgroup of the given group")


def n_count(g: FiniteGroup, h: frozenset[int], k_class: SubgroupConjugacyClass) -> int:
    """n(H, K): the number of members of k_class containing h."""
    h = frozenset(h)
    return sum(1 for m in k_class.members if h <= m)


def classes_as_dicts(g: FiniteGroup) -> list[dict]:
    """Canonical JSON-ready export of the subgroup conjugacy classes."""
    out = []
    for c in subgroup_conjugacy_classes(g):
        out.append(
            {
                "name": c.name,
                "order": c.order,
                "class_size": c.class_size,
                "representative": [g.element_names[x] for x in sorted(c.representative)],
            }
        )
    return out


# ---------------------------------------------------------------------------
# structural class names
# ---------------------------------------------------------------------------

def _dihedral_part_name(n: int, s: frozenset[int]) -> tuple[str, bool]:
    """Name of a subgroup of D_n, returned as (base, tilde_flag).

    Rotation subgroups: ("Z<d>", False).  Dihedral subgroups D_r: base
    "D<r>"; when n/r is even, the two reflection-offset classes split and
    the odd-offset one carries the tilde flag.
    """
    rotations = sorted(x for x in s if x < n)
    reflections = sorted(x - n for x in s if x >= n)
    r = len(rotations)
    if not reflections:
        return f"Z{r}", False
    step = n // r  # offsets form a coset of step*Z
    o = min(reflections)
    tilde = (step % 2 == 0) and (o % 2 == 1)
    return f"D{r}", tilde


def _dihedral_class_name(n: int, s: frozenset[int]) -> str:
    base, tilde = _dihedral_part_name(n, s)
    return base + ("t" if tilde else "")


def _dihedral_z2_class_name(n: int, s: frozenset[int]) -> str:
    """EquiDeg-style abbreviated name for a subgroup of D_n x Z_2.

    Plain subgroups (inside D_n x {1}) are named like D_n subgroups;
    direct products with Z_2 append "p"; twisted subgroups (graphs of a
    homomorphism onto Z_2) are decorated by their kernel: "z" for the
    cyclic kernel, "d" for a dihedral kernel, "Z1m"/"Z<c>d" for cyclic
    images.  A trailing "t" marks the tilde reflection class (of the
    image, or of the kernel when the image is all of D_n).
    """
    m = 2 * n  # |D_n|
    proj = frozenset(x % m for x in s)
    ker = frozenset(x for x in s if x < m)
    has_center = m in s  # (e, -1)

    if s == ker:  # plain
        return _dihedral_class_name(n, proj)
    if has_center:  # product: proj x Z2
        base, tilde = _dihedral_part_name(n, proj)
        return base + "p" + ("t" if tilde else "")

    # twisted: s is the graph of a surjection proj -> Z_2 with kernel ker
    img_base, img_tilde = _dihedral_part_name(n, proj)
    if img_base.startswith("Z"):
        c = int(img_base[1:])
        return "Z1m" if c == 2 else f"Z{c}d"
    ker_base, ker_tilde = _dihedral_part_name(n, ker)
    dec = "z" if ker_base.startswith("Z") else "d"
    img_r = int(img_base[1:])
    if img_r == n and dec == "d":
        # image is all of D_n: the tilde distinction lives on the kernel
        return f"D{n}{dec}" + ("t" if ker_tilde else "")
    return f"D{img_r}{dec}" + ("t" if img_tilde else "")


def subgroup_class_name(g: FiniteGroup, s: frozenset[int]) -> str:
    if g.kind == "dihedral":
        return _dihedral_class_name(g.n, s)
    if g.kind == "dihedral_z2":
        return _dihedral_z2_class_name(g.n, s)
    return f"S{len(s)}"


# ---------------------------------------------------------------------------
# character table
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CharacterTable:
    group: FiniteGroup
    class_reps: tuple[int, ...]
    class_sizes: tuple[int, ...]
    classes: tuple[tuple[int, ...], ...]
    row_labels: tuple[str, ...]
    rows: tuple[tuple[CycloValue, ...], ...]
    permutation_row: tuple[CycloValue, ...]  # chi_V of the vertex action

    def row(self, label: str) -> tuple[CycloValue, ...]:
        return self.rows[self.row_labels.index(label)]

    def inner(self, a, b) -> Fraction:
        """Class-weighted inner product of two (real) character rows."""
        total = CycloValue.from_rational(0)
        for size, x, y in zip(self.class_sizes, a, b):
            total = total + (x * y) * size
        return total.as_fraction() / self.group.order


def element_conjugacy_classes(g: FiniteGroup) -> tuple[tuple[int, ...], ...]:
    remaining = set(g.elements())
    out = []
    while remaining:
        x = min(remaining)
        cls = {g.conjugate(x, a) for a in g.elements()}
        remaining -= cls
        out.append(tuple(sorted(cls)))
    out.sort(key=lambda c: c[0])
    return tuple(out)


def geometric_j_indices(n: int) -> list[int]:
    """Indices of the two-dimensional (geometric) irreducibles of D_n."""
    return [j for j in range(1, (n + 1) // 2)]


def isotypic_indices(n: int) -> list[int]:
    """The index set J(N): irreducibles supported in the vertex space R^N."""
    return list(range(0, n // 2 + 1))


def vertex_permutation(n: int, x: int) -> list[int]:
    """Image positions of the D_n vertex action on Z/n.

    The rotation generator sends vertex i to i+1; the base reflection is
    edge-centered for even n (i -> 1 - i), which matches the stated
    permutation character value (1 - (-1)^N)/2 on the reflection class.
    """
    rot, refl = x % n, x >= n
    out = []
    for i in range(n):
        v = (1 - i) % n if refl else i
        v = (v + rot) % n if not refl else (v - rot) % n
        out.append(v)
    return out


def _perm_char(n: int, x: int) -> int:
    p = vertex_permutation(n, x)
    return sum(1 for i, v in enumerate(p) if v == i)


def _char_value(n: int, label: str, x: int) -> CycloValue:
    rot, refl = x % n, x >= n
    if label == "chi_0":
        return CycloValue.from_rational(1)
    if label == "chi_*":
        return CycloValue.from_rational(-1 if refl else 1)
    if label == "chi_**":
        return CycloValue.from_rational((-1) ** rot)
    if label == f"chi_{n // 2}" and n % 2 == 0 and label not in {"chi_0"}:
        # alternating vertex character: gamma -> -1, kappa -> -1
        val = (-1) ** (rot + 1) if refl else (-1) ** rot
        return CycloValue.from_rational(val)
    j = int(label.split("_")[1])
    if refl:
        return CycloValue.from_rational(0)
    return CycloValue.two_cos2pi(Fraction(j * rot, n))


@lru_cache(maxsize=None)
def dihedral_character_table(n: int) -> CharacterTable:
    """Exact character table of D_n.

    Rows: chi_0 (trivial), the geometric chi_j, chi_* (rotations +1,
    reflections -1) and, for even n, chi_{n/2} (carried by the
    alternating vertex vector) and chi_** (the remaining sign character).
    The vertex permutation character chi_V is attached separately.
    """
    if not isinstance(n, int) or n < 1:
        raise InvalidParameterError(f"dihedral parameter must be a positive integer, got {n!r}")
    g = build_dihedral(n)
    classes = element_conjugacy_classes(g)
    reps = tuple(c[0] for c in classes)
    sizes = tuple(len(c) for c in classes)

    labels = ["chi_0"]
    labels += [f"chi_{j}" for j in geometric_j_indices(n)]
    labels += ["chi_*"]
    if n % 2 == 0:
        labels += [f"chi_{n // 2}", "chi_**"]

    rows = tuple(
        tuple(_char_value(n, label, rep) for rep in reps) for label in labels
    )
    perm_row = tuple(CycloValue.from_rational(_perm_char(n, rep)) for rep in reps)
    return CharacterTable(
        group=g, class_reps=reps, class_sizes=sizes, classes=classes,
        row_labels=tuple(labels), rows=rows, permutation_row=perm_row,
    )


def irrep_row_label(n: int, j: int) -> str:
    """Row label of the j-th isotypic irreducible (j in J(N))."""
    if j not in isotypic_indices(n):
        raise InvalidParameterError(f"isotypic index {j} out of range for D{n}")
    return f"chi_{j}"


def isotypic_multiplicities(n: int) -> list[tuple[int, int, int]]:
    """Decompose the vertex representation R^N of D_n.

    Returns (j, m_j, dim V_j) for every j in J(N), via exact character
    inner products of chi_V with the irreducible rows.
    """
    table = dihedral_character_table(n)
    out = []
    for j in isotypic_indices(n):
        row = table.row(irrep_row_label(n, j))
        mult = table.inner(table.permutation_row, row)
        if mult.denominator != 1:
            raise InvalidParameterError(f"non-integer multiplicity for j={j}")
        dim = table.row(irrep_row_label(n, j))[0].as_integer()
        out.append((j, int(mult), dim))
    return out


# ---------------------------------------------------------------------------
# small abstract groups and isomorphism enumeration (for quotients)
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SmallGroup:
    """A tiny group given by its multiplication table (identity = 0)."""

    table: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != 0:
            y = self.mul(y, x)
            k += 1
        return k

    def key(self) -> tuple:
        return self.table

    def generating_set(self) -> tuple[int, ...]:
        n = self.order
        if n == 1:
            return ()
        for size in (1, 2, 3):
            for combo in itertools.combinations(range(1, n), size):
                if len(self._closure(combo)) == n:
                    return combo
        return tuple(range(1, n))

    def _closure(self, seed) -> set[int]:
        cur = {0, *seed}
        changed = True
        while changed:
            changed = False
            for a in list(cur):
                for b in list(cur):
                    c = self.mul(a, b)
                    if c not in cur:
                        cur.add(c)
                        changed = True
        return cur


@lru_cache(maxsize=None)
def _isomorphisms_cached(key_a: tuple, key_b: tuple) -> tuple[tuple[int, ...], ...]:
    a, b = SmallGroup(key_a), SmallGroup(key_b)
    n = a.order
    if n != b.order:
        return ()
    gens = a.generating_set()
    if not gens:
        return ((0,),)
    orders_b: dict[int, list[int]] = {}
    for x in range(n):
        orders_b.setdefault(b.element_order(x), []).append(x)

    # express every element of a as a word in the generators
    words: dict[int, tuple[int, ...]] = {0: ()}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for gi, gv in enumerate(gens):
                y = a.mul(x, gv)
                if y not in words:
                    words[y] = words[x] + (gi,)
                    nxt.append(y)
        frontier = nxt

    isos = []
    pools = [orders_b.get(a.element_order(gv), []) for gv in gens]
    for images in itertools.product(*pools):
        phi = [0] * n
        ok = True
        for x, w in words.items():
            y = 0
            for gi in w:
                y = b.mul(y, images[gi])
            phi[x] = y
        if len(set(phi)) != n:
            continue
        for x in range(n):
            for y in range(n):
                if phi[a.mul(x, y)] != b.mul(phi[x], phi[y]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            isos.append(tuple(phi))
    return tuple(isos)


def isomorphisms(a: SmallGroup, b: SmallGroup) -> tuple[tuple[int, ...], ...]:
    """All isomorphisms a -> b, as image tuples indexed by a's elements."""
    return _isomorphisms_cached(a.key(), b.key())


def quotient_group(
    g: FiniteGroup, k: frozenset[int], z: frozenset[int]
) -> tuple[SmallGroup, list[int], dict[int, int]]:
    """The quotient k/z as a SmallGroup, coset representatives, and the
    element -> coset-index map.

    ``z`` must be normal in ``k``; cosets are indexed 0..|k/z|-1 with the
    identity coset first.
    """
    k_sorted = sorted(k)
    coset_of: dict[int, int] = {}
    reps: list[int] = []
    for x in k_sorted:
        if x in coset_of:
            continue
        idx = len(reps)
        reps.append(x)
        for zz in z:
            coset_of[g.mul(x, zz)] = idx
    # force identity coset to index 0
    e_idx = coset_of[0]
    if e_idx != 0:
        reps[0], reps[e_idx] = reps[e_idx], reps[0]
        coset_of = {x: (0 if i == e_idx else e_idx if i == 0 else i) for x, i in coset_of.items()}
    q = len(reps)
    table = tuple(
        tuple(coset_of[g.mul(reps[i], reps[j])] for j in range(q)) for i in range(q)
    )
    return SmallGroup(table), reps, coset_of
