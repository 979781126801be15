"""Exact arithmetic in cyclotomic fields Q(zeta_M).

Character sums over finite symmetry groups are integer combinations of
values 2cos(2*pi*a/M) = zeta_M^a + zeta_M^(-a).  Deciding whether such a
sum equals an integer must be exact: floating point is unsound and
general symbolic simplification is slow.  Values are represented in the
power basis {1, zeta, ..., zeta^(phi(M)-1)} of Q[x]/Phi_M(x) with
Fraction coefficients, where Phi_M is the M-th cyclotomic polynomial.

A fast integer-vector path (``reduce_zeta_counts``) supports the hot
loop of fixed-point dimension counting: accumulate integer counts of
zeta-powers, reduce once, test integrality.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np


def _poly_div_exact(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials (ascending coefficients)."""
    num = list(num)
    dd = len(den) - 1
    lead = den[-1]
    out = [0] * (len(num) - dd)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + dd]
        if c % lead != 0:
            raise ArithmeticError("non-exact polynomial division")
        q = c // lead
        out[k] = q
        if q:
            for i, d in enumerate(den):
                num[k + i] -= q * d
    if any(num[: dd]):
        raise ArithmeticError("nonzero remainder in exact polynomial division")
    return out


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


@lru_cache(maxsize=None)
def cyclotomic_coeffs(m: int) -> tuple[int, ...]:
    """Integer coefficients (ascending) of the m-th cyclotomic polynomial."""
    if m < 1:
        raise ValueError("conductor must be positive")
    if m == 1:
        return (-1, 1)
    num = [-1] + [0] * (m - 1) + [1]  # x^m - 1
    den = [1]
    for d in range(1, m):
        if m % d == 0:
            den = _poly_mul(den, list(cyclotomic_coeffs(d)))
    return tuple(_poly_div_exact(num, den))


@lru_cache(maxsize=None)
def euler_phi(m: int) -> int:
    return len(cyclotomic_coeffs(m)) - 1


@lru_cache(maxsize=None)
def reduction_matrix(m: int) -> np.ndarray:
    """Rows k < m: coefficients of x^k mod Phi_m in the power basis.

    Valid for exponents reduced mod m (zeta_m^m = 1).
    """
    phi = euler_phi(m)
    coeffs = cyclotomic_coeffs(m)
    # x^phi == -(c_0 + c_1 x + ... + c_{phi-1} x^{phi-1})  (Phi_m is monic)
    top = [-c for c in coeffs[:phi]]
    rows = np.zeros((m, phi), dtype=np.int64)
    cur = [0] * phi
    for k in range(m):
        if k < phi:
            cur = [0] * phi
            cur[k] = 1
        else:
            carry = cur[phi - 1]
            cur = [0] + cur[:-1]
            if carry:
                for i in range(phi):
                    cur[i] += carry * top[i]
        rows[k] = cur
    rows.setflags(write=False)
    return rows


def reduce_zeta_counts(m: int, counts: np.ndarray) -> np.ndarray:
    """Reduce an integer vector of zeta_m-power counts to the power basis.

    ``counts[a]`` is the integer coefficient of zeta_m^a; the result has
    length phi(m) and represents the same field element exactly.
    """
    counts = np.asarray(counts, dtype=np.int64)
    if counts.shape != (m,):
        raise ValueError("counts must have length m")
    return counts @ reduction_matrix(m)


def rational_from_reduced(vec: np.ndarray) -> int | None:
    """The integer value of a reduced vector, or None if irrational.

    (Only integer constants occur in our use; the constant coefficient is
    returned as a Python int.)
    """
    if np.any(vec[1:] != 0):
        return None
    return int(vec[0])


class CycloValue:
    """An element of Q(zeta_M), exact, with Fraction coefficients."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m: int, coeffs):
        phi = euler_phi(m)
        cs = [Fraction(c) for c in coeffs]
        if len(cs) != phi:
            raise ValueError("coefficient vector must have length phi(m)")
        self.m = m
        self.coeffs = tuple(cs)

    # -- constructors -------------------------------------------------
    @staticmethod
    def from_rational(r) -> "CycloValue":
        return CycloValue(1, [Fraction(r)])

    @staticmethod
    def zeta(m: int, a: int) -> "CycloValue":
        a %= m
        row = reduction_matrix(m)[a]
        return CycloValue(m, [Fraction(int(c)) for c in row])

    @staticmethod
    def two_cos2pi(q) -> "CycloValue":
        """2*cos(2*pi*q) for rational q, exact."""
        q = Fraction(q) % 1
        m = q.denominator
        return CycloValue.zeta(m, q.numerator) + CycloValue.zeta(m, -q.numerator)

    @staticmethod
    def cos2pi(q) -> "CycloValue":
        return CycloValue.two_cos2pi(q) * Fraction(1, 2)

    # -- conductor handling -------------------------------------------
    def promote(self, l: int) -> "CycloValue":
        """Re-express at conductor l (m must divide l)."""
        if l == self.m:
            return self
        if l % self.m != 0:
            raise ValueError("can only promote to a multiple of the conductor")
        step = l // self.m
        red = reduction_matrix(l)
        phi_l = euler_phi(l)
        out = [Fraction(0)] * phi_l
        for k, c in enumerate(self.coeffs):
            if c:
                row = red[(k * step) % l]
                for j in range(phi_l):
                    if row[j]:
                        out[j] += c * int(row[j])
        return CycloValue(l, out)

    def _common(self, other: "CycloValue") -> tuple["CycloValue", "CycloValue"]:
        l = math.lcm(self.m, other.m)
        return self.promote(l), other.promote(l)

    # -- arithmetic ----------------------------------------------------
    def _coerce(self, other) -> "CycloValue | None":
        if isinstance(other, CycloValue):
            return other
        if isinstance(other, (int, Fraction)):
            return CycloValue.from_rational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._common(o)
        return CycloValue(a.m, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycloValue(self.m, [-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return CycloValue(self.m, [c * f for c in self.coeffs])
        if not isinstance(other, CycloValue):
            return NotImplemented
        a, b = self._common(other)
        m = a.m
        red = reduction_matrix(m)
        # convolve in the power basis, folding exponents mod m
        folded = [Fraction(0)] * m
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        folded[(i + j) % m] += x * y
        phi = euler_phi(m)
        out = [Fraction(0)] * phi
        for e, c in enumerate(folded):
            if c:
                row = red[e]
                for j in range(phi):
                    if row[j]:
                        out[j] += c * int(row[j])
        return CycloValue(m, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return CycloValue(self.m, [c / f for c in self.coeffs])
        return NotImplemented

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._common(o)
        return a.coeffs == b.coeffs

    def __hash__(self):
        # Hash via the numerical value is unsound; hash by minimal data at
        # own conductor would break cross-conductor equality.  Values are
        # not used as dict keys; forbid hashing loudly.
        raise TypeError("CycloValue is not hashable")

    # -- queries --------------------------------------------------------
    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def is_integer(self) -> bool:
        return self.is_rational() and self.coeffs[0].denominator == 1

    def as_integer(self) -> int:
        f = self.as_fraction()
        if f.denominator != 1:
            raise ValueError(f"{self!r} is not an integer")
        return f.numerator

    def __float__(self) -> float:
        z = 0.0 + 0.0j
        for k, c in enumerate(self.coeffs):
            if c:
                z += float(c) * complex(
                    math.cos(2 * math.pi * k / self.m),
                    math.sin(2 * math.pi * k / self.m),
                )
        return z.real

    def __repr__(self) -> str:
        if self.is_rational():
            return f"CycloValue({self.coeffs[0]})"
        terms = ", ".join(str(c) for c in self.coeffs)
        return f"CycloValue(zeta_{self.m}; [{terms}])"
