"""Scalar types: exact rationals, cyclotomic numbers, and numeric complexes.

Everything combinatorial in the library is done over Rat (= fractions.Fraction)
with root-of-unity phases tracked as integers mod T.  Cyc gives exact arithmetic
in Q(w), w a primitive T-th root of unity, for the few places where characters
or linear algebra over the cyclotomic field are genuinely needed.  CNum is a
plain python complex for floating-point work.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache

Rat = Fraction
CNum = complex


def rat(x, y=None) -> Rat:
    """Convenience constructor, accepts ints, strings like '3/7', pairs."""
    if y is not None:
        return Fraction(x, y)
    return Fraction(x)


def rat_to_json(x: Rat) -> str:
    return f"{x.numerator}/{x.denominator}"


def rat_from_json(s: str) -> Rat:
    return Fraction(s)


# ---------------------------------------------------------------------------
# dense polynomial helpers over Fraction, little-endian coefficient lists

def _poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _poly_trim(out)


def _poly_sub(a, b):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else Fraction(0)) - (b[i] if i < len(b) else Fraction(0))
           for i in range(n)]
    return _poly_trim(out)


def _poly_divmod(a, b):
    # b must be monic-ish (nonzero lead); returns (q, r) with a = q*b + r
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    lead = b[-1]
    while len(a) >= len(b):
        c = a[-1] / lead
        d = len(a) - len(b)
        q[d] = c
        for i, bi in enumerate(b):
            a[d + i] -= c * bi
        _poly_trim(a)
        if not a:
            break
    return _poly_trim(q), a


@lru_cache(maxsize=None)
def cyclotomic_poly(T: int) -> tuple:
    """Coefficients of the T-th cyclotomic polynomial, little-endian."""
    if T == 1:
        return (Fraction(-1), Fraction(1))
    num = [Fraction(0)] * T + [Fraction(1)]
    num[0] = Fraction(-1)  # x^T - 1
    den = [Fraction(1)]
    for d in range(1, T):
        if T % d == 0:
            den = _poly_mul(den, list(cyclotomic_poly(d)))
    q, r = _poly_divmod(num, den)
    assert not r
    return tuple(q)


class Cyc:
    """Element of Q(w), w = exp(2 pi i / T), in the power basis mod Phi_T.

    Immutable.  Coefficient vector has length deg Phi_T = phi(T).
    """

    __slots__ = ("T", "c")

    def __init__(self, T: int, coeffs):
        phi = len(cyclotomic_poly(T)) - 1
        c = list(coeffs)
        if len(c) > phi:
            c = self._reduce(T, c)
        c += [Fraction(0)] * (phi - len(c))
        self.T = T
        self.c = tuple(Fraction(x) for x in c)

    @staticmethod
    def _reduce(T, c):
        _, r = _poly_divmod([Fraction(x) for x in c], list(cyclotomic_poly(T)))
        return r

    @classmethod
    def zero(cls, T):
        return cls(T, [])

    @classmethod
    def one(cls, T):
        return cls(T, [Fraction(1)])

    @classmethod
    def from_rat(cls, T, x):
        return cls(T, [Fraction(x)])

    @classmethod
    def root(cls, T, k):
        """w^k as an element of Q(w)."""
        k %= T
        c = [Fraction(0)] * k + [Fraction(1)]
        return cls(T, c)

    def __add__(self, other):
        other = self._coerce(other)
        return Cyc(self.T, [a + b for a, b in zip(self.c, other.c)])

    __radd__ = __add__

    def __neg__(self):
        return Cyc(self.T, [-a for a in self.c])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return Cyc(self.T, _poly_mul(list(self.c), list(other.c)))

    __rmul__ = __mul__

    def inv(self):
        # extended euclid in Q[x] against Phi_T; invariant s_i * self = r_i mod Phi_T
        if self.is_zero():
            raise ZeroDivisionError("cyclotomic zero has no inverse")
        r0, r1 = list(cyclotomic_poly(self.T)), _poly_trim(list(self.c))
        s0, s1 = [], [Fraction(1)]
        while r1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        # r0 = gcd, a nonzero constant since Phi_T is irreducible
        assert len(r0) == 1
        g = r0[0]
        return Cyc(self.T, [a / g for a in s0])

    def __truediv__(self, other):
        return self * self._coerce(other).inv()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inv()

    def _coerce(self, other):
        if isinstance(other, Cyc):
            if other.T != self.T:
                raise ValueError("mixed cyclotomic orders")
            return other
        return Cyc.from_rat(self.T, other)

    def is_zero(self):
        return all(a == 0 for a in self.c)

    def is_rat(self):
        return all(a == 0 for a in self.c[1:])

    def as_rat(self) -> Rat:
        if not self.is_rat():
            raise ValueError(f"not rational: {self}")
        return self.c[0] if self.c else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyc.from_rat(self.T, other)
        return isinstance(other, Cyc) and self.T == other.T and self.c == other.c

    def __hash__(self):
        return hash((self.T, self.c))

    def __repr__(self):
        if self.is_zero():
            return "Cyc(0)"
        terms = []
        for k, a in enumerate(self.c):
            if a == 0:
                continue
            if k == 0:
                terms.append(str(a))
            elif k == 1:
                terms.append(f"{a}*w")
            else:
                terms.append(f"{a}*w^{k}")
        return "Cyc(" + " + ".join(terms) + f"; T={self.T})"

    def embed(self) -> CNum:
        w = cmath.exp(2j * cmath.pi / self.T)
        return sum(float(a) * w ** k for k, a in enumerate(self.c))


def cyc_embed(c: Cyc) -> CNum:
    """Numerical embedding Q(w) -> C sending w to exp(2 pi i/T)."""
    return c.embed()
