"""Exact scalars in the multiquadratic field Q(sqrt 2, sqrt 3, sqrt 5, ...).

An element is a finite sum  sum_d c_d sqrt(d)  over squarefree d >= 1 with
rational c_d.  Products use sqrt(a) sqrt(b) = g sqrt(ab/g^2) with g = gcd(a, b),
which keeps the basis squarefree without factoring.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import mpmath


def _squarefree_split(n: int) -> tuple[int, int]:
    """n = s^2 * d with d squarefree; returns (s, d)."""
    s, d = 1, n
    f = 2
    while f * f <= d:
        while d % (f * f) == 0:
            d //= f * f
            s *= f
        f += 1
    return s, d


class Surd:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        elif not isinstance(terms, dict):
            terms = {1: terms}
        self.terms = {d: Fraction(c) for d, c in terms.items() if c != 0}

    @classmethod
    def sqrt(cls, n, c=1) -> "Surd":
        """c * sqrt(n) for a non-negative rational n."""
        n = Fraction(n)
        if n < 0:
            raise ValueError("negative radicand")
        # sqrt(p/q) = sqrt(pq)/q
        s, d = _squarefree_split(n.numerator * n.denominator)
        return cls({d: Fraction(c) * s / n.denominator})

    @classmethod
    def coerce(cls, x) -> "Surd":
        return x if isinstance(x, Surd) else cls({1: x})

    def is_rational(self) -> bool:
        return all(d == 1 for d in self.terms)

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self.terms.get(1, Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        other = Surd.coerce(other)
        t = dict(self.terms)
        for d, c in other.terms.items():
            t[d] = t.get(d, 0) + c
        return Surd(t)

    __radd__ = __add__

    def __neg__(self):
        return Surd({d: -c for d, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-Surd.coerce(other))

    def __rsub__(self, other):
        return Surd.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Surd):
            if isinstance(other, (int, Fraction)):
                return Surd({d: c * other for d, c in self.terms.items()})
            return NotImplemented
        t = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                g = gcd(a, b)
                d = (a // g) * (b // g)
                t[d] = t.get(d, 0) + ca * cb * g
        return Surd(t)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Surd({d: c / other for d, c in self.terms.items()})
        return self * Surd.coerce(other).inverse()

    def __rtruediv__(self, other):
        return Surd.coerce(other) * self.inverse()

    def conjugate(self, p: int) -> "Surd":
        """Flip the sign of every basis element divisible by the prime p."""
        return Surd({d: (-c if d % p == 0 else c) for d, c in self.terms.items()})

    def _primes(self) -> list[int]:
        ps = set()
        for d in self.terms:
            f, n = 2, d
            while f * f <= n:
                while n % f == 0:
                    ps.add(f)
                    n //= f
                f += 1
            if n > 1:
                ps.add(n)
        return sorted(ps)

    def inverse(self) -> "Surd":
        if not self.terms:
            raise ZeroDivisionError("inverse of zero surd")
        # multiply by Galois conjugates one prime at a time until rational
        num, den = Surd({1: 1}), self
        for p in self._primes():
            c = den.conjugate(p)
            num, den = num * c, den * c
        return num / den.rational()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out, base = Surd({1: 1}), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Surd)):
            return (self - other).is_zero()
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def to_mp(self):
        return mpmath.fsum(c.numerator * mpmath.sqrt(d) / c.denominator for d, c in self.terms.items())

    def tag(self) -> str:
        """Golden-file surd tag: '1' for rationals, 'sqrt2' etc for a single basis element."""
        ds = sorted(self.terms)
        if not ds or ds == [1]:
            return "1"
        return "+".join("1" if d == 1 else f"sqrt{d}" for d in ds)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for d in sorted(self.terms):
            c = self.terms[d]
            parts.append(str(c) if d == 1 else f"{c}*sqrt({d})")
        return " + ".join(parts)

