"""Exact number theory: Bernoulli data, Dedekind sums, periodic characters, L-values.

Every scalar here is a Fraction (ints are accepted wherever a rational is).
The only inexact routine is :func:`gauss_reciprocity_pair`, which returns
mpmath complex numbers at the requested working precision.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, floor, gcd

import mpmath

from .seifert import DomainError, SeifertData

__all__ = [
    "bernoulli_number",
    "bernoulli_poly",
    "sawtooth",
    "dedekind_sum",
    "dedekind_sum_cot",
    "PeriodicFunction",
    "psi_odd",
    "named_periodic",
    "l_value",
    "gauss_reciprocity_pair",
    "casson_walker",
    "root_of_unity",
]


def _norm(x):
    """Collapse integral Fractions to int so hot loops stay in integer arithmetic."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


@lru_cache(maxsize=None)
def _bernoulli_table(k: int) -> tuple:
    B = [Fraction(1)]
    for n in range(1, k + 1):
        # sum_{j<=n} C(n+1, j) B_j = 0
        s = sum(comb(n + 1, j) * B[j] for j in range(n))
        B.append(-s / (n + 1))
    return tuple(B)


def bernoulli_number(k: int) -> Fraction:
    """B_k with the convention B_1 = -1/2.

    >>> bernoulli_number(4)
    Fraction(-1, 30)
    """
    if k < 0:
        raise DomainError("Bernoulli index must be >= 0")
    # grow the table in blocks so repeated calls stay cheap
    return _bernoulli_table(max(32, 1 << (k.bit_length())))[k]


def bernoulli_poly(k: int, x) -> Fraction:
    """B_k(x) = sum_j C(k, j) B_j x^(k-j)."""
    x = Fraction(x)
    return sum((comb(k, j) * bernoulli_number(j) * x ** (k - j) for j in range(k + 1)), Fraction(0))


def sawtooth(x) -> Fraction:
    """((x)) = x - floor(x) - 1/2 off the integers, 0 on them."""
    x = Fraction(x)
    if x.denominator == 1:
        return Fraction(0)
    return x - floor(x) - Fraction(1, 2)


def dedekind_sum(b: int, a: int) -> Fraction:
    """s(b, a) = sign(a) sum_{k=1}^{|a|-1} ((k/a)) ((kb/a))."""
    if a == 0:
        raise DomainError("dedekind_sum needs a != 0")
    s = sum((sawtooth(Fraction(k, a)) * sawtooth(Fraction(k * b, a)) for k in range(1, abs(a))), Fraction(0))
    return s if a > 0 else -s


def dedekind_sum_cot(b: int, a: int, prec: int = 256):
    """Cotangent form (1/4a) sum_{k=1}^{a-1} cot(pi k/a) cot(pi k b/a), for gcd(a, b) = 1."""
    if a == 0:
        raise DomainError("dedekind_sum_cot needs a != 0")
    if gcd(a, b) != 1:
        raise DomainError("cotangent form requires gcd(a, b) = 1")
    with mpmath.workprec(prec):
        n = abs(a)
        s = mpmath.fsum(mpmath.cot(mpmath.pi * k / n) * mpmath.cot(mpmath.pi * k * b / n) for k in range(1, n))
        s = s / (4 * n)
        return s if a > 0 else -s


@dataclass(frozen=True)
class PeriodicFunction:
    """Rational-valued function on the integers with period ``modulus``."""

    modulus: int
    values: tuple
    _parity: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if self.modulus < 1:
            raise DomainError("modulus must be positive")
        vals = tuple(_norm(Fraction(v)) for v in self.values)
        if len(vals) != self.modulus:
            raise DomainError("values must have exactly `modulus` entries")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_support(cls, modulus: int, support) -> "PeriodicFunction":
        """Build from {residue: value} or (residue, value) pairs; repeated residues add up."""
        vals = [0] * modulus
        items = support.items() if isinstance(support, dict) else support
        for r, v in items:
            vals[r % modulus] += v
        return cls(modulus, tuple(vals))

    def __call__(self, n: int):
        return self.values[n % self.modulus]

    def support(self) -> list[int]:
        return [r for r, v in enumerate(self.values) if v != 0]

    def _check(self, other: "PeriodicFunction"):
        if self.modulus != other.modulus:
            raise DomainError("periodic functions with different moduli")

    def __add__(self, other):
        self._check(other)
        return PeriodicFunction(self.modulus, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other):
        self._check(other)
        return PeriodicFunction(self.modulus, tuple(a - b for a, b in zip(self.values, other.values)))

    def __neg__(self):
        return PeriodicFunction(self.modulus, tuple(-a for a in self.values))

    def __mul__(self, c):
        return PeriodicFunction(self.modulus, tuple(c * a for a in self.values))

    __rmul__ = __mul__

    def shifted(self, s: int) -> "PeriodicFunction":
        """n -> f(n + s)."""
        return PeriodicFunction(self.modulus, tuple(self(n + s) for n in range(self.modulus)))

    def is_odd(self) -> bool:
        if "odd" not in self._parity:
            m = self.modulus
            self._parity["odd"] = all(self(m - n) == -self(n) for n in range(m))
        return self._parity["odd"]

    def is_even(self) -> bool:
        if "even" not in self._parity:
            m = self.modulus
            self._parity["even"] = all(self(m - n) == self(n) for n in range(m))
        return self._parity["even"]

    def is_zero(self) -> bool:
        return not any(self.values)


def psi_odd(P: int, a: int) -> PeriodicFunction:
    """psi_{2P}^{(a)}: +1 at n = a, -1 at n = -a (mod 2P)."""
    if P < 1:
        raise DomainError("psi_odd needs P >= 1")
    m = 2 * P
    if (2 * a) % m == 0:
        return PeriodicFunction(m, (0,) * m)
    return PeriodicFunction.from_support(m, [(a, 1), (-a, -1)])


def _psi_combo(P: int, signed: dict) -> PeriodicFunction:
    f = PeriodicFunction(2 * P, (0,) * (2 * P))
    for a, c in signed.items():
        f = f + c * psi_odd(P, a)
    return f


NAMED_PERIODIC = (
    "chi12",
    "chi12_plus",
    "chi12_minus",
    "phi_e",
    "phi_o",
    "chi84_111",
    "chi84_112",
    "chi84_113",
)


def named_periodic(name: str, K: int | None = None) -> PeriodicFunction:
    """The named characters; ``phi_e`` and ``phi_o`` need K (even and odd respectively)."""
    if name == "chi12":
        return PeriodicFunction.from_support(12, {1: 1, 5: -1, 7: -1, 11: 1})
    if name == "chi12_plus":
        return PeriodicFunction.from_support(12, {1: 1, 7: -1})
    if name == "chi12_minus":
        return PeriodicFunction.from_support(12, {5: -1, 11: 1})
    if name == "phi_e":
        if K is None or K % 2 or K < 2:
            raise DomainError("phi_e needs an even K >= 2")
        h = K // 2
        # for K = 2 the four residues collide pairwise and the values add
        return PeriodicFunction.from_support(2 * K, [(h - 1, 1), (h + 1, -1), (3 * h - 1, -1), (3 * h + 1, 1)])
    if name == "phi_o":
        if K is None or K % 2 == 0 or K < 3:
            raise DomainError("phi_o needs an odd K >= 3")
        return PeriodicFunction.from_support(4 * K, {K - 2: 1, K + 2: -1, 3 * K - 2: -1, 3 * K + 2: 1})
    if name == "chi84_111":
        return _psi_combo(42, {1: 1, 13: -1, 29: -1, 41: 1})
    if name == "chi84_112":
        return _psi_combo(42, {5: -1, 19: -1, 23: -1, 37: -1})
    if name == "chi84_113":
        return _psi_combo(42, {11: -1, 17: -1, 25: -1, 31: -1})
    raise DomainError(f"unknown periodic function {name!r}")


def l_value(k: int, f: PeriodicFunction) -> Fraction:
    """L(-k, f) = -(m^k / (k+1)) sum_{n=1}^{m} f(n) B_{k+1}(n/m)."""
    if k < 0:
        raise DomainError("l_value needs k >= 0")
    m = f.modulus
    s = sum((v * bernoulli_poly(k + 1, Fraction(n, m)) for n, v in _residues_1_to_m(f)), Fraction(0))
    return -Fraction(m**k, k + 1) * s


def _residues_1_to_m(f: PeriodicFunction):
    m = f.modulus
    for n in range(1, m + 1):
        v = f(n)
        if v:
            yield n, v


@lru_cache(maxsize=200_000)
def _root_cached(num: int, den: int, prec: int):
    with mpmath.workprec(prec):
        if num == 0:
            return mpmath.mpc(1)
        if 2 * num == den:
            return mpmath.mpc(0, 1)
        if num == den:
            return mpmath.mpc(-1)
        if 2 * num == 3 * den:
            return mpmath.mpc(0, -1)
        return mpmath.expjpi(mpmath.mpf(num) / den)


def root_of_unity(x, prec: int | None = None):
    """exp(pi i x) for rational x, reduced mod 2 exactly before evaluation."""
    x = Fraction(x)
    den = x.denominator
    num = x.numerator % (2 * den)
    return _root_cached(num, den, prec or mpmath.mp.prec)


def gauss_reciprocity_pair(N: int, M: int, k, prec: int = 256):
    """Both sides of the reciprocity law for quadratic Gauss sums.

    sum_{n mod N} e^{pi i M n^2/N + 2 pi i k n}
      = sqrt(|N/M|) e^{pi i sign(NM)/4} sum_{n mod M} e^{-pi i N (n+k)^2 / M}
    """
    k = Fraction(k)
    if N * M == 0 or (N * M) % 2 or (N * k).denominator != 1:
        raise DomainError("need N*M != 0, N*M even and N*k integral")
    with mpmath.workprec(prec + 16):
        lhs = mpmath.fsum(
            root_of_unity(Fraction(M * n * n, N) + 2 * k * n, prec + 16) for n in range(abs(N))
        )
        rhs = mpmath.fsum(root_of_unity(-N * (n + k) ** 2 / M, prec + 16) for n in range(abs(M)))
        sgn = 1 if N * M > 0 else -1
        rhs = mpmath.sqrt(mpmath.mpf(abs(N)) / abs(M)) * root_of_unity(Fraction(sgn, 4), prec + 16) * rhs
    with mpmath.workprec(prec):
        return +lhs, +rhs


def casson_walker(s: SeifertData) -> Fraction:
    """lambda_CW for M(0; (a_j, b_j)) with e = sum b_j/a_j; sign(0) is taken as 0."""
    a = s.p
    e = s.euler()
    sgn = (e > 0) - (e < 0)
    A = a[0] * a[1] * a[2]
    inv_sq = sum((Fraction(1, aj * aj) for aj in a), Fraction(0))
    ded = sum((dedekind_sum(bj, aj) for aj, bj in s.fibers), Fraction(0))
    return Fraction(A, 8) * (
        Fraction(sgn, 3) * (-1 + inv_sq) + e * abs(e) / 3 - e - 4 * abs(e) * ded
    )
