"""Truncated Puiseux q-series with exact rational coefficients.

A :class:`PuiseuxSeries` stores ``{n: c}`` meaning ``c q^(n/den)`` together with
a truncation order ``O``: every exponent below ``O`` is known (absent means 0),
nothing at or above ``O`` is.  Arithmetic propagates ``O`` conservatively.

Scalars such as 1/sqrt(2) are kept exact by :class:`SurdSeries`, a finite sum
``sum_d sqrt(d) * S_d`` of rational series.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from math import gcd

import mpmath

from .numth import bernoulli_number, named_periodic, psi_odd
from .seifert import DomainError
from .surd import Surd

__all__ = [
    "PuiseuxSeries",
    "SurdSeries",
    "InsufficientTruncation",
    "DEFAULT_ORDER",
    "eta",
    "eta_half_shift",
    "euler_product",
    "eisenstein",
    "delta",
    "theta",
    "theta_eta_quotient",
    "psi_weight32",
    "eichler_qseries",
    "VECTOR_LABELS",
    "vector_form",
    "vector_weight_factor",
    "s_matrix",
    "t_matrix",
    "evaluate_at",
    "evaluate_with_tail",
    "check_transformation",
    "golden_lines",
]

DEFAULT_ORDER = Fraction(24)


class InsufficientTruncation(ArithmeticError):
    """The series is not known far enough for the requested result."""


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


class PuiseuxSeries:
    __slots__ = ("den", "terms", "order")

    def __init__(self, den: int, terms: dict, order):
        order = Fraction(order)
        lim = _ceil(order * den)
        self.den = int(den)
        self.terms = {n: _norm(c) for n, c in terms.items() if c != 0 and n < lim}
        self.order = order

    # construction

    @classmethod
    def from_terms(cls, terms: dict, order) -> "PuiseuxSeries":
        """From ``{exponent: coefficient}`` with rational exponents."""
        den = 1
        exps = {Fraction(e): c for e, c in terms.items()}
        for e in exps:
            den = _lcm(den, e.denominator)
        return cls(den, {int(e * den): c for e, c in exps.items()}, order)

    @classmethod
    def constant(cls, c, order=DEFAULT_ORDER) -> "PuiseuxSeries":
        return cls(1, {0: c}, order)

    @classmethod
    def monomial(cls, e, c=1, order=DEFAULT_ORDER) -> "PuiseuxSeries":
        return cls.from_terms({Fraction(e): c}, order)

    @classmethod
    def zero(cls, order=DEFAULT_ORDER) -> "PuiseuxSeries":
        return cls(1, {}, order)

    # inspection

    @property
    def grade_denominator(self) -> int:
        return self.den

    @property
    def truncation_order(self) -> Fraction:
        return self.order

    def _lim(self, den=None, order=None) -> int:
        den = self.den if den is None else den
        order = self.order if order is None else order
        return _ceil(order * den)

    def is_zero(self) -> bool:
        return not self.terms

    def valuation(self) -> Fraction:
        """Lowest exponent present; the truncation order for a zero series."""
        if not self.terms:
            return self.order
        return Fraction(min(self.terms), self.den)

    lowest_exponent = valuation

    @property
    def lowest_exponent_numerator(self) -> int:
        return min(self.terms) if self.terms else self._lim()

    def leading_coefficient(self):
        if not self.terms:
            raise DomainError("zero series has no leading coefficient")
        return self.terms[min(self.terms)]

    def coefficient(self, e):
        e = Fraction(e)
        if e >= self.order:
            raise InsufficientTruncation(f"q^{e} lies beyond truncation order {self.order}")
        n = e * self.den
        if n.denominator != 1:
            return 0
        return self.terms.get(int(n), 0)

    def coefficients(self) -> list:
        """Dense list of coefficients of q^((n0+j)/den) for n0 = lowest numerator."""
        if not self.terms:
            return []
        n0 = min(self.terms)
        return [self.terms.get(n, 0) for n in range(n0, self._lim())]

    def items(self):
        """Sorted (exponent, coefficient) pairs."""
        return [(Fraction(n, self.den), self.terms[n]) for n in sorted(self.terms)]

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        head = ", ".join(f"{c}*q^{e}" for e, c in self.items()[:6])
        more = ", ..." if len(self.terms) > 6 else ""
        return f"PuiseuxSeries([{head}{more}] + O(q^{self.order}))"

    # grading

    def regrade(self, den: int) -> "PuiseuxSeries":
        if den == self.den:
            return self
        if den % self.den:
            raise ValueError("new grade must be a multiple of the old one")
        f = den // self.den
        out = PuiseuxSeries.__new__(PuiseuxSeries)
        out.den, out.order = den, self.order
        out.terms = {n * f: c for n, c in self.terms.items()}
        return out

    def _common(self, other):
        if not isinstance(other, PuiseuxSeries):
            other = PuiseuxSeries.constant(other, self.order)
        d = _lcm(self.den, other.den)
        return self.regrade(d), other.regrade(d)

    def truncate(self, order) -> "PuiseuxSeries":
        order = Fraction(order)
        if order > self.order:
            raise InsufficientTruncation(f"cannot extend order {self.order} to {order}")
        return PuiseuxSeries(self.den, self.terms, order)

    # arithmetic

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PuiseuxSeries.constant(other, self.order)
        elif not isinstance(other, PuiseuxSeries):
            return NotImplemented
        a, b = self._common(other)
        t = dict(a.terms)
        for n, c in b.terms.items():
            t[n] = t.get(n, 0) + c
        return PuiseuxSeries(a.den, t, min(a.order, b.order))

    __radd__ = __add__

    def __neg__(self):
        out = PuiseuxSeries.__new__(PuiseuxSeries)
        out.den, out.order = self.den, self.order
        out.terms = {n: -c for n, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "PuiseuxSeries":
        c = _norm(Fraction(c))
        return PuiseuxSeries(self.den, {n: v * c for n, v in self.terms.items()}, self.order)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        a, b = self._common(other)
        order = min(a.order + b.valuation(), b.order + a.valuation())
        lim = _ceil(order * a.den)
        bs = sorted(b.terms.items())
        t = {}
        for n, c in a.terms.items():
            for m, d in bs:
                k = n + m
                if k >= lim:
                    break
                t[k] = t.get(k, 0) + c * d
        return PuiseuxSeries(a.den, t, order)

    __rmul__ = __mul__

    def shift(self, e) -> "PuiseuxSeries":
        """Multiply by q^e."""
        e = Fraction(e)
        d = _lcm(self.den, e.denominator)
        s = self.regrade(d)
        k = int(e * d)
        return PuiseuxSeries(d, {n + k: c for n, c in s.terms.items()}, self.order + e)

    def inverse(self) -> "PuiseuxSeries":
        if not self.terms:
            raise DomainError("cannot invert a zero series")
        n0 = min(self.terms)
        a0 = Fraction(self.terms[n0])
        lim = self._lim()
        R = lim - n0  # relative slots known
        rel = {n - n0: c for n, c in self.terms.items() if n != n0}
        g = 0
        for j in rel:
            g = gcd(g, j)
        g = g or R or 1
        supp = sorted((j // g, c) for j, c in rel.items())
        m_max = (R - 1) // g
        inv0 = 1 / a0
        b = [_norm(inv0)] + [0] * m_max
        for j in range(1, m_max + 1):
            s = 0
            for i, c in supp:
                if i > j:
                    break
                bj = b[j - i]
                if bj:
                    s += c * bj
            b[j] = _norm(-s * inv0) if s else 0
        terms = {-n0 + j * g: c for j, c in enumerate(b) if c}
        return PuiseuxSeries(self.den, terms, self.order - 2 * Fraction(n0, self.den))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / Fraction(other))
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return PuiseuxSeries(1, {0: 1}, Fraction(10**9))
        base, result = self, None
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def derivative_q_d_dq(self) -> "PuiseuxSeries":
        return PuiseuxSeries(self.den, {n: c * Fraction(n, self.den) for n, c in self.terms.items()}, self.order)

    def substitute_power(self, m) -> "PuiseuxSeries":
        """q -> q^m for a positive rational m."""
        m = Fraction(m)
        if m <= 0:
            raise DomainError("substitution exponent must be positive")
        return PuiseuxSeries.from_terms(
            {Fraction(n, self.den) * m: c for n, c in self.terms.items()}, self.order * m
        )

    def phase_shift(self, t) -> tuple[Fraction, "PuiseuxSeries"]:
        """s(tau + t) = e^(pi i r) * S(tau) with S rational; returns (r, S).

        Requires every 2 (e - e0) t to be an integer, so that the relative phases are signs.
        """
        t = Fraction(t)
        if not self.terms:
            return Fraction(0), self
        e0 = self.valuation()
        r = (2 * e0 * t) % 2
        out = {}
        for n, c in self.terms.items():
            k = 2 * (Fraction(n, self.den) - e0) * t
            if k.denominator != 1:
                raise DomainError("phase shift is not a sign pattern on this series")
            out[n] = -c if k.numerator % 2 else c
        return r, PuiseuxSeries(self.den, out, self.order)

    # comparison

    def first_difference(self, other) -> Fraction | None:
        """Lowest exponent where self and other differ below their common order, else None."""
        d = self - other
        if d.is_zero():
            return None
        return d.valuation()

    def agrees_with(self, other) -> bool:
        return self.first_difference(other) is None

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PuiseuxSeries.constant(other, self.order)
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return self.agrees_with(other)

    __hash__ = None


class SurdSeries:
    """sum_d sqrt(d) * S_d with squarefree d and rational series S_d."""

    __slots__ = ("parts", "_order")

    def __init__(self, parts: dict, order=None):
        self.parts = {d: s for d, s in parts.items()}
        if order is None:
            order = min((s.order for s in self.parts.values()), default=DEFAULT_ORDER)
        self._order = Fraction(order)
        self.parts = {d: (s if s.order == self._order else s.truncate(self._order)) for d, s in self.parts.items()}
        self.parts = {d: s for d, s in self.parts.items() if not s.is_zero()}

    @classmethod
    def of(cls, series: PuiseuxSeries, scalar=1) -> "SurdSeries":
        scalar = Surd.coerce(scalar)
        return cls({d: series.scale(c) for d, c in scalar.terms.items()}, series.order)

    @classmethod
    def coerce(cls, x, order=DEFAULT_ORDER) -> "SurdSeries":
        if isinstance(x, SurdSeries):
            return x
        if isinstance(x, PuiseuxSeries):
            return cls.of(x)
        s = Surd.coerce(x)
        return cls({d: PuiseuxSeries.constant(c, order) for d, c in s.terms.items()}, order)

    @property
    def order(self) -> Fraction:
        return self._order

    def is_zero(self) -> bool:
        return not self.parts

    def is_rational(self) -> bool:
        return all(d == 1 for d in self.parts)

    def rational(self) -> PuiseuxSeries:
        if not self.is_rational():
            raise ValueError("series carries irrational surd parts")
        return self.parts.get(1, PuiseuxSeries.zero(self.order))

    def valuation(self) -> Fraction:
        return min((s.valuation() for s in self.parts.values()), default=self.order)

    def leading(self) -> tuple[Fraction, Surd]:
        """Lowest exponent and its exact surd coefficient."""
        v = self.valuation()
        return v, Surd({d: s.coefficient(v) for d, s in self.parts.items() if v < s.order})

    def coefficient(self, e) -> Surd:
        return Surd({d: s.coefficient(e) for d, s in self.parts.items()})

    def truncate(self, order) -> "SurdSeries":
        return SurdSeries({d: s.truncate(order) for d, s in self.parts.items()}, order)

    def __add__(self, other):
        other = SurdSeries.coerce(other, self.order)
        order = min(self.order, other.order)
        p = {d: s.truncate(order) for d, s in self.parts.items()}
        for d, s in other.parts.items():
            s = s.truncate(order)
            p[d] = p[d] + s if d in p else s
        return SurdSeries(p, order)

    __radd__ = __add__

    def __neg__(self):
        return SurdSeries({d: -s for d, s in self.parts.items()}, self.order)

    def __sub__(self, other):
        return self + (-SurdSeries.coerce(other, self.order))

    def __rsub__(self, other):
        return SurdSeries.coerce(other, self.order) - self

    def scale(self, c) -> "SurdSeries":
        return self * SurdSeries.coerce(c, Fraction(10**9))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Surd)):
            s = Surd.coerce(other)
            p = {}
            for a, sa in self.parts.items():
                for b, cb in s.terms.items():
                    g = gcd(a, b)
                    d = (a // g) * (b // g)
                    term = sa.scale(cb * g)
                    p[d] = p[d] + term if d in p else term
            return SurdSeries(p, self.order)
        other = SurdSeries.coerce(other, self.order)
        va, vb = self.valuation(), other.valuation()
        order = min(self.order + vb, other.order + va)
        p = {}
        for a, sa in self.parts.items():
            for b, sb in other.parts.items():
                g = gcd(a, b)
                d = (a // g) * (b // g)
                term = (sa * sb).truncate(order) if g == 1 else (sa * sb).scale(g).truncate(order)
                p[d] = p[d] + term if d in p else term
        if not p:
            return SurdSeries({}, order)
        return SurdSeries(p, order)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_rational():
                raise DomainError("negative powers only for rational series")
            return SurdSeries.of(self.rational() ** k)
        if k == 0:
            return SurdSeries.coerce(1, Fraction(10**9))
        result, base = None, self
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def first_difference(self, other):
        d = self - SurdSeries.coerce(other, self.order)
        return None if d.is_zero() else d.valuation()

    def agrees_with(self, other) -> bool:
        return self.first_difference(other) is None

    def __eq__(self, other):
        if not isinstance(other, (int, Fraction, Surd, PuiseuxSeries, SurdSeries)):
            return NotImplemented
        return self.agrees_with(other)

    __hash__ = None

    def __repr__(self):
        return "SurdSeries(" + ", ".join(f"sqrt({d})*{s!r}" for d, s in sorted(self.parts.items())) + ")"


# ---------------------------------------------------------------- builders


@lru_cache(maxsize=64)
def _euler_cached(top: int) -> PuiseuxSeries:
    # pentagonal numbers: prod (1 - q^n) = sum_k (-1)^k q^(k(3k-1)/2), k in Z
    t = {}
    k = 0
    while True:
        hit = False
        for kk in (k, -k) if k else (0,):
            e = kk * (3 * kk - 1) // 2
            if e < top:
                t[e] = (-1) ** (kk % 2)
                hit = True
        if not hit:
            break
        k += 1
    return PuiseuxSeries(1, t, top)


def euler_product(order) -> PuiseuxSeries:
    """prod_{n>=1} (1 - q^n)."""
    return _euler_cached(_ceil(Fraction(order)))


def eta(order=DEFAULT_ORDER, scale=1) -> PuiseuxSeries:
    """eta(scale * tau) = q^(scale/24) prod (1 - q^(scale n))."""
    order, scale = Fraction(order), Fraction(scale)
    if scale <= 0:
        raise DomainError("scale must be positive")
    inner = euler_product((order - scale / 24) / scale + 1)
    s = inner.substitute_power(scale).shift(scale / 24)
    return s.truncate(order)


def eta_half_shift(order=DEFAULT_ORDER) -> PuiseuxSeries:
    """e^(-pi i/24) eta((tau+1)/2) = q^(1/48) prod (1 - (-1)^n q^(n/2))."""
    r, s = eta(Fraction(order) + 1, Fraction(1, 2)).phase_shift(1)
    assert r == Fraction(1, 24)
    return s.truncate(order)


def eisenstein(k: int, order=DEFAULT_ORDER) -> PuiseuxSeries:
    """E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n."""
    if k < 4 or k % 2:
        raise DomainError("Eisenstein series need even k >= 4")
    order = Fraction(order)
    top = _ceil(order)
    c = -Fraction(2 * k) / bernoulli_number(k)
    sigma = [0] * max(top, 1)
    for d in range(1, top):
        for n in range(d, top, d):
            sigma[n] += d ** (k - 1)
    t = {0: 1}
    for n in range(1, top):
        t[n] = c * sigma[n]
    return PuiseuxSeries(1, t, order)


def delta(order=DEFAULT_ORDER) -> PuiseuxSeries:
    """Ramanujan Delta = eta^24."""
    return (eta(Fraction(order) + 1) ** 24).truncate(order)


THETA_KINDS = ("00", "10", "01")


def theta(kind: str, order=DEFAULT_ORDER) -> PuiseuxSeries:
    """Lattice-sum Jacobi theta: 00 = sum q^(n^2/2), 10 = sum q^((n+1/2)^2/2), 01 = sum (-1)^n q^(n^2/2)."""
    order = Fraction(order)
    t = {}
    n = 0
    if kind in ("00", "01"):
        while Fraction(n * n, 2) < order:
            c = 1 if n == 0 else 2
            t[Fraction(n * n, 2)] = c * ((-1) ** n if kind == "01" else 1)
            n += 1
    elif kind == "10":
        while Fraction((2 * n + 1) ** 2, 8) < order:
            t[Fraction((2 * n + 1) ** 2, 8)] = 2
            n += 1
    else:
        raise DomainError(f"unknown theta kind {kind!r}")
    return PuiseuxSeries.from_terms(t, order)


def theta_eta_quotient(kind: str, order=DEFAULT_ORDER) -> PuiseuxSeries:
    """The eta-quotient forms of the theta functions.

    For 00 the quotient is taken with eta(tau+1) in the denominator, which cancels
    the phase e^(pi i/12) that eta((tau+1)/2)^2 carries; the result is rational.
    """
    o = Fraction(order) + 2
    if kind == "00":
        s = eta_half_shift(o) ** 2 / eta(o)
    elif kind == "10":
        s = (eta(o, 2) ** 2 / eta(o)).scale(2)
    elif kind == "01":
        s = eta(o, Fraction(1, 2)) ** 2 / eta(o)
    else:
        raise DomainError(f"unknown theta kind {kind!r}")
    return s.truncate(order)


def psi_weight32(P: int, a: int, order=DEFAULT_ORDER) -> PuiseuxSeries:
    """Psi_P^(a) = (1/2) sum_n n psi_{2P}^(a)(n) q^(n^2/4P) = sum_{n>0} n psi(n) q^(n^2/4P)."""
    f = psi_odd(P, a)
    order = Fraction(order)
    t = {}
    n = 1
    while Fraction(n * n, 4 * P) < order:
        v = f(n)
        if v:
            t[n * n] = v * n
        n += 1
    return PuiseuxSeries(4 * P, t, order)


def eichler_qseries(P: int, a: int, order=DEFAULT_ORDER) -> PuiseuxSeries:
    """Eichler integral as a q-series: sum_{n>=0} psi_{2P}^(a)(n) q^(n^2/4P)."""
    f = psi_odd(P, a)
    order = Fraction(order)
    t = {}
    n = 0
    while Fraction(n * n, 4 * P) < order:
        v = f(n)
        if v:
            t[n * n] = v
        n += 1
    return PuiseuxSeries(4 * P, t, order)


# ------------------------------------------------------------ vector forms

VECTOR_LABELS = ("E6", "E7", "E8", "D5", "D2", "PHI237", "CHI25", "CHI27", "THETA")

_half = Fraction(1, 2)
_inv_sqrt2 = Surd.sqrt(2, _half)


def _psi_sum(P, signed, order):
    s = PuiseuxSeries.zero(order)
    for a, c in signed.items():
        s = s + psi_weight32(P, a, order).scale(c)
    return s


def _chi25(which: int, order) -> PuiseuxSeries:
    # (1/eta) sum (-1)^n q^((10n + r)^2/40), r = 1 or 3
    r = 1 if which == 1 else 3
    t = {}
    n = 0
    while True:
        hit = False
        for m in (n, -n - 1):
            e = Fraction((10 * m + r) ** 2, 40)
            if e < order:
                t[e] = t.get(e, 0) + (-1) ** (m % 2)
                hit = True
        if not hit:
            break
        n += 1
    return PuiseuxSeries.from_terms(t, order) / eta(order)


def _chi27(residue: int, lead: Fraction, order) -> PuiseuxSeries:
    # q^lead / eta * prod_{n>=1} (1 - q^(7n)) (1 - q^(7n - residue)) (1 - q^(7n - 7 + residue))
    top = _ceil(order - lead + 1) + 1
    prod = PuiseuxSeries.constant(1, top)
    for n in range(1, top + 1):
        for e in (7 * n, 7 * n - residue, 7 * n - 7 + residue):
            if e < top:
                prod = prod * PuiseuxSeries(1, {0: 1, e: -1}, top)
    return prod.shift(lead) / eta(order + 1)


@lru_cache(maxsize=128)
def _vector_form_cached(label: str, order: Fraction) -> tuple:
    o = order + 2
    eta3 = eta(o + 1) ** 3
    if label == "E6":
        x = SurdSeries.of(_psi_sum(6, {1: 1, 5: 1}, o + 1) / eta3, _inv_sqrt2)
        y = SurdSeries.of(psi_weight32(6, 3, o + 1) / eta3)
        comps = (x, y)
    elif label == "E7":
        x = SurdSeries.of(_psi_sum(12, {1: 1, 5: 1, 7: 1, 11: 1}, o + 1) / eta3, _half)
        y = SurdSeries.of(_psi_sum(12, {4: 1, 8: 1}, o + 1) / eta3, _inv_sqrt2)
        z = SurdSeries.of(_psi_sum(12, {1: 1, 5: -1, 7: 1, 11: -1}, o + 1) / eta3, _half)
        comps = (x, y, z)
    elif label == "E8":
        x = _psi_sum(30, {1: 1, 11: 1, 19: 1, 29: 1}, o + 1) / eta3
        y = _psi_sum(30, {7: 1, 13: 1, 17: 1, 23: 1}, o + 1) / eta3
        comps = (SurdSeries.of(x), SurdSeries.of(y))
    elif label == "D5":
        comps = tuple(SurdSeries.of(psi_weight32(3, a, o + 1) / eta3) for a in (1, 2))
    elif label == "D2":
        comps = (SurdSeries.of(psi_weight32(2, 1, o)),)
    elif label == "PHI237":
        comps = []
        for name in ("chi84_111", "chi84_112", "chi84_113"):
            f = named_periodic(name)
            signed = {a: f(a) for a in range(1, 42)}
            comps.append(SurdSeries.of(_psi_sum(42, {a: c for a, c in signed.items() if c}, o + 1) / eta3))
        comps = tuple(comps)
    elif label == "CHI25":
        comps = (SurdSeries.of(_chi25(1, o)), SurdSeries.of(_chi25(2, o)))
    elif label == "CHI27":
        # the entries are (-x, y, z); the first one is the positive product
        comps = (
            SurdSeries.of(_chi27(1, Fraction(25, 56), o)),
            SurdSeries.of(_chi27(2, Fraction(9, 56), o)),
            SurdSeries.of(_chi27(3, Fraction(1, 56), o)),
        )
    elif label == "THETA":
        comps = tuple(SurdSeries.of(theta(k, o)) for k in THETA_KINDS)
    else:
        raise DomainError(f"unknown vector form {label!r}")
    return tuple(c.truncate(order) for c in comps)


def vector_form(label: str, order=DEFAULT_ORDER) -> list[SurdSeries]:
    """Components of the named vector modular form, each an exact SurdSeries.

    PHI237 returns the vector (X, -Y, -Z) and CHI27 the vector (-x, y, z),
    i.e. the objects the S and T matrices act on.
    """
    label = label.upper()
    if label not in VECTOR_LABELS:
        raise DomainError(f"unknown vector form {label!r}")
    return list(_vector_form_cached(label, Fraction(order)))


def _sin(k, n):
    return mpmath.sin(k * mpmath.pi / n)


def vector_weight_factor(label: str, tau):
    """Automorphy factor of the S-law: (i/tau)^(3/2) for D2, sqrt(i/tau) for THETA, else 1."""
    if label == "D2":
        return (mpmath.mpc(0, 1) / tau) ** mpmath.mpf(1.5)
    if label == "THETA":
        return mpmath.sqrt(mpmath.mpc(0, 1) / tau)
    return mpmath.mpf(1)


def s_matrix(label: str):
    """S-matrix at the current mpmath precision."""
    r2, r3, r5, r7 = (mpmath.sqrt(n) for n in (2, 3, 5, 7))
    if label == "E6":
        return mpmath.matrix([[1, r2], [r2, -1]]) / r3
    if label == "E7":
        return mpmath.matrix([[1, 0, 0], [0, 0, 1], [0, 1, 0]])
    if label == "E8":
        return mpmath.matrix([[_sin(1, 5), _sin(2, 5)], [_sin(2, 5), -_sin(1, 5)]]) * (2 / r5)
    if label == "D5":
        return mpmath.matrix([[1, 1], [1, -1]]) / r2
    if label == "D2":
        return mpmath.matrix([[1]])
    if label == "PHI237":
        s1, s2, s3 = (_sin(k, 7) for k in (1, 2, 3))
        return mpmath.matrix([[s1, s2, s3], [s2, -s3, s1], [s3, s1, -s2]]) * (-2 / r7)
    if label == "CHI25":
        return mpmath.matrix([[_sin(2, 5), _sin(1, 5)], [_sin(1, 5), -_sin(2, 5)]]) * (2 / r5)
    if label == "CHI27":
        s1, s2, s3 = (_sin(k, 7) for k in (1, 2, 3))
        return mpmath.matrix([[s2, -s3, s1], [-s3, -s1, s2], [s1, s2, s3]]) * (2 / r7)
    if label == "THETA":
        return mpmath.matrix([[1, 0, 0], [0, 0, 1], [0, 1, 0]])
    raise DomainError(f"unknown vector form {label!r}")


def t_matrix(label: str):
    e = lambda r: mpmath.expjpi(mpmath.mpf(r.numerator) / r.denominator)  # noqa: E731
    F = Fraction
    if label == "E6":
        return mpmath.diag([e(F(-1, 6)), e(F(1, 2))])
    if label == "E7":
        a, b = e(F(-5, 24)), e(F(5, 12))
        return mpmath.matrix([[0, 0, a], [0, b, 0], [a, 0, 0]])
    if label == "E8":
        return mpmath.diag([e(F(-7, 30)), e(F(17, 30))])
    if label == "D5":
        return mpmath.diag([e(F(-1, 12)), e(F(5, 12))])
    if label == "D2":
        return mpmath.matrix([[e(F(1, 4))]])
    if label == "PHI237":
        return mpmath.diag([e(F(-5, 21)), e(F(1, 21)), e(F(25, 21))])
    if label == "CHI25":
        return mpmath.diag([e(F(-1, 30)), e(F(11, 30))])
    if label == "CHI27":
        return mpmath.diag([e(F(17, 21)), e(F(5, 21)), e(F(-1, 21))])
    if label == "THETA":
        return mpmath.matrix([[0, 0, 1], [0, e(F(1, 4)), 0], [1, 0, 0]])
    raise DomainError(f"unknown vector form {label!r}")


# -------------------------------------------------------------- evaluation


def _mpq(x):
    x = Fraction(x)
    return mpmath.mpf(x.numerator) / x.denominator


def _eval_rational(s: PuiseuxSeries, tau):
    w = 2 * mpmath.pi * mpmath.mpc(0, 1) * tau / s.den
    total = mpmath.fsum(_mpq(c) * mpmath.exp(w * n) for n, c in s.terms.items())
    lo = s.order - 1
    biggest = max((abs(_mpq(c)) for n, c in s.terms.items() if Fraction(n, s.den) >= lo), default=mpmath.mpf(0))
    return total, biggest


def evaluate_with_tail(s, tau, prec: int = 256):
    """Value of s at tau together with a heuristic magnitude of the dropped tail.

    The tail estimate is  M |q|^O / (1 - |q|)  with M the largest coefficient in the
    last unit window below the truncation order O.  It is an estimate, not a proof.
    """
    with mpmath.workprec(prec + 24):
        tau = mpmath.mpc(tau)
        if tau.imag <= 0:
            raise DomainError("tau must lie in the upper half plane")
        s = SurdSeries.coerce(s)
        absq = mpmath.exp(-2 * mpmath.pi * tau.imag)
        total, M = mpmath.mpc(0), mpmath.mpf(0)
        for d, part in s.parts.items():
            v, m = _eval_rational(part, tau)
            total += mpmath.sqrt(d) * v
            M = max(M, mpmath.sqrt(d) * m)
        M = max(M, mpmath.mpf(1))
        tail = M * absq ** _mpq(s.order) / (1 - absq)
    return total, tail


def evaluate_at(s, tau, prec: int = 256):
    """Numeric value of a series at tau; raises InsufficientTruncation if the tail is too big."""
    v, tail = evaluate_with_tail(s, tau, prec)
    with mpmath.workprec(prec + 24):
        if tail > mpmath.mpf(2) ** (-prec) * max(1, abs(v)):
            raise InsufficientTruncation(f"tail estimate {mpmath.nstr(tail, 5)} exceeds 2^-{prec}")
    return v


def _order_for(tau, prec: int) -> Fraction:
    t = mpmath.mpf(mpmath.mpc(tau).imag)
    base = prec * math.log(2) / (2 * math.pi * float(t))
    return Fraction(int(base * 1.4) + 12)


def _eval_vector(label, tau, prec):
    order = _order_for(tau, prec)
    while True:
        comps = vector_form(label, order)
        try:
            return [evaluate_at(c, tau, prec) for c in comps]
        except InsufficientTruncation:
            order = order * 3 / 2


def check_transformation(label: str, tau, prec: int = 256, laws=("S", "T")):
    """Max residual of the S-law F(tau) = w S F(-1/tau) and the T-law F(tau+1) = T F(tau).

    The S-law is only checked at tau = it, where the automorphy factor w is unambiguous.
    """
    label = label.upper()
    with mpmath.workprec(prec + 24):
        tau = mpmath.mpc(tau)
        worst = mpmath.mpf(0)
        F = _eval_vector(label, tau, prec)
        if "S" in laws:
            if tau.real != 0:
                raise DomainError("S-law check needs purely imaginary tau")
            G = _eval_vector(label, -1 / tau, prec)
            S = s_matrix(label) * vector_weight_factor(label, tau)
            for i in range(len(F)):
                r = F[i] - mpmath.fsum(S[i, j] * G[j] for j in range(len(G)))
                worst = max(worst, abs(r))
        if "T" in laws:
            H = _eval_vector(label, tau + 1, prec)
            T = t_matrix(label)
            for i in range(len(F)):
                r = H[i] - mpmath.fsum(T[i, j] * F[j] for j in range(len(F)))
                worst = max(worst, abs(r))
    return worst


def golden_lines(s) -> list[str]:
    """Golden-file rows 'num/den<TAB>coefficient<TAB>surdTag', sorted by exponent then tag."""
    s = SurdSeries.coerce(s)
    rows = []
    for d, part in s.parts.items():
        tag = "1" if d == 1 else f"sqrt{d}"
        for e, c in part.items():
            rows.append((e, d, f"{e.numerator}/{e.denominator}\t{Fraction(c)}\t{tag}"))
    rows.sort()
    return [r[2] for r in rows]
