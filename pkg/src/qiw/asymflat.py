"""Large-N asymptotics: nearly modular Eichler limits, flat connections, partition functions.

The per-manifold expansions are written out per manifold from the closed forms;
:func:`derived_expansion` rebuilds the same expansion mechanically from the
closed-form coefficients and the nearly modular property, and serves as an
oracle for the written-out versions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

import mpmath

from .numth import PeriodicFunction, l_value, psi_odd, root_of_unity
from .seifert import DomainError, ManifoldLabel
from .wrtcore import GUARD_BITS, _as_label, closed_form, eichler_limit_integer, eichler_limit_rational

__all__ = [
    "modular_s_matrix",
    "nearly_modular_residual",
    "nearly_modular_tail",
    "FlatConnection",
    "flat_connections",
    "table_cs_values",
    "AsymptoticExpansion",
    "corollary_expansion",
    "corollary_expansion_data",
    "derived_expansion",
    "partition_function",
    "s2xs1_tau",
    "dominant_prediction",
    "dominant_frequencies",
    "relative_deviation",
    "sweep_row",
    "TAIL_CHARACTERS",
    "tail_characters",
    "GENERATING_FUNCTIONS",
    "generating_function_coefficients",
]


def _e(x, prec):
    return root_of_unity(x, prec)


def _mpq(x):
    x = Fraction(x)
    return mpmath.mpf(x.numerator) / x.denominator


# ------------------------------------------------------------ nearly modular


def modular_s_matrix(P: int, prec: int = 256):
    """(P-1)x(P-1) matrix sqrt(2/P) sin(a b pi/P), a, b = 1..P-1."""
    if P < 2:
        raise DomainError("modular_s_matrix needs P >= 2")
    with mpmath.workprec(prec):
        c = mpmath.sqrt(mpmath.mpf(2) / P)
        return mpmath.matrix([[c * mpmath.sinpi(mpmath.mpf(a * b) / P) for b in range(1, P)] for a in range(1, P)])


@lru_cache(maxsize=4096)
def _l_cached(k: int, modulus: int, values: tuple) -> Fraction:
    return l_value(k, PeriodicFunction(modulus, values))


def _l(k: int, f: PeriodicFunction) -> Fraction:
    return _l_cached(k, f.modulus, f.values)


def nearly_modular_tail(P: int, a: int, N: int, k_max: int, prec: int = 256):
    """sum_{k <= k_max} L(-2k, psi) / k! (pi i/(2PN))^k."""
    psi = psi_odd(P, a)
    with mpmath.workprec(prec):
        x = mpmath.mpc(0, mpmath.pi / (2 * P * N))
        return mpmath.fsum(_mpq(_l(2 * k, psi) / factorial(k)) * x**k for k in range(k_max + 1))


def nearly_modular_residual(P: int, a: int, N: int, k_max: int, prec: int = 256):
    """|Psi(1/N) + sqrt(N/i) sum_b M_ab Psi_b(-N) - tail through k_max| with sqrt(N/i) = e^{-pi i/4} sqrt N."""
    if not 0 < a < P or N < 1:
        raise DomainError("need 0 < a < P and N >= 1")
    wp = prec + GUARD_BITS
    with mpmath.workprec(wp):
        M = modular_s_matrix(P, wp)
        s = mpmath.fsum(M[a - 1, b - 1] * eichler_limit_integer(P, b, -N, wp) for b in range(1, P))
        lhs = eichler_limit_rational(P, a, N, wp) + _e(Fraction(-1, 4), wp) * mpmath.sqrt(N) * s
        r = abs(lhs - nearly_modular_tail(P, a, N, k_max, wp))
    with mpmath.workprec(prec):
        return +r


# ---------------------------------------------------------- flat connections


@dataclass(frozen=True)
class FlatConnection:
    rotation_numbers: tuple
    torsion_sqrt: object
    chern_simons: Fraction

    def as_dict(self, digits: int = 40) -> dict:
        return {
            "l": list(self.rotation_numbers),
            "sqrt_T": mpmath.nstr(self.torsion_sqrt, digits),
            "CS": str(self.chern_simons),
        }


def _cs_reduce(x: Fraction) -> Fraction:
    """Representative in (-1, 0]."""
    x = x - (x.numerator // x.denominator)
    return x - 1 if x > 0 else x


def _table_rotations(m: ManifoldLabel):
    if m.family in ("E7", "E8"):
        return [(1, 1, 1), (1, 1, 3)]
    if m.family == "E6":
        return [(1, 1, 1)]
    K = m.K
    return [(1, 1, l) for l in range(1, K, 2)]


def flat_connections(m, raw: bool = False, prec: int = 256) -> list[FlatConnection]:
    """Irreducible flat connections: (l, sqrt T, CS) with CS = -(1/4) sum q_j l_j^2 / p_j mod 1.

    By default only the representatives listed in the tables are returned; ``raw``
    lists every l with 0 < l_j < p_j without identifications.
    """
    m = _as_label(m)
    fibers = m.seifert().fibers
    if raw:
        rots = list(itertools.product(*[range(1, p) for p, _ in fibers]))
    else:
        rots = _table_rotations(m)
    out = []
    with mpmath.workprec(prec):
        for ell in rots:
            t = mpmath.mpf(1)
            cs = Fraction(0)
            for (p, q), l in zip(fibers, ell):
                qp = 1 if p == 2 else pow(q, -1, p)
                t *= 2 / mpmath.sqrt(p) * abs(mpmath.sinpi(mpmath.mpf(qp * l) / p))
                cs += Fraction(q * l * l, p)
            out.append(FlatConnection(tuple(ell), +t, _cs_reduce(-cs / 4)))
    return out


def table_cs_values(m) -> set:
    """CS column of the manifold/Eichler-integral summary table."""
    return {c.chern_simons for c in flat_connections(m)}


# ---------------------------------------------------------------- expansions

TAIL_CHARACTERS = {
    "E6": {"psi12_1+psi12_5": (6, {1: 1, 5: 1}), "psi12_3": (6, {3: 1})},
    "E7": {"psi24_1+5+7+11": (12, {1: 1, 5: 1, 7: 1, 11: 1})},
    "E8": {"-psi60_1-11-19-29": (30, {1: -1, 11: -1, 19: -1, 29: -1})},
}


def _psi_combo(P: int, coeffs: dict) -> PeriodicFunction:
    f = PeriodicFunction(2 * P, (0,) * (2 * P))
    for a, c in coeffs.items():
        f = f + c * psi_odd(P, a)
    return f


def tail_characters(m) -> dict:
    """Named character combinations whose L-values make up the tail."""
    m = _as_label(m)
    if m.family in TAIL_CHARACTERS:
        return {k: _psi_combo(P, c) for k, (P, c) in TAIL_CHARACTERS[m.family].items()}
    K = m.K
    if K == 2:
        # psi_4^(1) + psi_4^(1) ; the two supports coincide
        plus = _psi_combo(2, {1: 2})
        return {"psi4_1+psi4_1": plus, "-psi4_1+psi4_1": _psi_combo(2, {})}
    return {
        f"psi{2*K}_1+psi{2*K}_{K-1}": _psi_combo(K, {1: 1, K - 1: 1}),
        f"-psi{2*K}_1+psi{2*K}_{K-1}": _psi_combo(K, {1: -1, K - 1: 1}),
    }


@dataclass
class AsymptoticExpansion:
    """prefactor * tau_N  ~  sqrt(N/i) sum amp e^{-pi i f N} + constant + sum_k (sum_j w_j L(-2k, f_j))/k! x^k."""

    manifold: str
    N: int
    P: int
    oscillatory: list  # (amplitude, frequency f)
    constant: object
    tail: list  # (weight, name, PeriodicFunction)
    prec: int = 256
    _terms: list = field(default_factory=list, repr=False)

    @property
    def x(self):
        with mpmath.workprec(self.prec):
            return mpmath.mpc(0, mpmath.pi / (2 * self.P * self.N))

    def tail_coefficients(self, k_max: int) -> dict:
        """name -> [L(-2k, f) for k = 0..k_max] as exact rationals."""
        return {name: [_l(2 * k, f) for k in range(k_max + 1)] for _, name, f in self.tail}

    def tail_term(self, k: int):
        with mpmath.workprec(self.prec):
            c = mpmath.fsum(w * _mpq(_l(2 * k, f)) for w, _, f in self.tail)
            return c / factorial(k) * self.x**k

    def oscillatory_part(self):
        with mpmath.workprec(self.prec):
            root = _e(Fraction(-1, 4), self.prec) * mpmath.sqrt(self.N)
            return root * mpmath.fsum(a * _e(-f * self.N, self.prec) for a, f in self.oscillatory)

    def optimal_k(self, k_cap: int = 80) -> int:
        """Index of the smallest tail term (first local minimum of |term|)."""
        prev = None
        for k in range(k_cap + 1):
            t = abs(self.tail_term(k))
            if prev is not None and t > prev[1] and prev[1] > 0:
                return prev[0]
            if prev is None or t <= prev[1] or prev[1] == 0:
                prev = (k, t)
        return k_cap

    def evaluate(self, k_max: int | None = None):
        with mpmath.workprec(self.prec):
            if k_max is None:
                k_max = self.optimal_k()
            tail = mpmath.fsum(self.tail_term(k) for k in range(k_max + 1))
            return self.oscillatory_part() + self.constant + tail


def corollary_expansion_data(m, N: int, prec: int = 256) -> AsymptoticExpansion:
    """The written-out large-N expansion of the normalized invariant for this N."""
    m = _as_label(m)
    if N < 2:
        raise DomainError("N must be >= 2")
    wp = prec + GUARD_BITS
    ch = tail_characters(m)
    names = list(ch)
    with mpmath.workprec(wp):
        if m.family == "E6":
            w = _e(Fraction(2 * N, 3), wp)
            r3 = mpmath.sqrt(3)
            osc = [(mpmath.mpf(1), Fraction(1, 12))]
            const = (1 + 2 * w) / r3 * _e(Fraction(1, 12 * N), wp)
            tail = [(-(1 + 2 * w) / (2 * r3), names[0], ch[names[0]]), (-(1 - w) / r3, names[1], ch[names[1]])]
            P = 6
        elif m.family == "E7":
            f = 1 + (-1) ** N
            # f e^{-pi i N/24} written as the sum over both flat connections
            osc = [(1 / mpmath.sqrt(2), Fraction(1, 24)), (1 / mpmath.sqrt(2), Fraction(25, 24))]
            const = f / mpmath.sqrt(2) * _e(Fraction(1, 24 * N), wp)
            tail = [(-mpmath.sqrt(2) / 4 * f, names[0], ch[names[0]])]
            P = 12
        elif m.family == "E8":
            c = 2 / mpmath.sqrt(5)
            osc = [(c * mpmath.sinpi(mpmath.mpf(1) / 5), Fraction(1, 60)), (c * mpmath.sinpi(mpmath.mpf(2) / 5), Fraction(49, 60))]
            const = _e(Fraction(1, 60 * N), wp)
            tail = [(mpmath.mpf(1) / 2, names[0], ch[names[0]])]
            P = 30
        else:
            K = m.K
            P = K
            base = _e(Fraction(1, 2 * K * N), wp)
            if K % 2 == 0:
                f = 1 + (-1) ** (N * (1 + K // 2))
                c = f * mpmath.sqrt(mpmath.mpf(2) / K)
                osc = [(c * mpmath.sinpi(mpmath.mpf(K) / 4) * mpmath.cospi(mpmath.mpf(K - 2) / 4), Fraction(K, 8))]
                for b in range(1, K // 2):
                    amp = 2 * c * mpmath.sinpi(mpmath.mpf(b) / 2) * mpmath.cospi(mpmath.mpf((K - 2) * b) / (2 * K))
                    osc.append((amp, Fraction(b * b, 2 * K)))
                const = f * base
                tail = [(-mpmath.mpf(f), names[0], ch[names[0]])]
            else:
                u = _e(Fraction(-K * N, 2), wp)
                c = mpmath.sqrt(mpmath.mpf(8) / K)
                osc = []
                for b in range(1, (K - 1) // 2 + 1):
                    s1 = mpmath.sinpi(mpmath.mpf(b) / 2) * mpmath.cospi(mpmath.mpf((K - 2) * b) / (2 * K))
                    s2 = mpmath.cospi(mpmath.mpf(b) / 2) * mpmath.sinpi(mpmath.mpf((K - 2) * b) / (2 * K))
                    osc.append((c * (s1 - u * s2), Fraction(b * b, 2 * K)))
                const = base * (1 + u)
                tail = [(mpmath.mpc(-1), names[0], ch[names[0]]), (u, names[1], ch[names[1]])]
    return AsymptoticExpansion(m.name, N, P, osc, const, tail, wp)


def corollary_expansion(m, N: int, k_max: int | None = None, prec: int = 256):
    """Value of the written-out expansion; the tail is cut at the smallest term unless k_max is given."""
    v = corollary_expansion_data(m, N, prec).evaluate(k_max)
    with mpmath.workprec(prec):
        return +v


def _closed_structure(m: ManifoldLabel, N: int, wp: int):
    """(P, constant, {a: coefficient}) with prefactor * tau = constant + sum_a c_a Psi_P^(a)(1/N)."""
    if m.family == "E6":
        w = _e(Fraction(2 * N, 3), wp)
        r3 = mpmath.sqrt(3)
        return 6, (1 + 2 * w) / r3 * _e(Fraction(1, 12 * N), wp), {1: -(1 + 2 * w) / (2 * r3), 5: -(1 + 2 * w) / (2 * r3), 3: -(1 - w) / r3}
    if m.family == "E7":
        f = (1 + (-1) ** N) * mpmath.sqrt(2) / 4
        return 12, 2 * f * _e(Fraction(1, 24 * N), wp), {a: -f for a in (1, 5, 7, 11)}
    if m.family == "E8":
        return 30, _e(Fraction(1, 60 * N), wp), {a: -mpmath.mpf(1) / 2 for a in (1, 11, 19, 29)}
    K = m.K
    base = _e(Fraction(1, 2 * K * N), wp)
    if K % 2 == 0:
        f = 1 + (-1) ** (N * (1 + K // 2))
        coeffs = {}
        for a in (1, K - 1):
            coeffs[a] = coeffs.get(a, 0) - f
        return K, f * base, coeffs
    u = _e(Fraction(-K * N, 2), wp)
    return K, (1 + u) * base, {1: -1 - u, K - 1: -1 + u}


def derived_expansion(m, N: int, k_max: int, prec: int = 256):
    """(oscillatory part, constant, tail through k_max) derived mechanically from the closed form."""
    m = _as_label(m)
    wp = prec + GUARD_BITS
    with mpmath.workprec(wp):
        P, const, coeffs = _closed_structure(m, N, wp)
        M = modular_s_matrix(P, wp)
        root = _e(Fraction(-1, 4), wp) * mpmath.sqrt(N)
        osc = mpmath.mpc(0)
        tail = mpmath.mpc(0)
        for a, c in coeffs.items():
            s = mpmath.fsum(M[a - 1, b - 1] * eichler_limit_integer(P, b, -N, wp) for b in range(1, P))
            osc += -c * root * s
            tail += c * nearly_modular_tail(P, a, N, k_max, wp)
    with mpmath.workprec(prec):
        return +osc, +const, +tail


# ---------------------------------------------------- partition functions


def s2xs1_tau(N: int, prec: int = 256):
    """tau_N(S^2 x S^1) = sqrt(N/2) / sin(pi/N)."""
    with mpmath.workprec(prec):
        return mpmath.sqrt(mpmath.mpf(N) / 2) / mpmath.sinpi(mpmath.mpf(1) / N)


def partition_function(m, N: int, prec: int = 256):
    """Z_{N-2} = tau_N(M) / tau_N(S^2 x S^1) with tau_N from the closed form."""
    if N < 3:
        raise DomainError("N must be >= 3")
    wp = prec + GUARD_BITS
    t = closed_form(m, N, wp)
    with mpmath.workprec(wp):
        z = t / s2xs1_tau(N, wp)
    with mpmath.workprec(prec):
        return +z


def dominant_frequencies(m) -> list:
    """(amplitude sqrt T, f) pairs of the dominating term, Z ~ (1/2)e^{-3 pi i/4} sum sqrtT e^{-pi i f N}."""
    m = _as_label(m)
    if m.family == "E6":
        return [(mpmath.sqrt(2), Fraction(1, 12))]
    if m.family == "E7":
        return [(mpmath.mpf(1), Fraction(1, 24)), (mpmath.mpf(1), Fraction(25, 24))]
    if m.family == "E8":
        s5 = mpmath.sqrt(5)
        return [(mpmath.sqrt((5 - s5) / 5), Fraction(1, 60)), (mpmath.sqrt((5 + s5) / 5), Fraction(49, 60))]
    K = m.K
    return [
        (4 / mpmath.sqrt(K) * mpmath.sinpi(mpmath.mpf(2 * j + 1) / K), Fraction((2 * j + 1) ** 2, 2 * K))
        for j in range(K // 2)
    ]


def dominant_prediction(m, N: int, prec: int = 256):
    """Explicit dominating term of Z_{N-2} (no free parameters)."""
    with mpmath.workprec(prec + GUARD_BITS):
        s = mpmath.fsum(a * _e(-f * N, prec + GUARD_BITS) for a, f in dominant_frequencies(m))
        v = _e(Fraction(-3, 4), prec + GUARD_BITS) / 2 * s
    with mpmath.workprec(prec):
        return +v


def relative_deviation(m, N: int, prec: int = 256):
    """|Z - prediction| / |prediction|; None where the prediction vanishes."""
    with mpmath.workprec(prec):
        d = dominant_prediction(m, N, prec)
        if abs(d) < mpmath.mpf(2) ** (-prec // 2):
            return None
        return abs(partition_function(m, N, prec) - d) / abs(d)


def sweep_row(m, N: int, prec: int = 256, digits: int = 20) -> dict:
    m = _as_label(m)
    z = partition_function(m, N, prec)
    d = dominant_prediction(m, N, prec)
    r = relative_deviation(m, N, prec)

    def s(x):
        return mpmath.nstr(x, digits)

    return {
        "manifold": m.name,
        "N": N,
        "Z_re": s(mpmath.re(z)),
        "Z_im": s(mpmath.im(z)),
        "prediction_re": s(mpmath.re(d)),
        "prediction_im": s(mpmath.im(d)),
        "rel_dev": None if r is None else s(r),
    }


# ------------------------------------------------- L-value generating functions


def _even_taylor(kind: str, a: Fraction, k_max: int) -> list:
    """Coefficients of z^{2k}: cosh(a z), or sinh(a z)/z."""
    a = Fraction(a)
    if kind == "ch":
        return [a ** (2 * k) / factorial(2 * k) for k in range(k_max + 1)]
    return [a ** (2 * k + 1) / factorial(2 * k + 1) for k in range(k_max + 1)]


def _mul(u, v):
    return [sum((u[i] * v[n - i] for i in range(n + 1)), Fraction(0)) for n in range(len(u))]


def _div(u, v):
    out = []
    for n in range(len(u)):
        out.append((u[n] - sum((out[i] * v[n - i] for i in range(n)), Fraction(0))) / v[0])
    return out


def _ratio(num, den, k_max):
    """num, den: lists of (kind, a) factors; returns Taylor coefficients in z^2 of prod num / prod den."""
    one = [Fraction(1)] + [Fraction(0)] * k_max
    u = one
    for kind, a in num:
        u = _mul(u, _even_taylor(kind, a, k_max))
    w = one
    for kind, a in den:
        w = _mul(w, _even_taylor(kind, a, k_max))
    return _div(u, w)


def _gf(name: str, K: int | None, k_max: int):
    F = Fraction
    if name == "E6_15":
        return _ratio([("ch", 2)], [("ch", 3)], k_max)
    if name == "E6_3":
        return [c / 2 for c in _ratio([], [("ch", 3)], k_max)]
    if name == "E7":
        return [2 * c for c in _ratio([("ch", 3), ("ch", 2)], [("ch", 6)], k_max)]
    if name == "E8":
        # 2 ch(5z) ch(9z)/ch(15z) = -sum L(-2k, -psi...) z^{2k}/(2k)!
        return [-2 * c for c in _ratio([("ch", 5), ("ch", 9)], [("ch", 15)], k_max)]
    if name == "D_plus":
        return _ratio([("ch", F(K - 2, 2))], [("ch", F(K, 2))], k_max)
    if name == "D_minus":
        if K == 2:
            return [Fraction(0)] * (k_max + 1)
        return _ratio([("sh", F(K - 2, 2))], [("sh", F(K, 2))], k_max)
    raise DomainError(f"unknown generating function {name!r}")


GENERATING_FUNCTIONS = {
    "E6_15": "ch(2z)/ch(3z)  <->  psi12_1 + psi12_5",
    "E6_3": "1/(2 ch(3z))  <->  psi12_3",
    "E7": "2 ch(3z) ch(2z)/ch(6z)  <->  psi24_1 + psi24_5 + psi24_7 + psi24_11",
    "E8": "-2 ch(5z) ch(9z)/ch(15z)  <->  -psi60_1 - psi60_11 - psi60_19 - psi60_29",
    "D_plus": "ch((K-2)z/2)/ch(Kz/2)  <->  psi2K_1 + psi2K_(K-1)",
    "D_minus": "sh((K-2)z/2)/sh(Kz/2)  <->  psi2K_1 - psi2K_(K-1)",
}


def _gf_character(name: str, K: int | None) -> PeriodicFunction:
    if name == "E6_15":
        return _psi_combo(6, {1: 1, 5: 1})
    if name == "E6_3":
        return _psi_combo(6, {3: 1})
    if name == "E7":
        return _psi_combo(12, {1: 1, 5: 1, 7: 1, 11: 1})
    if name == "E8":
        return _psi_combo(30, {1: -1, 11: -1, 19: -1, 29: -1})
    if name == "D_plus":
        return _psi_combo(K, {1: 1, K - 1: 1}) if K > 2 else _psi_combo(2, {1: 2})
    if name == "D_minus":
        return _psi_combo(K, {1: 1, K - 1: -1}) if K > 2 else _psi_combo(2, {})
    raise DomainError(f"unknown generating function {name!r}")


def generating_function_coefficients(name: str, k_max: int = 10, K: int | None = None):
    """Pairs ([(2k)! * Taylor coefficient], [L(-2k, character)]) for k = 0..k_max, as exact rationals."""
    if name.startswith("D") and (K is None or K < 2):
        raise DomainError("D generating functions need K >= 2")
    taylor = [c * factorial(2 * k) for k, c in enumerate(_gf(name, K, k_max))]
    f = _gf_character(name, K)
    return taylor, [_l(2 * k, f) for k in range(k_max + 1)]
