"""WRT invariants at roots of unity for E6, E7, E8 and D_K.

Two independent routes are provided: the Lawrence-Rozansky triple sum
(:func:`wrt_lr`) and the closed forms in terms of limiting values of Eichler
integrals (:func:`closed_form`).  Values are mpmath complex numbers.  N is
always the shifted level, N = k + 2.
"""

from __future__ import annotations

import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .numth import dedekind_sum, psi_odd, root_of_unity
from .seifert import DomainError, ManifoldLabel, SeifertData

__all__ = [
    "GUARD_BITS",
    "phi_framing",
    "wrt_lr",
    "eichler_limit_rational",
    "eichler_limit_integer",
    "eichler_radial_limit",
    "closed_form",
    "closed_form_normalized",
    "normalizing_prefactor",
    "WRTResult",
    "compute",
    "LinkingMatrix",
    "dynkin_matrix",
    "tau3_linking",
    "kashaev_torus_link",
    "relation_d2_t24",
    "relation_d_odd_link",
    "relation_e6_d6",
    "tree_sum",
]

GUARD_BITS = 32


def _e(x, prec):
    """exp(pi i x) for rational x."""
    return root_of_unity(x, prec)


def tree_sum(values):
    """Pairwise sum in a fixed order, so results do not depend on how terms were produced."""
    vals = list(values)
    if not vals:
        return mpmath.mpc(0)
    while len(vals) > 1:
        nxt = [vals[i] + vals[i + 1] for i in range(0, len(vals) - 1, 2)]
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
    return vals[0]


def _as_seifert(m) -> SeifertData:
    if isinstance(m, SeifertData):
        return m
    if isinstance(m, ManifoldLabel):
        return m.seifert()
    if isinstance(m, str):
        return ManifoldLabel.parse(m).seifert()
    raise DomainError(f"cannot interpret {m!r} as Seifert data")


def _as_label(m) -> ManifoldLabel:
    if isinstance(m, ManifoldLabel):
        return m
    if isinstance(m, str):
        return ManifoldLabel.parse(m)
    raise DomainError(f"cannot interpret {m!r} as a manifold label")


def phi_framing(s: SeifertData) -> Fraction:
    """sum_j (12 s(q_j, p_j) - q_j/p_j) + 3."""
    s = _as_seifert(s)
    return sum((12 * dedekind_sum(q, p) - Fraction(q, p) for p, q in s.fibers), Fraction(0)) + 3


# ------------------------------------------------------- Lawrence-Rozansky


def _lr_terms(fibers, N, k0s, prec):
    """Summands of the triple sum for the given k0, one mpc per k0."""
    with mpmath.workprec(prec):
        out = []
        ranges = [range(p) for p, _ in fibers]
        for k0 in k0s:
            inner = []
            for ns in itertools.product(*ranges):
                t = mpmath.mpc(1)
                for (p, q), n in zip(fibers, ns):
                    m = k0 + 2 * N * n
                    t *= _e(Fraction(-q * m * m, 2 * N * p), prec) * (
                        _e(Fraction(m, N * p), prec) - _e(Fraction(-m, N * p), prec)
                    )
                inner.append(t)
            den = _e(Fraction(k0, N), prec) - _e(Fraction(-k0, N), prec)
            out.append(tree_sum(inner) / den)
        return out


def _lr_normalized(s: SeifertData, N: int, prec: int, jobs: int = 1):
    wp = prec + GUARD_BITS
    k0s = list(range(1, N))
    if jobs > 1 and len(k0s) > 1:
        chunk = -(-len(k0s) // jobs)
        parts = [k0s[i : i + chunk] for i in range(0, len(k0s), chunk)]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            terms = [t for res in ex.map(_lr_terms, [s.fibers] * len(parts), [N] * len(parts), parts, [wp] * len(parts)) for t in res]
    else:
        terms = _lr_terms(s.fibers, N, k0s, wp)
    with mpmath.workprec(wp):
        P = s.p[0] * s.p[1] * s.p[2]
        return _e(Fraction(1, 4), wp) / mpmath.sqrt(2 * N * P) * tree_sum(terms)


def _lr_prefactor(s: SeifertData, N: int, prec: int):
    phi = phi_framing(s)
    return _e(2 * (phi / 4 - Fraction(1, 2)) / N, prec) * (_e(Fraction(2, N), prec) - 1)


def _check_N(N: int):
    if int(N) != N or N < 2:
        raise DomainError("N must be an integer >= 2")


def wrt_lr(s, N: int, prec: int = 256, jobs: int = 1):
    """tau_N from the Lawrence-Rozansky triple sum over k0 = 1..N-1 and n_j mod p_j.

    N = 2 is accepted (the D_K torus-link relation is stated there); N < 2 is an error.
    """
    _check_N(N)
    s = _as_seifert(s)
    wp = prec + GUARD_BITS
    rhs = _lr_normalized(s, N, prec, jobs)
    with mpmath.workprec(wp):
        tau = rhs / _lr_prefactor(s, N, wp)
    with mpmath.workprec(prec):
        return +tau


# ------------------------------------------------------- Eichler integrals


def eichler_limit_rational(P: int, a: int, N: int, prec: int = 256):
    """Limit of the Eichler integral at tau = 1/N:  -sum_{k=0}^{2PN} psi(k) e^{pi i k^2/(2PN)} B_1(k/(2PN))."""
    if P < 1 or N < 1:
        raise DomainError("need P >= 1 and N >= 1")
    psi = psi_odd(P, a)
    M = 2 * P * N
    wp = prec + GUARD_BITS
    terms = []
    with mpmath.workprec(wp):
        for r in psi.support():
            c = psi(r)
            for k in range(r, M + 1, 2 * P):
                b1 = Fraction(k, M) - Fraction(1, 2)
                if b1:
                    terms.append(_e(Fraction(k * k, M), wp) * (mpmath.mpf(b1.numerator) * c / b1.denominator))
        total = -mpmath.fsum(terms)
    with mpmath.workprec(prec):
        return +total


def eichler_limit_integer(P: int, a: int, N: int, prec: int = 256):
    """Value at the integer N (negative N allowed):  (1 - a/P) e^{pi i a^2 N/(2P)}."""
    if not 0 < a < P:
        raise DomainError("need 0 < a < P")
    with mpmath.workprec(prec):
        c = Fraction(P - a, P)
        return _e(Fraction(a * a * N, 2 * P), prec) * mpmath.mpf(c.numerator) / c.denominator


def eichler_radial_limit(P: int, a: int, N: int, prec: int = 128, t0=None, steps: int = 8):
    """Independent oracle: Abel limit of sum psi(n) q^{n^2/4P} as tau -> 1/N from above.

    Evaluates at tau = 1/N + i t for t = t0/2^j and extrapolates to t = 0
    (Richardson/Neville in t, the expansion being a power series in t).  The
    default t0 = 1/(2 P N^2) keeps t P N^2, the natural expansion variable, small.
    """
    psi = psi_odd(P, a)
    if t0 is None:
        t0 = Fraction(1, 2 * P * N * N)
    t0 = Fraction(t0)
    with mpmath.workprec(prec + 16):
        ts, vals = [], []
        for j in range(steps):
            t = mpmath.mpf(t0.numerator) / t0.denominator / 2**j
            damp = mpmath.pi * t / (2 * P)
            nmax = int(mpmath.sqrt((prec + 20) * mpmath.log(2) / damp)) + 2 * P
            s = mpmath.mpc(0)
            for n in range(1, nmax + 1):
                c = psi(n)
                if c:
                    s += c * _e(Fraction(n * n, 2 * P * N), prec + 16) * mpmath.exp(-damp * n * n)
            ts.append(t)
            vals.append(s)
        # Neville tableau evaluated at t = 0
        table = list(vals)
        for k in range(1, steps):
            for i in range(steps - 1, k - 1, -1):
                table[i] = (ts[i - k] * table[i] - ts[i] * table[i - 1]) / (ts[i - k] - ts[i])
        return +table[-1]


# ------------------------------------------------------------ closed forms


def normalizing_prefactor(m, N: int, prec: int = 256):
    """e^{c pi i/N} (e^{2 pi i/N} - 1) with c = 13/12, 37/24, 121/60 or (K-1)^2/(2K)."""
    m = _as_label(m)
    c = {"E6": Fraction(13, 12), "E7": Fraction(37, 24), "E8": Fraction(121, 60)}.get(m.family)
    if c is None:
        K = m.K
        c = Fraction((K - 1) ** 2, 2 * K)
    return _e(c / N, prec) * (_e(Fraction(2, N), prec) - 1)


def closed_form_normalized(m, N: int, prec: int = 256):
    """Right side of the closed form: prefactor * tau_N as a combination of Eichler limits."""
    m = _as_label(m)
    _check_N(N)
    wp = prec + GUARD_BITS

    def psi(P, a):
        return eichler_limit_rational(P, a, N, wp)

    with mpmath.workprec(wp):
        if m.family == "E6":
            w = _e(Fraction(2 * N, 3), wp)
            r3 = mpmath.sqrt(3)
            return (
                (1 + 2 * w) / r3 * _e(Fraction(1, 12 * N), wp)
                - (1 + 2 * w) / (2 * r3) * (psi(6, 1) + psi(6, 5))
                - (1 - w) / r3 * psi(6, 3)
            )
        if m.family == "E7":
            if N % 2:
                return mpmath.mpc(0)
            return mpmath.sqrt(2) / 2 * (2 * _e(Fraction(1, 24 * N), wp) - sum(psi(12, a) for a in (1, 5, 7, 11)))
        if m.family == "E8":
            return _e(Fraction(1, 60 * N), wp) - sum(psi(30, a) for a in (1, 11, 19, 29)) / 2
        K = m.K
        base = _e(Fraction(1, 2 * K * N), wp)
        if K % 2 == 0:
            if (N * (1 + K // 2)) % 2:
                return mpmath.mpc(0)
            return 2 * (base - psi(K, 1) - psi(K, K - 1))
        u = _e(Fraction(-K * N, 2), wp)
        p1, pk = psi(K, 1), psi(K, K - 1)
        return (1 + u) * base - p1 - pk + u * (pk - p1)


def closed_form(m, N: int, prec: int = 256):
    """tau_N from the closed form, dividing out the normalizing prefactor."""
    wp = prec + GUARD_BITS
    rhs = closed_form_normalized(m, N, prec)
    with mpmath.workprec(wp):
        tau = rhs / normalizing_prefactor(m, N, wp)
    with mpmath.workprec(prec):
        return +tau


@dataclass
class WRTResult:
    manifold: str
    N: int
    precision_bits: int
    tau: object
    normalized_lhs: object
    method: str

    def digits(self) -> int:
        return max(1, int(self.precision_bits / 3.4))

    def as_dict(self) -> dict:
        d = self.digits()

        def s(x):
            return mpmath.nstr(x, d)

        return {
            "manifold": self.manifold,
            "N": self.N,
            "precision_bits": self.precision_bits,
            "tau_re": s(mpmath.re(self.tau)),
            "tau_im": s(mpmath.im(self.tau)),
            "normalized_lhs_re": s(mpmath.re(self.normalized_lhs)),
            "normalized_lhs_im": s(mpmath.im(self.normalized_lhs)),
            "method": self.method,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)


def compute(m, N: int, method: str = "closed", prec: int = 256, jobs: int = 1) -> WRTResult:
    """tau_N together with the normalized side the closed forms equate."""
    m = _as_label(m)
    wp = prec + GUARD_BITS
    if method == "lr":
        s = m.seifert()
        rhs = _lr_normalized(s, N, prec, jobs) if N >= 2 else None
        _check_N(N)
        with mpmath.workprec(wp):
            tau = rhs / _lr_prefactor(s, N, wp)
    elif method == "closed":
        rhs = closed_form_normalized(m, N, prec)
        with mpmath.workprec(wp):
            tau = rhs / normalizing_prefactor(m, N, wp)
    else:
        raise DomainError(f"unknown method {method!r}")
    with mpmath.workprec(prec):
        return WRTResult(m.name, N, prec, +tau, +rhs, method)


# ------------------------------------------------------------------ tau_3


@dataclass(frozen=True)
class LinkingMatrix:
    """Symmetric integer linking matrix of a framed link."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DomainError("linking matrix must be square")
        if any(rows[i][j] != rows[j][i] for i in range(n) for j in range(n)):
            raise DomainError("linking matrix must be symmetric")
        object.__setattr__(self, "rows", rows)

    @property
    def size(self) -> int:
        return len(self.rows)

    def signature(self) -> tuple[int, int]:
        """(sigma_+, sigma_-) by exact symmetric elimination (Sylvester's law of inertia)."""
        A = [[Fraction(x) for x in r] for r in self.rows]
        n = len(A)
        pos = neg = 0
        k = 0
        while k < n:
            piv = next((i for i in range(k, n) if A[i][i] != 0), None)
            if piv is None:
                # all remaining diagonal entries vanish; make one nonzero by a congruence
                pair = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if A[i][j] != 0), None)
                if pair is None:
                    break
                i, j = pair
                for r in range(n):
                    A[i][r] += A[j][r]
                for r in range(n):
                    A[r][i] += A[r][j]
                piv = i
            if piv != k:
                A[k], A[piv] = A[piv], A[k]
                for r in A:
                    r[k], r[piv] = r[piv], r[k]
            d = A[k][k]
            if d > 0:
                pos += 1
            else:
                neg += 1
            for i in range(k + 1, n):
                f = A[i][k] / d
                if f:
                    for j in range(k, n):
                        A[i][j] -= f * A[k][j]
            for i in range(k + 1, n):
                A[k][i] = Fraction(0)
                A[i][k] = Fraction(0)
            k += 1
        return pos, neg


def dynkin_matrix(kind: str, n: int | None = None) -> LinkingMatrix:
    """-2 on the diagonal, 1 on edges, for E6/E7/E8 or D_n (n >= 4)."""
    kind = kind.upper()
    if kind in ("E6", "E7", "E8"):
        size = int(kind[1])
        # chain 0..size-2, branch node attached to chain node 2 counted from the far end
        chain = size - 1
        edges = [(i, i + 1) for i in range(chain - 1)]
        edges.append((chain - 3, size - 1))
    elif kind == "D":
        if n is None or n < 4:
            raise DomainError("D_n needs n >= 4")
        size = n
        edges = [(i, i + 1) for i in range(n - 2)]
        edges.append((n - 3, n - 1))
    else:
        raise DomainError(f"unknown Dynkin type {kind!r}")
    M = [[0] * size for _ in range(size)]
    for i in range(size):
        M[i][i] = -2
    for i, j in edges:
        M[i][j] = M[j][i] = 1
    return LinkingMatrix(tuple(tuple(r) for r in M))


def _gmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


_IPOW = ((1, 0), (0, 1), (-1, 0), (0, -1))


def tau3_linking(L: LinkingMatrix) -> tuple[int, int]:
    """(1+i)^{s+} (1-i)^{s-} sum_{x in (Z/2)^l} i^{x^T L x}, exactly as a Gaussian integer (re, im)."""
    if not isinstance(L, LinkingMatrix):
        L = LinkingMatrix(L)
    n = L.size
    if n > 24:
        raise DomainError("refusing l > 24: the sum has 2^l terms")
    M = L.rows
    # walk (Z/2)^n in Gray-code order, updating Q = x^T L x and v = L x
    counts = [0, 0, 0, 0]
    x = [0] * n
    v = [0] * n
    Q = 0
    counts[0] = 1
    for step in range(1, 1 << n):
        j = (step & -step).bit_length() - 1
        if x[j]:
            for r in range(n):
                v[r] -= M[r][j]
            Q -= 2 * v[j] + M[j][j]
            x[j] = 0
        else:
            Q += 2 * v[j] + M[j][j]
            for r in range(n):
                v[r] += M[r][j]
            x[j] = 1
        counts[Q % 4] += 1
    total = (counts[0] - counts[2], counts[1] - counts[3])
    sp, sm = L.signature()
    for _ in range(sp):
        total = _gmul(total, (1, 1))
    for _ in range(sm):
        total = _gmul(total, (1, -1))
    return total


# -------------------------------------------------------------- torus links


def kashaev_torus_link(P: int, N: int, prec: int = 256):
    """<T_{2,2P}>_N = P N e^{-(P-1)^2 pi i/(2PN)} times the Eichler limit with a = P-1."""
    if P < 1 or N < 1:
        raise DomainError("need P >= 1 and N >= 1")
    wp = prec + GUARD_BITS
    with mpmath.workprec(wp):
        v = P * N * _e(Fraction(-((P - 1) ** 2), 2 * P * N), wp) * eichler_limit_rational(P, P - 1, N, wp)
    with mpmath.workprec(prec):
        return +v


def _tau(m, N, prec, method):
    return wrt_lr(m, N, prec) if method == "lr" else closed_form(m, N, prec)


def relation_d2_t24(N: int, prec: int = 256, method: str = "lr"):
    """|(e^{2 pi i/N} - 1) tau_N(D2) - 2 (1 - <T_{2,4}>_N / N)|."""
    wp = prec + GUARD_BITS
    t = _tau(ManifoldLabel("D", 2), N, wp, method)
    with mpmath.workprec(wp):
        r = abs((_e(Fraction(2, N), wp) - 1) * t - 2 * (1 - kashaev_torus_link(2, N, wp) / N))
    with mpmath.workprec(prec):
        return +r


def relation_d_odd_link(K: int, N: int, prec: int = 256, method: str = "lr"):
    """|(e^{2 pi i/N} - 1) tau_N(D_K) + (2/(KN)) <T_{2,2K}>_N|, stated for odd K and N = 2 mod 4."""
    if K % 2 == 0:
        raise DomainError("the relation is stated for odd K")
    wp = prec + GUARD_BITS
    t = _tau(ManifoldLabel("D", K), N, wp, method)
    with mpmath.workprec(wp):
        r = abs((_e(Fraction(2, N), wp) - 1) * t + mpmath.mpf(2) / (K * N) * kashaev_torus_link(K, N, wp))
    with mpmath.workprec(prec):
        return +r


def relation_e6_d6(N: int, prec: int = 256, method: str = "lr", variant: str = "corrected"):
    """Residual of the E6-D6 relation for 3 | N.

    ``literal``:   e^{pi i/N} tau(D6) + e^{-pi i/N}/(e^{2 pi i/N} - 1) = (4/sqrt3) tau(E6)
    ``corrected``: e^{pi i/N} tau(D6) + 2 e^{-pi i/N}/(e^{2 pi i/N} - 1) = (4/sqrt3) tau(E6)
    """
    if variant not in ("literal", "corrected"):
        raise DomainError(f"unknown variant {variant!r}")
    c = 1 if variant == "literal" else 2
    wp = prec + GUARD_BITS
    t6 = _tau(ManifoldLabel("D", 6), N, wp, method)
    te = _tau(ManifoldLabel("E6"), N, wp, method)
    with mpmath.workprec(wp):
        lhs = _e(Fraction(1, N), wp) * t6 + c * _e(Fraction(-1, N), wp) / (_e(Fraction(2, N), wp) - 1)
        r = abs(lhs - 4 / mpmath.sqrt(3) * te)
    with mpmath.workprec(prec):
        return +r
