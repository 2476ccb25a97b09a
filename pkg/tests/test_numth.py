from fractions import Fraction
from math import comb, gcd

import mpmath
import pytest
from hypothesis import assume, given, strategies as st

from qiw import numth as nt
from qiw.seifert import DomainError, SeifertData

TOL = mpmath.mpf(2) ** -128


def frac_to_mp(x):
    return mpmath.mpf(x.numerator) / x.denominator


def sawtooth_oracle(x):
    x = Fraction(x)
    if x.denominator == 1:
        return Fraction(0)
    return x - (x.numerator // x.denominator) - Fraction(1, 2)


def dedekind_oracle(b, a):
    return sum((sawtooth_oracle(Fraction(n, a)) * sawtooth_oracle(Fraction(b * n, a)) for n in range(1, abs(a))), Fraction(0))


# ------------------------------------------------------------- Bernoulli


def test_bernoulli_small():
    assert nt.bernoulli_number(0) == 1
    assert nt.bernoulli_number(1) == Fraction(-1, 2)
    assert nt.bernoulli_number(4) == Fraction(-1, 30)
    assert nt.bernoulli_number(3) == 0


def test_bernoulli_recurrence_oracle():
    B = [Fraction(1)]
    for k in range(1, 25):
        B.append(-sum((comb(k + 1, j) * B[j] for j in range(k)), Fraction(0)) / (k + 1))
    assert [nt.bernoulli_number(k) for k in range(25)] == B


def test_bernoulli_poly_values():
    assert nt.bernoulli_poly(1, 0) == Fraction(-1, 2)
    assert nt.bernoulli_poly(2, Fraction(1, 2)) == Fraction(1, 4) - Fraction(1, 2) + Fraction(1, 6)
    for k in range(8):
        assert nt.bernoulli_poly(k, 0) == nt.bernoulli_number(k)


@given(st.integers(1, 12), st.fractions(min_value=-3, max_value=3, max_denominator=50))
def test_bernoulli_poly_difference(k, x):
    # B_k(x + 1) - B_k(x) = k x^(k-1)
    assert nt.bernoulli_poly(k, x + 1) - nt.bernoulli_poly(k, x) == k * x ** (k - 1)


def test_sawtooth():
    assert nt.sawtooth(1) == 0
    assert nt.sawtooth(Fraction(1, 2)) == 0
    assert nt.sawtooth(Fraction(1, 3)) == Fraction(-1, 6)


@given(st.fractions(min_value=-10, max_value=10, max_denominator=100))
def test_sawtooth_odd_periodic(x):
    assert nt.sawtooth(-x) == -nt.sawtooth(x)
    assert nt.sawtooth(x + 1) == nt.sawtooth(x)
    assert nt.sawtooth(x) == sawtooth_oracle(x)


# --------------------------------------------------------- Dedekind sums


def test_dedekind_examples():
    assert nt.dedekind_sum(1, 2) == 0
    assert nt.dedekind_sum(1, 3) == Fraction(1, 18)
    with pytest.raises(DomainError):
        nt.dedekind_sum(1, 0)


@given(st.integers(1, 60), st.integers(-200, 200))
def test_dedekind_matches_definition_and_antisymmetry(a, b):
    assert nt.dedekind_sum(b, a) == dedekind_oracle(b, a)
    assert nt.dedekind_sum(-b, a) == -nt.dedekind_sum(b, a)
    assert nt.dedekind_sum(b + a, a) == nt.dedekind_sum(b, a)


@given(st.integers(1, 300), st.integers(1, 300))
def test_dedekind_reciprocity(a, b):
    assume(gcd(a, b) == 1)
    lhs = nt.dedekind_sum(b, a) + nt.dedekind_sum(a, b)
    assert lhs == Fraction(-1, 4) + (Fraction(a, b) + Fraction(b, a) + Fraction(1, a * b)) / 12


def test_dedekind_cotangent_form():
    for a, b in [(3, 1), (7, 3), (50, 49), (31, -4)]:
        assert abs(nt.dedekind_sum_cot(b, a) - frac_to_mp(nt.dedekind_sum(b, a))) < TOL


# ---------------------------------------------------- periodic functions


def test_psi_odd_support():
    f = nt.psi_odd(6, 1)
    assert f.modulus == 12
    assert {r: f(r) for r in f.support()} == {1: 1, 11: -1}
    g = nt.psi_odd(2, 1)
    assert [g(n) for n in range(8)] == [0, 1, 0, -1, 0, 1, 0, -1]
    assert nt.psi_odd(6, 6).is_zero()


@given(st.integers(1, 20), st.integers(-50, 50), st.integers(-100, 100))
def test_psi_odd_periodic_and_odd(P, a, n):
    f = nt.psi_odd(P, a)
    assert f(n + 2 * P) == f(n)
    assert f(-n) == -f(n)
    assert nt.psi_odd(P, a + 2 * P) == f
    assert nt.psi_odd(P, -a) == -f


def test_named_tables():
    chi = nt.named_periodic("chi12")
    assert {r: chi(r) for r in chi.support()} == {1: 1, 5: -1, 7: -1, 11: 1}
    assert chi.is_even()
    pe = nt.named_periodic("phi_e", 4)
    assert {r: pe(r) for r in pe.support()} == {1: 1, 7: 1, 3: -1, 5: -1}
    c = nt.named_periodic("chi84_111")
    expect = nt.psi_odd(42, 1) - nt.psi_odd(42, 13) - nt.psi_odd(42, 29) + nt.psi_odd(42, 41)
    assert c == expect
    with pytest.raises(DomainError):
        nt.named_periodic("phi_e", 3)
    with pytest.raises(DomainError):
        nt.named_periodic("phi_o", 4)


# ------------------------------------------------------------- L-values


@given(st.integers(2, 30), st.data())
def test_l_value_at_zero(P, data):
    a = data.draw(st.integers(1, P - 1))
    assert nt.l_value(0, nt.psi_odd(P, a)) == Fraction(P - a, P)


def taylor_oracle(fn, n):
    """Numeric Taylor coefficients times k! (the k-th derivative at 0)."""
    with mpmath.workprec(400):
        cs = mpmath.taylor(fn, 0, n)
        return [cs[k] * mpmath.factorial(k) for k in range(n + 1)]


def test_l_value_generating_function_e6():
    # sum_k L(-2k, psi_12^(3)) z^2k / (2k)! = 1 / (2 ch 3z)
    f = nt.psi_odd(6, 3)
    ref = taylor_oracle(lambda z: 1 / (2 * mpmath.cosh(3 * z)), 12)
    for k in range(7):
        assert abs(frac_to_mp(nt.l_value(2 * k, f)) - ref[2 * k]) < mpmath.mpf(10) ** -60


@pytest.mark.parametrize("K", [3, 4, 5, 8])
def test_l_value_generating_function_dk(K):
    # psi_2K^(1) - psi_2K^(K-1)  <->  sh((K-2) z/2) / sh(K z/2)
    f = nt.psi_odd(K, 1) - nt.psi_odd(K, K - 1)
    ref = taylor_oracle(lambda z: mpmath.sinh((K - 2) * z / 2) / mpmath.sinh(K * z / 2) if z else mpmath.mpf(K - 2) / K, 12)
    for k in range(7):
        assert abs(frac_to_mp(nt.l_value(2 * k, f)) - ref[2 * k]) < mpmath.mpf(10) ** -50


def test_l_value_rejects_negative_k():
    with pytest.raises(DomainError):
        nt.l_value(-1, nt.psi_odd(3, 1))


# ----------------------------------------------------- Gauss reciprocity


def test_gauss_trivial_cases():
    lhs, rhs = nt.gauss_reciprocity_pair(1, 2, 0)
    assert abs(lhs - 1) < TOL and abs(rhs - 1) < TOL
    lhs, rhs = nt.gauss_reciprocity_pair(3, 2, 0)
    assert abs(lhs - rhs) < TOL


@given(st.integers(-50, 50).filter(bool), st.integers(-50, 50).filter(bool), st.data())
def test_gauss_reciprocity(N, M, data):
    assume((N * M) % 2 == 0)
    k = Fraction(data.draw(st.integers(0, 2 * abs(N))), abs(N))
    lhs, rhs = nt.gauss_reciprocity_pair(N, M, k)
    assert abs(lhs - rhs) < TOL * max(1, abs(lhs))


def test_gauss_rejects_odd_product():
    with pytest.raises(DomainError):
        nt.gauss_reciprocity_pair(3, 5, 0)


# --------------------------------------------------------- root of unity


def test_root_of_unity_exact_points():
    assert nt.root_of_unity(0) == 1
    assert nt.root_of_unity(Fraction(1, 2)) == mpmath.mpc(0, 1)
    assert nt.root_of_unity(7) == -1
    assert nt.root_of_unity(Fraction(-1, 2)) == mpmath.mpc(0, -1)
    assert abs(nt.root_of_unity(Fraction(1, 3)) - mpmath.expjpi(mpmath.mpf(1) / 3)) < TOL


@given(st.fractions(min_value=-100, max_value=100, max_denominator=1000))
def test_root_of_unity_period_two(x):
    assert nt.root_of_unity(x) == nt.root_of_unity(x + 2)


# --------------------------------------------------------- Casson-Walker


def test_casson_walker_poincare_sphere():
    # the Poincare homology sphere has Casson invariant -1
    assert nt.casson_walker(SeifertData(((2, -1), (3, 1), (5, 1)))) == -1


def casson_oracle(s):
    a = s.p
    e = sum((Fraction(q, p) for p, q in s.fibers), Fraction(0))
    sgn = (e > 0) - (e < 0)
    ded = sum((dedekind_oracle(q, p) for p, q in s.fibers), Fraction(0))
    A = a[0] * a[1] * a[2]
    return Fraction(A, 8) * (Fraction(sgn, 3) * (-1 + sum(Fraction(1, x * x) for x in a)) + e * abs(e) / 3 - e - 4 * abs(e) * ded)


@pytest.mark.parametrize("fibers", [((2, -1), (3, 1), (3, 1)), ((2, -1), (3, 1), (4, 1)), ((2, -1), (2, 1), (7, 1)), ((3, 2), (5, -2), (7, 3))])
def test_casson_walker_oracle_and_flip(fibers):
    s = SeifertData(fibers)
    assert nt.casson_walker(s) == casson_oracle(s)
    assert nt.casson_walker(s.flipped()) == -nt.casson_walker(s)


def test_casson_walker_zero_euler():
    s = SeifertData(((2, 1), (4, -1), (4, -1)))
    assert s.euler() == 0
    assert isinstance(nt.casson_walker(s), Fraction)
