import json
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from qiw import wrtcore as wc
from qiw.seifert import D, DomainError, E6, E7, E8

TOL = mpmath.mpf(2) ** -128
LABELS = [E6, E7, E8] + [D(k) for k in range(2, 10)]


def test_phi_framing_values():
    assert wc.phi_framing(E6.seifert()) == Fraction(25, 6)
    assert wc.phi_framing(E7.seifert()) == Fraction(61, 12)
    assert wc.phi_framing(E8.seifert()) == Fraction(181, 30)


@pytest.mark.parametrize("m", LABELS, ids=str)
def test_lr_equals_closed_form_to_20(m):
    for N in range(3, 21):
        a, b = wc.wrt_lr(m, N), wc.closed_form(m, N)
        assert abs(a - b) < TOL * max(1, abs(a)), (m, N)


def test_spot_values():
    assert abs(wc.wrt_lr(E6, 5) - wc.closed_form(E6, 5)) < TOL
    assert abs(wc.wrt_lr(E7, 5)) < TOL
    assert abs(wc.wrt_lr(E8, 3) - wc.closed_form(E8, 3)) < TOL


def test_e8_at_3_is_one():
    # the Poincare sphere has tau_3 = 1 in this normalization
    assert abs(wc.closed_form(E8, 3) - 1) < TOL


@pytest.mark.parametrize("perm", [(1, 0, 2), (2, 1, 0), (1, 2, 0)])
def test_lr_fiber_symmetry(perm):
    s = E8.seifert()
    for N in (5, 8):
        assert abs(wc.wrt_lr(s, N) - wc.wrt_lr(s.permuted(perm), N)) < TOL


def test_vanishing():
    for N in range(3, 32, 2):
        assert wc.closed_form(E7, N) == 0
        assert wc.closed_form(D(4), N) == 0
        assert wc.closed_form(D(8), N) == 0
    for N in (3, 5, 7):
        assert abs(wc.wrt_lr(E7, N)) < TOL
        assert abs(wc.wrt_lr(D(4), N)) < TOL


def test_bad_N():
    with pytest.raises(DomainError):
        wc.wrt_lr(E6, 1)
    with pytest.raises(DomainError):
        wc.closed_form(E6, 1)


def test_parallel_is_bit_identical():
    a = wc.compute(E8, 30, "lr", jobs=1).to_json()
    b = wc.compute(E8, 30, "lr", jobs=3).to_json()
    assert a == b


def test_result_record():
    r = wc.compute(E6, 7, "closed")
    d = json.loads(r.to_json())
    assert set(d) == {"manifold", "N", "precision_bits", "tau_re", "tau_im", "normalized_lhs_re", "normalized_lhs_im", "method"}
    assert d["manifold"] == "E6" and d["method"] == "closed"
    with mpmath.workprec(256):
        assert abs(mpmath.mpf(d["tau_re"]) - mpmath.re(r.tau)) < mpmath.mpf(10) ** -70
    with pytest.raises(DomainError):
        wc.compute(E6, 7, "fast")


# --------------------------------------------------------- Eichler limits


def test_eichler_integer_values():
    assert abs(wc.eichler_limit_integer(2, 1, 1) - mpmath.expjpi(mpmath.mpf(1) / 4) / 2) < TOL
    assert abs(wc.eichler_limit_integer(6, 3, -2) - mpmath.expjpi(mpmath.mpf(-3) / 2) / 2) < TOL
    for P, a in [(3, 1), (7, 4), (30, 29)]:
        assert abs(wc.eichler_limit_integer(P, a, 0) - mpmath.mpf(P - a) / P) < TOL
    with pytest.raises(DomainError):
        wc.eichler_limit_integer(3, 3, 1)


@given(st.integers(1, 8), st.integers(-20, 20), st.integers(1, 9))
def test_eichler_rational_periodic_and_odd(P, a, N):
    v = wc.eichler_limit_rational(P, a, N, 128)
    assert abs(v - wc.eichler_limit_rational(P, a + 2 * P, N, 128)) < mpmath.mpf(2) ** -100
    assert abs(v + wc.eichler_limit_rational(P, -a, N, 128)) < mpmath.mpf(2) ** -100


def test_eichler_zero_character():
    assert wc.eichler_limit_rational(5, 5, 3) == 0


@pytest.mark.parametrize("P,a,N", [(2, 1, 3), (3, 2, 5), (5, 1, 4)])
def test_eichler_radial_oracle(P, a, N):
    assert abs(wc.eichler_radial_limit(P, a, N) - wc.eichler_limit_rational(P, a, N)) < 1e-4


# ----------------------------------------------------------------- tau_3


def test_tau3_values():
    assert wc.tau3_linking(wc.dynkin_matrix("E7")) == (0, 0)
    assert wc.tau3_linking(wc.dynkin_matrix("D", 6)) == (0, 0)
    assert wc.tau3_linking(wc.LinkingMatrix(())) == (1, 0)
    assert wc.tau3_linking(wc.LinkingMatrix(((1,),))) == (0, 2)
    assert wc.tau3_linking(wc.LinkingMatrix(((-1,),))) == (0, -2)


def test_tau3_nonvanishing_cases():
    assert wc.tau3_linking(wc.dynkin_matrix("E8")) != (0, 0)
    assert wc.tau3_linking(wc.dynkin_matrix("D", 5)) != (0, 0)


def test_signature():
    assert wc.dynkin_matrix("E8").signature() == (0, 8)
    assert wc.LinkingMatrix(((2, 1), (1, 2))).signature() == (2, 0)
    assert wc.LinkingMatrix(((0, 1), (1, 0))).signature() == (1, 1)
    assert wc.LinkingMatrix(((1, 2), (2, 1))).signature() == (1, 1)
    with pytest.raises(DomainError):
        wc.LinkingMatrix(((1, 2), (0, 1)))


def test_tau3_refuses_large():
    L = wc.LinkingMatrix(tuple(tuple(-2 if i == j else 0 for j in range(25)) for i in range(25)))
    with pytest.raises(DomainError):
        wc.tau3_linking(L)


# --------------------------------------------------------- torus links


def test_kashaev_degenerate():
    assert abs(wc.kashaev_torus_link(1, 5)) < TOL


def test_torus_link_relations():
    for N in range(3, 13):
        assert wc.relation_d2_t24(N) < TOL
    for K in (3, 5, 7):
        for N in (2, 6, 10, 14):
            assert wc.relation_d_odd_link(K, N) < TOL
    with pytest.raises(DomainError):
        wc.relation_d_odd_link(4, 6)


def test_e6_d6_relation():
    for N in (3, 6, 9, 12):
        assert wc.relation_e6_d6(N) < TOL
        assert wc.relation_e6_d6(N, method="closed") < TOL
        assert wc.relation_e6_d6(N, variant="literal") > 0.1
