import numpy as np
import pytest
from hypothesis import given, strategies as st

from combforge import InputError, RealPolynomial, real_roots

coeff_lists = st.lists(st.floats(-5, 5, allow_nan=False), min_size=1, max_size=7).filter(
    lambda c: abs(c[-1]) > 1e-3
)


def test_basic_arithmetic():
    P = RealPolynomial([1, 2, 3])
    Q = RealPolynomial([0, 1])
    assert (P * Q).to_list() == [0, 1, 2, 3]
    assert (P + 1).to_list() == [2, 2, 3]
    assert (P - P).is_zero
    assert P.deriv().to_list() == [2, 6]
    assert P.degree == 2 and P.lead == 3
    assert P.monic().lead == 1


def test_zero_polynomial_needs_flag():
    with pytest.raises(InputError):
        RealPolynomial([0.0])
    assert RealPolynomial.zero().is_zero


def test_coefficients_are_read_only():
    P = RealPolynomial([1, 2])
    with pytest.raises(ValueError):
        P.coeffs[0] = 5


def test_from_roots():
    P = RealPolynomial.from_roots([1, 2, 3], lead=2)
    assert np.allclose(P(np.array([1.0, 2.0, 3.0])), 0)
    assert P.lead == 2


@given(coeff_lists, st.floats(-3, 3), st.floats(0.1, 3), st.floats(-2, 2))
def test_compose_affine_matches_evaluation(c, x, a, b):
    P = RealPolynomial(c)
    assert P.compose_affine(a, b)(x) == pytest.approx(P(a * x + b), rel=1e-9, abs=1e-9)


@given(coeff_lists, st.floats(-2, 2))
def test_integ_then_deriv_is_identity(c, lb):
    P = RealPolynomial(c)
    I = P.integ(lbnd=lb)
    assert I(lb) == pytest.approx(0.0, abs=1e-12)
    assert np.allclose(I.deriv().coeffs, P.coeffs)


@given(st.lists(st.floats(-3, 3, allow_nan=False), min_size=1, max_size=8, unique=True))
def test_real_roots_recovers_distinct_roots(r):
    r = sorted(r)
    if len(r) > 1 and min(np.diff(r)) < 1e-2:
        return
    found = real_roots(RealPolynomial.from_roots(r)).real
    assert np.allclose(np.sort(found), r, atol=1e-8)


def test_real_roots_double_root_counted_twice():
    P = RealPolynomial.from_roots([0.5, 0.5, -1])
    rs = real_roots(P)
    assert rs.all_real
    assert np.allclose(np.sort(rs.real), [-1, 0.5, 0.5], atol=1e-7)


def test_real_roots_separates_complex():
    rs = real_roots(RealPolynomial([1, 0, 1]))
    assert not rs.all_real
    assert rs.max_imag == pytest.approx(1.0)
