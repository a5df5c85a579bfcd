import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from combforge import (
    ConvergenceError,
    CriticalSequence,
    InputError,
    RealPolynomial,
    critical_sequence_of,
    poly_from_critical_values,
    validate,
    vcomb_of,
)
from combforge.critpoly import ALTERNATING, UP_DOWN, TieError, construct_from_critical_values
from strategies import direct_critical_fit, random_up_down, up_down_sequences


@pytest.mark.parametrize(
    "values,kind,expected",
    [
        ((1, -1, 2), UP_DOWN, (True, None)),
        ((1, 2, 3), UP_DOWN, (False, 2)),
        ((1, 1), ALTERNATING, (False, 1)),
        ((1, -1, 1), ALTERNATING, (True, None)),
    ],
)
def test_validate_examples(values, kind, expected):
    assert validate(CriticalSequence(values, kind)) == expected


def test_validate_strict_flags_ties():
    assert validate(CriticalSequence((1, 1, 0)), strict=False) == (True, None)
    assert validate(CriticalSequence((1, 1, 0)), strict=True)[0] is False


@pytest.mark.parametrize(
    "values,coeffs",
    [
        ((-1,), [-1, 0, 1]),
        ((-1, 1), [-1, 0, 6, -4]),
        ((1, -1, 1), [1, 0, -32, 64, -32]),
    ],
)
def test_golden_polynomials(values, coeffs):
    P = poly_from_critical_values(CriticalSequence(values))
    assert np.allclose(P.coeffs, coeffs, atol=1e-9)


def test_three_values_match_transported_chebyshev():
    P = poly_from_critical_values(CriticalSequence((1, -1, 1)))
    T4 = RealPolynomial([1, 0, -8, 0, 8])
    ref = -T4.compose_affine(math.sqrt(2), -math.sqrt(2) / 2)
    assert np.allclose(P.coeffs, ref.coeffs, atol=1e-9)


def test_ties_and_invalid_sequences_rejected():
    with pytest.raises(TieError):
        poly_from_critical_values(CriticalSequence((1.0, 1.0)))
    with pytest.raises(InputError):
        poly_from_critical_values(CriticalSequence((1.0, 2.0, 3.0)))
    with pytest.raises(InputError):
        CriticalSequence((1.0,), kind="sideways")


@settings(max_examples=40)
@given(up_down_sequences())
def test_roundtrip(values):
    res = construct_from_critical_values(CriticalSequence(values))
    assert res.residual < 1e-8
    seq, pts = critical_sequence_of(res.poly)
    assert np.allclose(seq.values, values, atol=1e-8)
    assert np.allclose(pts, res.critical_points, atol=1e-7)
    assert pts[0] == pytest.approx(0.0, abs=1e-8)
    assert pts[-1] == pytest.approx(1.0 if len(values) > 1 else 0.0, abs=1e-8)
    assert np.all(np.diff(pts) > 0)


@settings(max_examples=30)
@given(up_down_sequences(min_size=2))
def test_interlacing_of_extrema(values):
    P = poly_from_critical_values(CriticalSequence(values))
    second = P.deriv(2)
    _, pts = critical_sequence_of(P)
    kinds = np.sign(second(np.array(pts)))
    assert np.all(kinds != 0)
    assert np.all(kinds[1:] == -kinds[:-1])


def test_uniqueness_against_direct_parametrization(rng):
    checked = 0
    for _ in range(40):
        values = random_up_down(rng, int(rng.integers(2, 7)))
        oracle, res = direct_critical_fit(values, frame=(-1.0, 2.0))
        if res > 1e-10:
            continue  # the oracle did not converge; nothing to compare
        alt = construct_from_critical_values(CriticalSequence(values), frame=(-1.0, 2.0)).poly
        scale = max(1.0, np.max(np.abs(oracle)))
        assert np.max(np.abs(alt.coeffs - oracle)) <= 1e-8 * scale
        # transport the alternative frame back onto the standard one
        std = poly_from_critical_values(CriticalSequence(values))
        back = alt.compose_affine(3.0, -1.0)
        assert np.allclose(back.coeffs, std.coeffs, atol=1e-8 * max(1.0, np.max(np.abs(std.coeffs))))
        checked += 1
    assert checked >= 30


@settings(max_examples=25)
@given(st.integers(1, 8), st.data())
def test_alternating_values_give_real_zeros(m, data):
    mags = data.draw(st.lists(st.floats(0.1, 5), min_size=m, max_size=m))
    first = data.draw(st.sampled_from([1, -1]))
    values = tuple(first * (-1) ** j * a for j, a in enumerate(mags))
    P = poly_from_critical_values(CriticalSequence(values, ALTERNATING))
    z = np.roots(P.coeffs[::-1])
    assert np.max(np.abs(z.imag)) < 1e-8 * max(1.0, np.max(np.abs(z)))


def test_critical_sequence_examples():
    seq, pts = critical_sequence_of(RealPolynomial([0, -0.75, 0, 1]))
    assert pts == pytest.approx((-0.5, 0.5))
    assert seq.values == pytest.approx((0.25, -0.25))
    seq, pts = critical_sequence_of(RealPolynomial([0, 0, 1]))
    assert pts == pytest.approx((0.0,)) and seq.values == pytest.approx((0.0,))
    with pytest.raises(InputError):
        critical_sequence_of(RealPolynomial([0, 1, 0, 1]))


def test_vcomb_examples():
    v = vcomb_of(RealPolynomial([0, -0.75, 0, 1]))
    assert v.to_json()["strip"] == pytest.approx([0, 3 * math.pi])
    assert [lvl for lvl, _ in v.rays] == [1, 2]
    assert all(tip == pytest.approx(math.log(0.25)) for _, tip in v.rays)
    assert vcomb_of(RealPolynomial([0, 0, 1])).rays == ()
    one = vcomb_of(RealPolynomial([-1, 0, 1]))
    assert one.rays == ((1, pytest.approx(0.0)),)
    with pytest.raises(InputError):
        vcomb_of(RealPolynomial([1, 0, 1]))


def test_convergence_error_reports_residual():
    err = ConvergenceError("x", residual=0.5)
    assert err.residual == 0.5 and isinstance(err, RuntimeError)
