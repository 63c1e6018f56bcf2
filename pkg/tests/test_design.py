import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pentamotion.design import (
    PentapodType,
    anchors,
    classify,
    leg_relation_residual,
    leg_params,
    legs_for,
    p5_from_r1,
    r1_from_p5,
)
from pentamotion.errors import InvalidDesign, PreconditionError, SpecialCaseV0, UnsupportedType, ValidationError


def test_classify_example(design_e):
    assert design_e.ptype is PentapodType.TYPE1
    assert design_e.v == 10
    assert design_e.w == 61


def test_classify_type2():
    assert classify(1, 0, 1, 1, 0).ptype is PentapodType.TYPE2


@pytest.mark.parametrize("args, err", [
    ((1, -5, 7, 4, 0), UnsupportedType),
    ((1, 0, 7, 4, 2), UnsupportedType),
    ((0, -5, 7, 4, 2), InvalidDesign),
    ((1, -5, 7, 0, 2), InvalidDesign),
])
def test_classify_rejects(args, err):
    with pytest.raises(err):
        classify(*args)
    assert issubclass(err, ValidationError)


def test_classify_rejects_non_finite():
    with pytest.raises(ValidationError):
        classify(1, -5, math.nan, 4, 2)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.1, 10))
def test_classify_scale_covariant(kappa):
    base = classify(-1, -5, 7, 4, 2)
    scaled = classify(-kappa, -5 * kappa, 7 * kappa, 4 * kappa, 2 * kappa)
    assert scaled.ptype is base.ptype
    assert scaled.v == pytest.approx(kappa * base.v, rel=1e-12)
    assert scaled.w == pytest.approx(kappa**2 * base.w, rel=1e-12)


def test_anchor_points(design_e):
    d = np.array([6, 2, 3]) / 7
    a = anchors(design_e, np.zeros(3), (1, 1.5, 0.5))
    np.testing.assert_allclose(a.m1, -7 * d, atol=1e-14)
    np.testing.assert_allclose(a.m4, -5 * d, atol=1e-14)
    np.testing.assert_allclose(a.M1, [-1, 0, -5])
    np.testing.assert_allclose(a.M5, 0)
    np.testing.assert_allclose(a.m2, np.conj(a.m3))
    np.testing.assert_allclose(a.m5, d)


def test_leg_params_example(design_e):
    p2, p3, p4 = leg_params(design_e)
    assert p4 == pytest.approx(100 / 41, rel=1e-15)
    assert p2 == pytest.approx(-10 * (223 + 244j) / 1681, rel=1e-14)
    assert p3 == p2.conjugate()


def test_leg_params_type2_p4_zero():
    _, _, p4 = leg_params(classify(1, 0, 1, 1, 0))
    assert p4 == 0


def test_r1_from_p5_example(design_e):
    assert r1_from_p5(design_e, 6) == pytest.approx(927514 / 8405, rel=1e-14)
    p5 = 527538 / 82369
    assert leg_relation_residual(design_e, p5, r1_from_p5(design_e, p5)) <= 1e-14


def test_hand_substitution(design_e):
    # 1681 (122 * 6 - 10 R1^2 - 204) + 10 * 3721 * 26 = 0
    r1_sq = Fraction(927514, 8405)
    assert 1681 * (122 * 6 - 10 * r1_sq - 204) + 10 * 3721 * 26 == 0


def test_v_zero_special_case():
    d = classify(-1, -5, 2, 4, 2)
    with pytest.raises(SpecialCaseV0):
        r1_from_p5(d, 2.0)
    with pytest.raises(SpecialCaseV0):
        p5_from_r1(d, 3.0)


def test_p5_from_r1_w_zero():
    with pytest.raises(PreconditionError):
        p5_from_r1(classify(-1, -5, 3, 4, 5), 5.0)


def test_negative_r1_sq_reported(design_e):
    r1_sq = r1_from_p5(design_e, -100.0)
    assert r1_sq < 0
    assert math.isnan(legs_for(design_e, -100.0).R1)


design_values = st.tuples(
    st.floats(-8, 8).filter(lambda x: abs(x) > 0.1),
    st.floats(-8, 8).filter(lambda x: abs(x) > 0.1),
    st.floats(-8, 8),
    st.floats(-8, 8).filter(lambda x: abs(x) > 0.1),
    st.floats(-8, 8).filter(lambda x: abs(x) > 0.1),
)


@settings(max_examples=300, deadline=None)
@given(design_values, st.floats(-20, 20))
def test_leg_relation_round_trip(vals, p5):
    d = classify(*vals)
    if abs(d.v) < 1e-6 or abs(d.w) < 1e-6:
        return
    r1_sq = r1_from_p5(d, p5)
    assert leg_relation_residual(d, p5, r1_sq) <= 1e-12
    if r1_sq > 0:
        assert p5_from_r1(d, math.sqrt(r1_sq)) == pytest.approx(p5, rel=1e-9, abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(design_values)
def test_leg_params_invariants(vals):
    p2, p3, p4 = leg_params(classify(*vals))
    assert p3 == p2.conjugate()
    assert isinstance(p4, float)
