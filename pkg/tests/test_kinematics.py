from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pentamotion.errors import AllZero, NotLineSymmetric, ZeroNorm
from pentamotion.kinematics import (
    PluckerLine,
    StudyPose,
    direction_from_h,
    displacement_from_pose,
    plucker_from_pose,
    pose_from_line,
    reflect_in_line,
    rotation_translation,
)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
vec3 = st.tuples(finite, finite, finite).map(np.array)


def random_study_pose(rng):
    e = rng.normal(size=4)
    f = rng.normal(size=4)
    f -= (e @ f) / (e @ e) * e
    return StudyPose(e, f)


def random_line(rng):
    return PluckerLine.through(rng.normal(size=3) * 3, rng.normal(size=3))


# --- displacement_from_pose ------------------------------------------------


def test_identity_pose():
    D = displacement_from_pose(StudyPose.from_params(1, 0, 0, 0, 0, 0, 0, 0))
    np.testing.assert_allclose(D.R, np.eye(3), atol=1e-15)
    np.testing.assert_allclose(D.s, 0, atol=1e-15)


def test_half_turn_about_z():
    D = displacement_from_pose(StudyPose.from_params(0, 0, 0, 1, 0, 0, 0, 0))
    np.testing.assert_allclose(D.R, np.diag([-1.0, -1.0, 1.0]), atol=1e-15)
    np.testing.assert_allclose(D.s, 0, atol=1e-15)


def test_hand_expanded_translation():
    # s2 = -2 (e0 f2 - e2 f0 + e3 f1 - e1 f3) = -2 (1 * 1) with e3 = f1 = 1
    D = displacement_from_pose(StudyPose.from_params(0, 0, 0, 1, 0, 1, 0, 0))
    np.testing.assert_allclose(D.R, np.diag([-1.0, -1.0, 1.0]), atol=1e-15)
    np.testing.assert_allclose(D.s, [0.0, -2.0, 0.0], atol=1e-15)


def test_projective_scaling_gives_same_displacement(rng):
    p = random_study_pose(rng)
    a = displacement_from_pose(p)
    b = displacement_from_pose(StudyPose(-3.7 * p.e, -3.7 * p.f))
    np.testing.assert_allclose(a.R, b.R, atol=1e-13)
    np.testing.assert_allclose(a.s, b.s, atol=1e-13)


def test_zero_norm_rejected():
    with pytest.raises(ZeroNorm):
        StudyPose(np.zeros(4), np.ones(4))


def test_random_poses_orthonormal(rng):
    for _ in range(200):
        D = displacement_from_pose(random_study_pose(rng))
        assert D.orthogonality_residual() <= 1e-12
        assert D.det_residual() <= 1e-12


def test_batched_rotation_matches_single(rng):
    poses = [random_study_pose(rng) for _ in range(5)]
    R, s = rotation_translation(np.array([p.e for p in poses]), np.array([p.f for p in poses]))
    for k, p in enumerate(poses):
        D = displacement_from_pose(p)
        np.testing.assert_allclose(R[k], D.R, atol=1e-14)
        np.testing.assert_allclose(s[k], D.s, atol=1e-14)


def test_normalized_convention(rng):
    p = random_study_pose(rng)
    q = StudyPose(-p.e, -p.f).normalized()
    assert q.norm_sq == pytest.approx(1.0, abs=1e-15)
    lead = q.e[np.flatnonzero(np.abs(q.e) > 1e-12)[0]]
    assert lead > 0
    np.testing.assert_allclose(q.as_array(), p.normalized().as_array(), atol=1e-15)


# --- Plücker lines ---------------------------------------------------------


def test_plucker_z_axis():
    line = plucker_from_pose(StudyPose.from_params(0, 0, 0, 1, 0, 0, 0, 0))
    np.testing.assert_allclose(line.e, [0, 0, 1])
    np.testing.assert_allclose(line.f, [0, 0, 0])


def test_plucker_offset_line_pedal():
    # moment f = e x q with q on the line; the pose's translation is twice the pedal point
    pose = StudyPose.from_params(0, 1, 0, 0, 0, 0, 0, 1)
    line = plucker_from_pose(pose)
    np.testing.assert_allclose(line.e, [1, 0, 0])
    np.testing.assert_allclose(line.f, [0, 0, 1])
    np.testing.assert_allclose(line.pedal, -np.cross(line.e, line.f))
    np.testing.assert_allclose(line.pedal, [0, 1, 0])
    np.testing.assert_allclose(displacement_from_pose(pose).s, 2 * line.pedal)


def test_plucker_rejects_non_line_symmetric():
    with pytest.raises(NotLineSymmetric):
        plucker_from_pose(StudyPose.from_params(1, 0, 0, 0, 0, 0, 0, 0))


def test_plucker_condition_enforced():
    with pytest.raises(ValueError):
        PluckerLine(np.array([1.0, 0, 0]), np.array([1.0, 0, 0]))


def test_half_turn_composition(rng):
    """The displacement of a line-symmetric pose is the half-turn about its line."""
    for _ in range(100):
        line = random_line(rng)
        D = displacement_from_pose(pose_from_line(line))
        x = rng.normal(size=(7, 3)) * 4
        np.testing.assert_allclose(D.apply(x), reflect_in_line(line, x), atol=1e-10)
        back = plucker_from_pose(pose_from_line(line))
        np.testing.assert_allclose(back.e, line.e, atol=1e-12)
        np.testing.assert_allclose(back.f, line.f, atol=1e-12)


# --- reflections -----------------------------------------------------------


def test_reflect_examples():
    z = PluckerLine(np.array([0.0, 0, 1]), np.zeros(3))
    np.testing.assert_allclose(reflect_in_line(z, [1.0, 0, 0]), [-1, 0, 0])
    np.testing.assert_allclose(reflect_in_line(z, [1.0, 2, 3]), [-1, -2, 3])


def test_reflect_fixes_line_points(rng):
    line = random_line(rng)
    pts = line.point(np.linspace(-5, 5, 11))
    np.testing.assert_allclose(reflect_in_line(line, pts), pts, atol=1e-12)


def test_reflect_complex_points(rng):
    line = random_line(rng)
    x = rng.normal(size=3) + 1j * rng.normal(size=3)
    y = reflect_in_line(line, x)
    np.testing.assert_allclose(y.real, reflect_in_line(line, x.real), atol=1e-12)
    np.testing.assert_allclose(reflect_in_line(line, y), x, atol=1e-12)


@settings(max_examples=200, deadline=None)
@given(vec3, vec3, vec3)
def test_reflect_involution(point, direction, x):
    if np.linalg.norm(direction) < 1e-3:
        direction = np.array([0.0, 0.0, 1.0])
    line = PluckerLine.through(point, direction)
    np.testing.assert_allclose(reflect_in_line(line, reflect_in_line(line, x)), x, atol=1e-10)


# --- direction_from_h ------------------------------------------------------


def test_direction_examples():
    np.testing.assert_allclose(direction_from_h((1, 0, 0)), [0, 0, -1])
    np.testing.assert_allclose(direction_from_h((0, 1, 0)), [0, 0, 1])
    assert direction_from_h((1, Fraction(3, 2), Fraction(1, 2)), exact=True) == (
        Fraction(6, 7), Fraction(2, 7), Fraction(3, 7))


def test_direction_all_zero():
    with pytest.raises(AllZero):
        direction_from_h((0, 0, 0))


@settings(max_examples=200, deadline=None)
@given(st.tuples(st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50)),
       st.integers(1, 30).map(lambda k: Fraction(k, 7)))
def test_direction_exact_unit_and_scale_invariant(h, kappa):
    if h == (0, 0, 0):
        return
    d = direction_from_h(h, exact=True)
    assert sum(x * x for x in d) == 1
    assert direction_from_h(tuple(kappa * x for x in h), exact=True) == d
    assert direction_from_h(tuple(-kappa * x for x in h), exact=True) == d
