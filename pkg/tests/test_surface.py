import numpy as np
import pytest

from conftest import H_E
from pentamotion.design import platform_point
from pentamotion.kinematics import reflect_in_line, rotation_translation
from pentamotion.surface import (
    generators_from_poses,
    is_borel_special,
    krames_reflect,
    quintic_residual,
    quintic_value,
    sample_generators,
)
from pentamotion.verification import fit_sphere, trajectory


@pytest.fixture(scope="module")
def gens_e(poses_e):
    return generators_from_poses(poses_e)


def test_generators_plucker_and_pedal(gens_e):
    for g in gens_e:
        assert abs(g.line.e @ g.line.f) <= 1e-10
        assert abs(g.pedal @ g.direction) <= 1e-10
        np.testing.assert_allclose(g.pedal, np.cross(g.line.f, g.line.e), atol=1e-14)


def test_generator_directions_on_cubic(motion_e, gens_e):
    F = motion_e.curve
    vals = np.array([F(g.direction) for g in gens_e])
    assert np.max(np.abs(vals)) <= 1e-9 * F.norm()


def test_half_turn_maps_platform_line(design_e, motion_e, poses_e, gens_e):
    ts = np.array([-2.0, 0.0, 1.0, 3.5, 8.0])
    x = platform_point(design_e, motion_e.frame.n, motion_e.frame.d, ts)
    for j in (0, 50, 137):
        R, s = rotation_translation(poses_e[j].e, poses_e[j].f)
        np.testing.assert_allclose(reflect_in_line(gens_e[j].line, x), x @ R.T + s, atol=1e-9)


def test_patch_rows_on_generators(gens_e):
    patch = sample_generators(gens_e[:30], (-10, 10), 20)
    assert patch.shape == (30, 20)
    for g, row in zip(patch.generators, patch.points):
        assert np.max(g.line.distance(row)) <= 1e-10
        diff = row - g.pedal
        np.testing.assert_allclose(np.cross(diff, g.direction), 0, atol=1e-10)


def test_patch_gamma_shift_consistency(gens_e):
    a = sample_generators(gens_e[:5], (-10, 10), 21)
    b = sample_generators(gens_e[:5], (-9, 11), 21)
    np.testing.assert_allclose(b.points[:, :-1], a.points[:, 1:], atol=1e-12)


def test_quintic_on_sampled_surface(gens_e):
    patch = sample_generators(gens_e[::4], (-10, 10), 20)
    _, stats = quintic_residual(patch.points)
    assert stats.count == 50 * 20
    assert stats.max <= 1e-6


def test_quintic_constant_term():
    assert quintic_value(np.zeros(3)) == 46930000.0


def test_quintic_off_surface(gens_e, rng):
    pts = np.array([g.line.point(gm) for g, gm in zip(gens_e[::10], rng.uniform(-5, 5, 20))])
    normal = np.cross(pts - pts.mean(axis=0), [0.3, 0.7, 0.1])
    normal /= np.linalg.norm(normal, axis=1)[:, None]
    scaled, _ = quintic_residual(pts + normal)
    assert np.median(scaled) > 1e-3


def test_quintic_line_intersections(rng):
    for _ in range(100):
        a = rng.uniform(-5, 5, 3)
        d = rng.normal(size=3)
        d /= np.linalg.norm(d)
        u = np.linspace(-20, 20, 4001)
        vals = quintic_value(a + u[:, None] * d)
        assert np.count_nonzero(np.diff(np.sign(vals)) != 0) <= 5


def test_krames_involution(design_e, motion_e, poses_e):
    ts = np.linspace(-3, 9, 10)
    cfg = krames_reflect(design_e, H_E, 17, ts, motion=motion_e, poses=poses_e)
    np.testing.assert_allclose(reflect_in_line(cfg.generator.line, cfg.P_bar_fixed), cfg.P_samples, atol=1e-12)
    assert not cfg.special_borel
    # reflecting p_bar back gives the displaced platform line
    R, s = rotation_translation(poses_e[17].e, poses_e[17].f)
    back = reflect_in_line(cfg.generator.line, cfg.p_bar.point(np.array([0.0, 4.0])))
    p_fixed = platform_point(design_e, motion_e.frame.n, motion_e.frame.d, ts) @ R.T + s
    for q in back:
        dists = np.linalg.norm(np.cross(p_fixed[1:] - p_fixed[0], q - p_fixed[0]), axis=1)
        assert dists.max() <= 1e-9 * np.linalg.norm(p_fixed[1:] - p_fixed[0], axis=1).max()


def test_krames_spheres(design_e, motion_e, poses_e):
    cfg = krames_reflect(design_e, H_E, 17, np.linspace(-3, 9, 10), motion=motion_e, poses=poses_e)
    for x, c in zip(cfg.P_bar_samples, cfg.sphere_centers(design_e, motion_e)):
        fit = fit_sphere(trajectory(poses_e, x))
        assert fit.rms_residual <= 1e-8
        assert cfg.p_bar.distance(fit.center) <= 1e-8
        np.testing.assert_allclose(fit.center, c, atol=1e-8)


@pytest.mark.parametrize("h, flag", [((1, 0, 0), True), ((0, 1, 2), True), ((1, 1.5, 0.5), False)])
def test_borel_flag(h, flag):
    assert is_borel_special(h) is flag


def test_p_a4_trajectory_planar(design_e, motion_e, poses_e):
    x = platform_point(design_e, motion_e.frame.n, motion_e.frame.d, design_e.a4)
    np.testing.assert_allclose(trajectory(poses_e, x)[:, 2], 100 / 41, atol=1e-8)
