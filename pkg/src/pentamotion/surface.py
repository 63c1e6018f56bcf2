"""Basic-surface generators, ruled-surface sampling and the reflected configuration.

Each pose of a line-symmetric motion is a half-turn about a generator of the
basic surface.  Reflecting the platform line ``p`` and the centre curve
``P`` in one generator ``g`` gives a line ``p_bar`` (fixed system) and a curve
``P_bar`` (moving system) whose points again run on spheres, centred on
``p_bar``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .design import DesignParams, platform_point
from .geometry import sigma_P
from .kinematics import PluckerLine, plucker_from_pose, reflect_in_line, rotation_translation
from .selfmotion import SelfMotion
from .tolerance import get_tolerance

DEFAULT_GAMMA_RANGE = (-10.0, 10.0)


@dataclass(frozen=True, eq=False)
class Generator:
    line: PluckerLine
    sweep_param: float

    @property
    def pedal(self) -> np.ndarray:
        return self.line.pedal

    @property
    def direction(self) -> np.ndarray:
        return self.line.e


def generators_from_poses(poses) -> list[Generator]:
    return [Generator(plucker_from_pose(p), float(i)) for i, p in enumerate(poses)]


def generators(design: DesignParams, h, count: int, motion: SelfMotion | None = None) -> list[Generator]:
    motion = SelfMotion.from_h(design, h) if motion is None else motion
    return generators_from_poses(motion.trace(count))


@dataclass(frozen=True, eq=False)
class RuledPatch:
    """``points[j, k] = pedal_j + gamma_k e_j``."""

    points: np.ndarray
    gammas: np.ndarray
    generators: list

    @property
    def shape(self):
        return self.points.shape[:2]


def sample_generators(gens, gamma_range=DEFAULT_GAMMA_RANGE, n_gamma: int = 20) -> RuledPatch:
    gammas = np.linspace(gamma_range[0], gamma_range[1], n_gamma)
    pts = np.array([g.line.point(gammas) for g in gens])
    return RuledPatch(pts, gammas, list(gens))


def sample_basic_surface(design: DesignParams, h, n_gen: int, gamma_range=DEFAULT_GAMMA_RANGE,
                         n_gamma: int = 20, motion: SelfMotion | None = None) -> RuledPatch:
    return sample_generators(generators(design, h, n_gen, motion), gamma_range, n_gamma)


# Implicit equation of the basic surface for the worked example
# (A, C, a_r, a_c, a4) = (-1, -5, 7, 4, 2), h = (1, 3/2, 1/2), p5 = 527538/82369.
# Terms are (coefficient, exponent of X, of Y, of Z).
QUINTIC_TERMS = (
    (46930000, 0, 0, 0),
    (-187188000, 1, 0, 0), (-214586000, 0, 1, 0), (-211012100, 0, 0, 1),
    (-138195885, 2, 0, 0), (195340960, 1, 1, 0), (556424125, 1, 0, 1),
    (323499460, 0, 2, 0), (639976950, 0, 1, 1), (115381175, 0, 0, 2),
    (193802233, 3, 0, 0), (378103208, 2, 1, 0), (1163441469, 2, 0, 1),
    (-582502914, 1, 2, 0), (812997056, 1, 1, 1), (34883415, 1, 0, 2),
    (-423262296, 0, 3, 0), (-28318339, 0, 2, 1), (-41015170, 0, 1, 2),
    (-53539850, 0, 0, 3),
    (156741893, 4, 0, 0), (-5063828, 3, 1, 0), (507256879, 3, 0, 1),
    (-35065660, 2, 2, 0), (199127898, 2, 1, 1), (-176781955, 2, 0, 2),
    (-5063828, 1, 3, 0), (507256879, 1, 2, 1), (-109272380, 1, 1, 2),
    (-84016380, 1, 0, 3), (-191807553, 0, 4, 0), (199127898, 0, 3, 1),
    (96060335, 0, 2, 2), (13179040, 0, 1, 3),
    (18368287, 5, 0, 0), (-20098036, 4, 1, 0), (25569691, 4, 0, 1),
    (36736574, 3, 2, 0), (-100313675, 3, 0, 2), (-40196072, 2, 3, 0),
    (51139382, 2, 2, 1), (-59658690, 2, 1, 2), (-33771290, 2, 0, 3),
    (18368287, 1, 4, 0), (-100313675, 1, 2, 2), (-20098036, 0, 5, 0),
    (25569691, 0, 4, 1), (-59658690, 0, 3, 2), (-33771290, 0, 2, 3),
)

_QC = np.array([t[0] for t in QUINTIC_TERMS], dtype=float)
_QE = np.array([t[1:] for t in QUINTIC_TERMS])


def quintic_value(points) -> np.ndarray:
    pts = np.asarray(points)
    return np.prod(pts[..., None, :] ** _QE, axis=-1) @ _QC


def quintic_gradient(points) -> np.ndarray:
    pts = np.asarray(points)
    out = []
    for axis in range(3):
        e = _QE.copy()
        c = _QC * e[:, axis]
        e[:, axis] = np.maximum(e[:, axis] - 1, 0)
        out.append(np.prod(pts[..., None, :] ** e, axis=-1) @ c)
    return np.stack(out, axis=-1)


@dataclass(frozen=True)
class QuinticStats:
    count: int
    min: float
    mean: float
    max: float


def quintic_residual(points):
    """Per-point ``|Q(x)| / |grad Q(x)|`` and summary statistics."""
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    val = quintic_value(pts)
    grad = np.linalg.norm(quintic_gradient(pts), axis=-1)
    scaled = np.abs(val) / np.where(grad > 0, grad, np.inf)
    if len(scaled) == 0:
        return scaled, QuinticStats(0, 0.0, 0.0, 0.0)
    return scaled, QuinticStats(len(scaled), float(scaled.min()), float(scaled.mean()), float(scaled.max()))


@dataclass(frozen=True, eq=False)
class ReflectedConfig:
    generator: Generator
    p_bar: PluckerLine
    t_samples: np.ndarray
    P_samples: np.ndarray
    P_bar_fixed: np.ndarray
    P_bar_samples: np.ndarray
    special_borel: bool

    def sphere_centers(self, design: DesignParams, motion: SelfMotion) -> np.ndarray:
        """Predicted centres on ``p_bar``: the fixed points with the moving coordinates of ``p_t``."""
        return platform_point(design, motion.frame.n, motion.frame.d, self.t_samples)


def is_borel_special(h, tol: float | None = None) -> bool:
    tol = get_tolerance() if tol is None else tol
    h = np.asarray(h, dtype=float)
    scale = np.linalg.norm(h)
    return bool(np.hypot(h[1], h[2]) <= tol * scale or abs(h[0]) <= tol * scale)


def krames_reflect(design: DesignParams, h, pose_index: int, t_samples, motion: SelfMotion | None = None,
                   poses=None, count: int = 200) -> ReflectedConfig:
    """Reflect ``p`` (at the selected pose) and ``P`` in the generator of that pose.

    ``p_bar`` lives in the fixed system.  ``P_bar_samples`` are moving-system
    coordinates, so their trajectories are ``R_k P_bar + s_k`` over the poses.
    """
    motion = SelfMotion.from_h(design, h) if motion is None else motion
    poses = motion.trace(count) if poses is None else poses
    pose = poses[pose_index]
    gen = Generator(plucker_from_pose(pose), float(pose_index))
    R, s = rotation_translation(pose.e, pose.f)
    n, d = motion.frame.n, motion.frame.d
    a = R @ platform_point(design, n, d, 0.0) + s
    b = R @ platform_point(design, n, d, 1.0) + s
    a_bar, b_bar = reflect_in_line(gen.line, np.array([a, b]))
    p_bar = PluckerLine.through(a_bar, b_bar - a_bar)
    ts = np.asarray(t_samples, dtype=float)
    P = np.array([sigma_P(design, t) for t in ts])
    P_bar_fixed = reflect_in_line(gen.line, P)
    # attach to the moving system: moving coordinates at the selected pose
    P_bar = (P_bar_fixed - s) @ R
    return ReflectedConfig(gen, p_bar, ts, P, P_bar_fixed, P_bar, is_borel_special(h))
