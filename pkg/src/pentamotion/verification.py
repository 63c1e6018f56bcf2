"""Independent oracles: sphere fitting, residual reports and spherical-point checks.

Sphere fits use the bilinear quadratic form ``q.q`` (no conjugation), so that
complex points are tested against the algebraic sphere condition and not a
Hermitian one.  A point ``x`` of the moving system runs on a sphere during a
motion iff the samples ``R_k x + s_k`` fit a sphere exactly.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .design import DesignParams, LegParams, legs_for, platform_point, r1_from_p5
from .errors import Degenerate, PreconditionError, TraceFailure
from .geometry import ellipsoid_for, locus_point, sigma_P
from .kinematics import StudyPose, rotation_translation
from .selfmotion import SelfMotion, constraint_residuals, leg_values, line_symmetric_frame, p5_from_h
from .surface import krames_reflect
from .tolerance import get_tolerance

MIN_TRAJECTORY_SAMPLES = 25


@dataclass(frozen=True, eq=False)
class SphereFit:
    """``|q - center|^2 = radius_sq`` in the bilinear sense; ``rms_residual`` of the linear system."""

    center: np.ndarray
    radius_sq: complex | float
    rms_residual: float
    scale: float

    @property
    def relative_rms(self) -> float:
        return self.rms_residual / self.scale if self.scale > 0 else self.rms_residual


def fit_sphere(points, allow_complex: bool = False) -> SphereFit:
    """Least-squares sphere through ``points`` (at least five).

    Solves ``2 c.q + k = q.q`` for ``c`` and ``k = radius_sq - c.c``.
    """
    pts = np.asarray(points)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise ValueError("points must have shape (n, 3)")
    if len(pts) < 5:
        raise PreconditionError("a sphere fit needs at least five points")
    if np.iscomplexobj(pts):
        if not allow_complex:
            raise ValueError("complex points need allow_complex=True")
    else:
        pts = pts.astype(float)
    A = np.concatenate([2 * pts, np.ones((len(pts), 1), dtype=pts.dtype)], axis=1)
    b = np.sum(pts * pts, axis=1)
    sol, _, rank, _ = np.linalg.lstsq(A, b, rcond=None)
    if rank < 4:
        raise Degenerate(f"sphere fit is rank-deficient (rank {rank}): coplanar or collinear data")
    center = sol[:3]
    radius_sq = sol[3] + center @ center
    if not np.iscomplexobj(pts):
        radius_sq = float(radius_sq)
    rms = float(np.sqrt(np.mean(np.abs(A @ sol - b) ** 2)))
    scale = float(np.sqrt(np.mean(np.abs(b) ** 2)))
    return SphereFit(center, radius_sq, rms, scale)


def trajectory(poses, x) -> np.ndarray:
    """Positions ``R_k x + s_k`` of the moving point ``x`` (may be complex)."""
    E = np.array([p.e for p in poses]).reshape(-1, 4)
    F = np.array([p.f for p in poses]).reshape(-1, 4)
    R, s = rotation_translation(E, F)
    return R @ np.asarray(x) + s


def sphere_condition(pose: StudyPose, x, X, R: float) -> float:
    """The homogeneous sphere condition for ``e0 = 0``.

    Vanishes iff the moving point ``x`` is displaced onto the sphere with
    centre ``X`` and radius ``R``.  Its value equals
    ``N (|R x + s - X|^2 - R^2)`` with ``N = e1^2 + e2^2 + e3^2``.
    """
    e0, e1, e2, e3 = pose.e
    f0, f1, f2, f3 = pose.f
    if abs(e0) > get_tolerance() * math.sqrt(pose.norm_sq):
        raise PreconditionError("the sphere condition is stated for e0 = 0")
    x_, y, z = x
    X_, Y, Z = X
    return (
        (x_**2 + y**2 + z**2 + X_**2 + Y**2 + Z**2 - R**2) * (e1**2 + e2**2 + e3**2)
        + 4 * (f0**2 + f1**2 + f2**2 + f3**2)
        - 2 * (x_ * X_ - y * Y - z * Z) * e1**2
        + 2 * (x_ * X_ - y * Y + z * Z) * e2**2
        + 2 * (x_ * X_ + y * Y - z * Z) * e3**2
        - 4 * (y * X_ + x_ * Y) * e1 * e2
        - 4 * (z * X_ + x_ * Z) * e1 * e3
        - 4 * (z * Y + y * Z) * e2 * e3
        - 4 * (x_ + X_) * (e3 * f2 - e2 * f3)
        - 4 * (y + Y) * (e1 * f3 - e3 * f1)
        - 4 * (z + Z) * (e2 * f1 - e1 * f2)
        + 4 * (x_ - X_) * e1 * f0
        + 4 * (y - Y) * e2 * f0
        + 4 * (z - Z) * e3 * f0
    )


@dataclass(frozen=True)
class ResidualReport:
    count: int
    study: float
    e0: float
    f0: float
    omega2: float
    omega3: float
    omega4: float
    pi5: float
    leg_drift: float
    tol: float
    leg_tol: float
    passed: bool
    vacuous: bool

    def as_dict(self) -> dict:
        return asdict(self)


def _drift(values: np.ndarray) -> float:
    """Largest relative spread ``(max - min) / max(1, max |v|)`` over the columns."""
    spread = values.max(axis=0) - values.min(axis=0)
    scale = np.maximum(1.0, np.abs(values).max(axis=0))
    return float(np.max(spread / scale))


def motion_residual_report(design: DesignParams, h, poses, legs: LegParams | None = None,
                           tol: float | None = None, leg_tol: float = 1e-8) -> ResidualReport:
    """Per-pose maxima of all self-motion conditions over ``poses``."""
    tol = get_tolerance() if tol is None else tol
    poses = list(poses)
    if not poses:
        return ResidualReport(0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, tol, leg_tol, True, True)
    frame = line_symmetric_frame(design, h)
    if legs is None:
        p5 = p5_from_h(design, h)
        legs = legs_for(design, p5, r1_from_p5(design, p5))
    study = e0 = f0 = o2 = o3 = o4 = pi5 = 0.0
    for pose in poses:
        p = pose.normalized()
        study = max(study, abs(float(p.study_residual)))
        e0 = max(e0, abs(float(p.e[0])))
        f0 = max(f0, abs(float(p.f[0])))
        r = constraint_residuals(design, legs, frame.n, frame.d, p)
        o2 = max(o2, abs(r.omega2))
        o3 = max(o3, abs(r.omega3))
        o4 = max(o4, abs(r.omega4))
        pi5 = max(pi5, abs(r.pi5))
    drift = _drift(leg_values(design, legs, frame.n, frame.d, poses))
    passed = max(study, e0, f0, o2, o3, o4, pi5) <= tol and drift <= leg_tol
    return ResidualReport(len(poses), study, e0, f0, o2, o3, o4, pi5, drift, tol, leg_tol, passed, False)


@dataclass(frozen=True)
class EllipsoidStats:
    t: float
    count: int
    max_residual: float
    planar: bool


def ellipsoid_membership(design: DesignParams, t: float, grid: int = 20, h0: float = 1.0) -> EllipsoidStats:
    """Images of ``p_t`` over a ``grid x grid`` family of directions ``h``.

    ``h = (h0, h1, h2)`` with ``h1, h2`` on an evenly spaced grid in ``[-3, 3]``
    that avoids ``h1 = h2 = 0``.  Reports the implicit-form residual, or the
    distance from the plane ``z = p4`` in the degenerate case ``t = a4``.
    """
    el = ellipsoid_for(design, t)
    vals = np.linspace(-3.0, 3.0, grid) + 0.0371
    worst = 0.0
    for h1 in vals:
        for h2 in vals:
            x = locus_point(design, (h0, h1, h2), t)
            res = el.plane_residual(x) if el.degenerate_disc else el.implicit(x)
            worst = max(worst, abs(float(res)))
    return EllipsoidStats(float(t), grid * grid, worst, el.degenerate_disc)


@dataclass(frozen=True, eq=False)
class KramesReport:
    pose_index: int
    t_samples: np.ndarray
    fits: list
    center_offsets: np.ndarray
    predicted_center_errors: np.ndarray
    special_borel: bool
    config: object = field(repr=False)

    @property
    def max_rms(self) -> float:
        return float(max(f.rms_residual for f in self.fits))

    @property
    def max_center_offset(self) -> float:
        return float(np.max(self.center_offsets))


def krames_check(motion: SelfMotion, h, pose_index: int, t_samples, poses) -> KramesReport:
    """Fit spheres to the trajectories of the reflected curve samples."""
    if len(poses) < MIN_TRAJECTORY_SAMPLES:
        raise PreconditionError(f"need at least {MIN_TRAJECTORY_SAMPLES} poses")
    cfg = krames_reflect(motion.design, h, pose_index, t_samples, motion=motion, poses=poses)
    fits = [fit_sphere(trajectory(poses, x)) for x in cfg.P_bar_samples]
    centers = np.array([f.center for f in fits])
    offsets = cfg.p_bar.distance(centers)
    predicted = np.linalg.norm(centers - cfg.sphere_centers(motion.design, motion), axis=1)
    return KramesReport(pose_index, cfg.t_samples, fits, np.atleast_1d(offsets), predicted, cfg.special_borel, cfg)


# Worked example whose spherical-point locus is known in closed form:
# design (-1, -5, 7, 4, 2), h = (1, 3/2, 1/2).  In moving coordinates the
# isotropic planes through the platform line are
#     91x - 84y - 126z - 122 + s (147y - 98z + 714) i = 0,   s = +1, -1,
# and the plane with sign s carries the cubic  Re + s Im i = 0  in (y, z).
WORKED_DESIGN = (-1.0, -5.0, 7.0, 4.0, 2.0)
WORKED_H = (1.0, 1.5, 0.5)
WORKED_P5 = 527538 / 82369

# (coefficient, power of y, power of z)
CUBIC_RE = (
    (274400, 3, 0), (3374238, 1, 1), (13169366, 0, 1), (3927840, 2, 0), (-30870, 2, 1),
    (-5472908, 0, 2), (-1165514, 1, 2), (15910300, 1, 0), (113190, 0, 3), (17761620, 0, 0),
)
CUBIC_IM = (
    (984410, 2, 1), (-1840195, 2, 0), (9573816, 1, 1), (-115248, 1, 2), (-15809850, 1, 0),
    (-29479660, 0, 0), (817369, 0, 2), (20061237, 0, 1), (-408170, 0, 3),
)


def _cubic_in_y(terms, z) -> np.ndarray:
    """Coefficients in ``y`` (highest power first) at fixed ``z``."""
    c = np.zeros(4, dtype=complex)
    for a, i, j in terms:
        c[3 - i] += a * z**j
    return c


def isotropic_x(y, z, sign: int):
    return (84 * y + 126 * z + 122 - sign * (147 * y - 98 * z + 714) * 1j) / 91


def isotropic_cubic_value(y, z, sign: int):
    re = sum(a * y**i * z**j for a, i, j in CUBIC_RE)
    im = sum(a * y**i * z**j for a, i, j in CUBIC_IM)
    return re + sign * 1j * im


def isotropic_cubic_points(sign: int, count: int) -> np.ndarray:
    """``count`` complex points ``(x, y, z)`` on the cubic in the plane with ``sign``.

    ``z`` runs over a fixed complex path; the three roots in ``y`` are collected
    in order until ``count`` points are available.
    """
    out = []
    k = 0
    while len(out) < count:
        if k > 100 * count:
            raise TraceFailure("cubic sampling did not produce enough finite points")
        z = 0.7 * np.exp(2j * np.pi * (k + 0.25) / max(count, 3)) + 0.3 * k / max(count, 1)
        k += 1
        c = _cubic_in_y(CUBIC_RE, z) + sign * 1j * _cubic_in_y(CUBIC_IM, z)
        if abs(c[0]) <= 1e-12 * np.max(np.abs(c)):
            continue
        for y in np.roots(c):
            if np.isfinite(y) and len(out) < count:
                out.append((isotropic_x(y, z, sign), y, z))
    return np.array(out, dtype=complex)


@dataclass(frozen=True)
class CubicsReport:
    on_curve_rms: dict
    off_curve_rms: dict
    line_rms: float
    line_center_error: float
    generic_rms: float
    separation: float
    tol: float
    passed: bool

    def as_dict(self) -> dict:
        return asdict(self)


def appendix_cubics_check(count: int = 8, poses=None, n_poses: int = 60, tol: float = 1e-8) -> CubicsReport:
    """Spherical-point checks for the worked example (relative rms of the fits).

    * points on each imaginary cubic fit complex spheres;
    * the same points moved off the cubic inside their plane do not;
    * real points of the platform line fit real spheres centred on ``P_t``;
    * generic real moving points do not.
    """
    from .design import classify

    design = classify(*WORKED_DESIGN)
    motion = SelfMotion.from_h(design, WORKED_H)
    poses = motion.trace(n_poses) if poses is None else list(poses)
    if len(poses) < MIN_TRAJECTORY_SAMPLES:
        raise PreconditionError(f"need at least {MIN_TRAJECTORY_SAMPLES} poses")

    on, off = {}, {}
    for sign in (1, -1):
        pts = isotropic_cubic_points(sign, count)
        on[str(sign)] = [fit_sphere(trajectory(poses, x), allow_complex=True).relative_rms for x in pts]
        moved = pts.copy()
        moved[:, 1] += 0.5
        moved[:, 0] = isotropic_x(moved[:, 1], moved[:, 2], sign)
        off[str(sign)] = [fit_sphere(trajectory(poses, x), allow_complex=True).relative_rms for x in moved]

    ts = np.linspace(-4.0, 11.0, count)
    ts = ts[np.abs(ts - design.a4) > 0.1]
    line_rms, line_err = 0.0, 0.0
    for t in ts:
        fit = fit_sphere(trajectory(poses, platform_point(design, motion.frame.n, motion.frame.d, t)))
        line_rms = max(line_rms, fit.relative_rms)
        line_err = max(line_err, float(np.linalg.norm(fit.center - sigma_P(design, t))))

    rng = np.random.default_rng(7)
    generic = [fit_sphere(trajectory(poses, x)).relative_rms for x in rng.uniform(-5, 5, size=(count, 3))]

    worst_on = max(max(v) for v in on.values())
    best_off = min(min(v) for v in off.values())
    separation = best_off / worst_on if worst_on > 0 else math.inf
    passed = (
        worst_on <= tol
        and separation >= 1e4
        and line_rms <= tol
        and line_err <= tol * max(1.0, design.scale)
        and min(generic) > 1e4 * tol
    )
    return CubicsReport(on, off, line_rms, line_err, float(min(generic)), float(separation), tol, bool(passed))
