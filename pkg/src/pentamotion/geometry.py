"""The sphere-centre curve of the platform line and the ellipsoid loci.

``sigma_P(t)`` is the centre of the sphere on which the platform point
``p_t = n + (t - a_r) d`` moves.  The centres lie on a straight cubic circle
meeting the ideal plane in the direction of the z-axis (``t = a4``) and in
the cyclic points; ``t -> infinity`` gives ``M5``, ``t = 0`` gives ``M1``.

Under the one-parameter family of directions ``h`` the point ``p_t`` of the
``L = 0`` configuration sweeps an ellipsoid of rotation about a vertical
axis through the common centre ``C = sigma_P(c)``.

For Type 2 designs the centre curve splits into a circle in ``z = 0`` and a
vertical line; only the circle is parametrized here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .design import DesignParams, leg_params, legs_for, platform_point
from .errors import IdealPoint
from .kinematics import rotation_translation
from .selfmotion import line_symmetric_frame, solve_f
from .tolerance import get_tolerance


def sigma_P(design: DesignParams, t) -> np.ndarray:
    """Sphere centre for the platform point with parameter ``t``.

    ``t = inf`` (either sign) is the ideal point of the platform line and maps
    to ``M5`` at the origin.
    """
    if isinstance(t, (int, float)) and math.isinf(t):
        return np.zeros(3)
    A, C, ar, ac, a4 = design.A, design.C, design.a_r, design.a_c, design.a4
    t = float(t)
    if abs(t - a4) <= get_tolerance() * max(1.0, design.scale):
        raise IdealPoint("t = a4 maps to the ideal point of the z-axis")
    den = (t - ar) ** 2 + ac**2
    z = C * a4 / (a4 - t) if a4 != 0.0 else 0.0
    return np.array([A * (ar * ar + ac * ac - t * ar) / den, -A * ac * t / den, z])


def center_point(design: DesignParams) -> tuple[float, np.ndarray]:
    """Parameter ``c`` and centre ``C`` shared by all ellipsoids."""
    if abs(design.a4 - design.a_r) <= get_tolerance() * max(1.0, design.scale):
        return math.inf, np.zeros(3)
    c = (design.a4**2 - design.a_c**2 - design.a_r**2) / (2 * (design.a4 - design.a_r))
    return c, sigma_P(design, c)


@dataclass(frozen=True, eq=False)
class Ellipsoid:
    """Ellipsoid of rotation about the vertical axis through ``center``.

    ``degenerate_disc`` marks ``t = a4``: the locus is then the disc of radius
    ``equator_radius`` in the plane ``z = center[2]``.
    """

    center: np.ndarray
    vertex_half_length: float
    equator_radius: float
    degenerate_disc: bool = False
    axis: tuple = (0.0, 0.0, 1.0)

    def implicit(self, p) -> np.ndarray:
        """Value of ``rho^2/equator^2 + dz^2/vertex^2 - 1`` (zero on the surface)."""
        if self.degenerate_disc:
            raise ValueError("the degenerate locus is a disc; use plane_residual")
        p = np.asarray(p, dtype=float)
        dx = p[..., 0] - self.center[0]
        dy = p[..., 1] - self.center[1]
        dz = p[..., 2] - self.center[2]
        return (dx * dx + dy * dy) / self.equator_radius**2 + dz * dz / self.vertex_half_length**2 - 1.0

    def plane_residual(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        return p[..., 2] - self.center[2]

    def is_sphere(self, tol: float | None = None) -> bool:
        tol = get_tolerance() if tol is None else tol
        return abs(self.vertex_half_length - self.equator_radius) <= tol * max(1.0, self.equator_radius)


def ellipsoid_for(design: DesignParams, t: float) -> Ellipsoid:
    _, C = center_point(design)
    vertex = abs(design.a4 - t)
    equator = math.sqrt((design.a_r - t) ** 2 + design.a_c**2)
    if vertex <= get_tolerance() * max(1.0, design.scale):
        _, _, p4 = leg_params(design)
        center = np.array([C[0], C[1], p4])
        return Ellipsoid(center, 0.0, equator, degenerate_disc=True)
    return Ellipsoid(C, vertex, equator)


def l_zero_pose(design: DesignParams, h):
    """The ``L = 0`` configuration for direction ``h``: ``(frame, e, f)``."""
    h = np.asarray(h, dtype=float)
    r = math.hypot(h[1], h[2])
    if r <= get_tolerance() * max(1.0, abs(h[0])):
        raise ValueError("h1 = h2 = 0 has no distinguished L = 0 solution")
    frame = line_symmetric_frame(design, h)
    e = np.array([h[2] / r, -h[1] / r, 0.0])
    # the Mannheim offset (p5 from h) does not enter the f-solve
    legs = legs_for(design, math.nan, r1_sq=math.nan)
    f, _ = solve_f(design, legs, frame.n, frame.d, e)
    return frame, np.r_[0.0, e], f


def locus_point(design: DesignParams, h, t: float) -> np.ndarray:
    """Image of ``p_t`` in the ``L = 0`` configuration for direction ``h``."""
    frame, e, f = l_zero_pose(design, h)
    R, s = rotation_translation(e, f)
    return R @ platform_point(design, frame.n, frame.d, t) + s
