"""Reality intervals for leg lengths and the self-motion-free workspace test.

The trajectory of ``p_t`` lies on the ellipsoid ``E_t`` and on the sphere of
radius ``R_t`` about ``P_t``.  Slicing by the plane through ``P_t`` and the
ellipsoid axis leaves an ellipse ``k`` and a point; real configurations exist
exactly when ``R_t`` lies strictly between the smallest and largest distance
from ``P_t`` to ``k``.  Those extremal distances are attained at pedal points,
found by intersecting ``k`` with the Lagrange curve of the point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from .design import DesignParams
from .errors import IdealPoint
from .geometry import center_point, ellipsoid_for, sigma_P
from .tolerance import get_tolerance

MERGE_TOL = 1e-7


@dataclass(frozen=True, eq=False)
class PedalResult:
    """Pedal points ``(xi, zeta)`` on ``k`` and their distances to the query point."""

    pedal_points: np.ndarray
    distances: np.ndarray
    k1: float
    k2: float
    query: tuple
    circle: bool = False

    def ellipse_residuals(self) -> np.ndarray:
        xi, ze = self.pedal_points.T
        return xi * xi / self.k1**2 + ze * ze / self.k2**2 - 1.0

    def normal_residuals(self) -> np.ndarray:
        """Sine of the angle between ``F - Q`` and the ellipse normal at ``F``."""
        xi, ze = self.pedal_points.T
        nx, nz = xi / self.k1**2, ze / self.k2**2
        dx, dz = xi - self.query[0], ze - self.query[1]
        cross = nx * dz - nz * dx
        den = np.hypot(nx, nz) * np.hypot(dx, dz)
        return np.where(den > 0, cross / np.where(den > 0, den, 1.0), 0.0)


def _circle_pedal(r, xi, zeta):
    dist = math.hypot(xi, zeta)
    if dist == 0.0:
        u = np.array([1.0, 0.0])
    else:
        u = np.array([xi, zeta]) / dist
    pts = np.array([r * u, -r * u])
    q = np.array([xi, zeta])
    return pts, np.linalg.norm(pts - q, axis=1)


def _axis_pedal(k1, k2, zeta):
    """Query on the zeta-axis: vertices plus the symmetric off-axis pair."""
    pts = [(0.0, k2), (0.0, -k2)]
    denom = k2 * k2 - k1 * k1
    if denom != 0.0:
        z = zeta * k2 * k2 / denom
        if abs(z) < k2:
            x = k1 * math.sqrt(1.0 - (z / k2) ** 2)
            pts += [(x, z), (-x, z)]
    pts = np.array(pts)
    return pts, np.linalg.norm(pts - np.array([0.0, zeta]), axis=1)


def pedal_points(k1: float, k2: float, xi_t: float, zeta_t: float) -> PedalResult:
    """Feet of the normals from ``(xi_t, zeta_t)`` to ``xi^2/k1^2 + zeta^2/k2^2 = 1``.

    The Lagrange curve ``(k, kappa1 zeta_t k / ((kappa1 - kappa2) k + kappa2 xi_t))``
    meets the ellipse in a quartic in ``k``.  Equal semi-axes fall back to the
    circle construction (centre distance plus or minus radius).
    """
    if not (k1 > 0 and k2 > 0):
        raise ValueError("semi-axes must be positive")
    query = (float(xi_t), float(zeta_t))
    scale = max(k1, k2, abs(xi_t), abs(zeta_t))
    if abs(k1 - k2) <= get_tolerance() * max(k1, k2):
        pts, dist = _circle_pedal(k1, xi_t, zeta_t)
        return PedalResult(pts, dist, k1, k2, query, circle=True)
    if abs(xi_t) <= 1e-12 * scale:
        pts, dist = _axis_pedal(k1, k2, zeta_t)
        return PedalResult(pts, dist, k1, k2, query)

    K1, K2 = 1.0 / k1**2, 1.0 / k2**2
    D = np.array([K2 * xi_t, K1 - K2])  # ascending powers of k
    D2 = P.polymul(D, D)
    quartic = P.polyadd(
        P.polymul([0.0, 0.0, K1], D2),
        P.polysub([0.0, 0.0, K2 * K1 * K1 * zeta_t * zeta_t], D2),
    )
    roots = np.roots(quartic[::-1])
    ks = sorted(r.real for r in roots if abs(r.imag) <= 1e-9 * max(1.0, abs(r)))
    merged: list[float] = []
    for k in ks:
        if merged and abs(k - merged[-1]) < MERGE_TOL * max(1.0, k1):
            continue
        merged.append(k)

    pts = []
    for k in merged:
        den = (K1 - K2) * k + K2 * xi_t
        if abs(den) > 1e-12 * max(K1, K2) * scale:
            pts.append((k, K1 * zeta_t * k / den))
            continue
        # Lagrange curve passes through its pole: recover zeta from the ellipse
        rem = (1.0 - K1 * k * k) / K2
        if rem >= 0:
            z = math.sqrt(rem)
            pts += [(k, z), (k, -z)]
    pts = np.array(pts, dtype=float).reshape(-1, 2)
    # polish on the ellipse: radial projection keeps the normal condition to first order
    norm = np.sqrt(K1 * pts[:, 0] ** 2 + K2 * pts[:, 1] ** 2)
    pts = pts / norm[:, None]
    dist = np.linalg.norm(pts - np.array(query), axis=1)
    return PedalResult(pts, dist, k1, k2, query)


@dataclass(frozen=True, eq=False)
class RealityInterval:
    """Open interval ``]lower, upper[`` of leg lengths with real configurations."""

    lower: float
    upper: float
    degenerate: bool
    t: float
    xi_t: float = math.nan
    zeta_t: float = math.nan
    pedal: PedalResult | None = None

    def contains(self, length: float) -> bool:
        if self.degenerate:
            return abs(length - self.lower) <= get_tolerance() * max(1.0, self.lower)
        return self.lower < length < self.upper


def reality_interval(design: DesignParams, t: float) -> RealityInterval:
    """Leg-length interval for the leg joining ``p_t`` and ``P_t``."""
    if abs(t - design.a4) <= get_tolerance() * max(1.0, design.scale):
        raise IdealPoint("the leg at t = a4 is a Darboux leg; no finite sphere centre")
    el = ellipsoid_for(design, t)
    _, C = center_point(design)
    Pt = sigma_P(design, t)
    horiz = Pt[:2] - C[:2]
    xi_t = float(np.hypot(*horiz))
    zeta_t = float(Pt[2] - C[2])
    k1, k2 = el.equator_radius, el.vertex_half_length
    scale = max(1.0, design.scale)

    if math.hypot(xi_t, zeta_t) <= get_tolerance() * scale:
        # query at the common centre: distances are the semi-axes themselves
        if el.is_sphere():
            return RealityInterval(k1, k1, True, t, 0.0, 0.0)
        return RealityInterval(min(k1, k2), max(k1, k2), False, t, 0.0, 0.0)

    ped = pedal_points(k1, k2, xi_t, zeta_t)
    lo, hi = float(ped.distances.min()), float(ped.distances.max())
    return RealityInterval(lo, hi, hi - lo <= get_tolerance() * scale, t, xi_t, zeta_t, ped)


def workspace_free(design: DesignParams, t: float, Lmin: float, Lmax: float) -> bool:
    """Sufficient certificate: the leg range misses the reality interval of leg ``t``."""
    if not (0 < Lmin <= Lmax):
        raise ValueError("need 0 < Lmin <= Lmax")
    iv = reality_interval(design, t)
    if iv.degenerate:
        return not (Lmin <= iv.lower <= Lmax)
    return Lmax <= iv.lower or Lmin >= iv.upper
