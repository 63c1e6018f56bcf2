"""Study parameters, Euclidean displacements and Plücker lines.

A displacement acts as ``x -> R x + s``.  Poses are homogeneous 8-tuples
``(e0:e1:e2:e3 : f0:f1:f2:f3)`` on the Study quadric ``e.f = 0``; the
canonical representative has ``e0^2+...+e3^2 = 1`` and its first nonzero
e-component positive.

Lines are stored as ``(e; f)`` with unit direction ``e`` and moment
``f = e x q`` for any point ``q`` on the line, so ``f x e`` is the foot of
the perpendicular from the origin.  With this convention the line-symmetric
pose ``(0, e; 0, f)`` is exactly the half-turn about the line ``(e; f)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import AllZero, NotLineSymmetric, ZeroNorm
from .tolerance import get_tolerance


def _as_vec(x, n):
    arr = np.asarray(x, dtype=float)
    if arr.shape != (n,):
        raise ValueError(f"expected a vector of length {n}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite component")
    return arr


@dataclass(frozen=True, eq=False)
class StudyPose:
    """Homogeneous Study parameters.  ``e`` and ``f`` have four entries each."""

    e: np.ndarray
    f: np.ndarray

    def __post_init__(self):
        e = _as_vec(self.e, 4)
        f = _as_vec(self.f, 4)
        e.flags.writeable = False
        f.flags.writeable = False
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "f", f)
        if self.norm_sq <= 0.0:
            raise ZeroNorm("e0 = e1 = e2 = e3 = 0 is not a displacement")

    @classmethod
    def from_params(cls, e0, e1, e2, e3, f0, f1, f2, f3) -> StudyPose:
        return cls(np.array([e0, e1, e2, e3]), np.array([f0, f1, f2, f3]))

    @property
    def norm_sq(self) -> float:
        return float(self.e @ self.e)

    @property
    def study_residual(self) -> float:
        """``e.f`` scaled by ``|e||f|`` (zero for any pose on the quadric)."""
        scale = np.linalg.norm(self.e) * max(np.linalg.norm(self.f), 1.0)
        return float(abs(self.e @ self.f) / scale)

    def on_study_quadric(self, tol: float | None = None) -> bool:
        tol = get_tolerance() if tol is None else tol
        return self.study_residual <= tol

    def normalized(self) -> StudyPose:
        """Representative with N = 1 and first nonzero e-component positive."""
        k = 1.0 / np.sqrt(self.norm_sq)
        e = self.e * k
        f = self.f * k
        lead = e[np.flatnonzero(np.abs(e) > 1e-12)[0]]
        if lead < 0:
            e, f = -e, -f
        return StudyPose(e, f)

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.e, self.f])

    def __eq__(self, other):
        if not isinstance(other, StudyPose):
            return NotImplemented
        return bool(np.array_equal(self.e, other.e) and np.array_equal(self.f, other.f))

    def __repr__(self):
        e = ", ".join(f"{v:.6g}" for v in self.e)
        f = ", ".join(f"{v:.6g}" for v in self.f)
        return f"StudyPose(e=[{e}], f=[{f}])"


@dataclass(frozen=True, eq=False)
class Displacement:
    R: np.ndarray
    s: np.ndarray

    def apply(self, x):
        """Image ``R x + s``; ``x`` may be complex and may carry leading batch axes."""
        x = np.asarray(x)
        return x @ self.R.T + self.s

    def orthogonality_residual(self) -> float:
        return float(np.max(np.abs(self.R.T @ self.R - np.eye(3))))

    def det_residual(self) -> float:
        return float(abs(np.linalg.det(self.R) - 1.0))


def rotation_translation(e, f):
    """Normalized ``R`` and ``s`` for stacked Study parameters.

    ``e`` and ``f`` have shape ``(..., 4)``; returns ``R`` of shape
    ``(..., 3, 3)`` and ``s`` of shape ``(..., 3)``.
    """
    e = np.asarray(e, dtype=float)
    f = np.asarray(f, dtype=float)
    e0, e1, e2, e3 = np.moveaxis(e, -1, 0)
    f0, f1, f2, f3 = np.moveaxis(f, -1, 0)
    N = e0 * e0 + e1 * e1 + e2 * e2 + e3 * e3
    s = -2.0 * np.stack(
        [
            e0 * f1 - e1 * f0 + e2 * f3 - e3 * f2,
            e0 * f2 - e2 * f0 + e3 * f1 - e1 * f3,
            e0 * f3 - e3 * f0 + e1 * f2 - e2 * f1,
        ],
        axis=-1,
    )
    R = np.stack(
        [
            np.stack([e0 * e0 + e1 * e1 - e2 * e2 - e3 * e3, 2 * (e1 * e2 - e0 * e3), 2 * (e1 * e3 + e0 * e2)], axis=-1),
            np.stack([2 * (e1 * e2 + e0 * e3), e0 * e0 - e1 * e1 + e2 * e2 - e3 * e3, 2 * (e2 * e3 - e0 * e1)], axis=-1),
            np.stack([2 * (e1 * e3 - e0 * e2), 2 * (e2 * e3 + e0 * e1), e0 * e0 - e1 * e1 - e2 * e2 + e3 * e3], axis=-1),
        ],
        axis=-2,
    )
    N = np.asarray(N)
    return R / N[..., None, None], s / N[..., None]


def displacement_from_pose(pose: StudyPose) -> Displacement:
    if pose.norm_sq <= get_tolerance() ** 2:
        raise ZeroNorm("N vanishes")
    R, s = rotation_translation(pose.e, pose.f)
    return Displacement(R, s)


@dataclass(frozen=True, eq=False)
class PluckerLine:
    """Line with unit direction ``e`` and moment ``f = e x q`` (``q`` on the line)."""

    e: np.ndarray
    f: np.ndarray

    def __post_init__(self):
        e = _as_vec(self.e, 3)
        f = _as_vec(self.f, 3)
        ne = np.linalg.norm(e)
        if ne == 0.0:
            raise ValueError("line direction must be nonzero")
        e, f = e / ne, f / ne
        if abs(e @ f) > get_tolerance() * max(1.0, np.linalg.norm(f)):
            raise ValueError(f"Plücker condition violated: e.f = {e @ f:.3e}")
        lead = e[np.flatnonzero(np.abs(e) > 1e-15)[0]]
        if lead < 0:
            e, f = -e, -f
        e.flags.writeable = False
        f.flags.writeable = False
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "f", f)

    @classmethod
    def through(cls, point, direction) -> PluckerLine:
        point = np.asarray(point, dtype=float)
        direction = np.asarray(direction, dtype=float)
        direction = direction / np.linalg.norm(direction)
        return cls(direction, np.cross(direction, point))

    @property
    def pedal(self) -> np.ndarray:
        """Foot of the perpendicular from the origin."""
        return np.cross(self.f, self.e)

    def point(self, gamma):
        gamma = np.asarray(gamma, dtype=float)
        return self.pedal + gamma[..., None] * self.e

    def distance(self, p) -> np.ndarray:
        p = np.asarray(p)
        d = p - self.pedal
        return np.linalg.norm(d - (d @ self.e)[..., None] * self.e, axis=-1)

    def __repr__(self):
        return f"PluckerLine(e={np.array2string(self.e, precision=6)}, f={np.array2string(self.f, precision=6)})"


def plucker_from_pose(pose: StudyPose, tol: float | None = None) -> PluckerLine:
    """Generator line of a line-symmetric pose (``e0 = f0 = 0``)."""
    tol = get_tolerance() if tol is None else tol
    p = pose.normalized()
    scale = max(1.0, float(np.linalg.norm(p.f)))
    if abs(p.e[0]) > tol or abs(p.f[0]) > tol * scale:
        raise NotLineSymmetric(f"e0 = {p.e[0]:.3e}, f0 = {p.f[0]:.3e}")
    return PluckerLine(p.e[1:], p.f[1:])


def pose_from_line(line: PluckerLine) -> StudyPose:
    """The half-turn about ``line`` as a Study pose."""
    return StudyPose(np.r_[0.0, line.e], np.r_[0.0, line.f])


def reflect_in_line(line: PluckerLine, p):
    """Half-turn of ``p`` about ``line`` (accepts complex input and batches)."""
    p = np.asarray(p)
    q = line.pedal
    foot = q + ((p - q) @ line.e)[..., None] * line.e
    return 2.0 * foot - p


def direction_from_h(h, exact: bool = False):
    """Unit vector from the rational sphere parametrization.

    ``d = (2 h0 h1, 2 h0 h2, h1^2 + h2^2 - h0^2) / (h0^2 + h1^2 + h2^2)``.
    With ``exact=True`` the arithmetic runs on :class:`fractions.Fraction` and a
    tuple of fractions is returned.
    """
    if exact:
        h0, h1, h2 = (Fraction(x) for x in h)
    else:
        h0, h1, h2 = (float(x) for x in h)
    eta = h0 * h0 + h1 * h1 + h2 * h2
    if eta == 0:
        raise AllZero("(h0, h1, h2) = (0, 0, 0)")
    d = (2 * h0 * h1 / eta, 2 * h0 * h2 / eta, (h1 * h1 + h2 * h2 - h0 * h0) / eta)
    return d if exact else np.array(d)
