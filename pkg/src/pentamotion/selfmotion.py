"""Constraint system, polynomial recovery and tracing of line-symmetric self-motions.

With ``e0 = 0`` the four constraints ``Psi, Omega2, Omega3, Omega4`` are linear
in ``f0..f3``; solving them gives ``f`` with common denominator
``denom = 2 (e1^2 + e2^2 + e3^2)``.  Two polynomials in ``e = (e1, e2, e3)``
follow:

* ``F = denom * f0`` (cubic), whose real zero set is the line-symmetric motion;
* ``G = N^2 * Pi5`` (quartic), the Mannheim condition after substitution.

Scaling: with ``d`` the unit direction of the platform line, ``L = d.e``,
``eta = h0^2 + h1^2 + h2^2`` and ``lambda = 2 eta``, the identity

    lambda * L * F - eta * G = mu * N^2,    mu = eta * (p5* - p5)

holds once ``n`` is chosen as in :func:`line_symmetric_frame`; ``p5*`` is the
Mannheim offset that makes the motion line-symmetric for the direction ``h``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .design import DesignParams, LegParams, legs_for, platform_point, r1_from_p5
from .errors import (
    DegenerateDirection,
    DivisionFails,
    PreconditionError,
    SingularSystem,
)
from .kinematics import StudyPose, direction_from_h, rotation_translation
from .polynomials import HomogPoly3, binary_roots
from .tolerance import get_tolerance
from .tracing import trace_plane_curve

# monomial order used when quoting cubic coefficients in the literature
CUBIC_ORDER = ((3, 0, 0), (0, 3, 0), (0, 0, 3), (2, 1, 0), (2, 0, 1), (1, 2, 0), (0, 2, 1), (1, 0, 2), (0, 1, 2), (1, 1, 1))


@dataclass(frozen=True, eq=False)
class LineSymmetricFrame:
    h: np.ndarray
    d: np.ndarray
    n: np.ndarray
    lam: float
    L: HomogPoly3

    @property
    def eta(self) -> float:
        return float(self.h @ self.h)


def line_symmetric_frame(design: DesignParams, h) -> LineSymmetricFrame:
    h = np.asarray(h, dtype=float)
    d = direction_from_h(h)
    n = np.array([design.a_c * d[1], -design.a_c * d[0], (design.a_r - design.a4) * d[2]])
    lam = 2.0 * float(h @ h)
    return LineSymmetricFrame(h=h, d=d, n=n, lam=lam, L=HomogPoly3.linear(d))


class ConstraintResiduals(NamedTuple):
    omega2: complex
    omega3: complex
    omega4: float
    pi5: float
    psi: float

    def max_abs(self) -> float:
        return max(abs(x) for x in self)


def _homogeneous_constraints(design, legs, n, d, e, f):
    """Unnormalized ``Psi, Omega2, Omega3, Omega4`` for stacked ``(e, f)``."""
    e = np.asarray(e, dtype=float)
    f = np.asarray(f, dtype=float)
    N = np.sum(e * e, axis=-1)
    R, s = rotation_translation(e, f)
    Rt = R * N[..., None, None]
    st = s * N[..., None]
    m2 = platform_point(design, n, d, design.a2)
    m3 = platform_point(design, n, d, design.a3)
    m4 = platform_point(design, n, d, design.a4)
    x2 = Rt @ m2 + st
    x3 = Rt @ m3 + st
    x4 = Rt @ m4 + st
    omega2 = x2[..., 0] - 1j * x2[..., 1] - legs.p2 * N
    omega3 = x3[..., 0] + 1j * x3[..., 1] - legs.p3 * N
    omega4 = x4[..., 2] - legs.p4 * N
    psi = np.sum(e * f, axis=-1)
    return psi, omega2, omega3, omega4


def _mannheim(design, legs, n, d, e, f):
    """``(R d).(s + R p5)`` for normalized ``R, s`` (invariant under pose scaling)."""
    R, s = rotation_translation(e, f)
    p5v = platform_point(design, n, d, legs.p5)
    Rd = R @ d
    return np.sum(Rd * (s + R @ p5v), axis=-1)


def constraint_residuals(design: DesignParams, legs: LegParams, n, d, pose: StudyPose) -> ConstraintResiduals:
    """Constraint values at the normalized representative of ``pose``."""
    p = pose.normalized()
    psi, o2, o3, o4 = _homogeneous_constraints(design, legs, n, d, p.e, p.f)
    pi5 = _mannheim(design, legs, n, d, p.e, p.f)
    return ConstraintResiduals(complex(o2), complex(o3), float(o4), float(pi5), float(psi))


def _linear_system(design, legs, n, d, e3):
    """Matrix ``M`` and right side ``b`` of the real 4x4 system in ``f``."""
    e3 = np.atleast_2d(np.asarray(e3, dtype=float))
    batch = e3.shape[0]
    e = np.concatenate([np.zeros((batch, 1)), e3], axis=1)

    def rows(f):
        psi, o2, _, o4 = _homogeneous_constraints(design, legs, n, d, e, f)
        return np.stack([psi, o2.real, o2.imag, o4], axis=-1)

    b0 = rows(np.zeros((batch, 4)))
    cols = [rows(np.broadcast_to(np.eye(4)[k], (batch, 4))) - b0 for k in range(4)]
    return np.stack(cols, axis=-1), -b0


def solve_f(design: DesignParams, legs: LegParams, n, d, e):
    """Solve ``Psi, Re Omega2, Im Omega2, Omega4`` for ``f0..f3`` with ``e0 = 0``.

    ``e`` is ``(e1, e2, e3)`` or a stack of them.  Returns ``(f, denom)``
    where ``f`` has a trailing axis of length 4 and ``denom = 2 N``.
    """
    e = np.asarray(e, dtype=float)
    single = e.ndim == 1
    if np.any(np.sum(np.atleast_2d(e) ** 2, axis=-1) == 0.0):
        raise SingularSystem("e = 0 is not a direction")
    M, b = _linear_system(design, legs, n, d, e)
    cond = np.linalg.cond(M)
    if np.any(~np.isfinite(cond)) or np.any(cond > 1e12):
        raise SingularSystem("rank-deficient f-system for this e-direction")
    f = np.linalg.solve(M, b[..., None])[..., 0]
    denom = 2.0 * np.sum(np.atleast_2d(e) ** 2, axis=-1)
    if single:
        return f[0], float(denom[0])
    return f, denom


def _f0_numerator(design, legs, n, d):
    def func(nodes):
        f, denom = solve_f(design, legs, n, d, nodes)
        return denom * f[:, 0]

    return func


def _pi5_numerator(design, legs, n, d):
    def func(nodes):
        f, _ = solve_f(design, legs, n, d, nodes)
        e = np.concatenate([np.zeros((len(nodes), 1)), nodes], axis=1)
        N = np.sum(nodes * nodes, axis=1)
        return N * N * _mannheim(design, legs, n, d, e, f)

    return func


def _sphere_numerator(design, legs, n, d):
    """``N^2 (|R m1 + s - M1|^2 - R1^2)`` after substituting ``f``."""
    m1 = platform_point(design, n, d, 0.0)
    M1 = np.array([design.A, 0.0, design.C])

    def func(nodes):
        f, _ = solve_f(design, legs, n, d, nodes)
        e = np.concatenate([np.zeros((len(nodes), 1)), nodes], axis=1)
        R, s = rotation_translation(e, f)
        x = R @ m1 + s - M1
        N = np.sum(nodes * nodes, axis=1)
        return N * N * (np.sum(x * x, axis=1) - legs.r1_sq)

    return func


def recover_F(design, legs, n, d, normalize: bool = True, shifted: bool = False) -> HomogPoly3:
    """Cubic ``denom * f0`` recovered by interpolation at integer nodes."""
    F = HomogPoly3.interpolate(_f0_numerator(design, legs, n, d), 3, shifted=shifted)
    return F.normalized() if normalize else F


def recover_G(design, legs, n, d, normalize: bool = True, shifted: bool = False) -> HomogPoly3:
    """Quartic numerator of the Mannheim condition after substituting ``f``."""
    G = HomogPoly3.interpolate(_pi5_numerator(design, legs, n, d), 4, shifted=shifted)
    return G.normalized() if normalize else G


def recover_sphere_restriction(design, legs, n, d, normalize: bool = True) -> HomogPoly3:
    """Quartic form of the leg-1 sphere condition after substituting ``f``."""
    S = HomogPoly3.interpolate(_sphere_numerator(design, legs, n, d), 4)
    return S.normalized() if normalize else S


def _legs_any_v(design, p5):
    if design.v_is_zero:
        return legs_for(design, p5, r1_sq=math.nan)
    return legs_for(design, p5)


def factorization_check(design: DesignParams, h, p5: float):
    """Quotient ``mu`` and relative remainder of ``(lambda L F - eta G) / N^2``."""
    frame = line_symmetric_frame(design, h)
    legs = _legs_any_v(design, p5)
    F = recover_F(design, legs, frame.n, frame.d, normalize=False)
    G = recover_G(design, legs, frame.n, frame.d, normalize=False)
    lhs = frame.lam * frame.L * F
    rhs = frame.eta * G
    delta = lhs - rhs
    N2 = HomogPoly3.norm_sq() * HomogPoly3.norm_sq()
    mu = float(delta.coeffs @ N2.coeffs / (N2.coeffs @ N2.coeffs))
    remainder = (delta - mu * N2).norm()
    scale = lhs.norm() + rhs.norm()
    rel = remainder / scale if scale > 0 else remainder
    if rel > 1e3 * get_tolerance():
        raise DivisionFails(f"Delta is not a multiple of N^2 (relative remainder {rel:.3e})")
    return mu, rel


def p5_from_h(design: DesignParams, h) -> float:
    """Mannheim offset that makes ``h`` generate a line-symmetric self-motion."""
    mu0, _ = factorization_check(design, h, 0.0)
    mu1, _ = factorization_check(design, h, 1.0)
    slope = mu1 - mu0
    eta = float(np.dot(h, h))
    if abs(slope) <= get_tolerance() * eta:
        raise DegenerateDirection("H does not depend on p5 at this direction")
    return -mu0 / slope


class QuarticH:
    """The quartic ``H(h0, h1, h2; p5)`` through its polar split.

    Substituting ``h0 = (t1^2 + t0^2) r0``, ``h1 = (t1^2 - t0^2) r1`` and
    ``h2 = 2 t0 t1 r1`` gives ``H = (t0^2 + t1^2)^3 (H2 t1^2 + H1 t0 t1 + H0 t0^2)``
    where ``H0, H1, H2`` depend on ``(r0, r1)`` and ``p5`` only.
    """

    def __init__(self, design: DesignParams):
        self.design = design

    def split(self, p5: float, rho) -> tuple[float, float, float]:
        A, C, ar, ac, a4 = (self.design.A, self.design.C, self.design.a_r, self.design.a_c, self.design.a4)
        r0, r1 = (float(x) for x in rho)
        q = (ar - a4) ** 2 + ac**2
        common = 8 * r0 * r1 * A * (a4 - ar) * (r1**2 + r0**2)
        H1 = common * (ar**2 - a4**2 + ac**2) * ac
        Hm = common * (ar * (ar - a4) ** 2 + ac**2 * (ar - 2 * a4))
        Hp = 2 * q * (
            2 * a4 * (r1**4 - r0**4) * (a4 - ar) * C
            + q * ((r0**4 + r1**4) * (a4 - p5) + 2 * r0**2 * r1**2 * (2 * ar - a4 - p5))
        )
        return (Hp + Hm) / 2, H1, (Hp - Hm) / 2

    def __call__(self, h, p5: float) -> float:
        tau, rho = polar_from_h(h)
        H0, H1, H2 = self.split(p5, rho)
        t0, t1 = tau
        return (t0 * t0 + t1 * t1) ** 3 * (H2 * t1 * t1 + H1 * t0 * t1 + H0 * t0 * t0)


def polar_from_h(h):
    """Invert the polar reparametrization: ``(tau, rho)`` with unit ``tau``."""
    h0, h1, h2 = (float(x) for x in h)
    r1 = math.hypot(h1, h2)
    if r1 == 0.0:
        return (0.0, 1.0), (h0, 0.0)
    phi = math.atan2(h2, h1)
    return (math.sin(phi / 2), math.cos(phi / 2)), (h0, r1)


def h_from_polar(tau, rho) -> np.ndarray:
    t0, t1 = tau
    r0, r1 = rho
    return np.array([(t1 * t1 + t0 * t0) * r0, (t1 * t1 - t0 * t0) * r1, 2 * t0 * t1 * r1])


def h_from_p5(design: DesignParams, p5: float, rho) -> list[np.ndarray]:
    """Real directions ``h`` on the polar ray ``rho`` with ``H(h; p5) = 0``."""
    if rho[0] == 0 and rho[1] == 0:
        raise ValueError("(rho0, rho1) = (0, 0)")
    H0, H1, H2 = QuarticH(design).split(p5, rho)
    # binary quadratic in (tau0 : tau1): H0 tau0^2 + H1 tau0 tau1 + H2 tau1^2
    out = []
    for t0, t1 in binary_roots([H0, H1, H2]):
        h = h_from_polar((t0, t1), rho)
        if np.linalg.norm(h) > 0:
            out.append(h / np.linalg.norm(h))
    return out


def leg_values(design: DesignParams, legs: LegParams, n, d, poses) -> np.ndarray:
    """Per-pose leg quantities that stay constant along a self-motion.

    Columns: leg-1 length ``|R m1 + s - M1|``; the complex Darboux values of
    legs 2 and 3 (real, imaginary parts); the height of ``m4``; and the
    signed offset of ``M5`` from the Mannheim plane of leg 5.
    """
    E = np.array([p.e for p in poses]).reshape(-1, 4)
    Fv = np.array([p.f for p in poses]).reshape(-1, 4)
    R, s = rotation_translation(E, Fv)
    pt = lambda t: platform_point(design, n, d, t)
    M1 = np.array([design.A, 0.0, design.C])
    x1 = R @ pt(0.0) + s
    x2 = R @ pt(design.a2) + s
    x3 = R @ pt(design.a3) + s
    x4 = R @ pt(design.a4) + s
    l2 = x2[:, 0] - 1j * x2[:, 1]
    l3 = x3[:, 0] + 1j * x3[:, 1]
    l5 = _mannheim(design, legs, n, d, E, Fv)
    return np.stack(
        [np.linalg.norm(x1 - M1, axis=1), l2.real, l2.imag, l3.real, l3.imag, x4[:, 2], l5], axis=1
    )


LEG_COLUMNS = ("leg1", "leg2_re", "leg2_im", "leg3_re", "leg3_im", "leg4", "leg5")


@dataclass(frozen=True, eq=False)
class SelfMotion:
    """A line-symmetric self-motion fixed by a design and a direction ``h``."""

    design: DesignParams
    frame: LineSymmetricFrame
    legs: LegParams
    curve: HomogPoly3
    is_special_v0: bool = False

    @classmethod
    def from_h(cls, design: DesignParams, h) -> SelfMotion:
        if design.v_is_zero:
            raise PreconditionError("v = 0: use SelfMotion.special_v0")
        frame = line_symmetric_frame(design, h)
        p5 = p5_from_h(design, h)
        legs = legs_for(design, p5, r1_from_p5(design, p5))
        F = recover_F(design, legs, frame.n, frame.d, normalize=False)
        return cls(design, frame, legs, F)

    @classmethod
    def special_v0(cls, design: DesignParams, h, R1: float, p5: float | None = None) -> SelfMotion:
        if not design.v_is_zero:
            raise PreconditionError("special case requires v = 0 (a_r = a4)")
        if p5 is not None and abs(p5 - design.a_r) > get_tolerance() * max(1.0, design.scale):
            raise PreconditionError(f"v = 0 forces p5 = a4 = a_r = {design.a_r}, got {p5}")
        frame = line_symmetric_frame(design, h)
        legs = legs_for(design, design.a_r, r1_sq=float(R1) ** 2)
        S = recover_sphere_restriction(design, legs, frame.n, frame.d, normalize=False)
        return cls(design, frame, legs, S, is_special_v0=True)

    def pose_at(self, e) -> StudyPose:
        f, _ = solve_f(self.design, self.legs, self.frame.n, self.frame.d, e)
        return StudyPose(np.r_[0.0, e], f).normalized()

    def trace(self, count: int) -> list[StudyPose]:
        pts, _ = trace_plane_curve(self.curve, count)
        f, _ = solve_f(self.design, self.legs, self.frame.n, self.frame.d, pts)
        if not self.is_special_v0:
            # one corrector step on the exact f0 numerator
            g = self.curve.gradient(pts)
            val = 2.0 * np.sum(pts * pts, axis=1) * f[:, 0]
            pts = pts - (val / np.sum(g * g, axis=1))[:, None] * g
            pts /= np.linalg.norm(pts, axis=1)[:, None]
            f, _ = solve_f(self.design, self.legs, self.frame.n, self.frame.d, pts)
        return [StudyPose(np.r_[0.0, e], ff).normalized() for e, ff in zip(pts, f)]

    def leg_values(self, poses) -> np.ndarray:
        return leg_values(self.design, self.legs, self.frame.n, self.frame.d, poses)


def trace_motion(design: DesignParams, h, count: int) -> list[StudyPose]:
    return SelfMotion.from_h(design, h).trace(count)


def trace_motion_special_v0(design: DesignParams, h, count: int, R1: float, p5: float | None = None) -> list[StudyPose]:
    return SelfMotion.special_v0(design, h, R1, p5).trace(count)
