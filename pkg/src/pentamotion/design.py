"""Pentapod design parameters, anchor points and leg-parameter synthesis.

Fixed frame: ``M5`` at the origin, ``M1 = (A, 0, C)``, and the ideal points
``M2, M3, M4`` in the directions ``(1, i, 0)``, ``(1, -i, 0)``, ``(0, 0, 1)``.
Moving frame: the platform line carries ``m_i = n + (a_i - a_r) d`` with
``a1 = 0``, ``a2 = a_r + i a_c``, ``a3 = a_r - i a_c`` and ``m5`` the ideal point
of ``d``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import InvalidDesign, PreconditionError, SpecialCaseV0, UnsupportedType
from .kinematics import direction_from_h
from .tolerance import get_tolerance


class PentapodType(str, Enum):
    TYPE1 = "Type1"
    TYPE2 = "Type2"


@dataclass(frozen=True)
class DesignParams:
    A: float
    C: float
    a_r: float
    a_c: float
    a4: float
    ptype: PentapodType = field(compare=False)

    @property
    def v(self) -> float:
        return 2.0 * (self.a_r - self.a4)

    @property
    def w(self) -> float:
        return self.a_r**2 + self.a_c**2 - self.a4**2

    @property
    def a2(self) -> complex:
        return complex(self.a_r, self.a_c)

    @property
    def a3(self) -> complex:
        return complex(self.a_r, -self.a_c)

    @property
    def scale(self) -> float:
        return max(abs(self.A), abs(self.C), abs(self.a_r), abs(self.a_c), abs(self.a4))

    @property
    def q(self) -> float:
        """``(a2 - a4)(a3 - a4) = (a_r - a4)^2 + a_c^2``, always positive."""
        return (self.a_r - self.a4) ** 2 + self.a_c**2

    def is_zero(self, x: float) -> bool:
        return abs(x) <= get_tolerance() * self.scale

    @property
    def v_is_zero(self) -> bool:
        return self.is_zero(self.v)

    @property
    def w_is_zero(self) -> bool:
        return abs(self.w) <= get_tolerance() * self.scale**2

    def as_dict(self) -> dict:
        return {"A": self.A, "C": self.C, "a_r": self.a_r, "a_c": self.a_c, "a4": self.a4}


def classify(A, C, a_r, a_c, a4) -> DesignParams:
    """Validate a design and decide between Type 1 and Type 2."""
    vals = [float(x) for x in (A, C, a_r, a_c, a4)]
    if not all(math.isfinite(x) for x in vals):
        raise InvalidDesign("design parameters must be finite")
    A, C, a_r, a_c, a4 = vals
    scale = max(abs(x) for x in vals)
    tol = get_tolerance() * scale
    if abs(A) <= tol:
        raise InvalidDesign("A = 0 is excluded")
    if abs(a_c) <= tol:
        raise InvalidDesign("a_c = 0 is excluded")
    a4_zero, c_zero = abs(a4) <= tol, abs(C) <= tol
    if a4_zero != c_zero:
        raise UnsupportedType(
            f"a4 = {a4} and C = {C}: exactly one vanishes, which is neither Type 1 nor Type 2"
        )
    ptype = PentapodType.TYPE2 if a4_zero else PentapodType.TYPE1
    if a4_zero:
        a4 = C = 0.0
    design = DesignParams(A, C, a_r, a_c, a4, ptype)

    a2, a3 = design.a2, design.a3
    v_c = a2 + a3 - 2 * a4
    w_c = a2 * a3 - a4 * a4
    assert abs(v_c - design.v) <= 1e-12 * max(1.0, scale)
    assert abs(w_c - design.w) <= 1e-12 * max(1.0, scale * scale)
    return design


@dataclass(frozen=True)
class AnchorSet:
    M1: np.ndarray
    M5: np.ndarray
    M2: np.ndarray
    M3: np.ndarray
    M4: np.ndarray
    m1: np.ndarray
    m2: np.ndarray
    m3: np.ndarray
    m4: np.ndarray
    m5: np.ndarray


def platform_point(design: DesignParams, n, d, t):
    """``n + (t - a_r) d``; ``t`` may be complex (giving ``m2``, ``m3``)."""
    n = np.asarray(n, dtype=float)
    d = np.asarray(d, dtype=float)
    t = np.asarray(t)
    return n + (t - design.a_r)[..., None] * d


def anchors(design: DesignParams, n, h) -> AnchorSet:
    d = direction_from_h(h)
    n = np.asarray(n, dtype=float)
    pp = lambda t: platform_point(design, n, d, t)
    return AnchorSet(
        M1=np.array([design.A, 0.0, design.C]),
        M5=np.zeros(3),
        M2=np.array([1.0, 1.0j, 0.0]),
        M3=np.array([1.0, -1.0j, 0.0]),
        M4=np.array([0.0, 0.0, 1.0]),
        m1=pp(0.0),
        m2=pp(design.a2),
        m3=pp(design.a3),
        m4=pp(design.a4),
        m5=d,
    )


@dataclass(frozen=True)
class LegParams:
    """Darboux offsets ``p2, p3, p4``, Mannheim offset ``p5`` and ``R1^2``.

    ``r1_sq`` may be negative; the motion is then not real.
    """

    p2: complex
    p3: complex
    p4: float
    p5: float
    r1_sq: float

    @property
    def R1(self) -> float:
        return math.sqrt(self.r1_sq) if self.r1_sq >= 0 else math.nan


def leg_params(design: DesignParams) -> tuple[complex, complex, float]:
    a2, a3, a4, v = design.a2, design.a3, design.a4, design.v
    p2 = design.A * a3 * v / (a3 - a4) ** 2
    p3 = design.A * a2 * v / (a2 - a4) ** 2
    p4 = -design.C * a4 * v / ((a2 - a4) * (a3 - a4))
    return complex(p2), complex(p3), float(p4.real)


def leg_relation_residual(design: DesignParams, p5, r1_sq) -> float:
    """Relative residual of the leg relation between ``p5`` and ``R1^2``."""
    v, w, a4 = design.v, design.w, design.a4
    q2 = design.q**2
    k = v * w * w * (design.A**2 + design.C**2)
    terms = (2 * w * p5, -v * r1_sq, -(2 * w - v * a4) * a4)
    value = q2 * sum(terms) + k
    scale = q2 * sum(abs(x) for x in terms) + abs(k)
    return abs(value) / scale if scale > 0 else abs(value)


def r1_from_p5(design: DesignParams, p5: float) -> float:
    """``R1^2`` making the leg relation hold for the given ``p5``."""
    if design.v_is_zero:
        raise SpecialCaseV0("v = 0: the relation forces p5 = a4 = a_r and leaves R1 free")
    v, w, a4 = design.v, design.w, design.a4
    q2 = design.q**2
    return (q2 * (2 * w * p5 - (2 * w - v * a4) * a4) + v * w * w * (design.A**2 + design.C**2)) / (q2 * v)


def p5_from_r1(design: DesignParams, R1: float) -> float:
    if design.v_is_zero:
        raise SpecialCaseV0("v = 0: the relation forces p5 = a4 = a_r and leaves R1 free")
    if design.w_is_zero:
        raise PreconditionError("w = 0: R1 must equal |a4| and p5 is arbitrary")
    v, w, a4 = design.v, design.w, design.a4
    q2 = design.q**2
    return (q2 * (v * R1 * R1 + (2 * w - v * a4) * a4) - v * w * w * (design.A**2 + design.C**2)) / (2 * w * q2)


def legs_for(design: DesignParams, p5: float, r1_sq: float | None = None) -> LegParams:
    """Complete leg set; ``r1_sq`` defaults to the value paired with ``p5``."""
    p2, p3, p4 = leg_params(design)
    if r1_sq is None:
        r1_sq = r1_from_p5(design, p5)
    return LegParams(p2, p3, p4, float(p5), float(r1_sq))
