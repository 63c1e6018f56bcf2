"""Dense homogeneous polynomials in three variables, and binary-form roots."""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import RankDeficiency


@lru_cache(maxsize=None)
def monomials(degree: int) -> tuple[tuple[int, int, int], ...]:
    """Exponent triples of total degree ``degree`` in descending lex order."""
    out = []
    for i in range(degree, -1, -1):
        for j in range(degree - i, -1, -1):
            out.append((i, j, degree - i - j))
    return tuple(out)


def _monomial_matrix(points, degree):
    pts = np.asarray(points)
    exps = np.array(monomials(degree))
    return np.prod(pts[..., None, :] ** exps, axis=-1)


class HomogPoly3:
    """Homogeneous polynomial in ``(e1, e2, e3)`` with a dense coefficient vector.

    Coefficients follow :func:`monomials` order.  Arithmetic is exact in the
    coefficient field (float or complex); no normalization is applied unless
    :meth:`normalized` is called.
    """

    __slots__ = ("degree", "coeffs")

    def __init__(self, degree: int, coeffs):
        coeffs = np.asarray(coeffs)
        count = (degree + 1) * (degree + 2) // 2
        if coeffs.shape != (count,):
            raise ValueError(f"degree {degree} needs {count} coefficients, got {coeffs.shape}")
        self.degree = int(degree)
        self.coeffs = coeffs.astype(complex if np.iscomplexobj(coeffs) else float)

    @classmethod
    def from_dict(cls, degree: int, terms: dict) -> HomogPoly3:
        index = {m: k for k, m in enumerate(monomials(degree))}
        c = np.zeros(len(index), dtype=complex if any(isinstance(v, complex) for v in terms.values()) else float)
        for mono, value in terms.items():
            c[index[tuple(mono)]] += value
        return cls(degree, c)

    @classmethod
    def linear(cls, a) -> HomogPoly3:
        return cls(1, np.asarray(a))

    @classmethod
    def norm_sq(cls) -> HomogPoly3:
        """``e1^2 + e2^2 + e3^2``."""
        return cls.from_dict(2, {(2, 0, 0): 1.0, (0, 2, 0): 1.0, (0, 0, 2): 1.0})

    @classmethod
    def zero(cls, degree: int) -> HomogPoly3:
        return cls(degree, np.zeros((degree + 1) * (degree + 2) // 2))

    @property
    def monomials(self):
        return monomials(self.degree)

    def as_dict(self) -> dict:
        return dict(zip(self.monomials, self.coeffs.tolist()))

    def coeff(self, i: int, j: int, k: int):
        return self.coeffs[self.monomials.index((i, j, k))]

    def coeff_vector(self, order) -> np.ndarray:
        """Coefficients listed in a caller-chosen monomial order."""
        return np.array([self.coeff(*m) for m in order])

    def __call__(self, e):
        return _monomial_matrix(e, self.degree) @ self.coeffs

    def gradient(self, e):
        e = np.asarray(e)
        out = []
        for axis in range(3):
            terms = {}
            for (m, c) in zip(self.monomials, self.coeffs):
                if m[axis] == 0:
                    continue
                mm = list(m)
                mm[axis] -= 1
                terms[tuple(mm)] = terms.get(tuple(mm), 0.0) + c * m[axis]
            out.append(HomogPoly3.from_dict(self.degree - 1, terms)(e) if self.degree > 0 else np.zeros(e.shape[:-1]))
        return np.stack(out, axis=-1)

    def __add__(self, other):
        if not isinstance(other, HomogPoly3):
            return NotImplemented
        if other.degree != self.degree:
            raise ValueError("degrees differ")
        return HomogPoly3(self.degree, self.coeffs + other.coeffs)

    def __neg__(self):
        return HomogPoly3(self.degree, -self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, HomogPoly3):
            terms = {}
            for ma, ca in zip(self.monomials, self.coeffs):
                for mb, cb in zip(other.monomials, other.coeffs):
                    m = (ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2])
                    terms[m] = terms.get(m, 0.0) + ca * cb
            return HomogPoly3.from_dict(self.degree + other.degree, terms)
        return HomogPoly3(self.degree, self.coeffs * other)

    __rmul__ = __mul__

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def normalized(self) -> HomogPoly3:
        """Unit coefficient norm, first significant coefficient positive."""
        nrm = self.norm()
        if nrm == 0.0:
            return HomogPoly3(self.degree, self.coeffs.copy())
        c = self.coeffs / nrm
        lead = c[np.flatnonzero(np.abs(c) > 1e-12)[0]]
        if np.real(lead) < 0:
            c = -c
        return HomogPoly3(self.degree, c)

    def cosine_similarity(self, other: HomogPoly3) -> float:
        a, b = self.coeffs, other.coeffs
        return float(abs(np.vdot(a, b)) / (np.linalg.norm(a) * np.linalg.norm(b)))

    def restrict_to_line(self, p, q) -> np.ndarray:
        """Binary form ``poly(alpha p + beta q)``.

        Returns ``c`` with ``poly = sum_k c[k] alpha^(deg-k) beta^k``.
        """
        lin = [np.array([q[i], p[i]]) for i in range(3)]  # ascending powers of alpha, beta = 1
        total = np.zeros(self.degree + 1, dtype=np.result_type(self.coeffs, np.asarray(p), np.asarray(q)))
        for (i, j, k), c in zip(self.monomials, self.coeffs):
            if c == 0:
                continue
            term = np.array([c])
            for var, power in ((0, i), (1, j), (2, k)):
                for _ in range(power):
                    term = P.polymul(term, lin[var])
            total[: len(term)] += term
        return total[::-1]

    def __repr__(self):
        parts = []
        for (i, j, k), c in zip(self.monomials, self.coeffs):
            if c != 0:
                parts.append(f"{c:+.6g}*e1^{i}e2^{j}e3^{k}")
        return f"HomogPoly3(deg={self.degree}: {' '.join(parts) or '0'})"

    @staticmethod
    def nodes(degree: int, shifted: bool = False) -> np.ndarray:
        """Deterministic integer interpolation nodes.

        The base set is the square grid on the chart ``e3 = 1`` plus boundary
        nodes on ``e3 = 0``.  The shifted set uses odd numerators over ``e3 = 2``
        and is disjoint from the base set as projective points.
        """
        m = max(2, (degree + 1) // 2)
        rng = range(-m, m + 1)
        if not shifted:
            chart = [(i, j, 1) for i in rng for j in rng]
            boundary = [(1, j, 0) for j in rng] + [(0, 1, 0)]
        else:
            chart = [(2 * i + 1, 2 * j + 1, 2) for i in rng for j in rng]
            boundary = [(2, 2 * j + 1, 0) for j in rng]
        return np.array(chart + boundary, dtype=float)

    @classmethod
    def interpolate(cls, func, degree: int, nodes=None, shifted: bool = False) -> HomogPoly3:
        """Recover coefficients from point values ``func(nodes)`` by least squares."""
        if nodes is None:
            nodes = cls.nodes(degree, shifted)
        V = _monomial_matrix(nodes, degree)
        values = np.asarray(func(nodes))
        coeffs, _, rank, sv = np.linalg.lstsq(V, values, rcond=None)
        if rank < V.shape[1] or sv[-1] < 1e-10 * sv[0]:
            raise RankDeficiency(f"interpolation system rank {rank} < {V.shape[1]}")
        return cls(degree, coeffs)


def binary_roots(c, imag_tol: float = 1e-9) -> np.ndarray:
    """Real roots of a binary form ``sum_k c[k] alpha^(deg-k) beta^k``.

    Roots come from companion-matrix eigenvalues of the dehomogenized
    polynomial; a vanishing leading coefficient contributes the root
    ``(1 : 0)``.  Returns unit vectors ``(alpha, beta)`` of shape ``(r, 2)``.
    """
    c = np.asarray(c, dtype=float)
    deg = len(c) - 1
    scale = np.max(np.abs(c)) if c.size else 0.0
    if scale == 0.0:
        return np.zeros((0, 2))
    # dehomogenize at beta = 1: polynomial in alpha with leading coefficient c[0]
    cc = c / scale
    nz = np.flatnonzero(np.abs(cc) > 1e-14)
    lead = nz[0]
    out = [(1.0, 0.0)] * lead  # roots at beta = 0
    roots = np.roots(cc[lead:]) if deg - lead > 0 else np.array([])
    for r in roots:
        if abs(r.imag) <= imag_tol * max(1.0, abs(r)):
            a = r.real
            nrm = np.hypot(a, 1.0)
            out.append((a / nrm, 1.0 / nrm))
    return np.array(out, dtype=float).reshape(-1, 2)
