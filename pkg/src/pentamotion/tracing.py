"""Sampling real points of a plane algebraic curve given in homogeneous form.

The curve ``P(e1:e2:e3) = 0`` is swept by the pencil of lines through one
real seed point.  Each pencil line meets the curve in the seed plus
``deg - 1`` further points, found as roots of a binary form.  Points are
chained into tracks by nearest-neighbour matching in the projective metric
``min(|x - y|, |x + y|)`` on unit representatives.
"""

from __future__ import annotations

import numpy as np

from .errors import ContinuationStall, NoRealSeed
from .polynomials import HomogPoly3, binary_roots


def projective_distance(x, y) -> np.ndarray:
    x = np.asarray(x)
    y = np.asarray(y)
    return np.minimum(np.linalg.norm(x - y, axis=-1), np.linalg.norm(x + y, axis=-1))


def _seed_lines(rng):
    eye = np.eye(3)
    yield eye[0], eye[1]  # e3 = 0
    yield eye[1], eye[2]  # e1 = 0
    yield eye[0], eye[2]  # e2 = 0
    for _ in range(200):
        yield rng.normal(size=3), rng.normal(size=3)


def find_seed(poly: HomogPoly3) -> np.ndarray:
    """A real point of the curve, searched on the coordinate lines first.

    An odd-degree curve always has a real point on ``e3 = 0``; for even
    degree further lines from a fixed-seed generator are tried.
    """
    rng = np.random.default_rng(20150101)
    for p, q in _seed_lines(rng):
        roots = binary_roots(poly.restrict_to_line(p, q))
        for a, b in roots:
            x = a * p + b * q
            nrm = np.linalg.norm(x)
            if nrm > 0:
                return _polish(poly, x / nrm)
    raise NoRealSeed("no real point found on any probe line")


def _polish(poly, x, steps=3):
    for _ in range(steps):
        g = poly.gradient(x)
        gg = g @ g
        if gg == 0:
            break
        x = x - poly(x) * g / gg
        x = x / np.linalg.norm(x)
    return x


def _complement(s):
    a = np.eye(3)[np.argmin(np.abs(s))]
    u = np.cross(s, a)
    u /= np.linalg.norm(u)
    v = np.cross(s, u)
    return u, v


def _sweep(poly, seed, n_lines):
    u, v = _complement(seed)
    tracks: list[list[np.ndarray]] = []
    params: list[list[float]] = []
    active: list[int] = []
    step = np.pi / n_lines
    gate = max(0.35, 8 * step)
    for k in range(n_lines):
        theta = (k + 0.5) * step
        qv = np.cos(theta) * u + np.sin(theta) * v
        c = poly.restrict_to_line(seed, qv)
        pts = []
        for a, b in binary_roots(c[1:]):
            if abs(b) < 1e-8:
                continue
            x = a * seed + b * qv
            pts.append(x / np.linalg.norm(x))
        still_active = []
        used = set()
        for ti in active:
            last = tracks[ti][-1]
            best, best_d = None, gate
            for j, x in enumerate(pts):
                if j in used:
                    continue
                dd = projective_distance(last, x)
                if dd < best_d:
                    best, best_d = j, dd
            if best is not None:
                x = pts[best]
                if np.linalg.norm(x - last) > np.linalg.norm(x + last):
                    x = -x
                tracks[ti].append(x)
                params[ti].append(theta)
                used.add(best)
                still_active.append(ti)
        for j, x in enumerate(pts):
            if j not in used:
                tracks.append([x])
                params.append([theta])
                still_active.append(len(tracks) - 1)
        active = still_active
    return tracks, params


def trace_plane_curve(poly: HomogPoly3, count: int, min_lines: int = 64, max_doublings: int = 8):
    """``count`` distinct real points of ``poly = 0`` as unit vectors, ordered.

    Returns ``(points, params)`` where ``params[i] = (track, theta)``.
    """
    if count < 1:
        raise ValueError("count must be positive")
    seed = find_seed(poly)
    n_lines = max(min_lines, count)
    for _ in range(max_doublings):
        tracks, params = _sweep(poly, seed, n_lines)
        pts, tags = [], []
        for ti, (tr, th) in enumerate(zip(tracks, params)):
            for x, t in zip(tr, th):
                pts.append(x)
                tags.append((ti, t))
        if pts:
            arr = np.array(pts)
            keep = [0]
            for i in range(1, len(arr)):
                if np.min(projective_distance(arr[keep], arr[i])) > 1e-9:
                    keep.append(i)
            arr = arr[keep]
            tags = [tags[i] for i in keep]
            if len(arr) >= count:
                idx = np.unique(np.round(np.linspace(0, len(arr) - 1, count)).astype(int))
                return arr[idx], [tags[i] for i in idx]
        n_lines *= 2
    raise ContinuationStall(f"only {len(pts)} distinct curve points found, {count} requested")
