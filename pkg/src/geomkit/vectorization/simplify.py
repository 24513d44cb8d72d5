"""Point-eliminating polyline simplification (Douglas-Peucker, Reumann-Witkam).

Both return the indices of the kept points, increasing, with the first
and last point always kept.
"""
from __future__ import annotations

import numpy as np

from ..errors import ContractViolation

__all__ = [
    "douglas_peucker",
    "reumann_witkam",
    "chord_distances",
    "polyline_deviation",
    "polyline_sse",
]


def _prepare(points, tol):
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or len(pts) < 2:
        raise ContractViolation("simplification needs at least two points")
    if not tol > 0:
        raise ContractViolation(f"tolerance must be positive, got {tol}")
    return pts


def chord_distances(pts: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distances of ``pts`` to the closed segment ``a``-``b``."""
    d = b - a
    dd = float(d @ d)
    q = pts - a
    if dd == 0.0:
        return np.linalg.norm(q, axis=1)
    t = np.clip(q @ d / dd, 0.0, 1.0)
    return np.linalg.norm(q - t[:, None] * d, axis=1)


def douglas_peucker(points, tol: float) -> list[int]:
    """Recursive max-deviation split.

    A span is split at its farthest point whenever that point lies more than
    ``tol`` from the chord, so every input point ends within ``tol`` of the
    result.
    """
    pts = _prepare(points, tol)
    n = len(pts)
    keep = np.zeros(n, dtype=bool)
    keep[0] = keep[-1] = True
    stack = [(0, n - 1)]
    while stack:
        a, b = stack.pop()
        if b - a < 2:
            continue
        dist = chord_distances(pts[a + 1:b], pts[a], pts[b])
        k = int(np.argmax(dist))
        if dist[k] > tol:
            m = a + 1 + k
            keep[m] = True
            stack.append((m, b))
            stack.append((a, m))
    return np.flatnonzero(keep).tolist()


def _line_distances(pts, a, u):
    q = pts - a
    return np.linalg.norm(q - np.outer(q @ u, u), axis=1)


def reumann_witkam(points, tol: float) -> list[int]:
    """Corridor walk.

    A strip of half-width ``tol`` is laid along the line through the
    current key point and its successor.  The last point before the first
    one that leaves the strip becomes the next key.
    """
    pts = _prepare(points, tol)
    n = len(pts)
    keys = [0]
    key = 0
    while key < n - 1:
        # successor must differ from the key to define a direction
        s = key + 1
        while s < n - 1 and np.array_equal(pts[s], pts[key]):
            s += 1
        if s >= n - 1:
            break
        d = pts[s] - pts[key]
        u = d / np.linalg.norm(d)
        i = s + 1
        block = 64
        exit_at = None
        while i < n:
            stop = min(n, i + block)
            out = np.flatnonzero(_line_distances(pts[i:stop], pts[key], u) > tol)
            if out.size:
                exit_at = i + int(out[0])
                break
            i = stop
            block *= 2
        if exit_at is None:
            break
        key = exit_at - 1
        keys.append(key)
    if keys[-1] != n - 1:
        keys.append(n - 1)
    return keys


def _spans(keys):
    return list(zip(keys[:-1], keys[1:]))


def polyline_deviation(points, keys) -> float:
    """Largest distance of any point to the chord of the span containing it."""
    pts = np.asarray(points, dtype=float)
    worst = 0.0
    for a, b in _spans(keys):
        worst = max(worst, float(np.max(chord_distances(pts[a:b + 1], pts[a], pts[b]))))
    return worst


def polyline_sse(points, keys) -> float:
    """Sum over spans of squared point-to-chord distances (shared keys counted once per span)."""
    pts = np.asarray(points, dtype=float)
    return float(sum(np.sum(chord_distances(pts[a:b + 1], pts[a], pts[b]) ** 2) for a, b in _spans(keys)))
