"""Fast total least squares (FTLS) line extraction.

A window is grown one point at a time over an ordered cluster while the RMS
orthogonal deviation of its TLS line stays within ``sigma_max``.  With
prefix moments every test is O(1), so a sweep costs O(n).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from ..core import LineSegment
from ..errors import ContractViolation
from .moments import PrefixMoments
from .tls import FitResult, _sse_2d, _sse_3d, clipped_segment, line_sse_kernel, tls_line_fit

__all__ = [
    "VectorizationResult",
    "ftls_extract",
    "global_optimize",
    "polyline_construct",
    "PARALLEL_ANGLE",
]

PARALLEL_ANGLE = 1e-6


@dataclass
class VectorizationResult:
    """Segments fitted to an ordered cloud.

    ``intervals[k] = (first, last)`` are the inclusive point ranges of the
    segments.  With shared breakpoints consecutive intervals overlap in one
    point; otherwise they abut.
    """

    points: np.ndarray
    intervals: list[tuple[int, int]]
    fits: list[FitResult]
    segments: list[LineSegment]
    shared_breakpoints: bool = True
    sigma_max: float | None = None
    polyline: np.ndarray | None = None
    polyline_fallbacks: list[int] = field(default_factory=list)

    @property
    def breakpoints(self) -> list[int]:
        if not self.intervals:
            return []
        return [self.intervals[0][0]] + [last for _, last in self.intervals]

    @property
    def total_sse(self) -> float:
        return float(sum(f.sse for f in self.fits))

    def __len__(self):
        return len(self.segments)


def _build(points, pm, intervals, shared, sigma_max) -> VectorizationResult:
    fits = [tls_line_fit(pm, a, b) for a, b in intervals]
    segs = [clipped_segment(f, points[a], points[b]) for f, (a, b) in zip(fits, intervals)]
    return VectorizationResult(points, list(intervals), fits, segs, shared, sigma_max)


def _rounding_floor(pm: PrefixMoments) -> list[float]:
    """Per prefix row, an SSE below which a window fit cannot be told apart from zero.

    Differencing cumulative sums loses about ``eps * sqrt(k)`` of the
    accumulated second moments; such windows count as exactly collinear.
    """
    diag = np.sum(pm.s2[:, :pm.dim], axis=1)
    return (8.0 * np.finfo(float).eps * diag * np.sqrt(np.arange(pm.n + 1))).tolist()


def _sweep(pm: PrefixMoments, sigma_max: float, shared: bool) -> list[tuple[int, int]]:
    n = pm.n
    args = (*pm._c1, *pm._c2)
    kern = _sse_2d if pm.dim == 2 else _sse_3d
    sqrt = math.sqrt
    floor = _rounding_floor(pm)
    intervals = []
    a = 0
    while a < n - 1:
        b = a + 1
        while b + 1 < n:
            sse = kern(*args, a, b + 1)
            if not (sqrt(sse / (b + 2 - a)) <= sigma_max or sse <= floor[b + 2]):
                break
            b += 1
        intervals.append((a, b))
        if b == n - 1:
            break
        a = b if shared else b + 1
        if a == n - 1:
            # a lone trailing point cannot carry a line; pair it with its predecessor
            intervals.append((n - 2, n - 1))
            break
    return intervals


def ftls_extract(points, sigma_max: float, shared_breakpoints: bool = True,
                 pm: PrefixMoments | None = None) -> VectorizationResult:
    """Greedy FTLS vectorization of an ordered 2-D or 3-D cluster.

    Each segment is the TLS line of its interval, clipped to the orthogonal
    projections of the interval's first and last points.  Every interval
    satisfies ``sqrt(sse / count) <= sigma_max`` and, unless it ends the
    cloud, would violate it if extended by one more point.  Windows whose
    SSE is within floating-point rounding of zero always pass, so a
    sigma_max below the arithmetic's resolution acts like that resolution.
    """
    if not sigma_max > 0:
        raise ContractViolation(f"sigma_max must be positive, got {sigma_max}")
    if pm is None:
        pm = PrefixMoments(points)
    pts = pm.points
    if pm.n < 2:
        raise ContractViolation("line extraction needs at least two points")
    return _build(pts, pm, _sweep(pm, sigma_max, shared_breakpoints), shared_breakpoints, sigma_max)


def global_optimize(points, pm: PrefixMoments | None, result: VectorizationResult,
                    max_iter: int = 100) -> VectorizationResult:
    """Reduce the total squared error by shifting interior breakpoints.

    Left-to-right sweeps move each boundary by one point at a time while
    the summed SSE of its two neighbouring intervals strictly decreases.
    The iteration stops after a sweep without improvement or after
    ``max_iter`` sweeps.  The number of segments never changes and no
    interval drops below two points.
    """
    if pm is None:
        pm = PrefixMoments(points if points is not None else result.points)
    sse = line_sse_kernel(pm)
    iv = [list(t) for t in result.intervals]
    m = len(iv)
    cost = [sse(a, b) for a, b in iv]
    for _ in range(max_iter):
        improved = False
        for k in range(m - 1):
            left, right = iv[k], iv[k + 1]
            for step in (-1, 1):
                moved = False
                while True:
                    nl, nr = left[1] + step, right[0] + step
                    if nl - left[0] < 1 or right[1] - nr < 1:
                        break
                    cl, cr = sse(left[0], nl), sse(nr, right[1])
                    if cl + cr < cost[k] + cost[k + 1]:
                        left[1], right[0] = nl, nr
                        cost[k], cost[k + 1] = cl, cr
                        moved = improved = True
                    else:
                        break
                if moved:
                    break
        if not improved:
            break
    out = _build(result.points, pm, [tuple(t) for t in iv], result.shared_breakpoints, result.sigma_max)
    return out


def _line_meet(c1, d1, c2, d2):
    """Corner between two lines, or None when they are near parallel."""
    if len(d1) == 2:
        s = d1[0] * d2[1] - d1[1] * d2[0]
        if abs(s) < math.sin(PARALLEL_ANGLE):
            return None
        r = c2 - c1
        t = (r[0] * d2[1] - r[1] * d2[0]) / s
        return c1 + t * d1
    s = np.linalg.norm(np.cross(d1, d2))
    if s < math.sin(PARALLEL_ANGLE):
        return None
    # closest points of the two lines, then their midpoint
    r = c1 - c2
    b = float(d1 @ d2)
    dd, e = float(d1 @ r), float(d2 @ r)
    denom = 1.0 - b * b
    t1 = (b * e - dd) / denom
    t2 = (e - b * dd) / denom
    return 0.5 * ((c1 + t1 * d1) + (c2 + t2 * d2))


def polyline_construct(result: VectorizationResult) -> tuple[np.ndarray, list[int]]:
    """Corner points of the approximating polyline.

    Interior corners are where consecutive TLS lines meet (the midpoint of
    closest approach in 3-D); the end corners are projections of the first
    and last cloud points.  Near-parallel neighbours (below 1e-6 rad) fall
    back to the mean projection of the boundary point onto both lines; the
    indices of such corners are returned alongside.
    """
    fits, pts = result.fits, result.points
    if not fits:
        return np.empty((0, pts.shape[1])), []
    corners = [fits[0].project(pts[result.intervals[0][0]])]
    fallbacks = []
    for k in range(len(fits) - 1):
        f1, f2 = fits[k], fits[k + 1]
        c = _line_meet(f1.centroid, f1.direction, f2.centroid, f2.direction)
        if c is None:
            p = pts[result.intervals[k][1]]
            c = 0.5 * (f1.project(p) + f2.project(p))
            fallbacks.append(k + 1)
        corners.append(c)
    corners.append(fits[-1].project(pts[result.intervals[-1][1]]))
    return np.array(corners), fallbacks


def with_polyline(result: VectorizationResult) -> VectorizationResult:
    corners, fallbacks = polyline_construct(result)
    return replace(result, polyline=corners, polyline_fallbacks=fallbacks)
