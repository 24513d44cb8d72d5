"""Total least squares line and plane fits over prefix-moment intervals."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..core import LineSegment
from ..errors import ContractViolation
from .eigen import canonical_sign, sym2_eigen, sym3_eigen, sym3_eigenvalues
from .moments import PrefixMoments

__all__ = ["FitResult", "line_sse", "tls_line_fit", "tls_plane_fit", "fit_line", "fit_plane"]


@dataclass(frozen=True)
class FitResult:
    """TLS fit of one interval.

    Line fits fill ``direction``, plane fits fill ``normal``.  ``sse`` is the
    sum of squared orthogonal distances of the interval's points.
    """

    centroid: np.ndarray
    sse: float
    count: int
    direction: np.ndarray | None = None
    normal: np.ndarray | None = None
    first: int = 0
    last: int = 0

    @property
    def rms(self) -> float:
        return math.sqrt(self.sse / self.count)

    def project(self, p) -> np.ndarray:
        """Orthogonal projection of ``p`` onto the fitted line or plane."""
        p = np.asarray(p, dtype=float)
        if self.direction is not None:
            return self.centroid + self.direction * float((p - self.centroid) @ self.direction)
        return p - self.normal * float((p - self.centroid) @ self.normal)

    def distance(self, pts) -> np.ndarray:
        """Orthogonal distances of points (``(n, dim)``) to the fitted model."""
        q = np.atleast_2d(np.asarray(pts, dtype=float)) - self.centroid
        if self.direction is not None:
            return np.linalg.norm(q - np.outer(q @ self.direction, self.direction), axis=1)
        return np.abs(q @ self.normal)


def _sse_2d(x1, y1, xx, yy, xy, i, j):
    k = j - i + 1
    sx = x1[j + 1] - x1[i]
    sy = y1[j + 1] - y1[i]
    cxx = (xx[j + 1] - xx[i]) - sx * sx / k
    cyy = (yy[j + 1] - yy[i]) - sy * sy / k
    cxy = (xy[j + 1] - xy[i]) - sx * sy / k
    d = cxx - cyy
    v = ((cxx + cyy) - math.sqrt(d * d + 4.0 * cxy * cxy)) / 2.0
    return v if v > 0.0 else 0.0


def _sse_3d(x1, y1, z1, xx, yy, zz, xy, xz, yz, i, j):
    k = j - i + 1
    sx = x1[j + 1] - x1[i]
    sy = y1[j + 1] - y1[i]
    sz = z1[j + 1] - z1[i]
    a = (xx[j + 1] - xx[i]) - sx * sx / k
    b = (yy[j + 1] - yy[i]) - sy * sy / k
    c = (zz[j + 1] - zz[i]) - sz * sz / k
    d = (xy[j + 1] - xy[i]) - sx * sy / k
    e = (xz[j + 1] - xz[i]) - sx * sz / k
    f = (yz[j + 1] - yz[i]) - sy * sz / k
    l1 = sym3_eigenvalues(a, b, c, d, e, f)[0]
    v = (a + b + c) - l1
    return v if v > 0.0 else 0.0


def _line_sse_of(c: np.ndarray) -> float:
    if len(c) == 2:
        d = c[0, 0] - c[1, 1]
        v = ((c[0, 0] + c[1, 1]) - math.hypot(d, 2.0 * c[0, 1])) / 2.0
    else:
        v = np.trace(c) - sym3_eigenvalues(c[0, 0], c[1, 1], c[2, 2], c[0, 1], c[0, 2], c[1, 2])[0]
    return max(0.0, float(v))


def line_sse_kernel(pm: PrefixMoments):
    """Return ``f(i, j) -> sse`` bound to ``pm``'s cumulative arrays.

    The kernel works in plain double precision for speed.  Reported fits
    come from :func:`tls_line_fit`, which uses the compensated scatter.
    """
    args = (*pm._c1, *pm._c2)
    kern = _sse_2d if pm.dim == 2 else _sse_3d
    return lambda i, j: kern(*args, i, j)


def line_sse(pm: PrefixMoments, i: int, j: int) -> float:
    return line_sse_kernel(pm)(i, j)


def tls_line_fit(pm: PrefixMoments, i: int, j: int) -> FitResult:
    """Orthogonal-regression line through points ``i..j`` (inclusive)."""
    pm._check(i, j)
    if j - i < 1:
        raise ContractViolation("a line fit needs at least two points")
    c = pm.scatter(i, j)
    if pm.dim == 2:
        _, _, direction = sym2_eigen(c[0, 0], c[1, 1], c[0, 1])
    else:
        _, vecs = sym3_eigen(c)
        direction = canonical_sign(vecs[:, 0])
    return FitResult(pm.centroid(i, j), _line_sse_of(c), j - i + 1, direction=direction, first=i, last=j)


def tls_plane_fit(pm: PrefixMoments, i: int, j: int) -> FitResult:
    """Orthogonal-regression plane through points ``i..j`` of a 3-D cloud."""
    if pm.dim != 3:
        raise ContractViolation("plane fits need a 3-D cloud")
    pm._check(i, j)
    if j - i < 2:
        raise ContractViolation("a plane fit needs at least three points")
    vals, vecs = sym3_eigen(pm.scatter(i, j))
    sse = max(0.0, float(vals[2]))
    return FitResult(pm.centroid(i, j), sse, j - i + 1, normal=canonical_sign(vecs[:, 2]), first=i, last=j)


def fit_line(points) -> FitResult:
    pm = PrefixMoments(points)
    return tls_line_fit(pm, 0, pm.n - 1)


def fit_plane(points) -> FitResult:
    pm = PrefixMoments(points)
    return tls_plane_fit(pm, 0, pm.n - 1)


def clipped_segment(fit: FitResult, first_point, last_point) -> LineSegment:
    """Fitted line clipped to the projections of the interval's end points."""
    return LineSegment(fit.project(first_point), fit.project(last_point))
