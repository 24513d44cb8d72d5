"""Cumulative first and second moments of an ordered point cloud.

After an O(n) build, the count, centroid and scatter matrix of any
contiguous interval ``[i, j]`` are available in O(1) by differencing two
entries of each cumulative array.

The sums are accumulated about the cloud mean rather than the coordinate
origin.  Central moments do not depend on that shift and it keeps the
cancellation in ``S_xx - S_x**2 / k`` small for clouds far from the origin.

Short, thin windows far from the mean still lose most of their digits to
that subtraction.  Every cumulative array therefore also carries a
low-order word, so :meth:`PrefixMoments.scatter` can evaluate it in
double-double arithmetic.  The plain sums alone serve the hot sweeps.
"""
from __future__ import annotations

import numpy as np

from ..core import as_array
from ..errors import ContractViolation

__all__ = ["PrefixMoments", "build_prefix"]

_SPLIT = 134217729.0  # 2**27 + 1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _split(a):
    t = _SPLIT * a
    hi = t - (t - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _cumsum_dd(hi: np.ndarray, lo: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Compensated prefix sums of ``hi + lo`` along axis 0, with a zero first row."""
    s = np.zeros((hi.shape[0] + 1,) + hi.shape[1:])
    np.cumsum(hi, axis=0, out=s[1:])  # accumulate is sequential, so each step's error is recoverable
    _, err = _two_sum(s[:-1], hi)
    c = np.zeros_like(s)
    np.cumsum(err + lo, axis=0, out=c[1:])
    return s, c


class PrefixMoments:
    """Prefix sums ``S_c`` and ``S_cc'`` of a 2-D or 3-D point cloud.

    Row 0 of every cumulative array is zero, row ``k`` holds the sums over
    points ``0..k-1``.  Second moments are stored for the unordered
    component pairs in the order given by :attr:`pairs`.
    """

    def __init__(self, points):
        pts = np.asarray(points if isinstance(points, np.ndarray) else [as_array(p) for p in points],
                         dtype=float)
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise ContractViolation("prefix moments need at least one point")
        n, d = pts.shape
        if d not in (2, 3):
            raise ContractViolation(f"prefix moments support dim 2 or 3, got {d}")
        self.points = pts
        self.n = n
        self.dim = d
        self.origin = pts.mean(axis=0)
        q = pts - self.origin
        self.pairs = [(0, 0), (1, 1), (0, 1)] if d == 2 else [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)]
        s1, s1_lo = _cumsum_dd(q, np.zeros_like(q))
        a, b = (np.array(ix) for ix in zip(*self.pairs))
        s2, s2_lo = _cumsum_dd(*_two_prod(q[:, a], q[:, b]))
        self.s1 = s1
        self.s2 = s2
        self._s1_lo = s1_lo
        self._s2_lo = s2_lo
        # plain lists are much faster than ndarray scalar indexing in the sweeps
        self._c1 = [s1[:, c].tolist() for c in range(d)]
        self._c2 = [s2[:, p].tolist() for p in range(len(self.pairs))]

    def __len__(self):
        return self.n

    def _check(self, i: int, j: int):
        if not 0 <= i <= j < self.n:
            raise ContractViolation(f"invalid interval [{i}, {j}] for {self.n} points")

    def count(self, i: int, j: int) -> int:
        return j - i + 1

    def _pair_matrix(self, vals) -> np.ndarray:
        m = np.empty((self.dim, self.dim))
        for (a, b), v in zip(self.pairs, vals):
            m[a, b] = m[b, a] = v
        return m

    def interval_sums(self, i: int, j: int) -> tuple[int, np.ndarray, np.ndarray]:
        """``(count, sum of points, sum of outer products)`` in original coordinates."""
        self._check(i, j)
        k = j - i + 1
        s1 = self.s1[j + 1] - self.s1[i]
        s2 = self._pair_matrix(self.s2[j + 1] - self.s2[i])
        o = self.origin
        raw1 = s1 + k * o
        raw2 = s2 + np.outer(o, s1) + np.outer(s1, o) + k * np.outer(o, o)
        return k, raw1, raw2

    def centroid(self, i: int, j: int) -> np.ndarray:
        self._check(i, j)
        return self.origin + (self.s1[j + 1] - self.s1[i]) / (j - i + 1)

    def _window_dd(self, hi: np.ndarray, lo: np.ndarray, i: int, j: int):
        s, e = _two_sum(float(hi[j + 1]), -float(hi[i]))
        return _two_sum(s, e + (float(lo[j + 1]) - float(lo[i])))

    def scatter(self, i: int, j: int) -> np.ndarray:
        """Central scatter matrix ``sum (p - c)(p - c)^T`` of the interval.

        Entries are accurate to a few units in their last place even when
        the window is tiny compared to its distance from the cloud mean.
        """
        self._check(i, j)
        k = float(j - i + 1)
        w1 = [self._window_dd(self.s1[:, c], self._s1_lo[:, c], i, j) for c in range(self.dim)]
        vals = []
        for p, (a, b) in enumerate(self.pairs):
            w2, w2_lo = self._window_dd(self.s2[:, p], self._s2_lo[:, p], i, j)
            (ah, al), (bh, bl) = w1[a], w1[b]
            m, m_lo = _two_prod(ah, bh)
            m_lo += ah * bl + al * bh
            # (m + m_lo) / k to double-double precision
            q1 = m / k
            t, t_lo = _two_prod(q1, k)
            q2 = ((m - t) - t_lo + m_lo) / k
            s, e = _two_sum(w2, -q1)
            vals.append(s + (e + (w2_lo - q2)))
        return self._pair_matrix(vals)


def build_prefix(points) -> PrefixMoments:
    return PrefixMoments(points)
