"""Continuity segmentation of ordered point clouds.

Two front ends share one gap test (:func:`break_criterion`): the batch
:func:`segment_scan`, which understands circular scans from rotating
LiDARs, and the incremental :class:`StreamSegmenter`.  Because the test is
the same, the output of the streaming variant can be closed into a ring
with :func:`merge_circular` and compared with the batch result directly.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import as_array
from .errors import ContractViolation, DimensionMismatch

__all__ = [
    "SegmentationParams",
    "Cluster",
    "break_criterion",
    "segment_scan",
    "merge_circular",
    "StreamSegmenter",
    "stream_push",
    "stream_finish",
]


@dataclass(frozen=True)
class SegmentationParams:
    """Parameters of the gap test.

    Two consecutive points are continuous when their distance is at most
    ``eps_min + rel_factor * min(|p|, |q|)``.  The relative term lets the
    tolerated gap grow with range, as beam spacing does for a LiDAR.
    """

    eps_min: float = 0.1
    rel_factor: float = 0.0
    min_cluster_size: int = 3

    def __post_init__(self):
        if not self.eps_min >= 0:
            raise ContractViolation(f"eps_min must be >= 0, got {self.eps_min}")
        if not self.rel_factor >= 0:
            raise ContractViolation(f"rel_factor must be >= 0, got {self.rel_factor}")
        if int(self.min_cluster_size) != self.min_cluster_size or self.min_cluster_size < 1:
            raise ContractViolation(f"min_cluster_size must be a positive integer, got {self.min_cluster_size}")


@dataclass(eq=False)
class Cluster:
    """Run of continuous points.

    ``first_index``/``last_index`` refer to the source scan.  A cluster that
    wraps around the origin of a circular scan has ``first_index >
    last_index``.
    """

    points: np.ndarray
    first_index: int
    last_index: int
    is_outlier: bool = False
    indices: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.indices is None:
            self.indices = np.arange(self.first_index, self.first_index + len(self.points))

    def __len__(self):
        return len(self.points)

    def __eq__(self, other):
        if not isinstance(other, Cluster):
            return NotImplemented
        return (self.first_index == other.first_index and self.last_index == other.last_index
                and self.is_outlier == other.is_outlier
                and np.array_equal(self.indices, other.indices)
                and np.array_equal(self.points, other.points))


def break_criterion(p, q, params: SegmentationParams) -> bool:
    """True when ``p`` and ``q`` are close enough to belong to one cluster."""
    a, b = as_array(p), as_array(q)
    if a.shape != b.shape:
        raise DimensionMismatch(a.shape[-1], b.shape[-1])
    return bool(_continuity(np.stack((a, b)), params)[0])


def _continuity(pts: np.ndarray, params: SegmentationParams) -> np.ndarray:
    # the single implementation of the gap test, for every consecutive pair
    gaps = np.sqrt(np.sum((pts[1:] - pts[:-1]) ** 2, axis=1))
    ranges = np.sqrt(np.sum(pts * pts, axis=1))
    reach = np.minimum(ranges[1:], ranges[:-1])
    return gaps <= params.eps_min + params.rel_factor * reach


def _as_points(points) -> np.ndarray:
    pts = np.asarray([as_array(p) for p in points], dtype=float) if not isinstance(points, np.ndarray) \
        else np.asarray(points, dtype=float)
    if pts.size == 0:
        return pts.reshape(0, 0)
    if pts.ndim != 2:
        raise ContractViolation(f"expected an (n, dim) point array, got shape {pts.shape}")
    return pts


def _make(points, start, stop, params) -> Cluster:
    return Cluster(points[start:stop], start, stop - 1, stop - start < params.min_cluster_size)


def segment_scan(points, params: SegmentationParams, circular: bool = False) -> list[Cluster]:
    """Split an ordered scan into maximal runs of continuous points.

    Every point ends up in exactly one cluster; runs shorter than
    ``params.min_cluster_size`` are kept but flagged as outliers.  With
    ``circular=True`` the last and first run are joined when the scan
    closes, and the joined cluster is listed first.
    """
    pts = _as_points(points)
    n = len(pts)
    if n == 0:
        return []
    cont = _continuity(pts, params)
    starts = np.concatenate(([0], np.flatnonzero(~cont) + 1))
    stops = np.concatenate((starts[1:], [n]))
    clusters = [_make(pts, int(a), int(b), params) for a, b in zip(starts, stops)]
    if circular:
        clusters = merge_circular(clusters, params)
    return clusters


def merge_circular(clusters: list[Cluster], params: SegmentationParams) -> list[Cluster]:
    """Close a linear segmentation of a full revolution into a ring.

    If the last point of the scan and the first one pass the break
    criterion, the last cluster is prepended to the first.
    """
    if len(clusters) < 2:
        return list(clusters)
    head, tail = clusters[0], clusters[-1]
    if not break_criterion(tail.points[-1], head.points[0], params):
        return list(clusters)
    pts = np.concatenate((tail.points, head.points))
    merged = Cluster(pts, tail.first_index, head.last_index, len(pts) < params.min_cluster_size,
                     np.concatenate((tail.indices, head.indices)))
    return [merged] + list(clusters[1:-1])


class StreamSegmenter:
    """Incremental segmentation of a point stream.

    Not thread safe; use one segmenter per stream.
    """

    def __init__(self, params: SegmentationParams, dim: int | None = None):
        self.params = params
        self.dim = dim
        self._reset()

    def _reset(self):
        self._open: list[np.ndarray] = []
        self._first = 0
        self._count = 0

    @property
    def open_size(self) -> int:
        return len(self._open)

    def _emit(self) -> Cluster:
        pts = np.array(self._open)
        c = Cluster(pts, self._first, self._first + len(pts) - 1, len(pts) < self.params.min_cluster_size)
        self._open = []
        return c

    def push(self, p) -> Cluster | None:
        """Add the next point; return the cluster it closed, if any."""
        a = np.array(as_array(p), dtype=float)
        if self.dim is None:
            self.dim = a.shape[0]
        elif a.shape[0] != self.dim:
            raise DimensionMismatch(self.dim, a.shape[0], "stream point")
        done = None
        if self._open and not break_criterion(self._open[-1], a, self.params):
            done = self._emit()
        if not self._open:
            self._first = self._count
        self._open.append(a)
        self._count += 1
        return done

    def finish(self) -> Cluster | None:
        """Flush the open cluster and reset the segmenter."""
        done = self._emit() if self._open else None
        self._reset()
        return done


def stream_push(state: StreamSegmenter, p) -> Cluster | None:
    return state.push(p)


def stream_finish(state: StreamSegmenter) -> Cluster | None:
    return state.finish()
