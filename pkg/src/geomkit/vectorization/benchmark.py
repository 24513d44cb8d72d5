"""Speed benchmark of the vectorization algorithms.

New methods are added with :func:`register_algorithm`; each entry maps
``(points, tolerance)`` to a :class:`Polyline` summary.  Only that call is
timed, the error metrics are computed afterwards.
"""
from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .. import shapes
from ..errors import ContractViolation
from ..export.table import Cell, TableSpec
from .ftls import ftls_extract, global_optimize, polyline_construct
from .moments import PrefixMoments
from .simplify import chord_distances, douglas_peucker, polyline_sse, reumann_witkam

__all__ = [
    "Polyline",
    "BenchmarkRow",
    "BenchmarkReport",
    "ALGORITHMS",
    "CSV_HEADER",
    "register_algorithm",
    "run_benchmark",
]

CSV_HEADER = ("algorithm", "n", "time_us", "total_sse", "segments")


@dataclass
class Polyline:
    """Outcome of one algorithm run.

    ``vertices[k]``-``vertices[k + 1]`` approximates points
    ``spans[k][0]..spans[k][1]``.
    """

    vertices: np.ndarray
    spans: list[tuple[int, int]]
    total_sse: float

    @property
    def segments(self) -> int:
        return len(self.spans)

    def max_deviation(self, points: np.ndarray) -> float:
        worst = 0.0
        for k, (a, b) in enumerate(self.spans):
            d = chord_distances(points[a:b + 1], self.vertices[k], self.vertices[k + 1])
            worst = max(worst, float(d.max()))
        return worst


def _ftls(points, tol):
    return ftls_extract(points, tol)


def _ftls_global(points, tol):
    pm = PrefixMoments(points)
    return global_optimize(points, pm, ftls_extract(points, tol, pm=pm))


def _ftls_summary(res) -> Polyline:
    corners, _ = polyline_construct(res)
    return Polyline(corners, list(res.intervals), res.total_sse)


def _keys_summary(points, keys) -> Polyline:
    return Polyline(points[keys], list(zip(keys[:-1], keys[1:])), polyline_sse(points, keys))


@dataclass(frozen=True)
class _Algorithm:
    run: Callable  # timed part
    summarize: Callable  # (points, output) -> Polyline


ALGORITHMS: dict[str, _Algorithm] = {
    "ftls": _Algorithm(_ftls, lambda pts, r: _ftls_summary(r)),
    "ftls-global": _Algorithm(_ftls_global, lambda pts, r: _ftls_summary(r)),
    "dp": _Algorithm(douglas_peucker, _keys_summary),
    "rw": _Algorithm(reumann_witkam, _keys_summary),
}


def register_algorithm(name: str, run: Callable, summarize: Callable):
    """Add a method to the benchmark.

    ``run(points, tol)`` is timed; ``summarize(points, output)`` must return
    a :class:`Polyline`.
    """
    ALGORITHMS[name] = _Algorithm(run, summarize)


def check_algorithms(names) -> list[str]:
    names = list(names)
    bad = [a for a in names if a not in ALGORITHMS]
    if bad:
        raise ContractViolation(f"unknown algorithm(s) {', '.join(bad)}; valid: {', '.join(ALGORITHMS)}")
    return names


@dataclass(frozen=True)
class BenchmarkRow:
    algorithm: str
    n: int
    time_us: float
    total_sse: float
    segments: int
    max_deviation: float


@dataclass
class BenchmarkReport:
    shape: str
    tolerance: float
    seed: int
    rows: list[BenchmarkRow]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.rows:
            w.writerow([r.algorithm, r.n, f"{r.time_us:.3f}", repr(r.total_sse), r.segments])
        return buf.getvalue()

    def write_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write(self.to_csv())

    def time_of(self, algorithm: str, n: int) -> float:
        for r in self.rows:
            if r.algorithm == algorithm and r.n == n:
                return r.time_us
        raise KeyError((algorithm, n))

    def to_table(self) -> TableSpec:
        head = [Cell(h) for h in ("algorithm", "n", "time [us]", "total SSE", "segments", "max dev.")]
        body = [[Cell(r.algorithm), Cell(str(r.n)), Cell(f"{r.time_us:.1f}"), Cell(f"{r.total_sse:.6g}"),
                 Cell(str(r.segments)), Cell(f"{r.max_deviation:.6g}")] for r in self.rows]
        return TableSpec([head] + body, col_spec="l|rrrrr", rules={0: 1})


def run_benchmark(shape: str = "semicircle", sizes=(1000, 10000, 100000), algorithms=("ftls", "dp", "rw"),
                  tolerance: float = 0.05, seed: int = 0, repeats: int = 3, **shape_kw) -> BenchmarkReport:
    """Time every algorithm on the same seeded cloud for every size.

    The reported time is the best of ``repeats`` runs, in microseconds.
    """
    algorithms = check_algorithms(algorithms)
    sizes = [int(s) for s in sizes]
    if not sizes or any(s < 2 for s in sizes):
        raise ContractViolation(f"benchmark sizes must be >= 2, got {sizes}")
    if shape not in shapes.SHAPES:
        raise ContractViolation(f"unknown shape {shape!r}; valid shapes: {', '.join(shapes.SHAPES)}")
    rows = []
    for n in sizes:
        pts = shapes.generate(shape, n, seed=seed, **shape_kw)
        for name in algorithms:
            alg = ALGORITHMS[name]
            best = float("inf")
            out = None
            for _ in range(max(1, repeats)):
                t0 = time.perf_counter()
                out = alg.run(pts, tolerance)
                best = min(best, time.perf_counter() - t0)
            poly = alg.summarize(pts, out)
            rows.append(BenchmarkRow(name, n, best * 1e6, poly.total_sse, poly.segments, poly.max_deviation(pts)))
    return BenchmarkReport(shape, tolerance, seed, rows)
