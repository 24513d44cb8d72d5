"""Approximation of ordered point clusters by lines, planes and polylines."""
from .benchmark import ALGORITHMS, BenchmarkReport, BenchmarkRow, register_algorithm, run_benchmark
from .eigen import sym2_eigen, sym3_eigen
from .ftls import VectorizationResult, ftls_extract, global_optimize, polyline_construct, with_polyline
from .moments import PrefixMoments, build_prefix
from .simplify import douglas_peucker, polyline_deviation, polyline_sse, reumann_witkam
from .tls import FitResult, fit_line, fit_plane, line_sse, tls_line_fit, tls_plane_fit

__all__ = [
    "ALGORITHMS", "BenchmarkReport", "BenchmarkRow", "FitResult", "PrefixMoments", "VectorizationResult",
    "build_prefix", "douglas_peucker", "fit_line", "fit_plane", "ftls_extract", "global_optimize",
    "line_sse", "polyline_construct", "polyline_deviation", "polyline_sse", "register_algorithm",
    "reumann_witkam", "run_benchmark", "sym2_eigen", "sym3_eigen", "tls_line_fit", "tls_plane_fit",
    "with_polyline",
]
