"""Segmentation -> vectorization -> export pipeline behind ``geomkit run``."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import shapes
from ..core import as_array
from ..errors import GeomError
from ..export.document import CompileResult, Document, compile_document, export_document
from ..export.figure import Figure2D
from ..export.scene import Scene3D
from ..export.style import BLACK, Style, cluster_palette
from ..segmentation import Cluster, SegmentationParams, segment_scan
from ..transform import RigidTf, Rotation, Translation
from ..vectorization import PrefixMoments, douglas_peucker, ftls_extract, global_optimize, polyline_construct
from ..vectorization.simplify import chord_distances, reumann_witkam
from .ingest import FORMATS, ingest

__all__ = [
    "VECTORIZERS",
    "STAGES",
    "PipelineConfig",
    "PipelineError",
    "ClusterResult",
    "PipelineResult",
    "run_pipeline",
    "csv_header",
]

VECTORIZERS = ("ftls", "ftls+global", "dp", "rw")
STAGES = ("ingest", "segment", "vectorize", "export")
FIGURE_SIZE_MM = 120.0


class PipelineError(GeomError):
    """Failure of one pipeline stage; ``str()`` starts with the stage tag."""

    def __init__(self, stage: str, message: str):
        self.stage = stage
        self.message = message
        super().__init__(f"[{stage}] {message}")


@dataclass
class PipelineConfig:
    input: str | None = None
    format: str = "csv"
    dim: int = 2
    eps_min: float = 0.1
    rel_factor: float = 0.0
    min_cluster: int = 3
    circular: bool = False
    vectorizer: str = "ftls"
    sigma_max: float = 0.05
    tol: float = 0.05
    out_tex: str | None = None
    out_csv: str | None = None
    out_polyline: str | None = None
    seed: int = 0
    latex_cmd: str | None = None
    compile: bool = False
    # synthetic input instead of a file
    shape: str | None = None
    n: int = 200
    noise: float = 0.0

    def validate(self) -> None:
        """Check the invariants; errors carry the tag of the stage the bad value belongs to."""
        if self.dim not in (2, 3):
            raise PipelineError("ingest", f"dim must be 2 or 3, got {self.dim}")
        if self.format not in FORMATS:
            raise PipelineError("ingest", f"unknown format {self.format!r}; valid: {', '.join(FORMATS)}")
        if (self.input is None) == (self.shape is None):
            raise PipelineError("ingest", "exactly one of input path or synthetic shape is required")
        if self.input is not None and not str(self.input):
            raise PipelineError("ingest", "input path is empty")
        if self.shape is not None and self.shape not in shapes.SHAPES:
            raise PipelineError("ingest", f"unknown shape {self.shape!r}; "
                                          f"valid: {', '.join(sorted(shapes.SHAPES))}")
        try:
            self.segmentation_params()
        except GeomError as exc:
            raise PipelineError("segment", str(exc)) from exc
        if self.vectorizer == "ftls-global":
            self.vectorizer = "ftls+global"
        if self.vectorizer not in VECTORIZERS:
            raise PipelineError("vectorize", f"unknown vectorizer {self.vectorizer!r}; "
                                             f"valid: {', '.join(VECTORIZERS)}")
        if not self.tolerance > 0:
            raise PipelineError("vectorize", f"vectorizer tolerance must be positive, got {self.tolerance}")
        for name in ("out_tex", "out_csv", "out_polyline"):
            v = getattr(self, name)
            if v is not None and not str(v):
                raise PipelineError("export", f"{name} path is empty")

    @property
    def tolerance(self) -> float:
        return self.sigma_max if self.vectorizer.startswith("ftls") else self.tol

    def segmentation_params(self) -> SegmentationParams:
        return SegmentationParams(self.eps_min, self.rel_factor, self.min_cluster)


@dataclass
class ClusterResult:
    cluster_id: int
    cluster: Cluster
    segments: list[tuple[np.ndarray, np.ndarray]]
    sse: list[float]
    counts: list[int]
    vertices: np.ndarray  # polyline corners

    @property
    def n_segments(self) -> int:
        return len(self.segments)


@dataclass
class PipelineResult:
    points: np.ndarray
    clusters: list[Cluster]
    vectorized: list[ClusterResult] = field(default_factory=list)
    artifacts: list[Path] = field(default_factory=list)
    compile_result: CompileResult | None = None

    def summary(self) -> str:
        lines = [f"{len(self.points)} points, {len(self.clusters)} clusters "
                 f"({sum(c.is_outlier for c in self.clusters)} outliers)"]
        for r in self.vectorized:
            lines.append(f"cluster {r.cluster_id}: {len(r.cluster)} points, {r.n_segments} segments, "
                         f"{len(r.vertices)} corners")
        lines += [f"wrote {p}" for p in self.artifacts]
        if self.compile_result is not None:
            lines.append(f"compile: {self.compile_result}")
        return "\n".join(lines)


def csv_header(dim: int) -> list[str]:
    axes = "xyz"[:dim]
    return ["cluster_id", "seg_id"] + [f"{a}0" for a in axes] + [f"{a}1" for a in axes] + ["sse", "count"]


def _load(cfg: PipelineConfig) -> np.ndarray:
    if cfg.shape is not None:
        pts = shapes.generate(cfg.shape, cfg.n, seed=cfg.seed, noise=cfg.noise)
        if pts.shape[1] != cfg.dim:
            raise PipelineError("ingest", f"shape {cfg.shape!r} is {pts.shape[1]}-D but dim is {cfg.dim}")
        return pts
    return ingest(cfg.input, cfg.format, cfg.dim)


def _vectorize_cluster(cid: int, cluster: Cluster, cfg: PipelineConfig) -> ClusterResult:
    pts = cluster.points
    if cfg.vectorizer.startswith("ftls"):
        pm = PrefixMoments(pts)
        res = ftls_extract(pts, cfg.sigma_max, pm=pm)
        if cfg.vectorizer == "ftls+global":
            res = global_optimize(pts, pm, res)
        corners, _ = polyline_construct(res)
        segs = [(as_array(s.begin), as_array(s.end)) for s in res.segments]
        return ClusterResult(cid, cluster, segs, [f.sse for f in res.fits],
                             [b - a + 1 for a, b in res.intervals], corners)
    keys = douglas_peucker(pts, cfg.tol) if cfg.vectorizer == "dp" else reumann_witkam(pts, cfg.tol)
    segs, sse, counts = [], [], []
    for a, b in zip(keys[:-1], keys[1:]):
        d = chord_distances(pts[a:b + 1], pts[a], pts[b])
        segs.append((pts[a], pts[b]))
        sse.append(float(d @ d))
        counts.append(b - a + 1)
    return ClusterResult(cid, cluster, segs, sse, counts, pts[keys])


def _write_csv(path, dim, results: list[ClusterResult]):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(csv_header(dim))
        for r in results:
            for k, (a, b) in enumerate(r.segments):
                w.writerow([r.cluster_id, k] + [repr(float(v)) for v in (*a, *b)]
                           + [repr(float(r.sse[k])), r.counts[k]])


def _write_polyline(path, dim, results: list[ClusterResult]):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["cluster_id", "vertex_id"] + list("xyz"[:dim]))
        for r in results:
            for k, v in enumerate(r.vertices):
                w.writerow([r.cluster_id, k] + [repr(float(x)) for x in v])


def _view_camera(pts: np.ndarray) -> RigidTf:
    # oblique orthographic view from above the (+x, -y) side, image up = world +z
    fwd = np.array([-1.0, 1.0, -0.8])
    fwd /= np.linalg.norm(fwd)
    right = np.cross(fwd, [0.0, 0.0, 1.0])
    right /= np.linalg.norm(right)
    down = np.cross(fwd, right)
    rot = Rotation(np.vstack([right, down, fwd]))
    centre = 0.5 * (pts.min(axis=0) + pts.max(axis=0))
    return RigidTf(rot, Translation(-(rot.matrix @ centre)))


def _figure(result: PipelineResult, dim: int):
    pts = result.points
    extent = float(np.max(pts.max(axis=0) - pts.min(axis=0))) if len(pts) else 0.0
    scale = FIGURE_SIZE_MM / extent if extent > 0 else 10.0
    colors = cluster_palette(len(result.vectorized))
    outliers = [c.points for c in result.clusters if c.is_outlier]
    fig = Figure2D(scale=scale) if dim == 2 else Scene3D(camera=_view_camera(pts), scale=scale)

    def put(kind, p, style):
        if dim == 2:
            {"points": fig.add_points, "polyline": fig.add_polyline}[kind](p, style)
        else:
            fig.add(kind, p, style)

    for p in outliers:
        put("points", p, Style(BLACK, marker="cross"))
    for r, col in zip(result.vectorized, colors):
        put("points", r.cluster.points, Style(col, marker="dot"))
    for r, col in zip(result.vectorized, colors):
        if len(r.vertices) >= 2:
            put("polyline", r.vertices, Style(col, line_width=0.8))
    return fig


def run_pipeline(cfg: PipelineConfig) -> PipelineResult:
    """Run every stage; raises :class:`PipelineError` tagged with the failing stage."""
    cfg.validate()
    try:
        pts = _load(cfg)
    except PipelineError:
        raise
    except (GeomError, OSError, ValueError) as exc:
        raise PipelineError("ingest", str(exc)) from exc
    if len(pts) == 0:
        raise PipelineError("ingest", "no points")

    try:
        clusters = segment_scan(pts, cfg.segmentation_params(), circular=cfg.circular)
    except (GeomError, ValueError) as exc:
        raise PipelineError("segment", str(exc)) from exc
    result = PipelineResult(pts, clusters)

    try:
        for cid, c in enumerate(clusters):
            if not c.is_outlier and len(c) >= 2:
                result.vectorized.append(_vectorize_cluster(cid, c, cfg))
    except (GeomError, ValueError) as exc:
        raise PipelineError("vectorize", str(exc)) from exc

    try:
        if cfg.out_csv:
            _write_csv(cfg.out_csv, cfg.dim, result.vectorized)
            result.artifacts.append(Path(cfg.out_csv))
        if cfg.out_polyline:
            _write_polyline(cfg.out_polyline, cfg.dim, result.vectorized)
            result.artifacts.append(Path(cfg.out_polyline))
        if cfg.out_tex:
            doc = Document().add(_figure(result, cfg.dim), f"{len(result.vectorized)} clusters, {cfg.vectorizer}")
            result.artifacts.append(export_document(doc, cfg.out_tex))
            if cfg.compile:
                result.compile_result = compile_document(cfg.out_tex, cfg.latex_cmd)
                if result.compile_result.status == "failed":
                    raise PipelineError("export", f"LaTeX compilation {result.compile_result}\n"
                                                  f"{result.compile_result.log_tail}")
    except PipelineError:
        raise
    except (GeomError, OSError) as exc:
        raise PipelineError("export", str(exc)) from exc
    return result
