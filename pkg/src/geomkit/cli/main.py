"""``geomkit`` command line.

Subcommands: ``run`` (segment, vectorize and export a point cloud),
``bench`` (time the vectorizers on synthetic shapes) and ``traits``
(print the capability registry).  Options of ``run`` may also come from a
flat ``key = value`` file given with ``--config``; flags on the command line
win over the file.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import fields

from .. import shapes
from ..errors import GeomError
from ..export.document import Document, export_document
from ..meta import REGISTRY, TRAITS, TRANSFORMS
from ..vectorization.benchmark import ALGORITHMS, run_benchmark
from .ingest import FORMATS
from .pipeline import VECTORIZERS, PipelineConfig, PipelineError, run_pipeline

__all__ = ["main", "build_parser", "read_config"]

_CONFIG_KEYS = {f.name for f in fields(PipelineConfig)}
_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _error(stage: str, msg: str) -> int:
    print(f"geomkit: error[{stage}]: {msg}", file=sys.stderr)
    return 1


def read_config(path) -> dict[str, str]:
    """Flat ``key = value`` pairs; ``#`` starts a comment, dashes in keys become underscores."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value, got {raw.strip()!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in _CONFIG_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = value
    return out


def _csv_list(conv):
    def parse(s: str):
        try:
            return [conv(x.strip()) for x in s.split(",") if x.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid list {s!r}") from None
    return parse


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="geomkit", description="Point-cloud segmentation and vectorization toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="segment and vectorize a point cloud, write CSV and/or a LaTeX figure")
    src = run.add_argument_group("input")
    src.add_argument("--config", help="flat key=value file with defaults for the options below")
    src.add_argument("--input", help="point file, one point per row")
    src.add_argument("--format", choices=FORMATS, default=None)
    src.add_argument("--dim", type=int, choices=(2, 3), default=None)
    src.add_argument("--shape", help=f"synthetic input instead of a file: {', '.join(sorted(shapes.SHAPES))}")
    src.add_argument("--n", type=int, default=None, help="number of synthetic points")
    src.add_argument("--noise", type=float, default=None, help="gaussian noise of the synthetic points")
    seg = run.add_argument_group("segmentation")
    seg.add_argument("--eps-min", type=float, default=None)
    seg.add_argument("--rel-factor", type=float, default=None)
    seg.add_argument("--min-cluster", type=int, default=None)
    seg.add_argument("--circular", action="store_true", default=None)
    vec = run.add_argument_group("vectorization")
    vec.add_argument("--vectorizer", default=None, help=f"one of {', '.join(VECTORIZERS)}")
    vec.add_argument("--sigma-max", type=float, default=None, help="rms threshold of the ftls vectorizers")
    vec.add_argument("--tol", type=float, default=None, help="distance tolerance of dp and rw")
    out = run.add_argument_group("output")
    out.add_argument("--out-tex")
    out.add_argument("--out-csv")
    out.add_argument("--out-polyline", help="CSV of polyline corners per cluster")
    out.add_argument("--seed", type=int, default=None)
    out.add_argument("--latex-cmd", default=None)
    out.add_argument("--compile", action="store_true", default=None, help="run LaTeX on the written figure")

    bench = sub.add_parser("bench", help="time the vectorization algorithms")
    bench.add_argument("--shape", default="semicircle")
    bench.add_argument("--sizes", type=_csv_list(int), default=[1000, 10000, 100000])
    bench.add_argument("--algorithms", type=_csv_list(str), default=["ftls", "dp", "rw"])
    bench.add_argument("--tolerance", type=float, default=0.05)
    bench.add_argument("--noise", type=float, default=None)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--repeats", type=int, default=3)
    bench.add_argument("--output", help="CSV path (stdout if omitted)")
    bench.add_argument("--out-tex", help="also write the results as a LaTeX table")

    sub.add_parser("traits", help="print the capability registry")
    return p


def _convert(key: str, value: str):
    default = PipelineConfig.__dataclass_fields__[key].default
    if isinstance(default, bool):
        v = value.lower()
        if v in _TRUE:
            return True
        if v in _FALSE:
            return False
        raise ValueError(f"config key {key!r} expects a boolean, got {value!r}")
    if isinstance(default, (int, float)):
        return type(default)(value)
    return value


def _pipeline_config(ns) -> PipelineConfig:
    values = {}
    if ns.config:
        for k, v in read_config(ns.config).items():
            values[k] = _convert(k, v)
    for k in _CONFIG_KEYS:
        v = getattr(ns, k, None)
        if v is not None:
            values[k] = v
    return PipelineConfig(**values)


def _cmd_run(ns) -> int:
    try:
        cfg = _pipeline_config(ns)
    except (OSError, ValueError) as exc:
        return _error("ingest", f"config: {exc}")
    try:
        result = run_pipeline(cfg)
    except PipelineError as exc:
        return _error(exc.stage, exc.message)
    print(result.summary())
    return 0


def _cmd_bench(ns) -> int:
    if ns.shape not in shapes.SHAPES:
        return _error("ingest", f"unknown shape {ns.shape!r}; valid shapes: {', '.join(sorted(shapes.SHAPES))}")
    bad = [a for a in ns.algorithms if a not in ALGORITHMS]
    if bad or not ns.algorithms:
        return _error("vectorize", f"unknown algorithm(s) {', '.join(bad) or '(none)'}; "
                               f"valid: {', '.join(ALGORITHMS)}")
    kw = {} if ns.noise is None else {"noise": ns.noise}
    try:
        report = run_benchmark(ns.shape, ns.sizes, ns.algorithms, tolerance=ns.tolerance, seed=ns.seed,
                               repeats=ns.repeats, **kw)
    except GeomError as exc:
        return _error("vectorize", str(exc))
    try:
        if ns.output:
            report.write_csv(ns.output)
        else:
            sys.stdout.write(report.to_csv())
        if ns.out_tex:
            export_document(Document().add(report.to_table(), f"Vectorization benchmark on {ns.shape}"), ns.out_tex)
    except (GeomError, OSError) as exc:
        return _error("export", str(exc))
    return 0


def _cmd_traits(ns) -> int:
    cols = TRAITS + TRANSFORMS
    width = max(len(n) for n in REGISTRY)
    print(f"{'type':<{width}}  " + " ".join(f"{i:>2}" for i in range(1, len(cols) + 1)))
    for name, rec in REGISTRY.items():
        print(f"{name:<{width}}  " + " ".join(" +" if rec.value(c) else " -" for c in cols))
    for i, c in enumerate(cols, start=1):
        print(f"{i:>2}: {c}")
    return 0


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    return {"run": _cmd_run, "bench": _cmd_bench, "traits": _cmd_traits}[ns.command](ns)


if __name__ == "__main__":
    sys.exit(main())
