"""Multi-figure LaTeX documents and external compilation."""
from __future__ import annotations

import os
import shlex
import shutil
import subprocess
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import ExportError
from .figure import Figure2D, latex_escape, render_figure2d
from .scene import Scene3D, render_scene3d
from .table import TableSpec, render_table

__all__ = [
    "Document",
    "CompileResult",
    "export_document",
    "compile_document",
    "resolve_latex_cmd",
    "DEFAULT_LATEX_CMD",
    "LATEX_ENV_VAR",
]

DEFAULT_LATEX_CMD = "pdflatex"
LATEX_ENV_VAR = "RTL_LATEX_CMD"
PACKAGES = ("tikz", "graphicx", "colortbl", "xcolor")


@dataclass
class Document:
    items: list[tuple[Figure2D | Scene3D | TableSpec, str]] = field(default_factory=list)
    document_class: str = "article"
    class_options: str = ""
    extra_preamble: list[str] = field(default_factory=list)

    def add(self, item, caption: str = "") -> "Document":
        if not isinstance(item, (Figure2D, Scene3D, TableSpec)):
            raise ExportError(f"cannot place a {type(item).__name__} in a document")
        self.items.append((item, caption))
        return self

    def __len__(self):
        return len(self.items)

    def to_latex(self) -> str:
        if not self.items:
            raise ExportError("document is empty")
        opts = f"[{self.class_options}]" if self.class_options else ""
        out = [rf"\documentclass{opts}{{{self.document_class}}}"]
        out += [rf"\usepackage{{{p}}}" for p in PACKAGES]
        out += self.extra_preamble
        out.append(r"\begin{document}")
        for item, caption in self.items:
            if isinstance(item, TableSpec):
                env, body = "table", render_table(item)
            elif isinstance(item, Scene3D):
                env, body = "figure", render_scene3d(item)
            else:
                env, body = "figure", render_figure2d(item)
            out.append(rf"\begin{{{env}}}[htbp]")
            out.append(r"\centering")
            out.append(body.rstrip("\n"))
            if caption:
                out.append(rf"\caption{{{latex_escape(caption)}}}")
            out.append(rf"\end{{{env}}}")
        out.append(r"\end{document}")
        return "\n".join(out) + "\n"


def export_document(doc: Document, path) -> Path:
    """Write the document as one self-contained UTF-8 ``.tex`` file."""
    path = Path(path)
    src = doc.to_latex()
    try:
        path.write_text(src, encoding="utf-8")
    except OSError as exc:
        raise ExportError(f"cannot write {path}: {exc}") from exc
    return path


@dataclass
class CompileResult:
    status: str  # ok | skipped | failed
    reason: str = ""
    pdf: Path | None = None
    returncode: int | None = None
    log_tail: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def __str__(self):
        return f"{self.status}: {self.reason}" if self.reason else self.status


def resolve_latex_cmd(latex_cmd: str | None = None) -> str:
    """Explicit argument, then ``RTL_LATEX_CMD``, then ``pdflatex``."""
    return latex_cmd or os.environ.get(LATEX_ENV_VAR) or DEFAULT_LATEX_CMD


def compile_document(path, latex_cmd: str | None = None, timeout: float = 120.0,
                     tail_lines: int = 20) -> CompileResult:
    """Run the configured LaTeX tool on ``path``.

    A missing tool gives status ``skipped``; a non-zero exit gives
    ``failed`` with the end of the log attached.  No exception escapes for
    either case.
    """
    path = Path(path)
    argv = shlex.split(resolve_latex_cmd(latex_cmd))
    if not argv or shutil.which(argv[0]) is None:
        return CompileResult("skipped", "compiler not found")
    outdir = path.parent.resolve()
    cmd = argv + ["-interaction=nonstopmode", "-halt-on-error", f"-output-directory={outdir}", path.name]
    try:
        proc = subprocess.run(cmd, cwd=outdir, capture_output=True, text=True, timeout=timeout)
    except (OSError, subprocess.TimeoutExpired) as exc:
        return CompileResult("failed", str(exc))
    tail = "\n".join((proc.stdout + proc.stderr).splitlines()[-tail_lines:])
    if proc.returncode != 0:
        return CompileResult("failed", f"{argv[0]} exited with {proc.returncode}", returncode=proc.returncode,
                             log_tail=tail)
    return CompileResult("ok", pdf=outdir / (path.stem + ".pdf"), returncode=0, log_tail=tail)
