"""Colored ``tabular`` tables."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ExportError
from .figure import latex_escape
from .style import fmt

__all__ = ["Cell", "TableSpec", "render_table", "GREEN", "RED"]

GREEN = (0.4, 1.0, 0.4)  # xcolor green!60!white
RED = (1.0, 0.4, 0.4)  # xcolor red!60!white


@dataclass(frozen=True)
class Cell:
    text: str = ""
    fill: tuple[float, float, float] | None = None
    rotate: bool = False
    raw: bool = False  # text is LaTeX already, do not escape


@dataclass
class TableSpec:
    """Rectangular grid of cells.

    ``rules`` maps a row index to the number of ``\\hline`` drawn below it
    (use -1 for rules above the first row).  ``col_spec`` is the tabular
    column specification, centred columns without separators by default.
    """

    cells: list[list[Cell]]
    col_spec: str | None = None
    rules: dict[int, int] = field(default_factory=dict)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.cells), (len(self.cells[0]) if self.cells else 0)

    @classmethod
    def from_text(cls, rows, **kw) -> "TableSpec":
        return cls([[c if isinstance(c, Cell) else Cell(str(c)) for c in row] for row in rows], **kw)


def _cell(c: Cell) -> str:
    text = c.text if c.raw else latex_escape(c.text)
    if c.rotate:
        text = rf"\rotatebox[origin=c]{{90}}{{{text}}}"
    if c.fill is not None:
        r, g, b = c.fill
        text = rf"\cellcolor[rgb]{{{fmt(r)},{fmt(g)},{fmt(b)}}}{text}"
    return text


def render_table(t: TableSpec) -> str:
    if not t.cells or not t.cells[0]:
        raise ExportError("a table needs at least one cell")
    ncols = len(t.cells[0])
    for i, row in enumerate(t.cells):
        if len(row) != ncols:
            raise ExportError(f"ragged table: row {i} has {len(row)} cells, expected {ncols}")
    spec = t.col_spec or "c" * ncols
    lines = [rf"\begin{{tabular}}{{{spec}}}"]
    lines += [r"\hline"] * t.rules.get(-1, 0)
    for i, row in enumerate(t.cells):
        lines.append(" & ".join(_cell(c) for c in row) + r" \\")
        lines += [r"\hline"] * t.rules.get(i, 0)
    lines.append(r"\end{tabular}")
    return "\n".join(lines) + "\n"
