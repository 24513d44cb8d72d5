"""2-D vector drawings rendered as TikZ pictures."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ExportError
from .style import Style, fmt

__all__ = ["Primitive", "Axes", "Figure2D", "render_figure2d", "latex_escape"]

KINDS = ("points", "polyline", "segment", "polygon", "text")

_ESCAPES = {
    "\\": r"\textbackslash{}",
    "&": r"\&",
    "%": r"\%",
    "$": r"\$",
    "#": r"\#",
    "_": r"\_",
    "{": r"\{",
    "}": r"\}",
    "~": r"\textasciitilde{}",
    "^": r"\textasciicircum{}",
}


def latex_escape(text: str) -> str:
    return "".join(_ESCAPES.get(ch, ch) for ch in str(text))


@dataclass
class Primitive:
    kind: str
    points: np.ndarray
    style: Style = field(default_factory=Style)
    text: str | None = None
    closed: bool = False


@dataclass
class Axes:
    x_range: tuple[float, float]
    y_range: tuple[float, float]
    tick: float | None = None
    style: Style = field(default_factory=Style)


@dataclass
class Figure2D:
    """Ordered draw list; later primitives paint over earlier ones."""

    primitives: list[Primitive] = field(default_factory=list)
    axes: Axes | None = None
    scale: float = 10.0  # mm per unit

    def _add(self, kind, pts, style, **kw) -> "Figure2D":
        a = np.asarray(pts, dtype=float).reshape(-1, 2)
        self.primitives.append(Primitive(kind, a, style or Style(), **kw))
        return self

    def add_points(self, pts, style: Style | None = None):
        return self._add("points", pts, style or Style(marker="dot"))

    def add_polyline(self, pts, style: Style | None = None, closed: bool = False):
        return self._add("polyline", pts, style, closed=closed)

    def add_segment(self, a, b, style: Style | None = None):
        return self._add("segment", [a, b], style)

    def add_polygon(self, pts, style: Style | None = None):
        return self._add("polygon", pts, style)

    def add_text(self, at, text: str, style: Style | None = None):
        return self._add("text", [at], style, text=text)


class _Colors:
    def __init__(self):
        self.names: dict[tuple, str] = {}

    def __call__(self, rgb) -> str:
        if rgb not in self.names:
            self.names[rgb] = f"c{len(self.names)}"
        return self.names[rgb]

    def definitions(self) -> list[str]:
        return [rf"\definecolor{{{name}}}{{rgb}}{{{fmt(r)},{fmt(g)},{fmt(b)}}}"
                for (r, g, b), name in self.names.items()]


def _pt(p) -> str:
    return f"({fmt(p[0])},{fmt(p[1])})"


def _path(pts) -> str:
    return " -- ".join(_pt(p) for p in pts)


def _marker_size(style: Style) -> str:
    return fmt(max(2.0 * style.line_width, 0.8)) + "pt"


def _render_primitive(prim: Primitive, color) -> str:
    st = prim.style
    c = color(st.color)
    lw = f"line width={fmt(st.line_width)}pt"
    pts = prim.points
    if prim.kind == "points":
        r = _marker_size(st)
        marker = "dot" if st.marker == "none" else st.marker
        if marker == "dot":
            body = " ".join(f"{_pt(p)} circle[radius={r}]" for p in pts)
            return rf"\fill[{c}] {body};"
        if marker == "square":
            body = " ".join(f"{_pt(p)} +(-{r},-{r}) rectangle +({r},{r})" for p in pts)
            return rf"\fill[{c}] {body};"
        body = " ".join(f"{_pt(p)} +(-{r},-{r}) -- +({r},{r}) {_pt(p)} +(-{r},{r}) -- +({r},-{r})" for p in pts)
        return rf"\draw[{c},{lw}] {body};"
    if prim.kind in ("polyline", "segment"):
        tail = " -- cycle" if prim.closed else ""
        return rf"\draw[{c},{lw}] {_path(pts)}{tail};"
    if prim.kind == "polygon":
        if st.fill is not None:
            return rf"\filldraw[draw={c},fill={color(st.fill)},{lw}] {_path(pts)} -- cycle;"
        return rf"\draw[{c},{lw}] {_path(pts)} -- cycle;"
    if prim.kind == "text":
        return rf"\node[text={c}] at {_pt(pts[0])} {{{latex_escape(prim.text)}}};"
    raise ExportError(f"unknown primitive kind {prim.kind!r}")


def _render_axes(ax: Axes, color) -> list[str]:
    c = color(ax.style.color)
    lw = f"line width={fmt(ax.style.line_width)}pt"
    (x0, x1), (y0, y1) = ax.x_range, ax.y_range
    lines = [
        rf"\draw[{c},{lw},->] ({fmt(x0)},0.000000) -- ({fmt(x1)},0.000000);",
        rf"\draw[{c},{lw},->] (0.000000,{fmt(y0)}) -- (0.000000,{fmt(y1)});",
    ]
    if ax.tick:
        xs = np.arange(np.ceil(x0 / ax.tick), np.floor(x1 / ax.tick) + 1) * ax.tick
        ys = np.arange(np.ceil(y0 / ax.tick), np.floor(y1 / ax.tick) + 1) * ax.tick
        for x in xs:
            lines.append(rf"\draw[{c},{lw}] ({fmt(x)},0.000000) -- +(0pt,-2pt) node[below] {{{fmt(x)}}};")
        for y in ys:
            lines.append(rf"\draw[{c},{lw}] (0.000000,{fmt(y)}) -- +(-2pt,0pt) node[left] {{{fmt(y)}}};")
    return lines


def render_figure2d(fig: Figure2D) -> str:
    """Self-contained ``tikzpicture`` source for the figure.

    Output is byte-identical for equal input.  Colours are defined once
    each, in order of first use.
    """
    for i, prim in enumerate(fig.primitives):
        if prim.kind not in KINDS:
            raise ExportError(f"primitive {i}: unknown kind {prim.kind!r}")
        if not np.all(np.isfinite(prim.points)):
            raise ExportError(f"primitive {i} ({prim.kind}) has a non-finite coordinate")
    if not (fig.scale > 0 and np.isfinite(fig.scale)):
        raise ExportError(f"figure scale must be positive, got {fig.scale}")
    color = _Colors()
    body = []
    if fig.axes is not None:
        body += _render_axes(fig.axes, color)
    for prim in fig.primitives:
        body.append(_render_primitive(prim, color))
    s = fmt(fig.scale)
    lines = [rf"\begin{{tikzpicture}}[x={s}mm,y={s}mm]"]
    lines += color.definitions()
    lines += body
    lines.append(r"\end{tikzpicture}")
    return "\n".join(lines) + "\n"
