from __future__ import annotations

import colorsys
from dataclasses import dataclass

from ..errors import ContractViolation

__all__ = ["Style", "MARKERS", "BLACK", "cluster_palette", "fmt"]

MARKERS = ("none", "dot", "cross", "square")
BLACK = (0.0, 0.0, 0.0)


def _check_rgb(c, what):
    if len(c) != 3 or not all(0.0 <= float(v) <= 1.0 for v in c):
        raise ContractViolation(f"{what} must be an RGB triple in [0, 1], got {c!r}")
    return tuple(float(v) for v in c)


@dataclass(frozen=True)
class Style:
    color: tuple[float, float, float] = BLACK
    line_width: float = 0.4
    marker: str = "none"
    fill: tuple[float, float, float] | None = None

    def __post_init__(self):
        object.__setattr__(self, "color", _check_rgb(self.color, "color"))
        if self.fill is not None:
            object.__setattr__(self, "fill", _check_rgb(self.fill, "fill"))
        if not self.line_width >= 0:
            raise ContractViolation(f"line width must be >= 0, got {self.line_width}")
        if self.marker not in MARKERS:
            raise ContractViolation(f"unknown marker {self.marker!r}; expected one of {MARKERS}")


def cluster_palette(k: int) -> list[tuple[float, float, float]]:
    """``k`` distinct, saturated, non-black colours (evenly spaced hues)."""
    out = []
    for i in range(k):
        r, g, b = colorsys.hsv_to_rgb((i * 0.618033988749895) % 1.0, 0.85, 0.85)
        out.append((round(r, 6), round(g, 6), round(b, 6)))
    return out


def fmt(v: float) -> str:
    """Fixed 6-decimal number, with negative zero printed as zero."""
    s = f"{v:.6f}"
    return "0.000000" if s == "-0.000000" else s

