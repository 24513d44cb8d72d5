"""Seeded synthetic point clouds used by the benchmark, CLI and tests."""
from __future__ import annotations

import numpy as np

__all__ = ["SHAPES", "semicircle", "l_shape", "square", "helix", "generate", "l_shape_corners", "square_corners"]


def _noisy(pts: np.ndarray, noise: float, seed) -> np.ndarray:
    if noise > 0:
        pts = pts + np.random.default_rng(seed).normal(0.0, noise, pts.shape)
    return pts


def semicircle(n: int, radius: float = 10.0, noise: float = 0.01, seed=0) -> np.ndarray:
    t = np.linspace(0.0, np.pi, n)
    return _noisy(radius * np.column_stack([np.cos(t), np.sin(t)]), noise, seed)


def l_shape_corners(arm: float = 10.0) -> np.ndarray:
    return np.array([[arm, 0.0], [0.0, 0.0], [0.0, arm]])


def l_shape(n: int, arm: float = 10.0, noise: float = 0.0, seed=0) -> np.ndarray:
    """Two perpendicular arms meeting at the origin.

    The first ``n // 2`` points run from ``(arm, 0)`` to the corner, which is
    sample ``n // 2 - 1``; the rest climb the y axis towards ``(0, arm)``.
    """
    m = n // 2
    h = arm / (m - 1)
    first = np.column_stack([np.linspace(arm, 0.0, m), np.zeros(m)])
    k = n - m
    second = np.column_stack([np.zeros(k), h * np.arange(1, k + 1)])
    return _noisy(np.vstack([first, second]), noise, seed)


def square_corners(side: float = 10.0) -> np.ndarray:
    return np.array([[0.0, 0.0], [side, 0.0], [side, side], [0.0, side], [0.0, 0.0]])


def square(n: int, side: float = 10.0, noise: float = 0.0, seed=0) -> np.ndarray:
    """Closed traversal of a square outline starting and ending at ``(0, 0)``.

    ``n`` is rounded down to ``4m + 1`` so that every corner is a sample.
    """
    m = max(1, (n - 1) // 4)
    t = np.linspace(0.0, 4.0, 4 * m + 1)
    corners = square_corners(side)
    seg = np.minimum(t.astype(int), 3)
    frac = (t - seg)[:, None]
    pts = corners[seg] + frac * (corners[seg + 1] - corners[seg])
    return _noisy(pts, noise, seed)


def helix(n: int, radii=(2.0, 3.0, 2.5), turns: float = 3.0, pitch: float = 1.0,
          noise: float = 0.0, seed=0) -> np.ndarray:
    """3-D helix whose radius changes stepwise, producing gaps between runs."""
    t = np.linspace(0.0, 2.0 * np.pi * turns, n)
    r = np.asarray(radii, dtype=float)[np.minimum((np.arange(n) * len(radii)) // n, len(radii) - 1)]
    pts = np.column_stack([r * np.cos(t), r * np.sin(t), pitch * t / (2.0 * np.pi)])
    return _noisy(pts, noise, seed)


SHAPES = {
    "semicircle": semicircle,
    "l-shape": l_shape,
    "square": square,
    "helix": helix,
}


def generate(name: str, n: int, seed=0, **kwargs) -> np.ndarray:
    try:
        gen = SHAPES[name]
    except KeyError:
        raise ValueError(f"unknown shape {name!r}; valid shapes: {', '.join(sorted(SHAPES))}") from None
    return gen(n, seed=seed, **kwargs)
