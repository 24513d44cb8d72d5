"""Minimal 3-D scene renderer.

Objects are moved into the camera frame, projected (orthographic or
pinhole), ordered back to front by the mean camera-space depth of each
primitive and handed to the 2-D renderer.  There is no hidden-surface
removal beyond that painter's ordering.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from ..errors import ContractViolation, ExportError
from ..transform import RigidTf
from .figure import Figure2D, Primitive, render_figure2d
from .style import Style

__all__ = ["Orthographic", "Pinhole", "Object3D", "Scene3D", "RenderWarning", "project_scene", "render_scene3d"]


class RenderWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Orthographic:
    pass


@dataclass(frozen=True)
class Pinhole:
    focal: float = 1.0

    def __post_init__(self):
        if not self.focal > 0:
            raise ContractViolation(f"pinhole focal length must be positive, got {self.focal}")


@dataclass
class Object3D:
    kind: str  # points | segment | polyline | polygon
    points: np.ndarray
    style: Style = field(default_factory=Style)
    closed: bool = False


@dataclass
class Scene3D:
    """Objects in world coordinates seen by a camera.

    ``camera`` maps world coordinates into the camera frame: +x to the
    right of the image, +y down and +z along the viewing direction.
    """

    objects: list[Object3D] = field(default_factory=list)
    camera: RigidTf = field(default_factory=lambda: RigidTf.identity(3))
    projection: Orthographic | Pinhole = field(default_factory=Orthographic)
    scale: float = 10.0

    def add(self, kind: str, pts, style: Style | None = None, closed: bool = False) -> "Scene3D":
        if kind not in ("points", "segment", "polyline", "polygon"):
            raise ContractViolation(f"unknown 3-D primitive kind {kind!r}")
        a = np.asarray(pts, dtype=float).reshape(-1, 3)
        self.objects.append(Object3D(kind, a, style or Style(marker="dot" if kind == "points" else "none"), closed))
        return self


def project_scene(scene: Scene3D) -> tuple[Figure2D, bool]:
    """Projected, depth-sorted 2-D figure and whether everything was culled."""
    if scene.camera.dim != 3:
        raise ContractViolation("scene camera must be a 3-D rigid transform")
    pinhole = isinstance(scene.projection, Pinhole)
    items = []
    total = 0
    for i, obj in enumerate(scene.objects):
        if not np.all(np.isfinite(obj.points)):
            raise ExportError(f"object {i} ({obj.kind}) has a non-finite coordinate")
        cam = scene.camera.apply_array(obj.points)
        total += len(cam)
        if pinhole:
            front = cam[:, 2] > 0.0
            if obj.kind == "points":
                cam = cam[front]
            elif not np.all(front):
                continue
            if len(cam) == 0:
                continue
            xy = cam[:, :2] * (scene.projection.focal / cam[:, 2:3])
        else:
            xy = cam[:, :2]
        xy = xy * np.array([1.0, -1.0])  # image y points down, the page's up
        depth = float(np.mean(cam[:, 2])) if len(cam) else 0.0
        kind = "polyline" if obj.kind == "segment" else obj.kind
        items.append((depth, i, Primitive(kind, xy, obj.style, closed=obj.closed)))
    # farther first; ties keep insertion order
    items.sort(key=lambda it: (-it[0], it[1]))
    fig = Figure2D([p for _, _, p in items], scale=scene.scale)
    return fig, (pinhole and total > 0 and not items)


def render_scene3d(scene: Scene3D) -> str:
    fig, culled = project_scene(scene)
    if culled:
        warnings.warn("every scene point lies behind the pinhole camera", RenderWarning, stacklevel=2)
    return render_figure2d(fig)
