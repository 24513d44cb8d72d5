"""LaTeX export: 2-D figures, 3-D scenes, tables and documents."""
from .document import (
    DEFAULT_LATEX_CMD,
    LATEX_ENV_VAR,
    CompileResult,
    Document,
    compile_document,
    export_document,
    resolve_latex_cmd,
)
from .figure import Axes, Figure2D, Primitive, latex_escape, render_figure2d
from .scene import Object3D, Orthographic, Pinhole, RenderWarning, Scene3D, project_scene, render_scene3d
from .style import BLACK, Style, cluster_palette
from .table import GREEN, RED, Cell, TableSpec, render_table

__all__ = [
    "Axes", "BLACK", "Cell", "CompileResult", "DEFAULT_LATEX_CMD", "Document", "Figure2D", "GREEN",
    "LATEX_ENV_VAR", "Object3D", "Orthographic", "Pinhole", "Primitive", "RED", "RenderWarning", "Scene3D",
    "Style", "TableSpec", "cluster_palette", "compile_document", "export_document", "latex_escape",
    "project_scene", "render_figure2d", "render_scene3d", "render_table", "resolve_latex_cmd",
]
