"""Capability registry of the geometry types and seeded random instances.

The registry is a static table: for every type it records which generic
capabilities it offers and which transforms may be applied to it.  The
test-suite checks the table against actual behaviour.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    BoundingBox,
    Frustum3,
    LineSegment,
    Matrix,
    Polygon2,
    Polygon3,
    Quaternion,
    Vector,
)
from .errors import CapabilityError, ContractViolation
from .export.table import GREEN, RED, Cell, TableSpec
from .transform import RigidTf, Rotation, Translation

__all__ = [
    "TRAITS",
    "TRANSFORMS",
    "CapabilityRecord",
    "REGISTRY",
    "TYPES",
    "capability",
    "record",
    "type_name_of",
    "describe",
    "random_object",
    "registry_table",
]

TRAITS = ("is_dimensional", "has_element_type", "has_metric", "is_invertible", "has_identity", "has_nan",
          "has_random")
TRANSFORMS = ("Translation", "Rotation", "RigidTf")


@dataclass(frozen=True)
class CapabilityRecord:
    type_name: str
    flags: dict
    applicable: dict
    description: str

    def value(self, flag: str) -> bool:
        if flag in self.flags:
            return self.flags[flag]
        key = flag[:-len("-applicable")] if flag.endswith("-applicable") else flag
        if key in self.applicable:
            return self.applicable[key]
        raise CapabilityError(f"unknown capability {flag!r}; known: {', '.join(TRAITS + TRANSFORMS)}")


def _rec(name, traits: str, transforms: str, description: str) -> CapabilityRecord:
    # one character per column, 1 = capability present
    return CapabilityRecord(
        name,
        {t: c == "1" for t, c in zip(TRAITS, traits)},
        {t: c == "1" for t, c in zip(TRANSFORMS, transforms)},
        description,
    )


_ROWS = (
    _rec("VectorND", "1110011", "111", "N-dimensional real vector"),
    _rec("LineSegmentND", "1110001", "111", "line segment in N-dimensional space"),
    _rec("BoundingBoxND", "1100000", "111", "axis-aligned bounding box in N-dimensional space"),
    _rec("Polygon2D", "1100000", "111", "closed polygon in the plane"),
    _rec("Polygon3D", "1100000", "111", "planar polygon in 3-D space"),
    _rec("Frustum3D", "1100000", "111", "view frustum in 3-D space"),
    _rec("TranslationND", "1111101", "111", "translation of N-dimensional space"),
    _rec("RotationND", "1101101", "111", "rotation of N-dimensional space"),
    _rec("RigidTfND", "1101101", "111", "rigid transformation of N-dimensional space"),
    _rec("MatrixND", "0111111", "000", "dense real matrix"),
    _rec("Quaternion", "0111101", "000", "Hamilton quaternion"),
)

REGISTRY: dict[str, CapabilityRecord] = {r.type_name: r for r in _ROWS}

TYPES: dict[str, type] = {
    "VectorND": Vector,
    "LineSegmentND": LineSegment,
    "BoundingBoxND": BoundingBox,
    "Polygon2D": Polygon2,
    "Polygon3D": Polygon3,
    "Frustum3D": Frustum3,
    "TranslationND": Translation,
    "RotationND": Rotation,
    "RigidTfND": RigidTf,
    "MatrixND": Matrix,
    "Quaternion": Quaternion,
}
_NAMES = {cls: name for name, cls in TYPES.items()}


def record(type_name: str) -> CapabilityRecord:
    try:
        return REGISTRY[type_name]
    except KeyError:
        raise CapabilityError(f"unknown type {type_name!r}; known: {', '.join(REGISTRY)}") from None


def capability(type_name: str, flag: str) -> bool:
    """Registry value of ``flag`` for ``type_name``.

    ``flag`` is a trait name or a transform name (optionally suffixed with
    ``-applicable``).
    """
    return record(type_name).value(flag)


def type_name_of(obj) -> str:
    cls = obj if isinstance(obj, type) else type(obj)
    try:
        return _NAMES[cls]
    except KeyError:
        raise CapabilityError(f"{cls.__name__} is not a registered geometry type") from None


def describe(obj) -> str:
    """Human readable description, e.g. ``VectorND<3> (N-dimensional real vector, float64)``."""
    name = type_name_of(obj)
    rec = REGISTRY[name]
    dims = ""
    if rec.flags["is_dimensional"] and not isinstance(obj, type):
        dims = f"<{obj.dim}>"
    elif isinstance(obj, Matrix):
        dims = f"<{obj.rows}x{obj.cols}>"
    return f"{name}{dims} ({rec.description}, float64)"


def _random_rotation(rng, dim):
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return Rotation(q, check=False)


def random_object(type_name: str, seed=None, bounds=(-1.0, 1.0), dim: int = 3):
    """Seeded random instance of a type whose ``has_random`` capability is set.

    Coordinates (vectors, segment ends, translation offsets, matrix entries)
    are drawn uniformly from ``bounds``; rotations are uniformly distributed
    and quaternions unit-norm.
    """
    if not record(type_name).flags["has_random"]:
        raise CapabilityError(f"{type_name} does not support random generation")
    lo, hi = (float(b) for b in bounds)
    if not (np.isfinite(lo) and np.isfinite(hi) and lo <= hi):
        raise ContractViolation(f"random bounds must be finite with lo <= hi, got {bounds!r}")
    rng = np.random.default_rng(seed)

    def coords():
        return rng.uniform(lo, hi, dim)

    if type_name == "VectorND":
        return Vector(coords())
    if type_name == "LineSegmentND":
        return LineSegment(coords(), coords())
    if type_name == "TranslationND":
        return Translation(coords())
    if type_name == "RotationND":
        return _random_rotation(rng, dim)
    if type_name == "RigidTfND":
        rot = _random_rotation(rng, dim)
        return RigidTf(rot, Translation(coords()))
    if type_name == "MatrixND":
        return Matrix(rng.uniform(lo, hi, (dim, dim)))
    if type_name == "Quaternion":
        q = rng.normal(size=4)
        q /= np.linalg.norm(q)
        return Quaternion(*q)
    raise AssertionError(f"registry marks {type_name} random but no generator exists")


def registry_table() -> TableSpec:
    """The registry as a coloured table: traits, type name, applicable transforms."""
    head = [Cell(rf"\texttt{{~{t.replace('_', chr(92) + '_')}}}", rotate=True, raw=True) for t in TRAITS]
    head.append(Cell(r"\shortstack{Examined \\ templates}", raw=True))
    head += [Cell(rf"\texttt{{~{t}}}", rotate=True, raw=True) for t in TRANSFORMS]
    rows = [head]
    for rec in _ROWS:
        row = [Cell("", GREEN if rec.flags[t] else RED) for t in TRAITS]
        row.append(Cell(rf"\texttt{{{rec.type_name}}}", raw=True))
        row += [Cell("", GREEN if rec.applicable[t] else RED) for t in TRANSFORMS]
        rows.append(row)
    # double rules after the header and between the type groups
    rules = {0: 2, 1: 1, 2: 1, 3: 2, 4: 1, 5: 1, 6: 2, 7: 1, 8: 1, 9: 2, 10: 1}
    return TableSpec(rows, col_spec="c|c|c|c|c|c|c||c||c|c|c", rules=rules)
