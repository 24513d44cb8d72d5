"""Dimension-generic algebraic and geometric primitives.

Every type here is an immutable value object backed by read-only float64
numpy arrays.  Dimensions are checked at operation boundaries and a
mismatch raises :class:`~geomkit.errors.DimensionMismatch`.
"""
from __future__ import annotations

import math
import warnings
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CapabilityError,
    ContractViolation,
    DegenerateGeometry,
    DimensionMismatch,
)

__all__ = [
    "Vector",
    "Matrix",
    "Quaternion",
    "LineSegment",
    "BoundingBox",
    "Polygon2",
    "Polygon3",
    "Frustum3",
    "NonUnitQuaternionWarning",
    "vec",
    "as_array",
    "distance",
    "point_segment_distance",
    "quaternion_rotate",
    "bbox_from_points",
]

UNIT_TOL = 1e-12
PLANARITY_TOL = 1e-9


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def as_array(x) -> np.ndarray:
    """Return ``x`` (Vector, Matrix, sequence or array) as a float64 ndarray."""
    if isinstance(x, (Vector, Matrix)):
        return x._a
    return np.asarray(x, dtype=float)


def _check_dim(expected: int, got: int, what="operand"):
    if expected != got:
        raise DimensionMismatch(expected, got, what)


class Vector:
    """Real vector of fixed dimension."""

    __slots__ = ("_a",)
    dtype = np.dtype(float)

    def __init__(self, coords: Iterable[float]):
        a = np.array(coords, dtype=float)
        if a.ndim != 1 or a.size == 0:
            raise ContractViolation(f"a vector needs a non-empty 1-D coordinate list, got shape {a.shape}")
        self._a = _frozen(a)

    @classmethod
    def _wrap(cls, a: np.ndarray) -> "Vector":
        v = cls.__new__(cls)
        v._a = _frozen(a)
        return v

    @classmethod
    def empty(cls, dim: int) -> "Vector":
        """Allocate without initialization; the contents are unspecified."""
        return cls._wrap(np.empty(dim))

    @classmethod
    def zeros(cls, dim: int) -> "Vector":
        return cls._wrap(np.zeros(dim))

    @classmethod
    def nan(cls, dim: int) -> "Vector":
        return cls._wrap(np.full(dim, np.nan))

    @classmethod
    def basis(cls, dim: int, axis: int) -> "Vector":
        a = np.zeros(dim)
        a[axis] = 1.0
        return cls._wrap(a)

    @property
    def dim(self) -> int:
        return self._a.shape[0]

    def has_nan(self) -> bool:
        return bool(np.isnan(self._a).any())

    def __len__(self):
        return self._a.shape[0]

    def __iter__(self):
        return iter(self._a.tolist())

    def __getitem__(self, i):
        return float(self._a[i])

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._a
        return self._a.astype(dtype)

    def __repr__(self):
        return f"Vector({self._a.tolist()!r})"

    def __eq__(self, other):
        if not isinstance(other, Vector):
            return NotImplemented
        return self.dim == other.dim and bool(np.array_equal(self._a, other._a))

    def __hash__(self):
        return hash(tuple(self._a.tolist()))

    def _other(self, other) -> np.ndarray:
        b = other._a if isinstance(other, Vector) else np.asarray(other, dtype=float)
        _check_dim(self.dim, b.shape[0] if b.ndim == 1 else -1)
        return b

    def __add__(self, other):
        return Vector._wrap(self._a + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Vector._wrap(self._a - self._other(other))

    def __rsub__(self, other):
        return Vector._wrap(self._other(other) - self._a)

    def __mul__(self, s):
        if isinstance(s, (Vector, np.ndarray)):
            return NotImplemented
        return Vector._wrap(self._a * float(s))

    __rmul__ = __mul__

    def __truediv__(self, s):
        return Vector._wrap(self._a / float(s))

    def __neg__(self):
        return Vector._wrap(-self._a)

    def dot(self, other) -> float:
        return float(self._a @ self._other(other))

    def norm(self) -> float:
        # hypot scales internally, so tiny and huge components neither underflow nor overflow
        return math.hypot(*self._a.tolist())

    def normalized(self) -> "Vector":
        n = self.norm()
        if n == 0.0:
            raise DegenerateGeometry("cannot normalize a zero vector")
        return Vector._wrap(self._a / n)

    def distance_to(self, other: "Vector") -> float:
        return math.hypot(*(self._a - self._other(other)).tolist())


def vec(*coords: float) -> Vector:
    """Shorthand: ``vec(1, 2)`` is ``Vector([1, 2])``."""
    return Vector(coords)


def distance(a, b) -> float:
    """Metric distance between two objects of the same metric type.

    For vectors this is the Euclidean norm of ``a - b``.
    """
    if type(a) is not type(b):
        raise ContractViolation(f"distance between {type(a).__name__} and {type(b).__name__} is undefined")
    metric = getattr(a, "distance_to", None)
    if metric is None:
        raise CapabilityError(f"{type(a).__name__} has no metric")
    return metric(b)


class Matrix:
    """Dense real matrix (row-major)."""

    __slots__ = ("_a",)
    dtype = np.dtype(float)

    def __init__(self, rows: Sequence[Sequence[float]]):
        a = np.array(rows, dtype=float)
        if a.ndim != 2 or a.size == 0:
            raise ContractViolation(f"a matrix needs a non-empty 2-D element grid, got shape {a.shape}")
        self._a = _frozen(a)

    @classmethod
    def _wrap(cls, a):
        m = cls.__new__(cls)
        m._a = _frozen(a)
        return m

    @classmethod
    def empty(cls, rows: int, cols: int) -> "Matrix":
        """Allocate without initialization; the contents are unspecified."""
        return cls._wrap(np.empty((rows, cols)))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._wrap(np.eye(n))

    @classmethod
    def nan(cls, rows: int, cols: int) -> "Matrix":
        return cls._wrap(np.full((rows, cols), np.nan))

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    def has_nan(self) -> bool:
        return bool(np.isnan(self._a).any())

    def __array__(self, dtype=None, copy=None):
        return self._a if dtype is None else self._a.astype(dtype)

    def __getitem__(self, idx):
        return self._a[idx]

    def __repr__(self):
        return f"Matrix({self._a.tolist()!r})"

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._a, other._a))

    __hash__ = None

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ContractViolation(f"cannot add {self.shape} and {other.shape} matrices")
        return Matrix._wrap(self._a + other._a)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ContractViolation(f"cannot subtract {other.shape} from {self.shape} matrix")
        return Matrix._wrap(self._a - other._a)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ContractViolation(f"non-conforming product {self.shape} @ {other.shape}")
            return Matrix._wrap(self._a @ other._a)
        if isinstance(other, Vector):
            _check_dim(self.cols, other.dim)
            return Vector._wrap(self._a @ other._a)
        return NotImplemented

    def transpose(self) -> "Matrix":
        return Matrix._wrap(self._a.T.copy())

    T = property(transpose)

    def det(self) -> float:
        if self.rows != self.cols:
            raise ContractViolation("determinant of a non-square matrix")
        return float(np.linalg.det(self._a))

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise ContractViolation(f"cannot invert a non-square {self.shape} matrix")
        try:
            inv = np.linalg.inv(self._a)
        except np.linalg.LinAlgError as exc:
            raise DegenerateGeometry("matrix is singular") from exc
        return Matrix._wrap(inv)

    def distance_to(self, other: "Matrix") -> float:
        """Frobenius distance."""
        if self.shape != other.shape:
            raise ContractViolation(f"distance between {self.shape} and {other.shape} matrices")
        return float(np.linalg.norm(self._a - other._a))


class NonUnitQuaternionWarning(UserWarning):
    """A non-unit quaternion was normalized before being used as a rotation."""


class Quaternion:
    """Hamilton quaternion ``w + xi + yj + zk``."""

    __slots__ = ("w", "x", "y", "z")
    dtype = np.dtype(float)

    def __init__(self, w: float, x: float, y: float, z: float):
        object.__setattr__(self, "w", float(w))
        object.__setattr__(self, "x", float(x))
        object.__setattr__(self, "y", float(y))
        object.__setattr__(self, "z", float(z))

    def __setattr__(self, name, value):
        raise AttributeError("Quaternion is immutable")

    @classmethod
    def identity(cls) -> "Quaternion":
        return cls(1.0, 0.0, 0.0, 0.0)

    @classmethod
    def from_axis_angle(cls, axis, angle: float) -> "Quaternion":
        a = as_array(axis)
        _check_dim(3, a.shape[0], "axis")
        n = np.linalg.norm(a)
        if n == 0.0:
            raise DegenerateGeometry("rotation axis has zero length")
        s = math.sin(angle / 2.0) / n
        return cls(math.cos(angle / 2.0), a[0] * s, a[1] * s, a[2] * s)

    @classmethod
    def from_matrix(cls, m) -> "Quaternion":
        """Unit quaternion of a 3x3 rotation matrix (Shepperd's method)."""
        r = as_array(m)
        tr = r[0, 0] + r[1, 1] + r[2, 2]
        k = int(np.argmax([tr, r[0, 0], r[1, 1], r[2, 2]]))
        if k == 0:
            s = 2.0 * math.sqrt(1.0 + tr)
            q = (0.25 * s, (r[2, 1] - r[1, 2]) / s, (r[0, 2] - r[2, 0]) / s, (r[1, 0] - r[0, 1]) / s)
        elif k == 1:
            s = 2.0 * math.sqrt(1.0 + r[0, 0] - r[1, 1] - r[2, 2])
            q = ((r[2, 1] - r[1, 2]) / s, 0.25 * s, (r[0, 1] + r[1, 0]) / s, (r[0, 2] + r[2, 0]) / s)
        elif k == 2:
            s = 2.0 * math.sqrt(1.0 - r[0, 0] + r[1, 1] - r[2, 2])
            q = ((r[0, 2] - r[2, 0]) / s, (r[0, 1] + r[1, 0]) / s, 0.25 * s, (r[1, 2] + r[2, 1]) / s)
        else:
            s = 2.0 * math.sqrt(1.0 - r[0, 0] - r[1, 1] + r[2, 2])
            q = ((r[1, 0] - r[0, 1]) / s, (r[0, 2] + r[2, 0]) / s, (r[1, 2] + r[2, 1]) / s, 0.25 * s)
        if q[0] < 0:
            q = tuple(-c for c in q)
        return cls(*q)

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def __array__(self, dtype=None, copy=None):
        return self.as_array() if dtype is None else self.as_array().astype(dtype)

    def __repr__(self):
        return f"Quaternion({self.w!r}, {self.x!r}, {self.y!r}, {self.z!r})"

    def __eq__(self, other):
        if not isinstance(other, Quaternion):
            return NotImplemented
        return (self.w, self.x, self.y, self.z) == (other.w, other.x, other.y, other.z)

    def __hash__(self):
        return hash((self.w, self.x, self.y, self.z))

    def __mul__(self, o: "Quaternion") -> "Quaternion":
        if not isinstance(o, Quaternion):
            if isinstance(o, (int, float)):
                return Quaternion(self.w * o, self.x * o, self.y * o, self.z * o)
            return NotImplemented
        w1, x1, y1, z1 = self.w, self.x, self.y, self.z
        w2, x2, y2, z2 = o.w, o.x, o.y, o.z
        return Quaternion(
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        )

    def norm(self) -> float:
        return math.sqrt(self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z)

    def is_unit(self, tol: float = UNIT_TOL) -> bool:
        return abs(self.norm() - 1.0) <= tol

    def normalized(self) -> "Quaternion":
        n = self.norm()
        if n == 0.0:
            raise DegenerateGeometry("cannot normalize a zero quaternion")
        return Quaternion(self.w / n, self.x / n, self.y / n, self.z / n)

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def inverse(self) -> "Quaternion":
        n2 = self.norm() ** 2
        if n2 == 0.0:
            raise DegenerateGeometry("zero quaternion has no inverse")
        return Quaternion(self.w / n2, -self.x / n2, -self.y / n2, -self.z / n2)

    def to_matrix(self) -> np.ndarray:
        """Rotation matrix of the (normalized) quaternion."""
        w, x, y, z = self.normalized().as_array()
        return np.array([
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ])

    def rotate(self, v) -> Vector:
        return quaternion_rotate(self, v)

    def distance_to(self, other: "Quaternion") -> float:
        """Euclidean distance of the four coefficients."""
        return float(np.linalg.norm(self.as_array() - other.as_array()))


def quaternion_rotate(q: Quaternion, v) -> Vector:
    """Rotate the 3-vector ``v`` by ``q``.

    A quaternion that is not unit within 1e-12 is normalized first and a
    :class:`NonUnitQuaternionWarning` is issued.
    """
    a = as_array(v)
    _check_dim(3, a.shape[0])
    if not q.is_unit():
        warnings.warn(f"quaternion norm {q.norm()!r} is not 1, normalizing", NonUnitQuaternionWarning, stacklevel=2)
        q = q.normalized()
    u = np.array([q.x, q.y, q.z])
    t = 2.0 * np.cross(u, a)
    return Vector._wrap(a + q.w * t + np.cross(u, t))


class LineSegment:
    """Closed segment between two points of equal dimension.

    Zero-length segments are allowed; only :meth:`direction` rejects them.
    """

    __slots__ = ("begin", "end")
    dtype = np.dtype(float)

    def __init__(self, begin, end):
        b = begin if isinstance(begin, Vector) else Vector(begin)
        e = end if isinstance(end, Vector) else Vector(end)
        _check_dim(b.dim, e.dim, "segment end")
        object.__setattr__(self, "begin", b)
        object.__setattr__(self, "end", e)

    def __setattr__(self, name, value):
        raise AttributeError("LineSegment is immutable")

    @property
    def dim(self) -> int:
        return self.begin.dim

    def __repr__(self):
        return f"LineSegment({self.begin._a.tolist()!r}, {self.end._a.tolist()!r})"

    def __eq__(self, other):
        if not isinstance(other, LineSegment):
            return NotImplemented
        return self.begin == other.begin and self.end == other.end

    def __hash__(self):
        return hash((self.begin, self.end))

    def length(self) -> float:
        return self.begin.distance_to(self.end)

    def direction(self) -> Vector:
        d = self.end._a - self.begin._a
        n = np.linalg.norm(d)
        if n == 0.0:
            raise DegenerateGeometry("direction of a zero-length segment is undefined")
        return Vector._wrap(d / n)

    def point_at(self, t: float) -> Vector:
        return Vector._wrap(self.begin._a + t * (self.end._a - self.begin._a))

    def distance_to_point(self, p) -> float:
        return point_segment_distance(p, self)

    def distance_to(self, other: "LineSegment") -> float:
        """Smallest distance between any two points of the two segments."""
        _check_dim(self.dim, other.dim)
        return _segment_segment_distance(self.begin._a, self.end._a, other.begin._a, other.end._a)


def point_segment_distance(p, s: LineSegment) -> float:
    a = as_array(p)
    _check_dim(s.dim, a.shape[0])
    b = s.begin._a
    d = s.end._a - b
    dd = float(d @ d)
    if dd == 0.0:
        return float(np.linalg.norm(a - b))
    t = min(1.0, max(0.0, float((a - b) @ d) / dd))
    return float(np.linalg.norm(a - (b + t * d)))


def _segment_segment_distance(p1, q1, p2, q2) -> float:
    # closest points of two segments, after Ericson's clamped formulation
    d1 = q1 - p1
    d2 = q2 - p2
    r = p1 - p2
    a = float(d1 @ d1)
    e = float(d2 @ d2)
    f = float(d2 @ r)
    if a == 0.0 and e == 0.0:
        return float(np.linalg.norm(r))
    if a == 0.0:
        s, t = 0.0, min(1.0, max(0.0, f / e))
    else:
        c = float(d1 @ r)
        if e == 0.0:
            t, s = 0.0, min(1.0, max(0.0, -c / a))
        else:
            b = float(d1 @ d2)
            denom = a * e - b * b
            s = min(1.0, max(0.0, (b * f - c * e) / denom)) if denom > 0.0 else 0.0
            t = (b * s + f) / e
            if t < 0.0:
                t, s = 0.0, min(1.0, max(0.0, -c / a))
            elif t > 1.0:
                t, s = 1.0, min(1.0, max(0.0, (b - c) / a))
    return float(np.linalg.norm((p1 + s * d1) - (p2 + t * d2)))


class BoundingBox:
    """Axis-aligned box ``min <= x <= max``."""

    __slots__ = ("min", "max")
    dtype = np.dtype(float)

    def __init__(self, lo, hi):
        lo = lo if isinstance(lo, Vector) else Vector(lo)
        hi = hi if isinstance(hi, Vector) else Vector(hi)
        _check_dim(lo.dim, hi.dim, "box corner")
        if np.any(lo._a > hi._a):
            raise ContractViolation(f"box min {lo._a.tolist()} exceeds max {hi._a.tolist()}")
        object.__setattr__(self, "min", lo)
        object.__setattr__(self, "max", hi)

    def __setattr__(self, name, value):
        raise AttributeError("BoundingBox is immutable")

    @property
    def dim(self) -> int:
        return self.min.dim

    def __repr__(self):
        return f"BoundingBox({self.min._a.tolist()!r}, {self.max._a.tolist()!r})"

    def __eq__(self, other):
        if not isinstance(other, BoundingBox):
            return NotImplemented
        return self.min == other.min and self.max == other.max

    def __hash__(self):
        return hash((self.min, self.max))

    def contains(self, p) -> bool:
        a = as_array(p)
        _check_dim(self.dim, a.shape[0])
        return bool(np.all(self.min._a <= a) and np.all(a <= self.max._a))

    def corners(self) -> np.ndarray:
        """All ``2**dim`` corner points, one per row."""
        d = self.dim
        bits = (np.arange(2 ** d)[:, None] >> np.arange(d)) & 1
        return np.where(bits == 1, self.max._a, self.min._a)

    def extent(self) -> Vector:
        return Vector._wrap(self.max._a - self.min._a)


def bbox_from_points(pts) -> BoundingBox:
    """Componentwise min/max envelope of a non-empty point set."""
    if isinstance(pts, np.ndarray):
        a = np.asarray(pts, dtype=float)
    else:
        pts = list(pts)
        if not pts:
            raise ContractViolation("bounding box of an empty point set")
        dims = {len(p) for p in pts}
        if len(dims) != 1:
            raise ContractViolation(f"points of mixed dimension {sorted(dims)}")
        a = np.array([as_array(p) for p in pts], dtype=float)
    if a.ndim != 2 or a.shape[0] == 0:
        raise ContractViolation("bounding box of an empty point set")
    return BoundingBox(Vector._wrap(a.min(axis=0)), Vector._wrap(a.max(axis=0)))


def _vertex_array(vertices, dim: int) -> np.ndarray:
    a = np.array([as_array(v) for v in vertices], dtype=float) if not isinstance(vertices, np.ndarray) \
        else np.array(vertices, dtype=float)
    if a.ndim != 2 or a.shape[1] != dim:
        raise DimensionMismatch(dim, a.shape[-1] if a.ndim == 2 else -1, "polygon vertex")
    if a.shape[0] < 3:
        raise ContractViolation(f"a polygon needs at least 3 vertices, got {a.shape[0]}")
    return _frozen(a)


class Polygon2:
    """Closed planar polygon, vertices in traversal order."""

    __slots__ = ("_v",)
    dim = 2
    dtype = np.dtype(float)

    def __init__(self, vertices):
        object.__setattr__(self, "_v", _vertex_array(vertices, 2))

    def __setattr__(self, name, value):
        raise AttributeError("Polygon2 is immutable")

    @property
    def points(self) -> np.ndarray:
        return self._v

    @property
    def vertices(self) -> list[Vector]:
        return [Vector(r) for r in self._v]

    def __len__(self):
        return self._v.shape[0]

    def __repr__(self):
        return f"Polygon2({self._v.tolist()!r})"

    def __eq__(self, other):
        if not isinstance(other, Polygon2):
            return NotImplemented
        return bool(np.array_equal(self._v, other._v))

    __hash__ = None

    def signed_area(self) -> float:
        x, y = self._v[:, 0], self._v[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


class Polygon3:
    """Closed polygon lying in a plane of 3-D space.

    The supporting plane ``normal . x == offset`` is fitted to the
    vertices; its normal follows the right-hand rule of the vertex order.
    Vertices off the plane by more than 1e-9 times the vertex-cloud
    diameter are rejected.
    """

    __slots__ = ("_v", "normal", "offset")
    dim = 3
    dtype = np.dtype(float)

    def __init__(self, vertices):
        v = _vertex_array(vertices, 3)
        c = v.mean(axis=0)
        _, _, vt = np.linalg.svd(v - c)
        n = vt[-1]
        # Newell normal fixes the orientation
        nxt = np.roll(v, -1, axis=0)
        newell = np.array([
            np.sum((v[:, 1] - nxt[:, 1]) * (v[:, 2] + nxt[:, 2])),
            np.sum((v[:, 2] - nxt[:, 2]) * (v[:, 0] + nxt[:, 0])),
            np.sum((v[:, 0] - nxt[:, 0]) * (v[:, 1] + nxt[:, 1])),
        ])
        if float(newell @ n) < 0.0:
            n = -n
        offset = float(n @ c)
        diam = float(np.max(np.linalg.norm(v[:, None, :] - v[None, :, :], axis=-1)))
        dev = float(np.max(np.abs(v @ n - offset)))
        if dev > PLANARITY_TOL * diam:
            raise ContractViolation(f"polygon vertices are not coplanar (deviation {dev:.3g})")
        object.__setattr__(self, "_v", v)
        object.__setattr__(self, "normal", Vector._wrap(n))
        object.__setattr__(self, "offset", offset)

    def __setattr__(self, name, value):
        raise AttributeError("Polygon3 is immutable")

    @property
    def points(self) -> np.ndarray:
        return self._v

    @property
    def vertices(self) -> list[Vector]:
        return [Vector(r) for r in self._v]

    def __len__(self):
        return self._v.shape[0]

    def __repr__(self):
        return f"Polygon3({self._v.tolist()!r})"

    def __eq__(self, other):
        if not isinstance(other, Polygon3):
            return NotImplemented
        return bool(np.array_equal(self._v, other._v))

    __hash__ = None


class Frustum3:
    """View frustum: apex, four corner rays and near/far clipping distances.

    Corner directions are normalized on construction and are expected in
    counter-clockwise order as seen from the apex.
    """

    __slots__ = ("apex", "corner_dirs", "near", "far")
    dim = 3
    dtype = np.dtype(float)

    def __init__(self, apex, corner_dirs, near: float, far: float):
        apex = apex if isinstance(apex, Vector) else Vector(apex)
        _check_dim(3, apex.dim, "apex")
        dirs = np.array([as_array(d) for d in corner_dirs], dtype=float)
        if dirs.shape != (4, 3):
            raise ContractViolation(f"a frustum needs 4 corner directions in 3-D, got shape {dirs.shape}")
        norms = np.linalg.norm(dirs, axis=1)
        if np.any(norms == 0.0):
            raise DegenerateGeometry("zero corner direction")
        if not 0.0 < near < far:
            raise ContractViolation(f"frustum needs 0 < near < far, got near={near}, far={far}")
        object.__setattr__(self, "apex", apex)
        object.__setattr__(self, "corner_dirs", tuple(Vector._wrap(d / n) for d, n in zip(dirs, norms)))
        object.__setattr__(self, "near", float(near))
        object.__setattr__(self, "far", float(far))

    def __setattr__(self, name, value):
        raise AttributeError("Frustum3 is immutable")

    def __repr__(self):
        return (f"Frustum3({self.apex._a.tolist()!r}, {[d._a.tolist() for d in self.corner_dirs]!r}, "
                f"near={self.near!r}, far={self.far!r})")

    def __eq__(self, other):
        if not isinstance(other, Frustum3):
            return NotImplemented
        return (self.apex == other.apex and self.corner_dirs == other.corner_dirs
                and self.near == other.near and self.far == other.far)

    def __hash__(self):
        return hash((self.apex, self.corner_dirs, self.near, self.far))

    def corners(self) -> np.ndarray:
        """The 8 frustum vertices: near ring then far ring."""
        a = self.apex._a
        d = np.array([c._a for c in self.corner_dirs])
        return np.vstack([a + self.near * d, a + self.far * d])
