"""Rigid transformations in N dimensions and pose trees.

Three transformation types are provided, :class:`Translation`,
:class:`Rotation` and :class:`RigidTf`.  Any of them may be stored where a
"general" transform is expected; :func:`compose` and :func:`invert` work
across the three and :func:`apply` maps core geometry objects.

Poses are organised in a :class:`TfTree`.  Each edge stores the transform
taking coordinates expressed in the parent frame into the child frame, so a
query walking down the tree uses edges as stored and a query walking up uses
their inverses.
"""
from __future__ import annotations

import math
from typing import Iterable, Iterator, Union

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
    as_array,
    bbox_from_points,
)
from .errors import ContractViolation, DimensionMismatch, DuplicateNode, UnknownNode

__all__ = [
    "Translation",
    "Rotation",
    "RigidTf",
    "GeneralTf",
    "NotTransformable",
    "TfChain",
    "TfTree",
    "apply",
    "compose",
    "invert",
    "chain_reduce",
    "tree_insert",
    "tree_query",
    "RENORMALIZE_EVERY",
]

ORTHO_TOL = 1e-10
RENORMALIZE_EVERY = 64


class NotTransformable(ContractViolation, TypeError):
    """The object type does not support geometric transformation."""


def _orthonormalize(m: np.ndarray) -> np.ndarray:
    # nearest rotation in the Frobenius sense (polar factor)
    u, _, vt = np.linalg.svd(m)
    r = u @ vt
    if np.linalg.det(r) < 0:
        u[:, -1] = -u[:, -1]
        r = u @ vt
    return r


class Translation:
    __slots__ = ("offset",)
    dtype = np.dtype(float)

    def __init__(self, offset):
        off = offset if isinstance(offset, Vector) else Vector(offset)
        object.__setattr__(self, "offset", off)

    def __setattr__(self, name, value):
        raise AttributeError("Translation is immutable")

    @classmethod
    def identity(cls, dim: int) -> "Translation":
        return cls(Vector.zeros(dim))

    @property
    def dim(self) -> int:
        return self.offset.dim

    def __repr__(self):
        return f"Translation({as_array(self.offset).tolist()!r})"

    def __eq__(self, other):
        if not isinstance(other, Translation):
            return NotImplemented
        return self.offset == other.offset

    def __hash__(self):
        return hash(self.offset)

    def apply_array(self, pts: np.ndarray) -> np.ndarray:
        return pts + as_array(self.offset)

    def inverse(self) -> "Translation":
        return Translation(-self.offset)

    def distance_to(self, other: "Translation") -> float:
        return self.offset.distance_to(other.offset)

    def to_rigid(self) -> "RigidTf":
        return RigidTf(Rotation.identity(self.dim), self)

    def homogeneous(self) -> np.ndarray:
        return self.to_rigid().homogeneous()


class Rotation:
    """Proper rotation stored as an orthonormal matrix with ``det == +1``."""

    __slots__ = ("_m", "_age")
    dtype = np.dtype(float)

    def __init__(self, matrix, check: bool = True):
        m = np.array(as_array(matrix), dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise ContractViolation(f"rotation matrix must be square, got shape {m.shape}")
        if check:
            n = m.shape[0]
            if np.max(np.abs(m.T @ m - np.eye(n))) > ORTHO_TOL:
                raise ContractViolation("rotation matrix is not orthonormal")
            if abs(np.linalg.det(m) - 1.0) > ORTHO_TOL:
                raise ContractViolation("rotation matrix must have determinant +1")
        m.setflags(write=False)
        object.__setattr__(self, "_m", m)
        object.__setattr__(self, "_age", 0)

    def __setattr__(self, name, value):
        raise AttributeError("Rotation is immutable")

    @classmethod
    def _trusted(cls, m: np.ndarray, age: int = 0) -> "Rotation":
        if age >= RENORMALIZE_EVERY:
            m, age = _orthonormalize(m), 0
        r = cls.__new__(cls)
        m.setflags(write=False)
        object.__setattr__(r, "_m", m)
        object.__setattr__(r, "_age", age)
        return r

    @classmethod
    def identity(cls, dim: int) -> "Rotation":
        return cls._trusted(np.eye(dim))

    @classmethod
    def from_angle(cls, angle: float) -> "Rotation":
        """Counter-clockwise planar rotation."""
        c, s = math.cos(angle), math.sin(angle)
        return cls._trusted(np.array([[c, -s], [s, c]]))

    @classmethod
    def from_plane_angle(cls, dim: int, i: int, j: int, angle: float) -> "Rotation":
        """Rotation by ``angle`` in the coordinate plane spanned by axes i -> j."""
        if i == j or not (0 <= i < dim and 0 <= j < dim):
            raise ContractViolation(f"invalid rotation plane ({i}, {j}) in {dim}-D")
        m = np.eye(dim)
        c, s = math.cos(angle), math.sin(angle)
        m[i, i] = c
        m[j, j] = c
        m[i, j] = -s
        m[j, i] = s
        return cls._trusted(m)

    @classmethod
    def from_axis_angle(cls, axis, angle: float) -> "Rotation":
        return cls.from_quaternion(Quaternion.from_axis_angle(axis, angle))

    @classmethod
    def from_quaternion(cls, q: Quaternion) -> "Rotation":
        return cls._trusted(q.to_matrix())

    @property
    def dim(self) -> int:
        return self._m.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return self._m

    def to_quaternion(self) -> Quaternion:
        if self.dim != 3:
            raise DimensionMismatch(3, self.dim, "rotation")
        return Quaternion.from_matrix(self._m)

    def __repr__(self):
        return f"Rotation({self._m.tolist()!r})"

    def __eq__(self, other):
        if not isinstance(other, Rotation):
            return NotImplemented
        return bool(np.array_equal(self._m, other._m))

    __hash__ = None

    def apply_array(self, pts: np.ndarray) -> np.ndarray:
        return pts @ self._m.T

    def inverse(self) -> "Rotation":
        return Rotation._trusted(self._m.T.copy(), self._age)

    def to_rigid(self) -> "RigidTf":
        return RigidTf(self, Translation.identity(self.dim))

    def homogeneous(self) -> np.ndarray:
        return self.to_rigid().homogeneous()


class RigidTf:
    """``x -> R x + t``."""

    __slots__ = ("rot", "trans")
    dtype = np.dtype(float)

    def __init__(self, rot, trans):
        rot = rot if isinstance(rot, Rotation) else Rotation(rot)
        trans = trans if isinstance(trans, Translation) else Translation(trans)
        if rot.dim != trans.dim:
            raise DimensionMismatch(rot.dim, trans.dim, "translation")
        object.__setattr__(self, "rot", rot)
        object.__setattr__(self, "trans", trans)

    def __setattr__(self, name, value):
        raise AttributeError("RigidTf is immutable")

    @classmethod
    def identity(cls, dim: int) -> "RigidTf":
        return cls(Rotation.identity(dim), Translation.identity(dim))

    @classmethod
    def from_homogeneous(cls, h) -> "RigidTf":
        h = as_array(h)
        d = h.shape[0] - 1
        return cls(Rotation(h[:d, :d]), Translation(h[:d, d]))

    @property
    def dim(self) -> int:
        return self.rot.dim

    def __repr__(self):
        return f"RigidTf({self.rot!r}, {self.trans!r})"

    def __eq__(self, other):
        if not isinstance(other, RigidTf):
            return NotImplemented
        return self.rot == other.rot and self.trans == other.trans

    __hash__ = None

    def apply_array(self, pts: np.ndarray) -> np.ndarray:
        return pts @ self.rot.matrix.T + as_array(self.trans.offset)

    def inverse(self) -> "RigidTf":
        r_inv = self.rot.inverse()
        return RigidTf(r_inv, Translation(-(r_inv.matrix @ as_array(self.trans.offset))))

    def to_rigid(self) -> "RigidTf":
        return self

    def homogeneous(self) -> np.ndarray:
        d = self.dim
        h = np.eye(d + 1)
        h[:d, :d] = self.rot.matrix
        h[:d, d] = as_array(self.trans.offset)
        return h


GeneralTf = Union[Translation, Rotation, RigidTf]
_TF_TYPES = (Translation, Rotation, RigidTf)


def _check_tf(tf):
    if not isinstance(tf, _TF_TYPES):
        raise ContractViolation(f"{type(tf).__name__} is not a transformation")


def compose(a: GeneralTf, b: GeneralTf) -> GeneralTf:
    """Transform equivalent to applying ``b`` first, then ``a``.

    Two translations compose to a translation and two rotations to a
    rotation; every other pairing gives a :class:`RigidTf`.
    """
    _check_tf(a)
    _check_tf(b)
    if a.dim != b.dim:
        raise DimensionMismatch(a.dim, b.dim, "transform")
    if isinstance(a, Translation) and isinstance(b, Translation):
        return Translation(a.offset + b.offset)
    if isinstance(a, Rotation) and isinstance(b, Rotation):
        return Rotation._trusted(a.matrix @ b.matrix, max(a._age, b._age) + 1)
    ra, rb = a.to_rigid(), b.to_rigid()
    ma = ra.rot.matrix
    rot = Rotation._trusted(ma @ rb.rot.matrix, max(ra.rot._age, rb.rot._age) + 1)
    t = ma @ as_array(rb.trans.offset) + as_array(ra.trans.offset)
    return RigidTf(rot, Translation(t))


def invert(tf: GeneralTf) -> GeneralTf:
    _check_tf(tf)
    return tf.inverse()


def apply(tf: GeneralTf, obj):
    """Transform a geometric object.

    Points (``Vector`` or an ``(n, dim)`` array) map directly; segments,
    polygons and frusta map vertexwise.  A bounding box is returned as the
    envelope of its transformed corners, because rotation does not keep it
    axis aligned.  Transforms are composed (``tf`` after ``obj``).  Matrices
    and quaternions are not transformable.
    """
    _check_tf(tf)
    d = tf.dim

    def need(dim):
        if dim != d:
            raise DimensionMismatch(d, dim, type(obj).__name__)

    if isinstance(obj, Vector):
        need(obj.dim)
        return Vector(tf.apply_array(as_array(obj)))
    if isinstance(obj, np.ndarray):
        need(obj.shape[-1])
        return tf.apply_array(np.asarray(obj, dtype=float))
    if isinstance(obj, LineSegment):
        need(obj.dim)
        ends = tf.apply_array(np.array([as_array(obj.begin), as_array(obj.end)]))
        return LineSegment(ends[0], ends[1])
    if isinstance(obj, BoundingBox):
        need(obj.dim)
        return bbox_from_points(tf.apply_array(obj.corners()))
    if isinstance(obj, Polygon2):
        need(2)
        return Polygon2(tf.apply_array(obj.points))
    if isinstance(obj, Polygon3):
        need(3)
        return Polygon3(tf.apply_array(obj.points))
    if isinstance(obj, Frustum3):
        need(3)
        rigid = tf.to_rigid()
        apex = rigid.apply_array(as_array(obj.apex))
        dirs = rigid.rot.apply_array(np.array([as_array(c) for c in obj.corner_dirs]))
        return Frustum3(apex, dirs, obj.near, obj.far)
    if isinstance(obj, _TF_TYPES):
        return compose(tf, obj)
    if isinstance(obj, (Matrix, Quaternion)):
        raise NotTransformable(f"{type(obj).__name__} cannot be transformed")
    raise NotTransformable(f"{type(obj).__name__} is not a transformable geometry type")


class TfChain:
    """Ordered sequence of transforms; element 0 is applied first."""

    __slots__ = ("_tfs", "_dim")

    def __init__(self, tfs: Iterable[GeneralTf] = (), dim: int | None = None):
        tfs = tuple(tfs)
        for t in tfs:
            _check_tf(t)
        dims = {t.dim for t in tfs}
        if dim is not None:
            dims.add(dim)
        if len(dims) > 1:
            raise ContractViolation(f"transform chain mixes dimensions {sorted(dims)}")
        self._tfs = tfs
        self._dim = dims.pop() if dims else None

    @property
    def dim(self) -> int | None:
        return self._dim

    def __len__(self):
        return len(self._tfs)

    def __iter__(self) -> Iterator[GeneralTf]:
        return iter(self._tfs)

    def __getitem__(self, i):
        return self._tfs[i]

    def __repr__(self):
        return f"TfChain({list(self._tfs)!r})"

    def apply(self, obj):
        for t in self._tfs:
            obj = apply(t, obj)
        return obj

    def reduce(self) -> RigidTf:
        return chain_reduce(self)


def chain_reduce(chain) -> RigidTf:
    """Collapse a chain into a single rigid transform (identity if empty)."""
    if not isinstance(chain, TfChain):
        chain = TfChain(chain)
    if chain.dim is None:
        raise ContractViolation("cannot reduce an empty chain of unknown dimension")
    acc = RigidTf.identity(chain.dim)
    for t in chain:
        acc = compose(t, acc)
    return acc.to_rigid()


class TfTree:
    """Tree of named poses connected by transforms.

    ``insert(parent, child, tf)`` stores ``tf`` as the map from parent-frame
    coordinates to child-frame coordinates.  ``query(a, b)`` returns the
    chain mapping coordinates in frame ``a`` to frame ``b``.

    Mutation is not synchronised: callers must serialise inserts, queries
    may run concurrently in between.
    """

    def __init__(self, root: str = "root", dim: int | None = None):
        self.root = root
        self.dim = dim
        self._parent: dict[str, str | None] = {root: None}
        self._edge: dict[str, GeneralTf] = {}
        self._depth: dict[str, int] = {root: 0}

    def __contains__(self, node) -> bool:
        return node in self._parent

    def __len__(self):
        return len(self._parent)

    @property
    def nodes(self) -> list[str]:
        return list(self._parent)

    def parent(self, node: str) -> str | None:
        if node not in self._parent:
            raise UnknownNode(node)
        return self._parent[node]

    def edge(self, node: str) -> GeneralTf:
        """Transform on the edge from ``node``'s parent to ``node``."""
        if node not in self._parent:
            raise UnknownNode(node)
        if node == self.root:
            raise ContractViolation("the root pose has no parent edge")
        return self._edge[node]

    def children(self, node: str) -> list[str]:
        if node not in self._parent:
            raise UnknownNode(node)
        return [c for c, p in self._parent.items() if p == node]

    def insert(self, parent: str, child: str, tf: GeneralTf) -> "TfTree":
        if parent not in self._parent:
            raise UnknownNode(parent)
        if child in self._parent:
            raise DuplicateNode(child)
        _check_tf(tf)
        if self.dim is None:
            self.dim = tf.dim
        elif tf.dim != self.dim:
            raise DimensionMismatch(self.dim, tf.dim, "edge transform")
        self._parent[child] = parent
        self._edge[child] = tf
        self._depth[child] = self._depth[parent] + 1
        return self

    def query(self, src: str, dst: str) -> TfChain:
        for n in (src, dst):
            if n not in self._parent:
                raise UnknownNode(n)
        up, down = [], []
        a, b = src, dst
        while self._depth[a] > self._depth[b]:
            up.append(a)
            a = self._parent[a]
        while self._depth[b] > self._depth[a]:
            down.append(b)
            b = self._parent[b]
        while a != b:
            up.append(a)
            down.append(b)
            a, b = self._parent[a], self._parent[b]
        tfs = [self._edge[n].inverse() for n in up]
        tfs += [self._edge[n] for n in reversed(down)]
        return TfChain(tfs, dim=self.dim)


def tree_insert(tree: TfTree, parent: str, child: str, tf: GeneralTf) -> TfTree:
    return tree.insert(parent, child, tf)


def tree_query(tree: TfTree, src: str, dst: str) -> TfChain:
    return tree.query(src, dst)
