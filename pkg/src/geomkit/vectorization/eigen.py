"""Closed-form eigen-solvers for small symmetric matrices.

The 2x2 solver is exact up to rounding.  The 3x3 solver computes the
eigenvalues with the trigonometric formula, eigenvectors from cross products
of rows of ``A - lambda I``, then polishes the basis with a few Jacobi
rotations.  When the eigenvalue spread is below 1e-12 of the trace the closed
form is skipped and plain Jacobi iteration is used.
"""
from __future__ import annotations

import math

import numpy as np

__all__ = [
    "sym2_eigen",
    "sym3_eigenvalues",
    "sym3_eigen",
    "jacobi_eigen",
    "canonical_sign",
    "SPREAD_TOL",
]

SPREAD_TOL = 1e-12
_TWO_PI_3 = 2.0 * math.pi / 3.0


def canonical_sign(v: np.ndarray) -> np.ndarray:
    """Flip ``v`` so that its largest-magnitude component is positive."""
    k = int(np.argmax(np.abs(v)))
    return -v if v[k] < 0 else v


def sym2_eigen(cxx: float, cyy: float, cxy: float) -> tuple[float, float, np.ndarray]:
    """``(lambda_max, lambda_min, unit major eigenvector)`` of [[cxx, cxy], [cxy, cyy]].

    An isotropic matrix yields the +x axis.
    """
    d = cxx - cyy
    r = math.sqrt(d * d + 4.0 * cxy * cxy)
    lam_max = ((cxx + cyy) + r) / 2.0
    lam_min = ((cxx + cyy) - r) / 2.0
    theta = 0.5 * math.atan2(2.0 * cxy, d)
    v = canonical_sign(np.array([math.cos(theta), math.sin(theta)]))
    return lam_max, lam_min, v


def sym3_eigenvalues(a: float, b: float, c: float, d: float, e: float, f: float) -> tuple[float, float, float]:
    """Eigenvalues, descending, of [[a, d, e], [d, b, f], [e, f, c]]."""
    p1 = d * d + e * e + f * f
    if p1 == 0.0:
        l1, l2, l3 = sorted((a, b, c), reverse=True)
        return l1, l2, l3
    q = (a + b + c) / 3.0
    aq, bq, cq = a - q, b - q, c - q
    p = math.sqrt((aq * aq + bq * bq + cq * cq + 2.0 * p1) / 6.0)
    # det((A - qI) / p) / 2
    r = (aq * (bq * cq - f * f) - d * (d * cq - f * e) + e * (d * f - bq * e)) / (2.0 * p * p * p)
    if r <= -1.0:
        phi = math.pi / 3.0
    elif r >= 1.0:
        phi = 0.0
    else:
        phi = math.acos(r) / 3.0
    l1 = q + 2.0 * p * math.cos(phi)
    l3 = q + 2.0 * p * math.cos(phi + _TWO_PI_3)
    l2 = 3.0 * q - l1 - l3
    return l1, l2, l3


def jacobi_eigen(a: np.ndarray, v: np.ndarray | None = None, max_sweeps: int = 50,
                 skip_tol: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi eigen-solver; eigenvalues descending, eigenvectors as columns.

    ``v`` is an optional orthonormal starting basis; ``a`` is then rotated
    into it before iterating.  Off-diagonal entries below ``skip_tol`` times
    the largest entry are left alone, which keeps rounding noise from
    spinning the basis inside a degenerate eigenspace.
    """
    n = a.shape[0]
    v = np.eye(n) if v is None else v.copy()
    m = v.T @ a @ v
    m = (m + m.T) / 2.0
    scale = max(float(np.max(np.abs(m))), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = math.sqrt(float(np.sum(np.triu(m, 1) ** 2)))
        if off <= 1e-18 * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p, q]
                if abs(apq) <= skip_tol * scale:
                    continue
                tau = (m[q, q] - m[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                cs = 1.0 / math.sqrt(1.0 + t * t)
                sn = t * cs
                g = np.eye(n)
                g[p, p] = g[q, q] = cs
                g[p, q] = sn
                g[q, p] = -sn
                m = g.T @ m @ g
                m[p, q] = m[q, p] = 0.0
                v = v @ g
    vals = np.diag(m).copy()
    order = np.argsort(-vals, kind="stable")
    return vals[order], v[:, order]


def _null_vector(m: np.ndarray) -> np.ndarray | None:
    cands = (np.cross(m[0], m[1]), np.cross(m[0], m[2]), np.cross(m[1], m[2]))
    norms = [float(np.linalg.norm(c)) for c in cands]
    k = int(np.argmax(norms))
    if norms[k] == 0.0:
        return None
    return cands[k] / norms[k]


def _complement(u: np.ndarray) -> np.ndarray:
    # projection of the first coordinate axis that is well represented in the
    # orthogonal complement of u; makes degenerate planes resolve toward +x
    for k in range(3):
        w = -u[k] * u
        w[k] += 1.0
        n = float(np.linalg.norm(w))
        if n > 0.5:
            return w / n
    raise AssertionError("unreachable: projections of the axes cannot all be short")


def sym3_eigen(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a symmetric 3x3 matrix.

    Returns ``(values, vectors)`` with values descending and the matching
    unit eigenvectors as columns.
    """
    a = np.asarray(a, dtype=float)
    l1, l2, l3 = sym3_eigenvalues(a[0, 0], a[1, 1], a[2, 2], a[0, 1], a[0, 2], a[1, 2])
    scale = abs(a[0, 0]) + abs(a[1, 1]) + abs(a[2, 2])
    if scale == 0.0 or (l1 - l3) < SPREAD_TOL * scale:
        return jacobi_eigen(a)
    eye = np.eye(3)
    # start from the better separated end of the spectrum
    first, last = (l1, l3) if (l1 - l2) >= (l2 - l3) else (l3, l1)
    u = _null_vector(a - first * eye)
    if u is None:
        return jacobi_eigen(a)
    w = _null_vector(a - last * eye)
    if w is None or abs(float(w @ u)) > 0.5:
        w = _complement(u)
    w = w - (w @ u) * u
    w /= np.linalg.norm(w)
    v1, v3 = (u, w) if first == l1 else (w, u)
    v2 = np.cross(v3, v1)
    basis = np.column_stack([v1, v2, v3])
    return jacobi_eigen(a, basis, max_sweeps=3, skip_tol=1e-15)
