"""Linear algebra for Minkowski space R^{n,1} with n = 2 or 3.

Vectors are plain numpy float arrays of length 3 or 4.  The first
coordinate is the timelike one, so the inner product is
``-u[0]*v[0] + u[1]*v[1] + ...``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, DegenerateMetricError, UsageError

Vec = np.ndarray

TIMELIKE = "timelike"
SPACELIKE = "spacelike"
LIGHTLIKE = "lightlike"


def as_vec(coords) -> Vec:
    """Coerce a coordinate sequence to a Minkowski vector array."""
    v = np.asarray(coords, dtype=float)
    if v.ndim != 1 or v.shape[0] not in (3, 4):
        raise UsageError(f"expected a vector with 3 or 4 coordinates, got shape {v.shape}")
    return v


def metric_diag(dim: int) -> Vec:
    signs = np.ones(dim)
    signs[0] = -1.0
    return signs


def mink_inner(u: Vec, v: Vec) -> float:
    """Inner product -u1*v1 + sum_{k>=2} uk*vk."""
    if u.shape != v.shape:
        raise UsageError(f"dimension mismatch: {u.shape} vs {v.shape}")
    return float(np.dot(u, v) - 2.0 * u[0] * v[0])


def mink_norm2(u: Vec) -> float:
    return mink_inner(u, u)


@dataclass(frozen=True)
class CausalClass:
    tag: str  # one of TIMELIKE / SPACELIKE / LIGHTLIKE
    value: float  # the squared Minkowski norm


def causal_classify(u: Vec, tol: float) -> CausalClass:
    """Classify a nonzero vector, with a relative lightlike band.

    The band is ``|<u,u>| <= tol * |u|_euclid^2`` so the classification is
    invariant under rescaling of the vector.
    """
    scale2 = float(np.dot(u, u))
    if scale2 == 0.0:
        raise DegenerateInputError("cannot classify the zero vector")
    q = mink_norm2(u)
    if abs(q) <= tol * scale2:
        return CausalClass(LIGHTLIKE, q)
    return CausalClass(TIMELIKE if q < 0.0 else SPACELIKE, q)


def gram_solve2(g00: float, g01: float, g11: float, r0: float, r1: float,
                eps_det: float = 1e-12) -> tuple[float, float]:
    """Solve the symmetric 2x2 system [[g00,g01],[g01,g11]] (a,b)^T = (r0,r1)^T.

    ``eps_det`` is relative to the square of the largest Gram entry.
    """
    scale = max(abs(g00), abs(g01), abs(g11))
    det = g00 * g11 - g01 * g01
    if scale == 0.0 or abs(det) <= eps_det * scale * scale:
        raise DegenerateMetricError(
            f"near-singular Gram matrix (det={det:.3e}, scale={scale:.3e})")
    a = (g11 * r0 - g01 * r1) / det
    b = (g00 * r1 - g01 * r0) / det
    return a, b


def _tangential_part(v: Vec, t1: Vec, t2: Vec) -> Vec:
    a, b = gram_solve2(mink_inner(t1, t1), mink_inner(t1, t2), mink_inner(t2, t2),
                       mink_inner(v, t1), mink_inner(v, t2))
    return a * t1 + b * t2


def _fix_sign(n: Vec) -> Vec:
    scale = float(np.max(np.abs(n)))
    for x in n:
        if abs(x) > 1e-12 * scale:
            return -n if x < 0.0 else n
    return n


def normal_complement(t1: Vec, t2: Vec, tol: float = 1e-9) -> tuple[Vec, ...]:
    """Minkowski-orthonormal spacelike basis of the complement of span(t1, t2).

    Requires the span to be a timelike plane (so the complement is
    positive definite).  Deterministic: Gram-Schmidt over the canonical
    basis vectors in index order, skipping near-dependent candidates;
    each normal has its first nonzero coordinate made positive.
    Returns ``dim - 2`` vectors.
    """
    if t1.shape != t2.shape:
        raise UsageError("tangent vectors must share a dimension")
    dim = t1.shape[0]
    g00, g01, g11 = mink_inner(t1, t1), mink_inner(t1, t2), mink_inner(t2, t2)
    det = g00 * g11 - g01 * g01
    scale = max(float(np.dot(t1, t1)), float(np.dot(t2, t2)))
    if scale == 0.0 or det >= -1e-12 * scale * scale:
        raise DegenerateMetricError("tangent vectors do not span a timelike plane")

    normals: list[Vec] = []
    want = dim - 2
    for k in range(dim):
        if len(normals) == want:
            break
        e = np.zeros(dim)
        e[k] = 1.0
        w = e - _tangential_part(e, t1, t2)
        for n in normals:
            w = w - mink_inner(w, n) * n
        if float(np.dot(w, w)) <= 1e-12:
            continue  # candidate lies (numerically) inside the span
        q = mink_norm2(w)
        if q <= 0.0:
            continue
        n = _fix_sign(w / np.sqrt(q))
        normals.append(n)
    if len(normals) != want:
        raise DegenerateMetricError("failed to build a normal basis")

    for n in normals:
        checks = [mink_inner(n, t1), mink_inner(n, t2), mink_norm2(n) - 1.0]
        if any(abs(c) > tol * max(1.0, scale) for c in checks):
            raise DegenerateMetricError("normal basis failed the orthogonality check")
    return tuple(normals)


def normal_project(v: Vec, normals: tuple[Vec, ...]) -> Vec:
    """Projection onto the (spacelike, orthonormal) normal space."""
    out = np.zeros_like(v)
    for n in normals:
        out = out + mink_inner(v, n) * n
    return out
