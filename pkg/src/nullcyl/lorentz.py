"""Lorentzian linear algebra for small dense systems.

Vectors are plain 1-D numpy arrays in coordinates (x1, ..., xk) with the
indefinite inner product  -x1*y1 + sum_{i>=2} xi*yi  (signature -,+,...,+,
minus on the first coordinate).
"""

import enum

import numpy as np

from .config import DEFAULT_TOL
from .errors import (
    DegenerateNormalBundleError,
    DegenerateSubspaceError,
    DimensionError,
)


class CausalCharacter(enum.Enum):
    SPACE_LIKE = "space-like"
    TIME_LIKE = "time-like"
    LIGHT_LIKE = "light-like"


def minkowski_dot(u, v):
    """Indefinite inner product -u1*v1 + sum_{i>=2} ui*vi."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape or u.ndim != 1:
        raise DimensionError(f"incompatible shapes {u.shape} and {v.shape}")
    return float(-u[0] * v[0] + u[1:] @ v[1:])


def minkowski_norm2(v):
    """Self inner product <v, v> (any sign)."""
    return minkowski_dot(v, v)


def causal_character(v, eps=None):
    """Classify v as space-, time- or light-like.

    |<v,v>| <= eps*(1 + |v|_euclid^2) counts as zero; the zero vector is
    space-like by convention.
    """
    eps = DEFAULT_TOL.causal if eps is None else eps
    if eps <= 0:
        raise ValueError("eps must be positive")
    v = np.asarray(v, dtype=float)
    q = minkowski_norm2(v)
    scale = 1.0 + float(v @ v)
    if abs(q) <= eps * scale:
        if float(v @ v) <= eps * eps:
            return CausalCharacter.SPACE_LIKE  # zero vector
        return CausalCharacter.LIGHT_LIKE
    return CausalCharacter.TIME_LIKE if q < 0 else CausalCharacter.SPACE_LIKE


def gram_matrix(vectors):
    m = len(vectors)
    g = np.empty((m, m))
    for i in range(m):
        for j in range(i, m):
            g[i, j] = g[j, i] = minkowski_dot(vectors[i], vectors[j])
    return g


def orthonormalize_spacelike(vectors, eps=None):
    """Gram-Schmidt under the Minkowski product on a space-like span.

    The first vector's direction is preserved up to normalization.  Raises
    DegenerateSubspaceError if the Gram matrix is not positive definite,
    which signals a non-space-like input span.
    """
    eps = DEFAULT_TOL.gram if eps is None else eps
    vecs = [np.asarray(v, dtype=float) for v in vectors]
    if not vecs:
        return []
    g = gram_matrix(vecs)
    evals = np.linalg.eigvalsh(g)
    if evals[0] <= eps * max(1.0, evals[-1]):
        raise DegenerateSubspaceError(
            f"Gram matrix not positive definite (min eigenvalue {evals[0]:.3e})"
        )
    out = []
    for v in vecs:
        w = v.copy()
        for u in out:
            w -= minkowski_dot(w, u) * u
        w_norm2 = minkowski_norm2(w)
        if w_norm2 <= eps:
            raise DegenerateSubspaceError("vector dependent or not space-like")
        out.append(w / np.sqrt(w_norm2))
    return out


def complete_pseudo_orthonormal(theta, tangent_basis, eps=None):
    """Return the null vector xi with <xi,xi>=0, <xi,theta>=-1, xi _|_ tangents.

    Seeds are tried in the fixed order of coordinate axes so the output is
    deterministic.  The companion is unique under the constraints; with
    theta future-pointing it is automatically future-pointing as well.
    """
    eps = DEFAULT_TOL.gram if eps is None else eps
    theta = np.asarray(theta, dtype=float)
    k = theta.shape[0]
    basis = [np.asarray(b, dtype=float) for b in tangent_basis]
    scale = np.sqrt(float(theta @ theta)) or 1.0
    for axis in range(k):
        w = np.zeros(k)
        w[axis] = 1.0
        if abs(minkowski_dot(w, theta)) > 1e-6 * scale:
            break
    else:
        raise DegenerateNormalBundleError("no seed pairs with theta")
    # remove tangential components (tangent basis is Minkowski-orthonormal)
    v = w.copy()
    for b in basis:
        v -= minkowski_dot(v, b) * b
    p = minkowski_dot(v, theta)
    if abs(p) <= 1e-12 * scale:
        raise DegenerateNormalBundleError("seed degenerate after projection")
    v = v / (-p)  # now <v, theta> = -1
    xi = v + 0.5 * minkowski_norm2(v) * theta
    return xi


def symmetric_eigen(op, eps=None):
    """Full spectrum of a symmetric matrix, eigenvalues ascending.

    Eigenvector signs are fixed by making the largest-magnitude component
    positive.  Returns (eigenvalues, eigenvectors-as-columns).
    """
    eps = DEFAULT_TOL.sym if eps is None else eps
    m = np.asarray(op, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected square matrix, got {m.shape}")
    scale = np.abs(m).max() or 1.0
    if np.abs(m - m.T).max() > eps * scale:
        raise DimensionError("matrix is not symmetric within tolerance")
    evals, evecs = np.linalg.eigh(0.5 * (m + m.T))
    for j in range(evecs.shape[1]):
        i = int(np.argmax(np.abs(evecs[:, j])))
        if evecs[i, j] < 0:
            evecs[:, j] = -evecs[:, j]
    return evals, evecs
