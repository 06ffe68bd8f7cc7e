import numpy as np
import pytest
from hypothesis import given, strategies as st

from nullcyl.errors import DegenerateSubspaceError
from nullcyl.lorentz import (
    CausalCharacter,
    causal_character,
    complete_pseudo_orthonormal,
    gram_matrix,
    minkowski_dot,
    minkowski_norm2,
    orthonormalize_spacelike,
    symmetric_eigen,
)


def test_dot_signature():
    assert minkowski_dot([1, 0, 0], [1, 0, 0]) == -1.0
    assert minkowski_dot([0, 1, 0], [0, 1, 0]) == 1.0
    assert minkowski_dot([1, 1, 0], [1, 1, 0]) == 0.0
    assert minkowski_dot([3, 1, 2], [1, 4, 5]) == -3 + 4 + 10


def test_dot_symmetric_bilinear():
    rng = np.random.default_rng(0)
    for _ in range(20):
        u, v, w = rng.standard_normal((3, 5))
        a, b = rng.standard_normal(2)
        assert minkowski_dot(u, v) == pytest.approx(minkowski_dot(v, u))
        assert minkowski_dot(a * u + b * v, w) == pytest.approx(
            a * minkowski_dot(u, w) + b * minkowski_dot(v, w)
        )


def test_causal_characters():
    assert causal_character([0, 1, 0]) is CausalCharacter.SPACE_LIKE
    assert causal_character([2, 1, 0]) is CausalCharacter.TIME_LIKE
    assert causal_character([1, 1, 0]) is CausalCharacter.LIGHT_LIKE
    # the zero vector is space-like by convention
    assert causal_character([0, 0, 0]) is CausalCharacter.SPACE_LIKE


def test_causal_character_scale_invariance():
    v = np.array([1.0, 1.0, 1e-12])
    big = 1e8 * v
    assert causal_character(v) is causal_character(big)


def test_gram_matrix():
    basis = [np.array([0.0, 1.0, 0.0]), np.array([0.0, 0.0, 2.0])]
    g = gram_matrix(basis)
    assert np.allclose(g, np.diag([1.0, 4.0]))


def test_orthonormalize_spacelike():
    rng = np.random.default_rng(1)
    vecs = [np.array([0.1, 1.0, 0.2, 0.0]), np.array([0.0, 0.5, 2.0, 0.3])]
    out = orthonormalize_spacelike(vecs)
    g = gram_matrix(out)
    assert np.allclose(g, np.eye(2), atol=1e-12)
    # spans agree: original vectors reconstruct from the output
    m = np.array(out)
    for v in vecs:
        coeff = np.array([minkowski_dot(v, e) for e in out])
        assert np.allclose(coeff @ m, v, atol=1e-12)


def test_orthonormalize_degenerate():
    with pytest.raises(DegenerateSubspaceError):
        orthonormalize_spacelike(
            [np.array([0.0, 1.0, 0.0]), np.array([0.0, 2.0, 0.0])]
        )
    with pytest.raises(DegenerateSubspaceError):
        orthonormalize_spacelike([np.array([1.0, 1.0, 0.0])])  # null vector


def test_complete_pseudo_orthonormal_example():
    theta = np.array([1.0, 1.0, 0.0, 0.0])
    xi = complete_pseudo_orthonormal(theta, [])
    assert np.allclose(xi, [0.5, -0.5, 0.0, 0.0])


@given(st.integers(0, 2**32 - 1))
def test_complete_pseudo_orthonormal_properties(seed):
    rng = np.random.default_rng(seed)
    sp = rng.standard_normal(3)
    theta = np.concatenate([[np.linalg.norm(sp)], sp])  # future null
    # a space-like direction orthogonal to theta: (0, u) with u . sp = 0
    u = rng.standard_normal(3)
    u -= (u @ sp) / (sp @ sp) * sp
    tan = orthonormalize_spacelike([np.concatenate([[0.0], u])])
    xi = complete_pseudo_orthonormal(theta, tan)
    assert abs(minkowski_dot(xi, xi)) < 1e-9
    assert abs(minkowski_dot(theta, xi) + 1.0) < 1e-9
    for v in tan:
        assert abs(minkowski_dot(xi, v)) < 1e-9


def test_symmetric_eigen_sorted():
    m = np.array([[2.0, 1.0], [1.0, 2.0]])
    vals, vecs = symmetric_eigen(m)
    assert vals[0] <= vals[1]
    assert np.allclose(m @ vecs[:, 0], vals[0] * vecs[:, 0])
    # deterministic sign: largest-magnitude component positive
    for j in range(2):
        col = vecs[:, j]
        assert col[np.argmax(np.abs(col))] > 0
