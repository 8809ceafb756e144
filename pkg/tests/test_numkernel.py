"""Tests for the dense matrix kernel."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dualspace import numkernel as nk
from dualspace.errors import DomainError, NumericalError

# angle of the rotation produced by orthonormalizing the unit boost:
# tan(theta) = -tanh(1), evaluated independently of the kernel under test
THETA_BOOST = -np.arctan(np.tanh(1.0))


def rotation(t):
    return np.array([[np.cos(t), np.sin(t)], [-np.sin(t), np.cos(t)]])


def boost(t):
    return np.array([[np.cosh(t), np.sinh(t)], [np.sinh(t), np.cosh(t)]])


# ---------------------------------------------------------------------------
# expm


def test_expm_zero_is_identity():
    np.testing.assert_allclose(nk.expm(np.zeros((3, 3))), np.eye(3), atol=1e-14)


def test_expm_rotation_generator():
    t = np.pi / 3
    x = t * np.array([[0.0, 1.0], [-1.0, 0.0]])
    np.testing.assert_allclose(nk.expm(x), rotation(t), atol=1e-13)


def test_expm_boost_generator():
    x = np.array([[0.0, 1.0], [1.0, 0.0]])
    np.testing.assert_allclose(nk.expm(x), boost(1.0), atol=1e-13)


def test_expm_accuracy_large_norm():
    # eigendecomposition oracle on a symmetric matrix of spectral norm 50
    rng = np.random.default_rng(3)
    a = rng.standard_normal((5, 5))
    s = a + a.T
    s *= 50.0 / np.linalg.norm(s, 2)
    w, v = np.linalg.eigh(s)
    oracle = (v * np.exp(w)) @ v.T
    got = nk.expm(s)
    assert np.linalg.norm(got - oracle, 2) <= 1e-12 * np.linalg.norm(oracle, 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 5), st.integers(0, 10_000))
def test_expm_inverse_property(dim, key):
    rng = np.random.default_rng(key)
    x = rng.uniform(-1.0, 1.0, (dim, dim))
    x *= min(1.0, 10.0 / max(np.linalg.norm(x, 2), 1e-9))
    prod = nk.expm(x) @ nk.expm(-x)
    assert np.max(np.abs(prod - np.eye(dim))) <= 1e-10


def test_expm_conjugation_equivariance():
    rng = np.random.default_rng(7)
    x = rng.standard_normal((4, 4))
    k, _ = np.linalg.qr(rng.standard_normal((4, 4)))
    lhs = nk.expm(k @ x @ k.T)
    rhs = k @ nk.expm(x) @ k.T
    assert np.max(np.abs(lhs - rhs)) <= 1e-10


def test_expm_rejects_bad_input():
    with pytest.raises(DomainError):
        nk.expm(np.ones((2, 3)))
    with pytest.raises(DomainError):
        nk.expm(np.array([[0.0, np.nan], [0.0, 0.0]]))


# ---------------------------------------------------------------------------
# svd


def _sym2x2_eigs(g):
    # characteristic-polynomial eigenvalues of a symmetric 2x2 matrix
    tr = g[0, 0] + g[1, 1]
    det = g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]
    disc = np.sqrt(max(tr * tr / 4.0 - det, 0.0))
    return tr / 2.0 + disc, tr / 2.0 - disc


def test_svd_zero_matrix():
    _, s, _ = nk.svd(np.zeros((2, 3)))
    np.testing.assert_allclose(s, [0.0, 0.0])


def test_svd_diagonal():
    u, s, v = nk.svd(np.diag([3.0, 1.0]))
    np.testing.assert_allclose(s, [3.0, 1.0])
    np.testing.assert_allclose(np.abs(u), np.eye(2), atol=1e-14)
    np.testing.assert_allclose(np.abs(v), np.eye(2), atol=1e-14)


def test_svd_against_characteristic_polynomial():
    y = np.array([[0.6, 0.0], [0.0, 0.2], [0.0, 0.0]])
    lam1, lam2 = _sym2x2_eigs(y.T @ y)
    _, s, _ = nk.svd(y)
    np.testing.assert_allclose(s, [np.sqrt(lam1), np.sqrt(lam2)], atol=1e-14)
    np.testing.assert_allclose(s, [0.6, 0.2], atol=1e-14)


def test_svd_reconstruction_and_orthogonality():
    rng = np.random.default_rng(11)
    for shape in [(3, 5), (5, 3), (4, 4)]:
        y = rng.standard_normal(shape)
        u, s, v = nk.svd(y)
        recon = u @ nk.rect_diag(s, *shape) @ v.conj().T
        assert np.linalg.norm(y - recon) <= 1e-11 * np.linalg.norm(y)
        assert np.max(np.abs(u.conj().T @ u - np.eye(shape[0]))) <= 1e-12
        assert np.max(np.abs(v.conj().T @ v - np.eye(shape[1]))) <= 1e-12
        assert np.all(np.diff(s) <= 0)


def test_svd_complex():
    rng = np.random.default_rng(12)
    y = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
    u, s, v = nk.svd(y)
    recon = u @ nk.rect_diag(s, 3, 2) @ v.conj().T
    assert np.linalg.norm(y - recon) <= 1e-11 * np.linalg.norm(y)


# ---------------------------------------------------------------------------
# block_qr


def test_block_qr_identity():
    q, rinv = nk.block_qr(np.eye(3))
    np.testing.assert_allclose(q, np.eye(3), atol=1e-14)
    np.testing.assert_allclose(rinv, np.eye(3), atol=1e-14)


def test_block_qr_boost_gives_pinned_rotation():
    q, rinv = nk.block_qr(boost(1.0), nk.BlockShape.parabolic((1, 1)))
    expected = rotation(THETA_BOOST)
    np.testing.assert_allclose(q, expected, atol=1e-12)
    assert THETA_BOOST == pytest.approx(-0.6508801680230075, abs=1e-12)
    np.testing.assert_allclose(boost(1.0) @ rinv, q, atol=1e-12)


def test_block_qr_random_invertible():
    rng = np.random.default_rng(21)
    shape = nk.BlockShape.parabolic((2, 2))
    for _ in range(20):
        a = rng.standard_normal((4, 4)) + np.eye(4)
        if abs(np.linalg.det(a)) < 1e-3:
            continue
        q, rinv = nk.block_qr(a, shape)
        assert np.max(np.abs(q.T @ q - np.eye(4))) <= 1e-10
        r = np.linalg.inv(rinv)
        assert shape.max_forced_entry(r) <= 1e-10
        assert np.max(np.abs(a @ rinv - q)) <= 1e-10
        # positive diagonal pins the representative
        assert np.all(np.diag(r) > 0)


def test_block_qr_complex_unitary_factor():
    rng = np.random.default_rng(22)
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    q, rinv = nk.block_qr(a)
    assert np.max(np.abs(q.conj().T @ q - np.eye(3))) <= 1e-10
    r = np.linalg.inv(rinv)
    assert np.max(np.abs(np.tril(r, -1))) <= 1e-10
    assert np.max(np.abs(np.diag(r).imag)) <= 1e-10


def test_block_qr_singular_raises():
    a = np.array([[1.0, 1.0], [1.0, 1.0]])
    with pytest.raises(NumericalError):
        nk.block_qr(a)


def test_block_qr_shape_mismatch():
    with pytest.raises(DomainError):
        nk.block_qr(np.eye(3), nk.BlockShape.parabolic((2, 2)))


def test_block_shape_rejects_upper_zero_pattern():
    with pytest.raises(DomainError):
        nk.BlockShape((2, 2), (2, 2), ((0, 1),))


# ---------------------------------------------------------------------------
# is_positive_definite


def test_positive_definite_basics():
    assert nk.is_positive_definite(np.eye(3))
    assert not nk.is_positive_definite(np.diag([1.0, -0.1]))


def test_positive_definite_spacelike_gram():
    # I - Y^T Y has eigenvalues 1 - sigma_i^2 (svd oracle), so the test
    # flips exactly when the top singular value crosses 1
    rng = np.random.default_rng(31)
    w, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    z, _ = np.linalg.qr(rng.standard_normal((2, 2)))
    for top, expected in [(0.999, True), (1.001, False)]:
        y = w[:, :2] @ np.diag([top, 0.3]) @ z.T
        gram = np.eye(2) - y.T @ y
        assert nk.is_positive_definite(gram, tol=1e-10) is expected


def test_positive_definite_rejects_nonhermitian():
    with pytest.raises(DomainError):
        nk.is_positive_definite(np.array([[1.0, 1.0], [0.0, 1.0]]))


# ---------------------------------------------------------------------------
# projector_distance


def test_projector_distance_right_action_invariance():
    rng = np.random.default_rng(41)
    l = rng.standard_normal((5, 2))
    g = rng.standard_normal((2, 2)) + 2 * np.eye(2)
    assert nk.projector_distance(l, l @ g) <= 1e-12


def test_projector_distance_orthogonal_lines():
    e1 = np.array([[1.0], [0.0]])
    e2 = np.array([[0.0], [1.0]])
    assert nk.projector_distance(e1, e2) == pytest.approx(np.sqrt(2.0), abs=1e-14)


def test_projector_distance_boost_vs_rotation_line():
    # the boost line [1; tanh 1] and the rotated line [1; -tan theta]
    # coincide exactly when tan(theta) = -tanh(1)
    l1 = np.array([[1.0], [np.tanh(1.0)]])
    l2 = np.array([[1.0], [-np.tan(THETA_BOOST)]])
    assert nk.projector_distance(l1, l2) <= 1e-14


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_projector_distance_pseudometric(key):
    rng = np.random.default_rng(key)
    mats = [rng.standard_normal((4, 2)) for _ in range(3)]
    d01 = nk.projector_distance(mats[0], mats[1])
    d10 = nk.projector_distance(mats[1], mats[0])
    d02 = nk.projector_distance(mats[0], mats[2])
    d12 = nk.projector_distance(mats[1], mats[2])
    assert d01 == pytest.approx(d10, abs=1e-12)
    assert d01 <= d02 + d12 + 1e-12
    assert nk.projector_distance(mats[0], mats[0]) <= 1e-13


def test_projector_distance_rank_deficient_raises():
    with pytest.raises(DomainError):
        nk.projector_distance(np.zeros((3, 2)), np.eye(3)[:, :2])
