import math

import numpy as np
import pytest

from conftest import random_hermitian, random_involution, random_state
from elegant_bell.errors import DimensionMismatch, NotHermitian, ZeroEigenvalueWarning
from elegant_bell.linalg import (
    dagger,
    hermitian_eig,
    kron,
    partial_trace,
    schmidt,
    sign_operator,
)

Z = np.diag([1.0, -1.0]).astype(complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
I2 = np.eye(2, dtype=complex)
PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)


def kron_oracle(a, b):
    """Entrywise definition: out[(ia,ib),(ja,jb)] = a[ia,ja]*b[ib,jb]."""
    ra, ca = a.shape
    rb, cb = b.shape
    out = np.zeros((ra * rb, ca * cb), dtype=complex)
    for ia in range(ra):
        for ja in range(ca):
            for ib in range(rb):
                for jb in range(cb):
                    out[ia * rb + ib, ja * cb + jb] = a[ia, ja] * b[ib, jb]
    return out


def test_kron_identity():
    assert np.array_equal(kron(I2, I2), np.eye(4))


def test_kron_diagonal():
    assert np.array_equal(kron(Z, Z), np.diag([1.0, -1.0, -1.0, 1.0]))


def test_kron_xx_fixes_phi_plus():
    # Oracle: direct 4x4 matrix-vector multiply with the entrywise definition.
    m = kron_oracle(X, X)
    assert np.allclose(m @ PHI_PLUS, PHI_PLUS, atol=1e-15)
    assert np.allclose(kron(X, X) @ PHI_PLUS, PHI_PLUS, atol=1e-15)


def test_kron_matches_entrywise_oracle():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
    b = rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2))
    assert np.allclose(kron(a, b), kron_oracle(a, b), atol=1e-15)


def test_kron_associativity():
    rng = np.random.default_rng(1)
    for _ in range(20):
        mats = [
            rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            for _ in range(3)
        ]
        left = kron(kron(mats[0], mats[1]), mats[2])
        right = kron(mats[0], kron(mats[1], mats[2]))
        assert np.max(np.abs(left - right)) < 1e-12


def test_hermitian_eig_pauli_spectrum():
    w, _ = hermitian_eig(Z)
    assert np.allclose(w, [-1.0, 1.0])


def test_hermitian_eig_zx_combination():
    # Oracle: roots of the characteristic polynomial x^2 - tr*x + det.
    m = (Z + X) / math.sqrt(2)
    tr = float(np.trace(m).real)
    det = float(np.linalg.det(m).real)
    disc = math.sqrt(tr * tr - 4 * det)
    expected = sorted(((tr - disc) / 2, (tr + disc) / 2))
    w, _ = hermitian_eig(m)
    assert np.allclose(w, expected, atol=1e-12)
    assert np.allclose(w, [-1.0, 1.0], atol=1e-12)


def test_hermitian_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        hermitian_eig(np.array([[0, 1], [0, 0]], dtype=complex))


def test_hermitian_eig_reconstruction_up_to_dim_32():
    rng = np.random.default_rng(2)
    for dim in (2, 3, 5, 8, 17, 32):
        a = random_hermitian(rng, dim)
        w, v = hermitian_eig(a)
        scale = 1.0 + float(np.max(np.abs(a)))
        assert np.max(np.abs(a @ v - v * w)) < 1e-9 * scale
        assert np.max(np.abs(a - (v * w) @ dagger(v))) < 1e-9 * scale
        assert np.max(np.abs(dagger(v) @ v - np.eye(dim))) < 1e-9


def test_sign_operator_fixes_involutions():
    assert np.allclose(sign_operator(Z), Z, atol=1e-15)


def test_sign_operator_scaling_invariance():
    assert np.allclose(sign_operator(2.5 * X), X, atol=1e-14)


def test_sign_operator_zero_matrix_warns_to_identity():
    with pytest.warns(ZeroEigenvalueWarning):
        out = sign_operator(np.zeros((2, 2), dtype=complex))
    assert np.allclose(out, I2)


def test_sign_operator_squares_to_identity_and_maximizes():
    rng = np.random.default_rng(3)
    for _ in range(25):
        dim = int(rng.integers(2, 6))
        h = random_hermitian(rng, dim)
        s = sign_operator(h)
        assert np.max(np.abs(s @ s - np.eye(dim))) < 1e-9
        best = float(np.trace(s @ h).real)
        for _ in range(100):
            u = random_involution(rng, dim)
            assert float(np.trace(u @ h).real) <= best + 1e-9


def test_schmidt_maximally_entangled():
    coeffs, _, _ = schmidt(PHI_PLUS, 2, 2)
    assert np.allclose(coeffs, [1 / math.sqrt(2)] * 2, atol=1e-12)


def test_schmidt_product_state_is_rank_one():
    rng = np.random.default_rng(4)
    u = random_state(rng, 3)
    v = random_state(rng, 4)
    coeffs, _, _ = schmidt(np.kron(u, v), 3, 4)
    assert coeffs.shape == (1,)
    assert abs(coeffs[0] - 1.0) < 1e-12


def test_schmidt_two_term_superposition():
    # Oracle: singular values of the reshaped 2x2 matrix, by the closed form
    # for diag(a, d): singular values are |a| and |d|.
    psi = np.array([math.sqrt(0.9), 0, 0, math.sqrt(0.1)], dtype=complex)
    coeffs, u, v = schmidt(psi, 2, 2)
    assert np.allclose(coeffs, [math.sqrt(0.9), math.sqrt(0.1)], atol=1e-12)
    rebuilt = sum(c * np.kron(u[:, s], v[:, s]) for s, c in enumerate(coeffs))
    assert np.linalg.norm(rebuilt - psi) < 1e-12


def test_schmidt_reconstruction_and_normalization():
    rng = np.random.default_rng(5)
    for d_a, d_b in ((2, 2), (3, 2), (4, 5)):
        psi = random_state(rng, d_a * d_b)
        coeffs, u, v = schmidt(psi, d_a, d_b)
        assert abs(float(np.sum(coeffs**2)) - 1.0) < 1e-9
        rebuilt = sum(c * np.kron(u[:, s], v[:, s]) for s, c in enumerate(coeffs))
        assert np.linalg.norm(rebuilt - psi) < 1e-9
        assert np.max(np.abs(dagger(u) @ u - np.eye(len(coeffs)))) < 1e-9
        assert np.max(np.abs(dagger(v) @ v - np.eye(len(coeffs)))) < 1e-9


def test_schmidt_rejects_bad_split():
    with pytest.raises(DimensionMismatch):
        schmidt(PHI_PLUS, 3, 2)


def test_partial_trace_maximally_entangled_marginal():
    rho = np.outer(PHI_PLUS, PHI_PLUS.conj())
    assert np.allclose(partial_trace(rho, 2, 2, "B"), I2 / 2, atol=1e-15)
    assert np.allclose(partial_trace(rho, 2, 2, "A"), I2 / 2, atol=1e-15)


def test_partial_trace_product_case():
    rng = np.random.default_rng(6)
    rho_a = random_hermitian(rng, 2)
    rho_b = random_hermitian(rng, 3)
    joint = kron(rho_a, rho_b)
    expected = rho_a * np.trace(rho_b)
    assert np.allclose(partial_trace(joint, 2, 3, "A"), expected, atol=1e-12)


def test_partial_trace_of_single_block_state():
    # State with spec {(1/sqrt(2), 1, 1)} is (|00> + |11>)/sqrt(2); oracle is
    # the explicit index sum of the 4-dimensional vector.
    psi = PHI_PLUS
    rho = np.outer(psi, psi.conj())
    expected = np.zeros((2, 2), dtype=complex)
    for j in range(2):
        for jp in range(2):
            for i in range(2):
                expected[j, jp] += psi[i * 2 + j] * psi[i * 2 + jp].conjugate()
    got = partial_trace(rho, 2, 2, "B")
    assert np.allclose(got, expected, atol=1e-15)
    assert np.allclose(got, I2 / 2, atol=1e-15)
    assert abs(np.trace(got) - 1.0) < 1e-10
