"""Dense complex linear algebra primitives used by every other module.

Everything here is a thin, contract-checked layer over numpy's dense
routines.  Two conventions are fixed globally and shared with the JSON
format: row-major matrix storage, and the composite index i_A*dB + i_B
for bipartite vectors (the ordering produced by ``numpy.kron``).
"""

from __future__ import annotations

import warnings

import numpy as np

from .errors import DimensionMismatch, NotHermitian, ZeroEigenvalueWarning

HERMITICITY_TOL = 1e-10


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return a.conj().T


def hermiticity_defect(a: np.ndarray) -> float:
    """Largest entry of |A - A^dagger|."""
    return float(np.max(np.abs(a - dagger(a))))


def involution_defect(a: np.ndarray) -> float:
    """Largest entry of |A @ A - I|."""
    d = a.shape[0]
    return float(np.max(np.abs(a @ a - np.eye(d))))


def require_hermitian(a: np.ndarray, tol: float = HERMITICITY_TOL) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    defect = hermiticity_defect(a)
    if defect > tol:
        raise NotHermitian(f"max |A - A^dagger| entry is {defect:.3e} (tolerance {tol:.1e})")
    return a


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with composite row index i_a*rows_b + i_b."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def hermitian_eig(a: np.ndarray, tol: float = HERMITICITY_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues ascending, orthonormal eigenvector columns) with
    A @ V = V @ diag(w).  Raises NotHermitian if the input is not Hermitian
    within ``tol``.
    """
    a = require_hermitian(a, tol)
    w, v = np.linalg.eigh(a)
    return w, v


def sign_operator(h: np.ndarray, zero_tol: float = 1e-12) -> np.ndarray:
    """Spectral sign of a Hermitian matrix: V @ diag(sgn w) @ V^dagger.

    Eigenvalues with |w| < zero_tol are mapped to +1 so the result is always
    a Hermitian involution; when that happens a ZeroEigenvalueWarning is
    emitted.  Among all Hermitian involutions U, the result maximizes
    tr(U @ H).
    """
    w, v = hermitian_eig(h)
    signs = np.where(w >= zero_tol, 1.0, np.where(w <= -zero_tol, -1.0, 1.0))
    if np.any(np.abs(w) < zero_tol):
        warnings.warn(
            "near-zero eigenvalue rounded to +1 in spectral sign",
            ZeroEigenvalueWarning,
            stacklevel=2,
        )
    out = (v * signs) @ dagger(v)
    return (out + dagger(out)) / 2


def schmidt(
    psi: np.ndarray, d_a: int, d_b: int, zero_cut: float = 1e-12
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Schmidt decomposition of a normalized bipartite vector.

    Returns (coeffs, alice_vectors, bob_vectors): strictly positive
    coefficients in descending order (singular values below ``zero_cut``
    are dropped) and orthonormal vectors as matrix columns, such that
    psi = sum_s coeffs[s] * kron(alice_vectors[:, s], bob_vectors[:, s]).
    """
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.size != d_a * d_b:
        raise DimensionMismatch(f"vector of length {psi.size} cannot split as {d_a}x{d_b}")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > 1e-10:
        raise DimensionMismatch(f"expected a normalized vector, got norm {norm!r}")
    m = psi.reshape(d_a, d_b)
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    keep = s > zero_cut
    return s[keep], u[:, keep], vh[keep, :].T


def partial_trace(rho: np.ndarray, d_a: int, d_b: int, keep: str) -> np.ndarray:
    """Partial trace of a (d_a*d_b)-dimensional operator.

    ``keep`` selects the surviving factor: "A" traces out B and vice versa.
    """
    rho = np.asarray(rho, dtype=complex)
    d = d_a * d_b
    if rho.shape != (d, d):
        raise DimensionMismatch(f"expected a {d}x{d} matrix, got shape {rho.shape}")
    t = rho.reshape(d_a, d_b, d_a, d_b)
    if keep == "A":
        return np.einsum("ijkj->ik", t)
    if keep == "B":
        return np.einsum("ijil->jl", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")
