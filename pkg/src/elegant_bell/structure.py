"""Verification and extraction of the block structure of maximal violators.

Given any scenario that reaches the quantum maximum, these routines verify
numerically that the marginal eigenspaces are preserved, that Alice's
restricted observables anticommute, and that everything decomposes into
2x2 blocks of (Z, X, +/-Y) with Bob's observables the blockwise transpose
of Alice's; the extraction recovers the family spec (lambda_i, n_i, r_i)
and the canonical bases realizing all of that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    NonYBlock,
    NotMaximal,
    TransposeMismatch,
    UnequalEigenspaceSplit,
)
from .family import Block, FamilySpec, d_operators
from .linalg import dagger, hermitian_eig, kron, partial_trace
from .scenario import QUANTUM_MAX, Scenario, ebi_value

DEFAULT_TOL = 1e-7
# Marginal eigenvalues at or below this are treated as outside the support.
SUPPORT_CUT = 1e-9


@dataclass
class CheckReport:
    """Outcome of one verification check."""

    name: str
    residual: float
    threshold: float
    passed: bool
    details: dict = field(default_factory=dict)


@dataclass
class BlockDecomposition:
    """Canonical bases and recovered family spec of a maximal violator.

    Basis matrices hold orthonormal columns ordered by (cluster, pair, bit);
    conjugating Alice's observables by ``alice_basis`` yields blockwise
    Z / X / +-Y, and ``bob_basis`` does the same for Bob's up to transpose.
    """

    spec: FamilySpec
    alice_basis: np.ndarray
    bob_basis: np.ndarray
    residuals: dict = field(default_factory=dict)

    @property
    def pair_lambdas(self) -> list[float]:
        """Schmidt coefficient of each qubit pair in canonical order."""
        return [b.lam for b in self.spec.blocks for _ in range(b.n)]


def check_maximal(s: Scenario, tol: float = DEFAULT_TOL) -> bool:
    """True iff the scenario value is 4*sqrt(3) within ``tol``."""
    return abs(ebi_value(s) - QUANTUM_MAX) < tol


def marginal_clusters(rho: np.ndarray) -> list[tuple[float, np.ndarray]]:
    """Cluster the eigenvalues of a marginal state.

    Returns (mean eigenvalue, orthonormal eigenbasis columns) per cluster,
    sorted by descending eigenvalue.  A new cluster starts when the gap to
    the previous eigenvalue exceeds max(1e-8, 1e-6 * largest eigenvalue);
    the construction produces exactly degenerate clusters, so the gap rule
    only has to absorb floating-point spread.
    """
    w, v = hermitian_eig(rho)
    w = w[::-1]
    v = v[:, ::-1]
    gap_tol = max(1e-8, 1e-6 * float(w[0]))
    clusters: list[tuple[float, np.ndarray]] = []
    start = 0
    for i in range(1, len(w) + 1):
        if i == len(w) or (w[i - 1] - w[i]) > gap_tol:
            clusters.append((float(np.mean(w[start:i])), v[:, start:i]))
            start = i
    return clusters


def _support_clusters(rho: np.ndarray) -> list[tuple[float, np.ndarray]]:
    return [(mu, q) for mu, q in marginal_clusters(rho) if mu > SUPPORT_CUT]


def _require_maximal(s: Scenario, tol: float) -> None:
    if not check_maximal(s, tol):
        raise NotMaximal(
            f"scenario value {ebi_value(s)!r} differs from 4*sqrt(3) by more than {tol:.1e}"
        )


def check_support_preservation(s: Scenario, tol: float = DEFAULT_TOL) -> CheckReport:
    """Verify every marginal eigenspace is invariant under the party's observables.

    For each eigenprojector P of the marginal state and each observable M of
    that party, reports the largest entry of (I - P) M P.
    """
    _require_maximal(s, tol)
    rho = np.outer(s.state, s.state.conj())
    details: dict = {}
    worst = 0.0
    for party, keep, observables, d in (
        ("alice", "A", s.alice, s.d_a),
        ("bob", "B", s.bob, s.d_b),
    ):
        marginal = partial_trace(rho, s.d_a, s.d_b, keep)
        clusters = marginal_clusters(marginal)
        details[f"{party}_clusters"] = len(clusters)
        for ci, (_, q) in enumerate(clusters):
            proj = q @ dagger(q)
            comp = np.eye(d) - proj
            for oi, obs in enumerate(observables):
                r = float(np.max(np.abs(comp @ obs.matrix @ proj)))
                details[f"{party}_cluster{ci}_obs{oi + 1}"] = r
                worst = max(worst, r)
    return CheckReport("support_preservation", worst, tol, worst < tol, details)


def check_anticommutation(s: Scenario, tol: float = DEFAULT_TOL) -> CheckReport:
    """Verify Alice's restricted observables pairwise anticommute.

    Per support eigenspace, reports the largest entry of {A_k, A_l} for
    k != l and of D_l^2 - I for the four derived Alice-side operators.
    """
    _require_maximal(s, tol)
    rho_a = partial_trace(np.outer(s.state, s.state.conj()), s.d_a, s.d_b, "A")
    details: dict = {}
    worst = 0.0
    for ci, (_, q) in enumerate(_support_clusters(rho_a)):
        restricted = [dagger(q) @ o.matrix @ q for o in s.alice]
        for k in range(3):
            for l in range(k + 1, 3):
                anti = restricted[k] @ restricted[l] + restricted[l] @ restricted[k]
                r = float(np.max(np.abs(anti)))
                details[f"cluster{ci}_anti_{k + 1}{l + 1}"] = r
                worst = max(worst, r)
        ident = np.eye(q.shape[1])
        for li, d_op in enumerate(d_operators(restricted)):
            r = float(np.max(np.abs(d_op @ d_op - ident)))
            details[f"cluster{ci}_dsquared_{li + 1}"] = r
            worst = max(worst, r)
    return CheckReport("anticommutation", worst, tol, worst < tol, details)


def _ordered_sign_basis(omega: np.ndarray) -> tuple[np.ndarray, int, float]:
    """Diagonalize a Hermitian involution; +1 columns first, deterministic order.

    Returns (ordered eigenvector columns, count of +1 eigenvalues, largest
    deviation of |eigenvalue| from 1).  Columns are phase-fixed (first
    significant component real positive) and sorted within each sign group
    so repeated extractions of the same scenario agree exactly.
    """
    w, u = np.linalg.eigh((omega + dagger(omega)) / 2)
    involution_res = float(np.max(np.abs(np.abs(w) - 1.0))) if w.size else 0.0

    def canonical(cols: np.ndarray) -> list[np.ndarray]:
        fixed = []
        for j in range(cols.shape[1]):
            c = cols[:, j].copy()
            nz = np.nonzero(np.abs(c) > 1e-6)[0]
            if nz.size:
                c = c * (c[nz[0]].conj() / abs(c[nz[0]]))
            fixed.append(c)
        fixed.sort(key=lambda c: tuple(np.round(c.view(float), 9)))
        return fixed

    plus = canonical(u[:, w > 0])
    minus = canonical(u[:, w <= 0])
    ordered = np.column_stack(plus + minus) if plus + minus else u
    return ordered, len(plus), involution_res


def extract_blocks(s: Scenario, tol: float = DEFAULT_TOL) -> BlockDecomposition:
    """Recover canonical bases and the family spec of a maximal violator.

    Per support eigenspace of Alice's marginal: split along the first
    observable's +1/-1 eigenspaces, pair the halves through the second
    observable, read off the real matrix coupling the pairs through the
    third observable, and diagonalize it to fix the +Y/-Y signature.  Bob's
    canonical basis is then fully determined by contracting the state with
    Alice's, and his observables must match the blockwise transpose of the
    Alice-side derived operators.
    """
    _require_maximal(s, tol)
    rho_a = partial_trace(np.outer(s.state, s.state.conj()), s.d_a, s.d_b, "A")
    clusters = _support_clusters(rho_a)
    psi_m = s.state_matrix
    d_ops = d_operators([o.matrix for o in s.alice])

    alice_cols: list[np.ndarray] = []
    bob_cols: list[np.ndarray] = []
    blocks: list[Block] = []
    residuals = {"non_y": 0.0, "omega_involution": 0.0, "transpose": 0.0}

    for mu, q in clusters:
        d_i = q.shape[1]
        if d_i % 2:
            raise UnequalEigenspaceSplit(f"support eigenspace has odd dimension {d_i}")
        a_res = [dagger(q) @ o.matrix @ q for o in s.alice]
        w1, u1 = np.linalg.eigh((a_res[0] + dagger(a_res[0])) / 2)
        n_i = int(np.sum(w1 > 0))
        if n_i != d_i - n_i:
            raise UnequalEigenspaceSplit(
                f"first observable splits a {d_i}-dimensional eigenspace as "
                f"{n_i}+{d_i - n_i}"
            )
        e = u1[:, w1 > 0]
        f = a_res[1] @ e  # pairs the +1 half with the -1 half and makes A_2 = X exact

        # Pair (p1, p2) of the third observable must be omega[p1, p2] * Y:
        # both diagonal entries vanish and the off-diagonal entries are
        # opposite, which simultaneously makes omega = i * m_ef Hermitian.
        m_ee = dagger(e) @ a_res[2] @ e
        m_ef = dagger(e) @ a_res[2] @ f
        m_fe = dagger(f) @ a_res[2] @ e
        m_ff = dagger(f) @ a_res[2] @ f
        omega = 1j * m_ef
        non_y = max(
            float(np.max(np.abs(m_ee))),
            float(np.max(np.abs(m_ff))),
            float(np.max(np.abs(m_ef + m_fe))),
        )
        residuals["non_y"] = max(residuals["non_y"], non_y)
        if non_y >= tol:
            raise NonYBlock(
                f"third observable block deviates from a Y multiple by {non_y:.3e}"
            )

        u_ord, r_i, invol_res = _ordered_sign_basis(omega)
        residuals["omega_involution"] = max(residuals["omega_involution"], invol_res)

        lam = math.sqrt(mu)
        e_full = (q @ e) @ u_ord
        f_full = (q @ f) @ u_ord
        for p in range(n_i):
            for col in (e_full[:, p], f_full[:, p]):
                alice_cols.append(col)
                bob_cols.append((col.conj() @ psi_m) / lam)
        blocks.append(Block(lam, n_i, r_i))

    alice_basis = np.column_stack(alice_cols)
    bob_basis = np.column_stack(bob_cols)
    for name, basis in (("alice_unitarity", alice_basis), ("bob_unitarity", bob_basis)):
        gram = dagger(basis) @ basis
        residuals[name] = float(np.max(np.abs(gram - np.eye(gram.shape[0]))))

    # Bob's observables must be the blockwise transpose of the D operators.
    offset = 0
    for (_, q), block in zip(clusters, blocks):
        d_i = 2 * block.n
        a_sub = alice_basis[:, offset : offset + d_i]
        b_sub = bob_basis[:, offset : offset + d_i]
        for d_op, bob_obs in zip(d_ops, s.bob):
            lhs = dagger(b_sub) @ bob_obs.matrix @ b_sub
            rhs = (dagger(a_sub) @ d_op @ a_sub).T
            residuals["transpose"] = max(
                residuals["transpose"], float(np.max(np.abs(lhs - rhs)))
            )
        offset += d_i
    if residuals["transpose"] >= tol:
        raise TransposeMismatch(
            f"Bob reconstruction residual {residuals['transpose']:.3e} exceeds {tol:.1e}"
        )

    kept_mass = sum(2 * b.n * b.lam**2 for b in blocks)
    residuals["dropped_mass"] = abs(1.0 - kept_mass)
    scale = 1.0 / math.sqrt(kept_mass)
    spec = FamilySpec(tuple(Block(b.lam * scale, b.n, b.r) for b in blocks))
    return BlockDecomposition(spec, alice_basis, bob_basis, residuals)


def verify_state_form(
    s: Scenario, d: BlockDecomposition, tol: float = DEFAULT_TOL
) -> float:
    """Residual of the state against its canonical maximally-entangled form.

    Expresses the shared state in the extracted bases and returns the norm
    of the difference from the lambda-weighted sum of in-pair maximally
    entangled states.  The residual is returned unconditionally; ``tol`` is
    the threshold callers are expected to judge it against.
    """
    target = np.zeros_like(s.state)
    for pair, lam in enumerate(d.pair_lambdas):
        a0 = d.alice_basis[:, 2 * pair]
        a1 = d.alice_basis[:, 2 * pair + 1]
        b0 = d.bob_basis[:, 2 * pair]
        b1 = d.bob_basis[:, 2 * pair + 1]
        target += lam * (kron(a0, b0) + kron(a1, b1))
    return float(np.linalg.norm(s.state - target))


def canonical_decomposition(spec: FamilySpec) -> BlockDecomposition:
    """Identity-basis decomposition of a freshly constructed family scenario."""
    dim = spec.total_dim
    ident = np.eye(dim, dtype=complex)
    return BlockDecomposition(spec, ident, ident.copy(), {})


@dataclass
class VerificationResult:
    """All structural checks on one scenario, plus extraction output."""

    checks: list[CheckReport]
    decomposition: BlockDecomposition | None
    error: str | None

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks)


def full_verification(s: Scenario, tol: float = DEFAULT_TOL) -> VerificationResult:
    """Run the whole pipeline: maximality, supports, anticommutation, extraction."""
    value_residual = abs(ebi_value(s) - QUANTUM_MAX)
    checks = [
        CheckReport("maximal_violation", value_residual, tol, value_residual < tol)
    ]
    if not checks[0].passed:
        return VerificationResult(checks, None, "NotMaximal")
    checks.append(check_support_preservation(s, tol))
    checks.append(check_anticommutation(s, tol))
    try:
        decomposition = extract_blocks(s, tol)
    except (NotMaximal, UnequalEigenspaceSplit, NonYBlock, TransposeMismatch) as exc:
        return VerificationResult(checks, None, type(exc).__name__)
    extraction_residual = max(
        decomposition.residuals[k] for k in ("non_y", "transpose", "bob_unitarity")
    )
    checks.append(
        CheckReport(
            "block_extraction",
            extraction_residual,
            tol,
            extraction_residual < tol,
            dict(decomposition.residuals),
        )
    )
    state_residual = verify_state_form(s, decomposition)
    checks.append(CheckReport("state_form", state_residual, tol, state_residual < tol))
    return VerificationResult(checks, decomposition, None)
