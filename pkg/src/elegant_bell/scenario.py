"""Data model for a 3x4 dichotomic bipartite Bell scenario.

Holds the sign pattern of the inequality (the single source of truth for
every module touching it), correlators, the Bell operator, and the
classical brute-force bound.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidScenario, NotHermitian
from .linalg import dagger, hermiticity_defect, involution_defect, kron

# Sign matrix of the inequality: S = sum_{k,l} EBI_SIGNS[k, l] * E[k, l].
# Rows sum to zero and are pairwise orthogonal.
EBI_SIGNS = np.array(
    [
        [1, 1, -1, -1],
        [1, -1, 1, -1],
        [1, -1, -1, 1],
    ],
    dtype=int,
)

CLASSICAL_BOUND = 6
QUANTUM_MAX = 4.0 * math.sqrt(3.0)

OBSERVABLE_TOL = 1e-9
STATE_NORM_TOL = 1e-10
IMAG_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Observable:
    """A dichotomic (+1/-1 outcome) projective measurement: a Hermitian involution."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidScenario(f"observable must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InvalidScenario("observable has non-finite entries")
        defect = hermiticity_defect(m)
        if defect > OBSERVABLE_TOL:
            raise InvalidScenario(f"observable not Hermitian: defect {defect:.3e}")
        defect = involution_defect(m)
        if defect > OBSERVABLE_TOL:
            raise InvalidScenario(f"observable not an involution: defect {defect:.3e}")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def projector(self, sign: int) -> np.ndarray:
        """Projector onto the +1 or -1 eigenspace: (I + sign*M)/2."""
        if sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {sign!r}")
        return (np.eye(self.dim) + sign * self.matrix) / 2


@dataclass(frozen=True, eq=False)
class Scenario:
    """A bipartite strategy: shared pure state, 3 Alice and 4 Bob observables."""

    state: np.ndarray
    alice: tuple[Observable, Observable, Observable]
    bob: tuple[Observable, Observable, Observable, Observable]

    def __post_init__(self) -> None:
        alice = tuple(self.alice)
        bob = tuple(self.bob)
        if len(alice) != 3 or len(bob) != 4:
            raise InvalidScenario("expected 3 Alice and 4 Bob observables")
        d_a = alice[0].dim
        d_b = bob[0].dim
        if any(o.dim != d_a for o in alice) or any(o.dim != d_b for o in bob):
            raise InvalidScenario("observables of one party must share a dimension")
        psi = np.asarray(self.state, dtype=complex).reshape(-1)
        if psi.size != d_a * d_b:
            raise InvalidScenario(
                f"state has length {psi.size}, expected {d_a}*{d_b} = {d_a * d_b}"
            )
        if not np.all(np.isfinite(psi)):
            raise InvalidScenario("state has non-finite entries")
        norm = np.linalg.norm(psi)
        if abs(norm - 1.0) > STATE_NORM_TOL:
            raise InvalidScenario(f"state norm is {norm!r}, expected 1")
        object.__setattr__(self, "state", psi)
        object.__setattr__(self, "alice", alice)
        object.__setattr__(self, "bob", bob)

    @property
    def d_a(self) -> int:
        return self.alice[0].dim

    @property
    def d_b(self) -> int:
        return self.bob[0].dim

    @property
    def state_matrix(self) -> np.ndarray:
        """State reshaped to (d_a, d_b); entry (i, j) is amplitude of |i_A j_B>."""
        return self.state.reshape(self.d_a, self.d_b)


def correlator(s: Scenario, k: int, l: int) -> float:
    """Expectation <psi| A_k x B_l |psi> for 0-based setting indices."""
    a = s.alice[k].matrix
    b = s.bob[l].matrix
    psi_m = s.state_matrix
    value = complex(np.vdot(s.state, (a @ psi_m @ b.T).reshape(-1)))
    if abs(value.imag) >= IMAG_TOL:
        raise NotHermitian(
            f"correlator ({k}, {l}) has imaginary part {value.imag:.3e}; "
            "non-Hermitian input suspected"
        )
    return value.real


def correlation_table(s: Scenario) -> np.ndarray:
    """All twelve correlators as a 3x4 real matrix."""
    table = np.array([[correlator(s, k, l) for l in range(4)] for k in range(3)])
    worst = float(np.max(np.abs(table)))
    if worst > 1.0 + 1e-9:
        raise InvalidScenario(f"correlator magnitude {worst!r} exceeds 1")
    return table


def ebi_value(s: Scenario) -> float:
    """Value of the inequality functional S on the scenario."""
    return float(np.sum(EBI_SIGNS * correlation_table(s)))


def bell_operator(alice, bob) -> np.ndarray:
    """The Bell operator: sum_{k,l} EBI_SIGNS[k, l] * A_k x B_l.

    Its expectation value in any state equals ``ebi_value`` of the scenario
    built from the same observables.
    """
    mats_a = [o.matrix if isinstance(o, Observable) else np.asarray(o, complex) for o in alice]
    mats_b = [o.matrix if isinstance(o, Observable) else np.asarray(o, complex) for o in bob]
    d = mats_a[0].shape[0] * mats_b[0].shape[0]
    sigma = np.zeros((d, d), dtype=complex)
    for k in range(3):
        for l in range(4):
            sigma += EBI_SIGNS[k, l] * kron(mats_a[k], mats_b[l])
    defect = float(np.max(np.abs(sigma - dagger(sigma))))
    if defect > 1e-10:
        raise NotHermitian(f"Bell operator not Hermitian: defect {defect:.3e}")
    return sigma


def classical_max_bruteforce() -> tuple[int, tuple[int, ...]]:
    """Exact classical maximum of S over all 128 deterministic strategies.

    Enumerates every sign assignment (a_1, a_2, a_3, b_1..b_4) in {-1, +1}^7
    and returns the maximum of S = sum_{k,l} EBI_SIGNS[k, l] a_k b_l together
    with one maximizer.  Pure integer arithmetic.
    """
    best = None
    best_strategy: tuple[int, ...] = ()
    for signs in itertools.product((-1, 1), repeat=7):
        a, b = signs[:3], signs[3:]
        value = sum(
            int(EBI_SIGNS[k, l]) * a[k] * b[l] for k in range(3) for l in range(4)
        )
        if best is None or value > best:
            best = value
            best_strategy = signs
    assert best is not None
    return best, best_strategy
