"""Seesaw maximization of the Bell operator expectation.

Alternates an exact state step (top eigenvector of the Bell operator) with
exact observable steps (spectral sign of the linear coefficient operator),
so the value trace is nondecreasing and every attained value is a certified
lower bound on the quantum maximum.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .linalg import dagger, hermitian_eig, sign_operator
from .scenario import EBI_SIGNS, QUANTUM_MAX, Observable, Scenario, bell_operator, ebi_value

# A run that stalls more than this far below the quantum maximum is a
# local optimum; callers retry with another seed.
STUCK_GAP = 1e-4


@dataclass(frozen=True)
class SeesawConfig:
    """Dimensions, iteration budget, and tolerances of one seeded run."""

    d_a: int = 2
    d_b: int = 2
    max_iters: int = 500
    conv_tol: float = 1e-12
    zero_tol: float = 1e-12
    seed: int = 0

    def __post_init__(self) -> None:
        if self.d_a < 2 or self.d_b < 2:
            raise ValueError("party dimensions must be at least 2")
        if self.conv_tol <= 0 or self.zero_tol <= 0:
            raise ValueError("tolerances must be positive")


@dataclass
class SeesawResult:
    """Best scenario found, its value, and the per-sweep value trace."""

    value: float
    scenario: Scenario
    trace: list[float]
    converged: bool
    iterations: int


def _random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    # Traceless: a sign-definite draw would start an observable at +-identity,
    # which seeds the classical S=6 fixed point and stalls the seesaw.
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = (g + dagger(g)) / 2
    return h - np.trace(h) / dim * np.eye(dim)


def random_start(config: SeesawConfig) -> Scenario:
    """Seeded random scenario: Gaussian state, spectral-sign observables.

    Observables are spectral signs of traceless Gaussian Hermitian draws
    (unitarily invariant, no axis bias).  Draw order is fixed (state, then
    Alice 1..3, then Bob 1..4), so a given seed always produces the
    identical scenario.
    """
    rng = np.random.default_rng(config.seed)
    psi = rng.standard_normal(config.d_a * config.d_b) + 1j * rng.standard_normal(
        config.d_a * config.d_b
    )
    psi /= np.linalg.norm(psi)
    alice = tuple(
        Observable(sign_operator(_random_hermitian(rng, config.d_a), config.zero_tol))
        for _ in range(3)
    )
    bob = tuple(
        Observable(sign_operator(_random_hermitian(rng, config.d_b), config.zero_tol))
        for _ in range(4)
    )
    return Scenario(state=psi, alice=alice, bob=bob)


def update_alice(s: Scenario, k: int, zero_tol: float = 1e-12) -> Observable:
    """Exact maximizer of the value over Alice's k-th observable.

    The value is linear in A_k with coefficient operator
    R_k = tr_B[(I x sum_l EBI_SIGNS[k, l] B_l) |psi><psi|]; the spectral
    sign of R_k maximizes tr(A_k R_k), so the value never decreases.
    """
    g = sum(int(EBI_SIGNS[k, l]) * s.bob[l].matrix for l in range(4))
    psi_m = s.state_matrix
    r = (psi_m @ g.T) @ psi_m.conj().T
    r = (r + dagger(r)) / 2
    return Observable(sign_operator(r, zero_tol))


def update_bob(s: Scenario, l: int, zero_tol: float = 1e-12) -> Observable:
    """Exact maximizer of the value over Bob's l-th observable."""
    f = sum(int(EBI_SIGNS[k, l]) * s.alice[k].matrix for k in range(3))
    psi_m = s.state_matrix
    r = (f @ psi_m).T @ psi_m.conj()
    r = (r + dagger(r)) / 2
    return Observable(sign_operator(r, zero_tol))


def update_state(s: Scenario) -> np.ndarray:
    """Top eigenvector of the Bell operator; the new value is its largest eigenvalue."""
    sigma = bell_operator(s.alice, s.bob)
    _, vecs = hermitian_eig(sigma)
    return vecs[:, -1]


def seesaw(config: SeesawConfig, start: Scenario | None = None) -> SeesawResult:
    """Alternating maximization from a seeded random start.

    Each sweep updates the state, then Alice's three observables, then
    Bob's four; the trace records the certified value (largest Bell
    operator eigenvalue) at each state step.  Stops when the sweep
    increment drops below ``conv_tol`` or the iteration budget runs out;
    a run that stalls visibly below the quantum maximum reports
    ``converged=False`` (local optimum).
    """
    s = random_start(config) if start is None else start
    trace: list[float] = []
    previous = ebi_value(s)
    increment = float("inf")
    iterations = 0
    for _ in range(config.max_iters):
        iterations += 1
        s = replace(s, state=update_state(s))
        trace.append(ebi_value(s))
        for k in range(3):
            new_alice = list(s.alice)
            new_alice[k] = update_alice(s, k, config.zero_tol)
            s = replace(s, alice=tuple(new_alice))
        for l in range(4):
            new_bob = list(s.bob)
            new_bob[l] = update_bob(s, l, config.zero_tol)
            s = replace(s, bob=tuple(new_bob))
        value = ebi_value(s)
        increment = value - previous
        previous = value
        if increment < config.conv_tol:
            break
    value = ebi_value(s)
    converged = increment < config.conv_tol and value >= QUANTUM_MAX - STUCK_GAP
    return SeesawResult(value, s, trace, converged, iterations)
