"""Shared deterministic generators for the test suite."""

from __future__ import annotations

import math

import numpy as np

from elegant_bell import Block, FamilySpec, Observable, Scenario
from elegant_bell.linalg import dagger, sign_operator


def random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (g + dagger(g)) / 2


def random_involution(rng: np.random.Generator, dim: int) -> np.ndarray:
    return sign_operator(random_hermitian(rng, dim))


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return psi / np.linalg.norm(psi)


def random_scenario(rng: np.random.Generator, d_a: int = 2, d_b: int = 2) -> Scenario:
    return Scenario(
        state=random_state(rng, d_a * d_b),
        alice=tuple(Observable(random_involution(rng, d_a)) for _ in range(3)),
        bob=tuple(Observable(random_involution(rng, d_b)) for _ in range(4)),
    )


def random_family_spec(
    rng: np.random.Generator, max_blocks: int = 3, max_n: int = 2
) -> FamilySpec:
    """Valid spec with well-separated Schmidt clusters (extraction-safe gaps)."""
    while True:
        m = int(rng.integers(1, max_blocks + 1))
        ns = [int(rng.integers(1, max_n + 1)) for _ in range(m)]
        weights = rng.uniform(0.5, 1.5, size=m)
        denom = float(sum(2 * n * w for n, w in zip(ns, weights)))
        lam2 = [w / denom for w in weights]
        blocks = sorted(zip(lam2, ns), reverse=True)
        gaps_ok = all(
            a[0] - b[0] > 0.02 * blocks[0][0] for a, b in zip(blocks, blocks[1:])
        )
        if not gaps_ok or blocks[-1][0] < 1e-3:
            continue
        return FamilySpec(
            tuple(
                Block(math.sqrt(l2), n, int(rng.integers(0, n + 1)))
                for l2, n in blocks
            )
        )


def random_mixed_spec(rng: np.random.Generator, max_blocks: int = 2) -> FamilySpec:
    """Spec whose +Y and -Y junk branches are both nonzero."""
    while True:
        spec = random_family_spec(rng, max_blocks=max_blocks, max_n=2)
        plus = sum(b.r for b in spec.blocks)
        minus = sum(b.n - b.r for b in spec.blocks)
        if plus >= 1 and minus >= 1:
            return spec


def scramble(s: Scenario, rng: np.random.Generator) -> Scenario:
    """Conjugate a scenario by a random local unitary pair."""
    u_a = random_unitary(rng, s.d_a)
    u_b = random_unitary(rng, s.d_b)
    return Scenario(
        state=np.kron(u_a, u_b) @ s.state,
        alice=tuple(Observable(u_a @ o.matrix @ dagger(u_a)) for o in s.alice),
        bob=tuple(Observable(u_b @ o.matrix @ dagger(u_b)) for o in s.bob),
    )


def embedded_classical(signs) -> Scenario:
    """Deterministic strategy as a two-qubit product scenario.

    Observables are (sign * identity); the state is |00>, so every
    correlator is the corresponding product of signs.
    """
    a, b = signs[:3], signs[3:]
    ident = np.eye(2)
    return Scenario(
        state=np.array([1, 0, 0, 0], dtype=complex),
        alice=tuple(Observable(sign * ident) for sign in a),
        bob=tuple(Observable(sign * ident) for sign in b),
    )
