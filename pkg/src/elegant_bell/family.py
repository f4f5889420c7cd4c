"""Reference experiment and the complete family of maximal violators.

The reference experiment is the two-qubit strategy: maximally entangled
state, Pauli triple for Alice, cube-diagonal observables for Bob.  The
family construction produces every strategy reaching the quantum maximum,
parametrized by Schmidt blocks (lambda_i, n_i, r_i) where r_i counts the
qubit pairs carrying +Y (as opposed to the transposed -Y) for Alice's
third observable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SpecInvalid, UnsupportedDimension
from .linalg import hermitian_eig, kron
from .scenario import EBI_SIGNS, Observable, Scenario

PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
IDENT2 = np.eye(2, dtype=complex)

SQRT3 = math.sqrt(3.0)

# Per-pair composition of Bob's observables from Alice's: row l gives the
# signs of (A_1, A_2, A_3) in sqrt(3)*B_l restricted to one qubit pair.
BOB_SIGNS = np.array(
    [
        [1, 1, -1],
        [1, -1, 1],
        [-1, 1, 1],
        [-1, -1, -1],
    ],
    dtype=int,
)


@dataclass(frozen=True)
class Block:
    """One Schmidt block: coefficient, pair multiplicity, and +Y count."""

    lam: float
    n: int
    r: int


@dataclass(frozen=True)
class FamilySpec:
    """Classification data for a maximal violator: blocks of (lambda, n, r)."""

    blocks: tuple[Block, ...]

    def __post_init__(self) -> None:
        blocks = tuple(self.blocks)
        if not blocks:
            raise SpecInvalid("spec needs at least one block")
        for b in blocks:
            if b.n < 1:
                raise SpecInvalid(f"multiplicity: block n must be >= 1, got {b.n}")
            if not 0 <= b.r <= b.n:
                raise SpecInvalid(f"signature: block r must satisfy 0 <= r <= n, got {b.r}")
            if not (b.lam > 0 and math.isfinite(b.lam)):
                raise SpecInvalid(f"coefficient: block lambda must be positive, got {b.lam!r}")
        lams = [b.lam for b in blocks]
        if any(l2 >= l1 for l1, l2 in zip(lams, lams[1:])):
            raise SpecInvalid("ordering: lambdas must be strictly decreasing across blocks")
        total = sum(2 * b.n * b.lam**2 for b in blocks)
        if abs(total - 1.0) > 1e-10:
            raise SpecInvalid(f"normalization: sum 2*n*lambda^2 = {total!r}, expected 1")
        object.__setattr__(self, "blocks", blocks)

    @property
    def total_dim(self) -> int:
        """Local dimension sum_i 2*n_i of the constructed scenario."""
        return sum(2 * b.n for b in self.blocks)

    @property
    def all_plus(self) -> bool:
        """True when every block has r = n (no transposed pairs)."""
        return all(b.r == b.n for b in self.blocks)


@dataclass(frozen=True)
class CanonicalBlock:
    """Placement of one qubit pair inside a constructed family scenario."""

    cluster: int
    position: int
    lam: float
    y_sign: int
    pair: int  # global pair index: basis vectors 2*pair and 2*pair + 1


def single_block_spec(lam: float = 1.0 / math.sqrt(2.0), n: int = 1, r: int = 1) -> FamilySpec:
    """Convenience constructor for one-cluster specs."""
    return FamilySpec((Block(lam, n, r),))


def reference_experiment() -> Scenario:
    """The two-qubit strategy reaching the quantum maximum.

    State (|00> + |11>)/sqrt(2); Alice measures Z, X, Y; Bob measures the
    four normalized cube diagonals (Z+X-Y, Z-X+Y, -Z+X+Y, -Z-X-Y)/sqrt(3).
    """
    state = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2.0)
    alice = tuple(Observable(m) for m in (PAULI_Z, PAULI_X, PAULI_Y))
    paulis = (PAULI_Z, PAULI_X, PAULI_Y)
    bob = tuple(
        Observable(sum(int(BOB_SIGNS[l, k]) * paulis[k] for k in range(3)) / SQRT3)
        for l in range(4)
    )
    return Scenario(state=state, alice=alice, bob=bob)


def build_family(spec: FamilySpec) -> tuple[Scenario, tuple[CanonicalBlock, ...]]:
    """Construct the canonical maximal violator for a family spec.

    Both parties get dimension sum_i 2*n_i.  Basis vectors 2q, 2q+1 carry
    qubit pair q; pairs are ordered by descending lambda and, within a
    block, +Y pairs before -Y pairs.  Alice's observables act blockwise as
    (Z, X, +/-Y), Bob's follow the per-pair composition BOB_SIGNS (which is
    the blockwise transpose of Alice's), and the state is the lambda-weighted
    sum of in-pair maximally entangled states.
    """
    layout: list[CanonicalBlock] = []
    pair = 0
    for i, b in enumerate(spec.blocks):
        for p in range(b.n):
            y_sign = 1 if p < b.r else -1
            layout.append(CanonicalBlock(i, p, b.lam, y_sign, pair))
            pair += 1

    n_pairs = len(layout)
    ident_pairs = np.eye(n_pairs, dtype=complex)
    omega = np.diag([complex(blk.y_sign) for blk in layout])

    base = {
        0: kron(ident_pairs, PAULI_Z),
        1: kron(ident_pairs, PAULI_X),
        2: kron(omega, PAULI_Y),
    }
    alice = tuple(Observable(base[k]) for k in range(3))
    bob = tuple(
        Observable(sum(int(BOB_SIGNS[l, k]) * base[k] for k in range(3)) / SQRT3)
        for l in range(4)
    )

    lams = np.array([blk.lam for blk in layout])
    state = kron(np.diag(lams), IDENT2).reshape(-1)

    scenario = Scenario(state=state, alice=alice, bob=bob)
    return scenario, tuple(layout)


def d_operators(alice_matrices) -> list[np.ndarray]:
    """Four Alice-side operators mirroring Bob's role in the Bell operator.

    D_l = (1/sqrt(3)) * sum_k EBI_SIGNS[k, l] * A_k.  Returned as raw
    Hermitian matrices: each D_l is an involution exactly when Alice's
    observables pairwise anticommute (use linalg.involution_defect to query).
    """
    mats = [
        a.matrix if isinstance(a, Observable) else np.asarray(a, dtype=complex)
        for a in alice_matrices
    ]
    return [
        sum(int(EBI_SIGNS[k, l]) * mats[k] for k in range(3)) / SQRT3 for l in range(4)
    ]


@dataclass(frozen=True)
class BlochPoint:
    """A labeled unit vector (<X>, <Y>, <Z>) on the Bloch sphere."""

    label: str
    vector: np.ndarray


def bloch_export(s: Scenario) -> list[BlochPoint]:
    """Bloch vectors of every outcome eigenstate of a two-qubit scenario.

    Emits one point per observable and outcome sign (Alice's six, then
    Bob's eight), labeled like "A1+" and "B4-".  Only defined for qubit
    parties; multi-block scenarios export per block after extraction.
    """
    if s.d_a != 2 or s.d_b != 2:
        raise UnsupportedDimension(
            f"Bloch export needs qubit parties, got dims ({s.d_a}, {s.d_b})"
        )
    points = []
    groups = [("A", s.alice), ("B", s.bob)]
    for party, observables in groups:
        for idx, obs in enumerate(observables):
            _, vecs = hermitian_eig(obs.matrix)
            # eigh sorts ascending: column 0 is the -1 outcome, column 1 the +1.
            for sign, col in (("+", 1), ("-", 0)):
                v = vecs[:, col]
                vector = np.array(
                    [
                        np.vdot(v, PAULI_X @ v).real,
                        np.vdot(v, PAULI_Y @ v).real,
                        np.vdot(v, PAULI_Z @ v).real,
                    ]
                )
                points.append(BlochPoint(f"{party}{idx + 1}{sign}", vector))
    return points
