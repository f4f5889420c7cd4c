"""SWAP-gadget isometry and the equivalence test against the reference experiment.

The isometry adjoins one ancilla qubit per party and runs the four-gate
gadget (Hadamards, controlled first observables, Hadamards, controlled
second observables), with Bob's effective Z and X rebuilt from his
black-box observables as sqrt(3)/2 * (B_1 + B_2) and sqrt(3)/2 * (B_1 + B_3).
Outputs are laid out with the junk composite index first and the 2-qubit
reference index (2*bit_a + bit_b) last.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotInvolution
from .family import FamilySpec, reference_experiment
from .linalg import dagger, involution_defect
from .scenario import Scenario
from .structure import BlockDecomposition

SQRT3 = math.sqrt(3.0)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0)

SIGNS = (1, -1)  # index 0 <-> outcome +1, index 1 <-> outcome -1


def bob_effective_pauli(s: Scenario) -> tuple[np.ndarray, np.ndarray]:
    """Bob's gadget gates: sqrt(3)/2*(B_1+B_2) and sqrt(3)/2*(B_1+B_3)."""
    b = [o.matrix for o in s.bob]
    return (SQRT3 / 2) * (b[0] + b[1]), (SQRT3 / 2) * (b[0] + b[2])


@dataclass(frozen=True, eq=False)
class SwapGadget:
    """The local isometry as an applicable circuit."""

    d_a: int
    d_b: int
    a1: np.ndarray
    a2: np.ndarray
    zb: np.ndarray
    xb: np.ndarray

    @classmethod
    def from_scenario(cls, s: Scenario, involution_tol: float = 1e-7) -> "SwapGadget":
        """Build the gadget; requires Bob's effective Z and X to be involutions.

        For maximal violators the combinations are involutions exactly; a
        failure here signals a non-maximal scenario.
        """
        zb, xb = bob_effective_pauli(s)
        for name, gate in (("(B1+B2)", zb), ("(B1+B3)", xb)):
            defect = involution_defect(gate)
            if defect > involution_tol:
                raise NotInvolution(
                    f"sqrt(3)/2*{name} squares to identity only within {defect:.3e}"
                )
        return cls(s.d_a, s.d_b, s.alice[0].matrix, s.alice[1].matrix, zb, xb)

    def apply(self, vec: np.ndarray) -> np.ndarray:
        """Apply the circuit to a (possibly unnormalized) joint vector.

        Input lives on H_A x H_B; the output index is
        (i_A*d_B + i_B)*4 + 2*bit_a + bit_b.
        """
        t = np.zeros((self.d_a, self.d_b, 2, 2), dtype=complex)
        t[:, :, 0, 0] = np.asarray(vec, dtype=complex).reshape(self.d_a, self.d_b)
        for controlled_a, controlled_b in ((self.a1, self.zb), (self.a2, self.xb)):
            t = np.einsum("Aa,ijab->ijAb", HADAMARD, t)
            t = np.einsum("Bb,ijab->ijaB", HADAMARD, t)
            t[:, :, 1, :] = np.einsum("ik,kjb->ijb", controlled_a, t[:, :, 1, :])
            t[:, :, :, 1] = np.einsum("jl,ila->ija", controlled_b, t[:, :, :, 1])
        return t.reshape(-1)


@dataclass(frozen=True, eq=False)
class IsometryOutput:
    """Isometry images of all 48 doubly projected states.

    ``vectors[k, l, si, ti]`` is the image of
    proj(A_k, sign si) proj(B_l, sign ti) |psi>, with index 0 meaning
    outcome +1 and index 1 meaning outcome -1.
    """

    d_a: int
    d_b: int
    vectors: np.ndarray  # shape (3, 4, 2, 2, d_a*d_b*4)

    def vector(self, k: int, l: int, s: int, t: int) -> np.ndarray:
        return self.vectors[k, l, SIGNS.index(s), SIGNS.index(t)]


def swap_isometry(s: Scenario) -> IsometryOutput:
    """Push every doubly projected state through the gadget."""
    gadget = SwapGadget.from_scenario(s)
    psi_m = s.state_matrix
    out = np.zeros((3, 4, 2, 2, s.d_a * s.d_b * 4), dtype=complex)
    for k in range(3):
        for si, sign_a in enumerate(SIGNS):
            proj_a = s.alice[k].projector(sign_a)
            half = proj_a @ psi_m
            for l in range(4):
                for ti, sign_b in enumerate(SIGNS):
                    proj_b = s.bob[l].projector(sign_b)
                    out[k, l, si, ti] = gadget.apply(half @ proj_b.T)
    return IsometryOutput(s.d_a, s.d_b, out)


def reference_targets() -> np.ndarray:
    """Doubly projected reference states, indexed like IsometryOutput.vectors."""
    ref = reference_experiment()
    psi_m = ref.state_matrix
    out = np.zeros((3, 4, 2, 2, 4), dtype=complex)
    for k in range(3):
        for si, sign_a in enumerate(SIGNS):
            half = ref.alice[k].projector(sign_a) @ psi_m
            for l in range(4):
                for ti, sign_b in enumerate(SIGNS):
                    out[k, l, si, ti] = (half @ ref.bob[l].projector(sign_b).T).reshape(-1)
    return out


def necessary_correlator(s: Scenario) -> complex:
    """The discriminating correlator <psi| (A_2 A_3) x (B_1 + B_2) |psi>."""
    product = s.alice[1].matrix @ s.alice[2].matrix
    bsum = s.bob[0].matrix + s.bob[1].matrix
    return complex(np.vdot(s.state, (product @ s.state_matrix @ bsum.T).reshape(-1)))


def stora_prediction(spec: FamilySpec) -> complex:
    """Closed-form value of the discriminating correlator for a family spec.

    (2i/sqrt(3)) * sum_i lambda_i^2 (4 r_i - 2 n_i); equals 2i/sqrt(3)
    exactly when every block has r = n.
    """
    total = sum(b.lam**2 * (4 * b.r - 2 * b.n) for b in spec.blocks)
    return 2j / SQRT3 * total


@dataclass
class SelfTestReport:
    """Outcome of the equivalence test, optionally enriched by the CLI."""

    product_residual: float
    threshold: float
    verdict: str  # "equivalent" | "inequivalent"
    junk: np.ndarray
    correlator: complex | None = None
    junk_split_norms: tuple[float, float] | None = None
    eve: list | None = None
    transpose_equivalent: bool | None = None


def equivalence_check(out: IsometryOutput, threshold: float = 1e-6) -> SelfTestReport:
    """Test whether the isometry outputs factor as junk x reference.

    Fits a single junk vector by least squares on the best-conditioned cell,
    then reports the worst-case distance over all 48 cells between the
    output and junk x (projected reference state).
    """
    targets = reference_targets()
    norms = np.linalg.norm(targets, axis=-1)
    best = np.unravel_index(int(np.argmax(norms)), norms.shape)
    w_best = targets[best]
    v_best = out.vectors[best].reshape(-1, 4)
    junk = v_best @ w_best.conj() / float(norms[best] ** 2)

    residual = 0.0
    for k in range(3):
        for l in range(4):
            for si in range(2):
                for ti in range(2):
                    predicted = np.outer(junk, targets[k, l, si, ti]).reshape(-1)
                    gap = np.linalg.norm(out.vectors[k, l, si, ti] - predicted)
                    residual = max(residual, float(gap))
    verdict = "equivalent" if residual < threshold else "inequivalent"
    return SelfTestReport(residual, threshold, verdict, junk)


def junk_split(
    out: IsometryOutput, d: BlockDecomposition
) -> tuple[np.ndarray, np.ndarray]:
    """Split the junk vector into its +Y and -Y (transposed) branches.

    chi_1 collects sqrt(2)*lambda_i |0_A 0_B> over pairs carrying +Y,
    chi_2 the same over -Y pairs; together they reproduce every isometry
    output through the flipped-projector decomposition
    (see split_reproduction_residual).  The split is determined by the
    decomposition alone; ``out`` fixes the junk-space convention.
    """
    dim = d.alice_basis.shape[0] * d.bob_basis.shape[0]
    chi1 = np.zeros(dim, dtype=complex)
    chi2 = np.zeros(dim, dtype=complex)
    pair = 0
    for block in d.spec.blocks:
        for p in range(block.n):
            a0 = d.alice_basis[:, 2 * pair]
            b0 = d.bob_basis[:, 2 * pair]
            term = math.sqrt(2.0) * block.lam * np.outer(a0, b0).reshape(-1)
            if p < block.r:
                chi1 += term
            else:
                chi2 += term
            pair += 1
    return chi1, chi2


def split_reproduction_residual(
    out: IsometryOutput, chi1: np.ndarray, chi2: np.ndarray
) -> float:
    """Worst-case error of the two-branch decomposition over all 48 cells.

    The chi_1 branch keeps the reference projectors; the chi_2 branch flips
    Bob's setting l -> 5-l and outcome t -> -t, and additionally flips
    Alice's outcome for the third setting.
    """
    targets = reference_targets()
    residual = 0.0
    for k in range(3):
        a_flip = 1 if k < 2 else -1
        for l in range(4):
            for si, sign_a in enumerate(SIGNS):
                for ti in range(2):
                    main = targets[k, l, si, ti]
                    flipped = targets[
                        k, 3 - l, SIGNS.index(a_flip * sign_a), 1 - ti
                    ]
                    predicted = (
                        np.outer(chi1, main) + np.outer(chi2, flipped)
                    ).reshape(-1)
                    gap = np.linalg.norm(out.vectors[k, l, si, ti] - predicted)
                    residual = max(residual, float(gap))
    return residual


@dataclass
class EveMeasurementReport:
    """Eve's view of one single-party measurement on the isometry output."""

    measurement: str
    trace_distance: float
    schmidt_rank: tuple[int, int]  # (+1 outcome, -1 outcome), junk|reference cut
    entropy: tuple[float, float]


def _junk_reference_matrix(vec: np.ndarray) -> np.ndarray:
    return vec.reshape(-1, 4)


def eve_indistinguishability(
    s: Scenario, out: IsometryOutput, rank_cut: float = 1e-7
) -> list[EveMeasurementReport]:
    """Check that single measurements leave the junk register in one state.

    For the third Alice observable and each Bob observable, applies one
    outcome projector to the state, pushes it through the isometry,
    normalizes, and traces out the reference qubits.  Reports the trace
    distance between the two outcome-conditioned junk states, plus each
    output's Schmidt rank and entanglement entropy across the
    junk|reference cut (rank above 1 witnesses junk-reference entanglement).
    Projected states are recomputed from the scenario; ``out`` only pins the
    register convention the distances refer to.
    """
    gadget = SwapGadget.from_scenario(s)
    psi_m = s.state_matrix
    measurements = [("A3", s.alice[2], "A")]
    measurements += [(f"B{l + 1}", s.bob[l], "B") for l in range(4)]

    reports = []
    for name, obs, side in measurements:
        rhos = []
        ranks = []
        entropies = []
        for sign in SIGNS:
            proj = obs.projector(sign)
            projected = proj @ psi_m if side == "A" else psi_m @ proj.T
            image = gadget.apply(projected)
            image = image / np.linalg.norm(image)
            v = _junk_reference_matrix(image)
            rhos.append(v @ dagger(v))
            svals = np.linalg.svd(v, compute_uv=False)
            ranks.append(int(np.sum(svals > rank_cut)))
            probs = svals**2
            probs = probs[probs > 1e-15]
            entropies.append(float(-np.sum(probs * np.log(probs))))
        eigs = np.linalg.eigvalsh(rhos[0] - rhos[1])
        distance = 0.5 * float(np.sum(np.abs(eigs)))
        reports.append(
            EveMeasurementReport(
                name, distance, (ranks[0], ranks[1]), (entropies[0], entropies[1])
            )
        )
    return reports
