"""File formats: scenario/spec JSON, verification reports, and CSV tables.

JSON is emitted through a small canonical writer so that every float
carries 17 significant digits (lossless double round trip) and repeated
save/load cycles are byte-identical.
"""

from __future__ import annotations

import json
import math
from typing import Any, IO

import numpy as np

from .errors import InvalidScenario, SpecInvalid
from .family import Block, FamilySpec
from .scenario import Observable, Scenario
from .selftest import EveMeasurementReport, SelfTestReport
from .structure import VerificationResult


def _format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite float {x!r}")
    return format(float(x) + 0.0, ".17g")  # +0.0 folds -0.0 into 0.0


def dumps_canonical(obj: Any, indent: int = 0) -> str:
    """Serialize to JSON with .17g floats and stable (insertion) key order."""
    pad = " " * indent
    inner = " " * (indent + 2)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [dumps_canonical(v, indent + 2) for v in obj]
        return "[\n" + ",\n".join(inner + it for it in items) + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f"{json.dumps(str(k))}: {dumps_canonical(v, indent + 2)}"
            for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(inner + it for it in items) + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_json(doc: Any, sink: IO[str]) -> None:
    sink.write(dumps_canonical(doc) + "\n")


def _complex_pairs(values: np.ndarray) -> list[list[float]]:
    flat = np.asarray(values, dtype=complex).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in flat]


def _matrix_from_pairs(pairs, dim: int, what: str) -> np.ndarray:
    arr = np.asarray(pairs, dtype=float)
    if arr.shape != (dim * dim, 2):
        raise InvalidScenario(f"{what} must hold {dim * dim} [re, im] pairs")
    return (arr[:, 0] + 1j * arr[:, 1]).reshape(dim, dim)


def scenario_to_doc(s: Scenario) -> dict:
    """Scenario as a JSON document: dims, state, and row-major matrices.

    Complex numbers are [re, im] pairs; the state uses the composite index
    i_A*dB + i_B and matrices are flattened row-major.
    """
    return {
        "dA": s.d_a,
        "dB": s.d_b,
        "state": _complex_pairs(s.state),
        "alice": [_complex_pairs(o.matrix) for o in s.alice],
        "bob": [_complex_pairs(o.matrix) for o in s.bob],
    }


def scenario_from_doc(doc: dict) -> Scenario:
    try:
        d_a = int(doc["dA"])
        d_b = int(doc["dB"])
        state_pairs = np.asarray(doc["state"], dtype=float)
        alice_docs = doc["alice"]
        bob_docs = doc["bob"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidScenario(f"malformed scenario document: {exc}") from exc
    if state_pairs.shape != (d_a * d_b, 2):
        raise InvalidScenario(f"state must hold {d_a * d_b} [re, im] pairs")
    if len(alice_docs) != 3 or len(bob_docs) != 4:
        raise InvalidScenario("expected 3 alice and 4 bob matrices")
    state = state_pairs[:, 0] + 1j * state_pairs[:, 1]
    alice = tuple(
        Observable(_matrix_from_pairs(m, d_a, f"alice[{i}]"))
        for i, m in enumerate(alice_docs)
    )
    bob = tuple(
        Observable(_matrix_from_pairs(m, d_b, f"bob[{i}]"))
        for i, m in enumerate(bob_docs)
    )
    return Scenario(state=state, alice=alice, bob=bob)


def save_scenario(s: Scenario, sink: IO[str]) -> None:
    write_json(scenario_to_doc(s), sink)


def load_scenario(source: IO[str]) -> Scenario:
    return scenario_from_doc(json.load(source))


def family_spec_to_doc(spec: FamilySpec) -> dict:
    return {
        "blocks": [{"lambda": b.lam, "n": b.n, "r": b.r} for b in spec.blocks]
    }


def family_spec_from_doc(doc: dict) -> FamilySpec:
    try:
        blocks = tuple(
            Block(float(b["lambda"]), int(b["n"]), int(b["r"]))
            for b in doc["blocks"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecInvalid(f"malformed family spec document: {exc}") from exc
    return FamilySpec(blocks)


def verification_to_doc(result: VerificationResult) -> dict:
    checks = [
        {
            "name": c.name,
            "residual": c.residual,
            "threshold": c.threshold,
            "passed": c.passed,
            "details": {k: v for k, v in sorted(c.details.items())},
        }
        for c in result.checks
    ]
    doc: dict = {"passed": result.passed, "error": result.error, "checks": checks}
    if result.decomposition is not None:
        doc["recovered_spec"] = family_spec_to_doc(result.decomposition.spec)
        doc["extraction_residuals"] = {
            k: v for k, v in sorted(result.decomposition.residuals.items())
        }
    return doc


def eve_report_to_doc(report: EveMeasurementReport) -> dict:
    return {
        "measurement": report.measurement,
        "trace_distance": report.trace_distance,
        "schmidt_rank_plus": report.schmidt_rank[0],
        "schmidt_rank_minus": report.schmidt_rank[1],
        "entropy_plus": report.entropy[0],
        "entropy_minus": report.entropy[1],
    }


def selftest_to_doc(report: SelfTestReport) -> dict:
    doc: dict = {
        "verdict": report.verdict,
        "product_residual": report.product_residual,
        "threshold": report.threshold,
        "junk_norm": float(np.linalg.norm(report.junk)),
    }
    if report.correlator is not None:
        doc["correlator"] = [report.correlator.real, report.correlator.imag]
    if report.junk_split_norms is not None:
        doc["chi1_norm_sq"] = report.junk_split_norms[0]
        doc["chi2_norm_sq"] = report.junk_split_norms[1]
    doc["transpose_equivalent"] = report.transpose_equivalent
    if report.eve is not None:
        doc["eve"] = [eve_report_to_doc(r) for r in report.eve]
    return doc


def bloch_points_to_csv(points) -> str:
    """Bloch export table: label, x, y, z with six decimal places."""
    lines = ["label,x,y,z"]
    for p in points:
        x, y, z = (float(v) + 0.0 for v in p.vector)  # +0.0 folds away -0.0
        lines.append(f"{p.label},{x:.6f},{y:.6f},{z:.6f}")
    return "\n".join(lines) + "\n"


def trace_to_csv(trace) -> str:
    """Seesaw convergence table: iteration, value with 17 significant digits."""
    lines = ["iteration,value"]
    for i, v in enumerate(trace, start=1):
        lines.append(f"{i},{_format_float(v)}")
    return "\n".join(lines) + "\n"
