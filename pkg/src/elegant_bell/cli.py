"""Command-line interface: build, verify, self-test, optimize, export.

Exit codes are a contract: 0 success, 2 invalid input, 3 structural
failure (non-maximal scenario or failed extraction), 4 self-test verdict
"inequivalent".  The EBI_LOG environment variable (error|info|debug)
controls stderr verbosity.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import family, optimizer, selftest, serialize, structure
from .errors import (
    InvalidScenario,
    NotInvolution,
    SpecInvalid,
    UnsupportedDimension,
)
from .scenario import QUANTUM_MAX, Scenario, ebi_value

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_STRUCTURE = 3
EXIT_INEQUIVALENT = 4

log = logging.getLogger("elegant_bell")


def _configure_logging() -> None:
    level = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}.get(
        os.environ.get("EBI_LOG", "error").lower(), logging.ERROR
    )
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(message)s")


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _load_scenario(path: str) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return serialize.load_scenario(fh)


def _derived_report_path(scenario_path: str, kind: str) -> str:
    base = scenario_path[:-5] if scenario_path.endswith(".json") else scenario_path
    return f"{base}.{kind}.json"


def cmd_reference(args: argparse.Namespace) -> int:
    s = family.reference_experiment()
    _write_text(args.output, serialize.dumps_canonical(serialize.scenario_to_doc(s)) + "\n")
    return EXIT_OK


def cmd_family(args: argparse.Namespace) -> int:
    with open(args.spec, encoding="utf-8") as fh:
        spec = serialize.family_spec_from_doc(json.load(fh))
    scenario, _ = family.build_family(spec)
    _write_text(
        args.output, serialize.dumps_canonical(serialize.scenario_to_doc(scenario)) + "\n"
    )
    value = ebi_value(scenario)
    prediction = selftest.stora_prediction(spec)
    print(f"ebi_value {value:.9f}")
    print(f"stora_prediction {prediction.real + 0.0:.9f}{prediction.imag + 0.0:+.9f}i")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    s = _load_scenario(args.scenario)
    result = structure.full_verification(s, args.tol)
    report_path = args.report or _derived_report_path(args.scenario, "verify")
    report_doc = serialize.verification_to_doc(result)
    _write_text(report_path, serialize.dumps_canonical(report_doc) + "\n")
    for check in result.checks:
        log.info("%s: residual %.3e (threshold %.1e)", check.name, check.residual, check.threshold)
    if result.error is not None:
        print(f"verification failed: {result.error}", file=sys.stderr)
        return EXIT_STRUCTURE
    if not result.passed:
        print("verification failed: residual above threshold", file=sys.stderr)
        return EXIT_STRUCTURE
    assert result.decomposition is not None
    blocks = ", ".join(
        f"(lambda={b.lam:.7f}, n={b.n}, r={b.r})" for b in result.decomposition.spec.blocks
    )
    print(f"recovered_spec [{blocks}]")
    return EXIT_OK


def cmd_selftest(args: argparse.Namespace) -> int:
    s = _load_scenario(args.scenario)
    report_path = args.report or _derived_report_path(args.scenario, "selftest")
    try:
        out = selftest.swap_isometry(s)
    except NotInvolution as exc:
        _write_text(
            report_path,
            serialize.dumps_canonical({"error": "NotInvolution", "message": str(exc)}) + "\n",
        )
        print(f"NotInvolution: {exc}", file=sys.stderr)
        return EXIT_STRUCTURE
    report = selftest.equivalence_check(out, args.threshold)
    report.correlator = selftest.necessary_correlator(s)
    verification = structure.full_verification(s, args.tol)
    if verification.passed and verification.decomposition is not None:
        chi1, chi2 = selftest.junk_split(out, verification.decomposition)
        report.junk_split_norms = (
            float(np.linalg.norm(chi1) ** 2),
            float(np.linalg.norm(chi2) ** 2),
        )
        split_residual = selftest.split_reproduction_residual(out, chi1, chi2)
        report.transpose_equivalent = bool(split_residual < 1e-6)
    report.eve = selftest.eve_indistinguishability(s, out)
    _write_text(report_path, serialize.dumps_canonical(serialize.selftest_to_doc(report)) + "\n")
    print(f"verdict {report.verdict} residual {report.product_residual:.3e}")
    return EXIT_OK if report.verdict == "equivalent" else EXIT_INEQUIVALENT


def cmd_seesaw(args: argparse.Namespace) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    traces: dict[int, list[float]] = {}
    best = None
    successes = 0
    for seed in range(args.seed, args.seed + args.seeds):
        config = optimizer.SeesawConfig(
            d_a=args.da,
            d_b=args.db,
            max_iters=args.max_iters,
            conv_tol=args.conv_tol,
            seed=seed,
        )
        result = optimizer.seesaw(config)
        traces[seed] = result.trace
        (out_dir / f"trace_seed{seed}.csv").write_text(
            serialize.trace_to_csv(result.trace), encoding="utf-8"
        )
        if abs(result.value - QUANTUM_MAX) < 1e-6:
            successes += 1
        if best is None or result.value > best.value:
            best = result
        log.info(
            "seed %d: value %.12f after %d sweeps (converged=%s)",
            seed,
            result.value,
            result.iterations,
            result.converged,
        )
    assert best is not None
    with open(out_dir / "best_scenario.json", "w", encoding="utf-8") as fh:
        serialize.save_scenario(best.scenario, fh)
    if not args.no_figure:
        from . import plots

        plots.render_trace_figure(traces, str(out_dir / "traces.png"))
    print(f"seeds {args.seeds} successes {successes} best {best.value:.12f}")
    return EXIT_OK


def cmd_bloch(args: argparse.Namespace) -> int:
    s = _load_scenario(args.scenario)
    points = family.bloch_export(s)
    _write_text(args.output, serialize.bloch_points_to_csv(points))
    if args.output is not None and not args.no_figure:
        from . import plots

        figure_path = str(Path(args.output).with_suffix(".png"))
        plots.render_bloch_figure(points, figure_path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="elegant-bell",
        description="Construct, verify, self-test, and optimize strategies "
        "for the elegant Bell inequality.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reference", help="emit the two-qubit reference experiment")
    p.add_argument("-o", "--output", help="scenario JSON path (default: stdout)")
    p.set_defaults(func=cmd_reference)

    p = sub.add_parser("family", help="build a maximal violator from a family spec")
    p.add_argument("--spec", required=True, help="family spec JSON path")
    p.add_argument("-o", "--output", help="scenario JSON path (default: stdout)")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("verify", help="verify and extract the block structure")
    p.add_argument("scenario", help="scenario JSON path")
    p.add_argument("--report", help="report JSON path (default: <scenario>.verify.json)")
    p.add_argument("--tol", type=float, default=structure.DEFAULT_TOL)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("selftest", help="run the isometry equivalence test")
    p.add_argument("scenario", help="scenario JSON path")
    p.add_argument("--report", help="report JSON path (default: <scenario>.selftest.json)")
    p.add_argument("--threshold", type=float, default=1e-6, help="equivalence threshold")
    p.add_argument("--tol", type=float, default=structure.DEFAULT_TOL)
    p.set_defaults(func=cmd_selftest)

    p = sub.add_parser("seesaw", help="alternating maximization from random starts")
    p.add_argument("--dA", dest="da", type=int, default=2)
    p.add_argument("--dB", dest="db", type=int, default=2)
    p.add_argument("--seeds", type=int, default=1, help="number of seeded runs")
    p.add_argument("--seed", type=int, default=0, help="first seed")
    p.add_argument("--max-iters", type=int, default=500)
    p.add_argument("--conv-tol", type=float, default=1e-12)
    p.add_argument("--out-dir", default="seesaw_out")
    p.add_argument("--no-figure", action="store_true", help="skip the convergence figure")
    p.set_defaults(func=cmd_seesaw)

    p = sub.add_parser("bloch", help="export outcome eigenstates as Bloch vectors")
    p.add_argument("scenario", help="scenario JSON path")
    p.add_argument("-o", "--output", help="CSV path (default: stdout)")
    p.add_argument("--no-figure", action="store_true", help="skip the Bloch figure")
    p.set_defaults(func=cmd_bloch)
    return parser


def main(argv=None) -> int:
    _configure_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SpecInvalid, InvalidScenario, UnsupportedDimension, json.JSONDecodeError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NotInvolution as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_STRUCTURE
    except FileNotFoundError as exc:
        print(f"cannot read {exc.filename}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"io failure: {exc}", file=sys.stderr)
        return 1


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
