"""Command-line interface.

Subcommands: validate (complex statistics and the per-face angle condition),
flow (run a curvature flow and export a trajectory), check (combinatorial
existence condition), report (plot-ready extracts of a trajectory file).

Exit codes: 0 success / converged, 1 invalid input, 2 angle-condition
failure, 3 step underflow, 4 budget exhausted before convergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .cellcomplex import check_star, load_complex, triangulate
from .curvature import PatternState
from .errors import ComplexError, InsufficientSamplesError, StarConditionError
from .existence import check_h3
from .flow import (
    FlowConfig,
    fit_rate_from_samples,
    read_trajectory_csv,
    run_flow,
    target_curvature,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_STAR = 2
EXIT_UNDERFLOW = 3
EXIT_BUDGET = 4

_STOP_EXIT = {"converged": EXIT_OK, "step_underflow": EXIT_UNDERFLOW,
              "max_steps": EXIT_BUDGET}


def exit_code_for_stop(stop_reason: str) -> int:
    return _STOP_EXIT[stop_reason]


def _load(path: str):
    try:
        return load_complex(path)
    except (ComplexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return None


def cmd_validate(args) -> int:
    c = _load(args.input)
    if c is None:
        return EXIT_INVALID
    chi = c.euler_characteristic()
    stats = {
        "vertices": c.num_vertices,
        "edges": c.num_edges,
        "faces": c.num_faces,
        "euler_characteristic": chi,
        "genus": c.genus(),
    }
    checks = check_star(c, args.tol)
    star_pass = all(r.ok for r in checks)
    if args.json:
        doc = dict(stats)
        doc["star_ok"] = star_pass
        doc["faces_detail"] = [
            {"face": r.face, "size": r.size, "weight_sum": r.weight_sum,
             "residual": r.residual, "ok": r.ok}
            for r in checks
        ]
        print(json.dumps(doc, indent=2))
    else:
        for key, value in stats.items():
            print(f"{key}: {value}")
        for r in checks:
            flag = "ok" if r.ok else "FAIL"
            print(f"face {r.face}: size {r.size}, weight sum {r.weight_sum:.12g}, "
                  f"residual {r.residual:.3e} [{flag}]")
        print(f"star condition: {'PASS' if star_pass else 'FAIL'}")
    return EXIT_OK if star_pass else EXIT_STAR


def _parse_r0(text: str, n: int) -> np.ndarray:
    try:
        return np.full(n, float(text))
    except ValueError:
        pass
    try:
        values = json.loads(Path(text).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ComplexError(f"cannot read radii from {text!r}: {exc}") from exc
    return np.asarray(values, dtype=float)


def cmd_flow(args) -> int:
    c = _load(args.input)
    if c is None:
        return EXIT_INVALID
    try:
        tri = triangulate(c)
    except StarConditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STAR
    cfg = FlowConfig(flow=args.flow, geometry=args.geometry, dt=args.dt,
                     tol=args.tol, max_steps=args.max_steps,
                     method=args.method, record_every=args.record_every)
    try:
        r0 = _parse_r0(args.r0, c.num_vertices)
        state0 = PatternState.from_radii(args.geometry, r0)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID

    traj = run_flow(cfg.validated(), tri, state0)
    traj.to_csv(args.out)

    try:
        fit = fit_rate_from_samples(traj.times, traj.energies)
        lambda_fit, r2_fit = fit.rate, fit.r_squared
    except InsufficientSamplesError:
        lambda_fit, r2_fit = None, None
    k_target = target_curvature(c, cfg.validated().geometry)
    summary = {
        "stop_reason": traj.stop_reason,
        "steps": traj.n_steps,
        "final_residual": float(np.max(np.abs(traj.curvatures[-1] - k_target))),
        "energy0": float(traj.energies[0]),
        "energyT": float(traj.energies[-1]),
        "lambda_fit": lambda_fit,
        "r2_fit": r2_fit,
    }
    summary_path = args.summary or str(Path(args.out).with_suffix(".summary.json"))
    Path(summary_path).write_text(json.dumps(summary, indent=2) + "\n")
    print(f"stop_reason: {traj.stop_reason}  steps: {traj.n_steps}  "
          f"residual: {summary['final_residual']:.3e}")
    print(f"trajectory: {args.out}")
    print(f"summary: {summary_path}")
    return exit_code_for_stop(traj.stop_reason)


def cmd_check(args) -> int:
    c = _load(args.input)
    if c is None:
        return EXIT_INVALID
    checks = check_star(c)
    star_pass = all(r.ok for r in checks)
    print(f"star condition: {'PASS' if star_pass else 'FAIL'}")
    if args.h3:
        verdict = check_h3(c, seed=args.seed)
        status = "pass" if verdict.passed else "fail"
        print(f"weight-excess condition: {status} ({verdict.mode}, "
              f"{verdict.subsets_checked} subsets)")
        if verdict.witness is not None:
            print(f"witness subset: {list(verdict.witness)}")
    return EXIT_OK


def cmd_report(args) -> int:
    try:
        data = read_trajectory_csv(args.trajectory)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    t = data["t"]
    energy = data["energy"]
    max_abs_k = np.max(np.abs(data["K"]), axis=1)

    prefix = args.out_prefix
    with np.errstate(divide="ignore"):
        log_energy = np.log(energy)
    energy_path = f"{prefix}.energy.tsv"
    with open(energy_path, "w") as fh:
        fh.write("t\tlog_energy\n")
        for a, b in zip(t, log_energy):
            fh.write(f"{a:.17g}\t{b:.17g}\n")
    curvature_path = f"{prefix}.curvature.tsv"
    with open(curvature_path, "w") as fh:
        fh.write("t\tmax_abs_curvature\n")
        for a, b in zip(t, max_abs_k):
            fh.write(f"{a:.17g}\t{b:.17g}\n")

    try:
        fit = fit_rate_from_samples(t, energy)
        lambda_fit, r2_fit = fit.rate, fit.r_squared
        print(f"lambda_fit: {lambda_fit:.9g}  r_squared: {r2_fit:.9g}")
    except InsufficientSamplesError as exc:
        lambda_fit, r2_fit = None, None
        print(f"rate fit unavailable: {exc}")
    fit_path = f"{prefix}.fit.json"
    Path(fit_path).write_text(json.dumps(
        {"lambda_fit": lambda_fit, "r2_fit": r2_fit}, indent=2) + "\n")
    print(f"wrote {energy_path}, {curvature_path}, {fit_path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="idealflow",
        description="Ideal circle patterns via combinatorial curvature flows.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a complex and its weights")
    p.add_argument("input", help="complex JSON file")
    p.add_argument("--tol", type=float, default=None,
                   help="override the per-face angle tolerance")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("flow", help="run a curvature flow")
    p.add_argument("input", help="complex JSON file")
    p.add_argument("--flow", choices=("calabi", "ricci"), default="calabi")
    p.add_argument("--geometry", choices=("euclidean", "hyperbolic"),
                   default="hyperbolic")
    p.add_argument("--r0", default="1.0",
                   help="starting radius (number) or JSON file with a radius list")
    p.add_argument("--dt", type=float, default=1e-2)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-steps", type=int, default=1_000_000)
    p.add_argument("--method", choices=("rk4", "euler"), default="rk4")
    p.add_argument("--record-every", type=int, default=10)
    p.add_argument("--out", default="trajectory.csv", help="trajectory CSV path")
    p.add_argument("--summary", default=None,
                   help="summary JSON path (default: trajectory path with .summary.json)")
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("check", help="combinatorial existence checks")
    p.add_argument("input", help="complex JSON file")
    p.add_argument("--h3", action="store_true",
                   help="run the vertex-subset weight-excess condition")
    p.add_argument("--seed", type=int, default=0, help="sampling seed for large complexes")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("report", help="extract plot-ready series from a trajectory")
    p.add_argument("trajectory", help="trajectory CSV produced by the flow command")
    p.add_argument("--out-prefix", default="report")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
