"""Command-line surface: verification suites, scans, searches, reports.

Every subcommand reads a flat 'key = value' parameter file, prints exactly one
JSON record (schema 1) to stdout, optionally writes it plus CSV/figure
artifacts under --out, and exits 0 exactly when its suite passes.  Runs are
deterministic for a fixed seed: identical inputs give byte-identical JSON.

Exit codes: 0 pass, 1 suite failure, 2 usage or precondition error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import linkconfig, psc
from .profile import Variant, load_params, profile_from_params
from .stepfn import (DEFAULT_QUADRATURE_POINTS, build_step, check_limit_ratios,
                     default_ratio_ladder)
from .tensor import COMPONENT_GROUPS, verify_closed_forms

SCHEMA = 1
DEFAULT_SEED = 42


class UsageError(Exception):
    """Bad invocation or unusable input file; maps to exit code 2."""


def _finite(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _emit(report: dict, out_dir, name: str) -> None:
    line = json.dumps(report, sort_keys=True, separators=(",", ":"))
    print(line)
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / f"{name}.json").write_text(line + "\n")


def _parse_grid(text: str) -> tuple:
    try:
        a, b = text.lower().split("x")
        grid = (int(a), int(b))
    except ValueError:
        raise UsageError(f"bad grid {text!r}; expected NxM")
    if grid[0] < 2 or grid[1] < 2:
        raise UsageError(f"grid {text!r} is too small; need at least 2x2")
    return grid


def _load_params(path) -> dict:
    if path is None:
        raise UsageError("missing --params file")
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"parameter file not found: {p}")
    try:
        return load_params(p)
    except ValueError as exc:
        raise UsageError(str(exc))


def _profile_of(params: dict):
    try:
        return profile_from_params(params)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad profile parameters: {exc}")


def _echo(params: dict) -> dict:
    return {k: params[k] for k in sorted(params)}


def _write_csv(path, theta, t, scalar) -> None:
    rows = ["theta,t,S"]
    for i in range(len(theta)):
        for j in range(len(t)):
            rows.append(f"{theta[i]:.12g},{t[j]:.12g},{scalar[i, j]:.12g}")
    Path(path).write_text("\n".join(rows) + "\n")


# ---------------------------------------------------------------------------
# subcommands


def cmd_step_check(args) -> int:
    params = _load_params(args.params) if args.params else {}
    qp = int(float(params.get("quadrature_points", DEFAULT_QUADRATURE_POINTS)))
    step = build_step(qp)
    ratios = check_limit_ratios(step, default_ratio_ladder())
    report = {
        "schema": SCHEMA,
        "kind": "step_check",
        "params": _echo(params),
        "quadrature_points": qp,
        "seed": args.seed,
        "normalization": step.normalization,
        "value_at_half": float(step(0.5)),
        "slope_at_half": float(step(0.5, 1)),
        "ratio_ladder": list(ratios.ladder),
        "ratio_step": list(ratios.ratio_step),
        "ratio_slope": list(ratios.ratio_slope),
        "verdict": ratios.verdict,
    }
    _emit(report, args.out, "step_check")
    return 0 if ratios.passed else 1


def cmd_verify_curvature(args) -> int:
    params = _load_params(args.params)
    profile = _profile_of(params)
    try:
        R = float(params["R"])
    except KeyError:
        raise UsageError("parameter file must set R")
    rep = verify_closed_forms(profile, R, n_points=args.points, seed=args.seed,
                              inject_fault=args.inject_fault)
    report = {
        "schema": SCHEMA,
        "kind": "verify_curvature",
        "params": _echo(params),
        "seed": args.seed,
        "n_points": rep.n_points,
        "rtol": rep.rtol,
        "atol": rep.atol,
        "components": {d.component: d.max_rel_err for d in rep.diffs},
        "worst": {
            "component": rep.worst_label(),
            "rel_err": rep.worst.max_rel_err,
            "theta": rep.worst.location[0],
            "t": rep.worst.location[1],
        },
        "verdict": "PASS" if rep.passed else "FAIL",
    }
    _emit(report, args.out, "verify_curvature")
    return 0 if rep.passed else 1


def cmd_psc_scan(args) -> int:
    params = _load_params(args.params)
    profile = _profile_of(params)
    try:
        R = float(params["R"])
    except KeyError:
        raise UsageError("parameter file must set R")
    grid = _parse_grid(args.grid)
    try:
        if profile.variant is Variant.CLASSIC_R0:
            scan = psc.scan_scalar_curvature(profile, R, grid)
            extra = {}
        else:
            rep = psc.radius_one_scan(profile.big_m, profile.theta0,
                                      profile.t_half_width, R, grid,
                                      eps1=profile.eps1, step=profile.step)
            scan, extra = rep.scan, {"leading_term_min": rep.leading_term_min,
                                     "floor_excluded": rep.floor_excluded}
    except ValueError as exc:
        raise UsageError(str(exc))
    report = {
        "schema": SCHEMA,
        "kind": "psc_scan",
        "params": _echo(params),
        "seed": args.seed,
        **scan.to_json_dict(),
        **extra,
    }
    _emit(report, args.out, "psc_scan")
    if args.out is not None:
        theta, t, scalar, r = psc.scalar_grid(profile, R, grid)
        out_dir = Path(args.out)
        _write_csv(out_dir / "psc_scan.csv", theta, t, scalar)
        if args.heatmap:
            from .plots import render_scan_heatmap
            render_scan_heatmap(theta, t, scalar, r, out_dir / "psc_scan.png",
                                title=f"scalar curvature, R={R:g} ({scan.verdict})")
    return 0 if scan.positive else 1


def cmd_find_r(args) -> int:
    params = _load_params(args.params)
    profile = _profile_of(params)
    if profile.variant is not Variant.CLASSIC_R0:
        raise UsageError("find-r expects an offset-variant profile")
    r_lo = float(params.get("r_lo", 0.1))
    r_hi = float(params.get("r_hi", 20.0))
    grid = _parse_grid(args.grid)
    try:
        r_star = psc.find_min_R(profile, r_lo, r_hi, grid)
    except ValueError as exc:
        raise UsageError(str(exc))
    except psc.BracketError as exc:
        report = {"schema": SCHEMA, "kind": "find_r", "params": _echo(params),
                  "seed": args.seed, "error": str(exc), "verdict": "FAIL"}
        _emit(report, args.out, "find_r")
        return 1
    confirm = psc.scan_scalar_curvature(profile, r_star, grid)
    report = {
        "schema": SCHEMA,
        "kind": "find_r",
        "params": _echo(params),
        "seed": args.seed,
        "grid": list(grid),
        "bracket": [r_lo, r_hi],
        "min_certified_R": r_star,
        "min_scalar_at_R": confirm.min_scalar,
        "verdict": confirm.verdict,
    }
    _emit(report, args.out, "find_r")
    return 0 if confirm.positive else 1


def cmd_regions(args) -> int:
    params = _load_params(args.params)
    profile = _profile_of(params)
    grid = _parse_grid(args.grid)
    rep = psc.find_epsilon(profile, grid=grid)
    report = {
        "schema": SCHEMA,
        "kind": "regions",
        "params": _echo(params),
        "seed": args.seed,
        "grid": list(grid),
        "tolerance": rep.tolerance,
        "epsilon": rep.epsilon,
        "minima": {k: _finite(v) for k, v in sorted(rep.minima.items())},
        "ladder": [eps for eps, _ in rep.attempts],
        "verdict": "PASS" if rep.passed else "FAIL",
    }
    _emit(report, args.out, "regions")
    return 0 if rep.passed else 1


def cmd_config_check(args) -> int:
    if args.params is None:
        raise UsageError("missing --params file")
    path = Path(args.params)
    if not path.is_file():
        raise UsageError(f"configuration file not found: {path}")
    try:
        cfg = linkconfig.parse_config(path.read_text())
    except linkconfig.ConfigFormatError as exc:
        raise UsageError(str(exc))
    verdict = linkconfig.theorem_applicable(cfg)
    report = {
        "schema": SCHEMA,
        "kind": "config_check",
        "seed": args.seed,
        "circles": cfg.n_circles,
        "arcs": len(cfg.arcs),
        **verdict.to_json_dict(),
    }
    _emit(report, args.out, "config_check")
    return 0 if verdict.applicable else 1


# ---------------------------------------------------------------------------
# parser plumbing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="handlepsc",
        description="Curvature verification and positivity certificates for "
                    "surgery-handle metrics")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, grid_default="200x200"):
        sp.add_argument("--params", help="flat key = value parameter file")
        sp.add_argument("--grid", default=grid_default, help="grid as NxM")
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
        sp.add_argument("--out", help="directory for report artifacts")
        sp.add_argument("--heatmap", action="store_true",
                        help="render a figure next to the CSV (psc-scan)")

    sp = sub.add_parser("verify-curvature",
                        help="diff closed-form tensors against the pipeline")
    common(sp)
    sp.add_argument("--points", type=int, default=100)
    sp.add_argument("--inject-fault", choices=COMPONENT_GROUPS,
                    help="corrupt one closed-form group (test fixture)")
    sp.set_defaults(func=cmd_verify_curvature)

    sp = sub.add_parser("psc-scan", help="grid positivity certificate")
    common(sp)
    sp.set_defaults(func=cmd_psc_scan)

    sp = sub.add_parser("find-r", help="bisect the smallest certified radius")
    common(sp)
    sp.set_defaults(func=cmd_find_r)

    sp = sub.add_parser("regions", help="five-block step-shape inequality search")
    common(sp, grid_default="128x128")
    sp.set_defaults(func=cmd_regions)

    sp = sub.add_parser("config-check", help="hub-circle applicability verdict")
    common(sp)
    sp.set_defaults(func=cmd_config_check)

    sp = sub.add_parser("step-check", help="step-function normalization and ratios")
    common(sp)
    sp.set_defaults(func=cmd_step_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
