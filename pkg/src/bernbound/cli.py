"""Command-line front end: eval, verify, sweep, thresholds, examples."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict, dataclass

import numpy as np

from .bernstein import approx_error_norm, bernstein_eval, sample, voronovskaja_residual_norm
from .funcmodel import DomainError, FunctionSpec, HypothesisError, builtin
from .numerics import GridConfig
from .parser import ParseError
from .smoothness import dt_modulus2, weighted_norm
from .theorems import (
    EXAMPLE3_LAMBDA0,
    ThresholdNotFoundError,
    an_value,
    corollary1_check,
    corollary1_constants,
    corollary1_threshold,
    eq24_check,
    example_constants,
    example_thresholds,
    find_n0,
    find_n1,
    lambda_estimate,
    remark3_n2,
    sandwich_check,
    theorem3_check,
    theorem4_check,
    theoremE_check,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_HYPOTHESIS = 0, 1, 2, 3

CLAIMS = ("eq1.5-upper", "eq1.5-lower", "eq2.4", "eq2.8", "eq2.9", "eq2.7", "cor1")
_MIN_N = {"eq2.9": 2, "eq2.7": 12}
SWEEP_COLUMNS = ("n", "err_norm", "dt_modulus", "ratio", "an_value", "vor_residual_norm", "thm4_bound", "thmE_bound")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    grid_points: int = 4097
    refine_rounds: int = 3
    slack: float = 1e-2
    n_max: int = 10**6
    output_format: str = "json"

    def __post_init__(self):
        if self.grid_points < 17 or self.grid_points % 2 == 0:
            raise UsageError("--grid must be odd and at least 17")
        if not 0.0 <= self.slack < 0.5:
            raise UsageError("--slack must lie in [0, 0.5)")
        if self.refine_rounds < 0:
            raise UsageError("--refine must be nonnegative")
        if self.n_max < 2:
            raise UsageError("--n-max must be at least 2")
        if self.output_format not in ("json", "csv", "human"):
            raise UsageError("--format must be json, csv or human")

    def grid(self) -> GridConfig:
        return GridConfig(grid_points=self.grid_points, refine_rounds=self.refine_rounds)


# --- output ---------------------------------------------------------------


def _num(v) -> str:
    if v is None or (isinstance(v, float) and not math.isfinite(v)):
        return "null"
    return format(float(v), ".17g")


def to_json(obj, indent: int = 0) -> str:
    """JSON with insertion-ordered keys and floats at 17 significant digits."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {to_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        return "[\n" + ",\n".join(pad + to_json(v, indent + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    if obj is None:
        return "null"
    return json.dumps(str(obj), ensure_ascii=False)


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def _human(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, float):
        return format(v, ".6g")
    return str(v)


def _table(header, rows) -> str:
    cells = [[_human(c) for c in r] for r in rows]
    widths = [max(len(h), *(len(r[i]) for r in cells)) if cells else len(h) for i, h in enumerate(header)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    lines += ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    return "\n".join(lines)


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


# --- argument helpers -----------------------------------------------------


def _function(args) -> FunctionSpec:
    if args.expr is not None and args.builtin is not None:
        raise UsageError("give either --expr or --builtin, not both")
    if args.builtin is not None:
        try:
            return builtin(args.builtin)
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
    if args.expr is None:
        raise UsageError("a function is required: --expr TEXT or --builtin NAME")
    return FunctionSpec.from_expr(args.expr)


def _ints(text: str, what: str) -> list[int]:
    try:
        out = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"{what} must be a comma-separated list of integers") from None
    if not out:
        raise UsageError(f"{what} is empty")
    return out


def _floats(text: str, what: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"{what} must be a comma-separated list of numbers") from None


def _run_config(args, default_format: str) -> RunConfig:
    grid = args.grid
    if grid is None:
        env = os.environ.get("BB_GRID_POINTS")
        try:
            grid = int(env) if env else 4097
        except ValueError:
            raise UsageError("BB_GRID_POINTS must be an integer") from None
    return RunConfig(grid, args.refine, args.slack, args.n_max, args.format or default_format)


def _function_info(f: FunctionSpec) -> dict:
    return {"name": f.name, "expr": f.expr, "max_order": f.max_order}


def _config_info(rc: RunConfig, **extra) -> dict:
    return {**asdict(rc), **extra}


def _document(f, rc, reports, thresholds, **extra) -> dict:
    doc = {
        "function": _function_info(f) if f is not None else None,
        "config": _config_info(rc),
        "reports": reports,
        "thresholds": thresholds,
    }
    doc.update(extra)
    return doc


def _violation(claim_id: str, n, exc: Exception) -> dict:
    return {"claim_id": claim_id, "n": n, "holds": None, "hypothesis_ok": False, "note": str(exc)}


def _skipped(claim_id: str, n, exc: Exception) -> dict:
    return {"claim_id": claim_id, "n": n, "holds": None, "hypothesis_ok": False, "skipped": True, "note": str(exc)}


def _exit_status(reports: list[dict]) -> int:
    reports = [r for r in reports if not r.get("skipped")]
    fail = any(r["holds"] is False and r["hypothesis_ok"] for r in reports)
    if fail:
        return EXIT_FAIL
    if any(r["holds"] is None or (r["holds"] is False and not r["hypothesis_ok"]) for r in reports):
        return EXIT_HYPOTHESIS
    return EXIT_OK


def _reports_table(reports: list[dict]) -> str:
    rows = [(r["claim_id"], r["n"], r.get("left"), r.get("right"), r.get("holds"), r.get("note") or "") for r in reports]
    return _table(("claim", "n", "left", "right", "holds", "note"), rows)


# --- commands -------------------------------------------------------------


def cmd_eval(args) -> int:
    rc = _run_config(args, "human")
    f = _function(args)
    if args.n is None:
        raise UsageError("eval needs --n")
    n = _ints(args.n, "--n")[0]
    if n < 1:
        raise UsageError("--n must be positive")
    xs = np.array(_floats(args.points, "--points") if args.points else np.linspace(0.0, 1.0, 11))
    if np.any((xs < 0.0) | (xs > 1.0)):
        raise UsageError("--points must lie in [0, 1]")
    fx = f(xs)
    bx = bernstein_eval(sample(f, n), xs)
    rows = [(float(x), float(a), float(b), float(b - a)) for x, a, b in zip(xs, fx, bx)]
    header = ("x", "f", "B_n f", "difference")
    if rc.output_format == "csv":
        _emit("\n".join([",".join(("x", "f", "bernstein", "difference"))] + [",".join(map(_cell, r)) for r in rows]))
    elif rc.output_format == "json":
        rows_d = [dict(zip(("x", "f", "bernstein", "difference"), r)) for r in rows]
        _emit(to_json({"function": _function_info(f), "config": _config_info(rc, n=n), "rows": rows_d}))
    else:
        _emit(_table(header, rows))
    return EXIT_OK


def _claim_report(claim: str, f: FunctionSpec, n: int, mu0: float, cfg: GridConfig, slack: float):
    if claim == "eq1.5-upper":
        return sandwich_check(f, n, mu0, cfg, slack).upper
    if claim == "eq1.5-lower":
        return sandwich_check(f, n, mu0, cfg, slack).lower
    if claim == "eq2.4":
        return eq24_check(f, n, cfg, slack)
    if claim == "eq2.8":
        return theorem3_check(f, n, cfg, slack)
    if claim == "eq2.9":
        return theorem4_check(f, n, cfg, slack)
    if claim == "eq2.7":
        return theoremE_check(f, n, cfg, slack)
    if claim == "cor1":
        return corollary1_check(f, n, cfg, slack=slack)
    raise AssertionError(claim)


def cmd_verify(args) -> int:
    rc = _run_config(args, "json")
    f = _function(args)
    explicit = bool(args.claims)
    claims = [c.strip() for c in args.claims.split(",")] if explicit else list(CLAIMS)
    unknown = [c for c in claims if c not in CLAIMS]
    if unknown:
        raise UsageError(f"unknown claim ids {unknown}; choose from {', '.join(CLAIMS)}")
    ns = _ints(args.n, "--n") if args.n else [10, 100]
    if min(ns) < 1:
        raise UsageError("--n values must be positive")
    if not 0.0 < args.mu0 < 1.0:
        raise UsageError("--mu0 must lie in (0, 1)")
    cfg = rc.grid()
    reports = []
    for n in ns:
        for claim in claims:
            try:
                reports.append(_claim_report(claim, f, n, args.mu0, cfg, rc.slack).as_dict())
            except HypothesisError as exc:
                # without --claims, index floors (n >= 2, n >= 12) just mark the claim as not applicable
                if not explicit and n < _MIN_N.get(claim, 1):
                    reports.append(_skipped(claim, n, exc))
                else:
                    reports.append(_violation(claim, n, exc))
    if rc.output_format == "human":
        _emit(_reports_table(reports))
    else:
        _emit(to_json(_document(f, rc, reports, [])))
    return _exit_status(reports)


def _sweep_ns(args) -> list[int]:
    if args.n_from is None or args.n_to is None:
        raise UsageError("sweep needs --n-from and --n-to")
    lo, hi = args.n_from, args.n_to
    if not 2 <= lo <= hi:
        raise UsageError("need 2 <= --n-from <= --n-to")
    if args.geometric:
        if args.ratio <= 1.0:
            raise UsageError("--ratio must exceed 1")
        ns, k = [], float(lo)
        while round(k) <= hi:
            ns.append(int(round(k)))
            k *= args.ratio
        ns.append(hi)
        return sorted(set(ns))
    if args.n_step < 1:
        raise UsageError("--n-step must be positive")
    return list(range(lo, hi + 1, args.n_step))


def _optional(fn):
    try:
        return fn()
    except HypothesisError:
        return None


def sweep_row(f: FunctionSpec, n: int, cfg: GridConfig) -> dict:
    e = approx_error_norm(f, n, cfg).value
    w = dt_modulus2(f, 1.0 / math.sqrt(n), cfg).value
    affine = f.max_order >= 2 and f.is_affine()
    row = {
        "n": n,
        "err_norm": e,
        "dt_modulus": w,
        "ratio": None if affine or w <= 0.0 else e / w,
        "an_value": None if affine else _optional(lambda: an_value(f, n, cfg)),
        "vor_residual_norm": _optional(lambda: voronovskaja_residual_norm(f, n, cfg).value),
        "thm4_bound": _optional(lambda: theorem4_check(f, n, cfg).right),
        "thmE_bound": _optional(lambda: theoremE_check(f, n, cfg).right),
    }
    return row


def cmd_sweep(args) -> int:
    rc = _run_config(args, "csv")
    f = _function(args)
    ns = _sweep_ns(args)
    cfg = rc.grid()
    rows = [sweep_row(f, n, cfg) for n in ns]
    if rc.output_format == "csv":
        lines = [",".join(SWEEP_COLUMNS)] + [",".join(_cell(r[c]) for c in SWEEP_COLUMNS) for r in rows]
        _emit("\n".join(lines))
    elif rc.output_format == "json":
        _emit(to_json({"function": _function_info(f), "config": _config_info(rc), "rows": rows}))
    else:
        _emit(_table(SWEEP_COLUMNS, [[r[c] for c in SWEEP_COLUMNS] for r in rows]))
    return EXIT_OK


def _threshold_entry(formula_id: str, fn) -> dict:
    try:
        return fn().as_dict()
    except (HypothesisError, ThresholdNotFoundError) as exc:
        return {"formula_id": formula_id, "inputs": {}, "n_value": None, "note": str(exc)}


def cmd_thresholds(args) -> int:
    rc = _run_config(args, "json")
    f = _function(args)
    cfg = rc.grid()
    mu0, lam0 = args.mu0, args.lambda0
    if not 0.0 < mu0 < 1.0 or lam0 <= 0.0:
        raise UsageError("need --mu0 in (0, 1) and --lambda0 > 0")
    out = []

    def corollary():
        M, m = corollary1_constants(f, cfg)
        if m <= 1e-12:
            raise HypothesisError(f"inf |f''| = {m:.3g}: the Corollary 1 index needs |f''| >= m > 0")
        return corollary1_threshold(M, m)

    out.append(_threshold_entry("cor1-n1", corollary))
    out.append(_threshold_entry("rem3-n2-c4", lambda: remark3_n2(f, lam0, mu0, "c4", cfg)))
    out.append(_threshold_entry("rem3-n2-w3phi", lambda: remark3_n2(f, lam0, mu0, "w3phi", cfg)))
    out.append(_threshold_entry("thm2-n0", lambda: find_n0(f, lam0, rc.n_max, cfg)))
    out.append(_threshold_entry("thm1-n1", lambda: find_n1(f, mu0, lam0, rc.n_max, cfg)))
    if rc.output_format == "human":
        _emit(_table(("formula", "n", "note"), [(t["formula_id"], t["n_value"], t["note"]) for t in out]))
    else:
        _emit(to_json(_document(f, rc, [], out)))
    return EXIT_OK


EXAMPLE2_NOTE = (
    "cos: the printed index [1024/cos(1)] + 1 = 1896 differs from the Corollary 1 index "
    "[1024 M^2/m^2] + 1 = 3508 with M = 1, m = cos(1); both are reported"
)
EXAMPLE3_NOTE = (
    "sin: the printed constant 212 gives n2 = 535323356; recomputing 128 (5/8 + 13/64) = 106 gives 133830839"
)


def example_spot_checks(cfg: GridConfig, slack: float) -> list[dict]:
    exp_f, cos_f, sin_f = builtin("exp"), builtin("cos"), builtin("sin")
    reports = [
        corollary1_check(exp_f, 7567, cfg, M=math.e, m=1.0, slack=slack).as_dict(),
        sandwich_check(exp_f, 7567, 0.5, cfg, slack).lower.as_dict(),
        corollary1_check(cos_f, 3508, cfg, M=1.0, m=math.cos(1.0), slack=slack).as_dict(),
    ]
    try:
        corollary1_check(sin_f, 100, cfg, slack=slack)
    except HypothesisError as exc:
        reports.append(_violation("cor1", 100, exc))
    norm = weighted_norm(sin_f, 2, 2, cfg).value
    for n in (2, 10, 100, 500):
        w = dt_modulus2(sin_f, 1.0 / math.sqrt(n), cfg).value
        lam = lambda_estimate(sin_f, n, cfg)
        reports.append(
            {
                "claim_id": "ex3-lambda0",
                "n": n,
                "kind": "lower",
                "left": w,
                "right": EXAMPLE3_LAMBDA0 * norm / n,
                "constant": EXAMPLE3_LAMBDA0,
                "holds": bool(lam >= EXAMPLE3_LAMBDA0 * (1.0 - slack)),
                "slack": slack,
                "hypothesis_ok": True,
                "note": f"lambda_estimate = {lam:.12g}",
                "provenance": {},
            }
        )
    return reports


def cmd_examples(args) -> int:
    rc = _run_config(args, "json")
    cfg = rc.grid()
    consts = example_constants(cfg)
    constants = [{"name": k, "value": v, "digits12": format(v, ".12g")} for k, v in consts.items()]
    thresholds = [t.as_dict() for t in example_thresholds()]
    reports = example_spot_checks(cfg, rc.slack)
    notes = [EXAMPLE2_NOTE, EXAMPLE3_NOTE]
    if rc.output_format == "human":
        parts = [
            _table(("constant", "value (12 digits)"), [(c["name"], c["digits12"]) for c in constants]),
            _table(("threshold", "n", "note"), [(t["formula_id"], t["n_value"], t["note"]) for t in thresholds]),
            _reports_table(reports),
            "\n".join("note: " + s for s in notes),
        ]
        _emit("\n\n".join(parts))
    else:
        _emit(to_json(_document(None, rc, reports, thresholds, constants=constants, notes=notes)))
    return _exit_status(reports) if _exit_status(reports) == EXIT_FAIL else EXIT_OK


# --- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid", type=int, default=None, help="sup-norm grid points (env BB_GRID_POINTS)")
    common.add_argument("--refine", type=int, default=3, help="golden-section refinement rounds")
    common.add_argument("--slack", type=float, default=1e-2, help="relative slack of inequality checks")
    common.add_argument("--n-max", type=int, default=10**6, help="horizon of threshold searches")
    common.add_argument("--format", choices=("json", "csv", "human"), default=None)

    fn = argparse.ArgumentParser(add_help=False)
    fn.add_argument("--expr", help="function of x, e.g. 'exp(x)'")
    fn.add_argument("--builtin", help="name from the built-in corpus")

    consts = argparse.ArgumentParser(add_help=False)
    consts.add_argument("--mu0", type=float, default=0.5)
    consts.add_argument("--lambda0", type=float, default=0.5)

    p = argparse.ArgumentParser(prog="bernbound", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", parents=[common, fn], help="tabulate f and B_n f")
    e.add_argument("--n", required=False)
    e.add_argument("--points", help="comma-separated x values in [0, 1]")
    e.set_defaults(func=cmd_eval)

    v = sub.add_parser("verify", parents=[common, fn, consts], help="check inequalities at given n")
    v.add_argument("--n", help="comma-separated n values (default 10,100)")
    v.add_argument("--claims", help=f"comma-separated subset of {','.join(CLAIMS)}")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", parents=[common, fn], help="CSV table over a range of n")
    s.add_argument("--n-from", type=int)
    s.add_argument("--n-to", type=int)
    s.add_argument("--n-step", type=int, default=1)
    s.add_argument("--geometric", action="store_true")
    s.add_argument("--ratio", type=float, default=2.0)
    s.set_defaults(func=cmd_sweep)

    t = sub.add_parser("thresholds", parents=[common, fn, consts], help="n0, n1, n2 and the Corollary 1 index")
    t.set_defaults(func=cmd_thresholds)

    x = sub.add_parser("examples", parents=[common], help="reproduce the exp, cos and sin examples")
    x.set_defaults(func=cmd_examples)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"bernbound: syntax error: {exc}", file=sys.stderr)
    except (UsageError, DomainError, HypothesisError, ValueError) as exc:
        print(f"bernbound: {exc}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
