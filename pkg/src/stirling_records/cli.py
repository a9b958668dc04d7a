"""Command-line interface: stirling, poly, simulate, verify, bench.

Exit codes: 0 success, 1 identity/agreement failure, 2 usage or domain error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction

from . import ballbox_sim as bb
from . import poly_engine as pe
from . import stirling_engine as se
from .exact_arith import (
    POLY_TUPLE_CAP,
    TUPLE_CAP,
    BoundExceeded,
    IdentityViolation,
    as_rational,
    format_rational,
)
from .identity_suite import REGISTRY, GridSpec, run_suite, suite_passed

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---- serialization -------------------------------------------------------

def to_wire(value):
    """Exact values become strings; floats, bools and None pass through."""
    if isinstance(value, bool) or value is None or isinstance(value, float):
        return value
    if isinstance(value, (int, Fraction)):
        return format_rational(value)
    if isinstance(value, dict):
        return {str(k): to_wire(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_wire(v) for v in value]
    return str(value)


def envelope(command: str, parameters: dict, rows: list[dict], timing_ms: int) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "parameters": to_wire(parameters),
        "results": to_wire(rows),
        "timing_ms": timing_ms,
    }


def dump_json(env: dict) -> str:
    return json.dumps(env, sort_keys=True, indent=2) + "\n"


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return v


def dump_csv(env: dict) -> str:
    rows = env["results"]
    columns: list[str] = []
    for row in rows:
        for k in row:
            if k not in columns:
                columns.append(k)
    buf = io.StringIO()
    writer = csv.writer(buf, quoting=csv.QUOTE_NONNUMERIC, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def emit(env: dict, args) -> None:
    text = dump_csv(env) if args.format == "csv" else dump_json(env)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---- argument parsing -----------------------------------------------------

def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _rational(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (ValueError, ZeroDivisionError, TypeError):
        raise argparse.ArgumentTypeError(f"expected an exact rational 'p/q', got {text!r}")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", metavar="FILE", help="write output to FILE instead of stdout")
    p.add_argument("--max-enum", type=int, metavar="N",
                   help=f"enumeration cap (defaults: {TUPLE_CAP} tuples, {POLY_TUPLE_CAP} for polynomial/probability sums)")
    p.add_argument("--threads", type=int, default=1, metavar="N")
    p.add_argument("--timing", action="store_true",
                   help="record wall time in timing_ms (otherwise 0, keeping output byte-reproducible)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="stirling-records", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stirling", parents=[common], help="compute S(n, d)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--method", choices=se.STIRLING_METHODS + ("all",), default="record-dp")

    p = sub.add_parser("poly", parents=[common], help="expand f, g or the Stirling form of g")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--which", choices=("f", "g", "g-stirling"), default="f")

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo balls-into-boxes run")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--x", type=_rational, required=True)
    p.add_argument("--trials", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("verify", parents=[common], help="run the identity suite")
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--only", type=lambda s: [t.strip() for t in s.split(",") if t.strip()],
                   help=f"comma-separated subset of {','.join(REGISTRY)}")
    p.add_argument("--x", type=lambda s: [_rational(t) for t in s.split(",")], dest="x_samples",
                   help="override the per-cell x samples")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=20000, help="Monte Carlo trials per cell for S1")
    p.add_argument("--detail", action="store_true", help="one row per grid cell")

    p = sub.add_parser("bench", parents=[common], help="time Stirling methods")
    p.add_argument("--n", type=_int_list, default=[14])
    p.add_argument("--d", type=_int_list, default=[7])
    p.add_argument("--methods", type=lambda s: s.split(","), default=["record", "record-dp", "euler"])
    p.add_argument("--repetitions", type=int, default=3)
    return parser


def _caps(args) -> tuple[int, int]:
    if args.max_enum is None:
        return TUPLE_CAP, POLY_TUPLE_CAP
    if args.max_enum < 1:
        raise UsageError("--max-enum must be positive")
    return args.max_enum, args.max_enum


# ---- commands ------------------------------------------------------------

def cmd_stirling(args):
    cap, _ = _caps(args)
    methods = se.STIRLING_METHODS if args.method == "all" else (args.method,)
    rows = []
    for m in methods:
        try:
            value, status = se.stirling(args.n, args.d, m, cap), "ok"
        except BoundExceeded as exc:
            if args.method != "all":
                raise
            value, status = None, f"skipped(bound): {exc}"
        rows.append({"method": m, "n": args.n, "d": args.d, "value": value, "status": status})
    code = EXIT_OK
    if args.method == "all":
        values = {r["value"] for r in rows if r["value"] is not None}
        agree = len(values) == 1
        for r in rows:
            r["agreement"] = agree
        code = EXIT_OK if agree else EXIT_FAIL
    params = {"n": args.n, "d": args.d, "method": args.method}
    return params, rows, code


def cmd_poly(args):
    _, pcap = _caps(args)
    if not 1 <= args.d <= args.n:
        raise UsageError(f"poly needs 1 <= d <= n, got d={args.d}, n={args.n}")
    if args.which == "f":
        p = pe.poly_f(args.d, args.n, pcap)
    elif args.which == "g":
        p = pe.poly_g(args.d, args.n)
    else:
        p = pe.poly_g_stirling(args.d, args.n)
    code = EXIT_OK
    if p.degree != args.n - args.d:
        code = EXIT_FAIL
    rows = [
        {"which": args.which, "d": args.d, "n": args.n, "degree": p.degree, "power": i, "coeff": c}
        for i, c in enumerate(p.coeffs)
    ]
    return {"d": args.d, "n": args.n, "which": args.which}, rows, code


def cmd_simulate(args):
    cfg = bb.SimConfig(args.n, args.d, args.x, args.trials, args.seed)
    res = bb.simulate(cfg, threads=max(1, args.threads))
    row = {
        "n": cfg.n, "d": cfg.d, "x": cfg.x, "trials": res.trials, "seed": cfg.seed,
        "hits": res.hits, "estimate": res.estimate, "exact": res.exact,
        "z_score": res.z_score, "z_defined": res.z_score is not None,
    }
    params = {"n": cfg.n, "d": cfg.d, "x": cfg.x, "trials": cfg.trials, "seed": cfg.seed}
    return params, [row], EXIT_OK


def _cx_fields(cell) -> dict:
    if cell is None:
        return {"cx_n": None, "cx_d": None, "cx_x": None, "cx_lhs": None, "cx_rhs": None}
    return {"cx_n": cell.n, "cx_d": cell.d, "cx_x": cell.x, "cx_lhs": cell.lhs, "cx_rhs": cell.rhs}


def cmd_verify(args):
    cap, pcap = _caps(args)
    grid = GridSpec(n_max=args.n_max, x_samples=tuple(args.x_samples) if args.x_samples else None,
                    trials=args.trials, seed=args.seed, cap=cap, poly_cap=pcap)
    reports = run_suite(grid, args.only, threads=max(1, args.threads))
    rows = []
    for r in reports:
        if args.detail:
            for c in r.cells:
                rows.append({
                    "identity_id": r.identity_id, "n": c.n, "d": c.d, "x": c.x,
                    "status": "skipped(bound)" if c.skipped else ("ok" if c.ok else "fail"),
                    "lhs": c.lhs if not c.skipped else None,
                    "rhs": c.rhs if not c.skipped else None,
                    "deviation": c.deviation,
                    "diagnostic": r.diagnostic,
                })
        else:
            rows.append({
                "identity_id": r.identity_id, "name": r.name, "status": r.status,
                "diagnostic": r.diagnostic, "cells_checked": r.cells_checked,
                "cells_skipped": r.cells_skipped, "worst_deviation": r.worst_deviation,
                **_cx_fields(r.counterexample),
            })
    params = {"n_max": args.n_max, "only": args.only or list(REGISTRY), "seed": args.seed,
              "trials": args.trials, "x": args.x_samples}
    return params, rows, EXIT_OK if suite_passed(reports) else EXIT_FAIL


def cmd_bench(args):
    cap, _ = _caps(args)
    for m in args.methods:
        if m not in se.STIRLING_METHODS:
            raise UsageError(f"unknown method {m!r}")
    if args.repetitions < 1:
        raise UsageError("--repetitions must be positive")
    rows, code = [], EXIT_OK
    for n in args.n:
        for d in args.d:
            if not 1 <= d <= n:
                continue
            cell = []
            for m in args.methods:
                ops = se.OpCounter()
                try:
                    value = se.stirling(n, d, m, cap, ops)
                except BoundExceeded as exc:
                    cell.append({"method": m, "n": n, "d": d, "value": None,
                                 "status": f"skipped(bound): {exc}", "mults": None})
                    continue
                counted = m in ("euler", "record", "record-dp", "duality")
                cell.append({"method": m, "n": n, "d": d, "value": value, "status": "ok",
                             "mults": ops.mults if counted else None})
            values = {r["value"] for r in cell if r["value"] is not None}
            agree = len(values) <= 1
            if not agree:
                code = EXIT_FAIL
            for r in cell:
                r["agreement"] = agree
                if agree and r["value"] is not None:
                    times = []
                    for _ in range(args.repetitions):
                        t0 = time.perf_counter()
                        se.stirling(n, d, r["method"], cap)
                        times.append((time.perf_counter() - t0) * 1000.0)
                    r["best_ms"] = round(min(times), 4)
                    r["mean_ms"] = round(sum(times) / len(times), 4)
                else:
                    r["best_ms"] = r["mean_ms"] = None
            rows.extend(cell)
    params = {"n": args.n, "d": args.d, "methods": args.methods, "repetitions": args.repetitions}
    return params, rows, code


COMMANDS = {
    "stirling": cmd_stirling,
    "poly": cmd_poly,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits 2 on malformed flags
    t0 = time.perf_counter()
    try:
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        params, rows, code = COMMANDS[args.command](args)
    except IdentityViolation as exc:
        print(f"error: identity violation: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    timing = int(round((time.perf_counter() - t0) * 1000)) if args.timing else 0
    emit(envelope(args.command, params, rows, timing), args)
    return code


if __name__ == "__main__":
    sys.exit(main())
