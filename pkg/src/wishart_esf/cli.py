"""Batch command line interface.

Subcommands: ``compute`` (one method, one or more orders), ``compare``
(several methods against each other with tolerances), ``table`` (values for
every requested method without judgement), and ``selftest`` (the embedded
check battery).

Matrices are read from plain CSV: row-major, no header, entries either
decimal literals or exact ``a/b`` rationals.  Reports are JSON (fixed key
order, schema version 1) or CSV.  Exit codes: 0 success, 1 usage or I/O
error, 2 numerical or invariant failure, 3 statistical tolerance failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import Sequence

from . import linalg, oracles, selftest, wishart

__all__ = [
    "main",
    "parse_matrix_csv",
    "write_matrix_csv",
    "parse_scalar",
    "format_scalar",
]

SCHEMA_VERSION = 1
FLOAT_RTOL = 1e-8

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_STATISTICAL = 3


class UsageError(Exception):
    pass


class NumericalError(Exception):
    pass


# -- matrix I/O ----------------------------------------------------------------


def parse_scalar(text: str, mode: str):
    """One CSV cell: ``a/b`` and integer literals stay exact in rational
    mode; anything else must parse as a float."""
    text = text.strip()
    if mode == "rational":
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"cannot parse {text!r} as a rational") from exc
    try:
        return float(Fraction(text)) if "/" in text else float(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse {text!r} as a number") from exc


def format_scalar(value) -> str:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def detect_mode(rows: list[list[str]]) -> str:
    for row in rows:
        for cell in row:
            cell = cell.strip()
            if "." in cell or "e" in cell.lower():
                return "float"
    return "rational"


def _read_cells(path: str) -> list[list[str]]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = [line.strip() for line in fh if line.strip()]
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    if not lines:
        raise UsageError(f"{path} is empty")
    return [line.split(",") for line in lines]


def parse_matrix_csv(path: str, mode: str | None = None) -> tuple[tuple, str]:
    """Parse a matrix file; returns (matrix, mode).  With ``mode=None`` the
    mode is detected: exact rational unless a decimal or exponent appears."""
    cells = _read_cells(path)
    width = len(cells[0])
    if any(len(row) != width for row in cells):
        raise UsageError(f"{path}: ragged rows")
    actual_mode = mode or detect_mode(cells)
    matrix = tuple(tuple(parse_scalar(c, actual_mode) for c in row) for row in cells)
    return matrix, actual_mode


def write_matrix_csv(path: str, matrix: Sequence[Sequence]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in matrix:
            fh.write(",".join(format_scalar(v) for v in row) + "\n")


# -- shared plumbing -------------------------------------------------------------


def _build_params(args) -> wishart.WishartParams:
    sigma, sigma_mode = parse_matrix_csv(args.sigma, args.mode)
    m = None
    if getattr(args, "m", None):
        m, m_mode = parse_matrix_csv(args.m, args.mode)
        if args.mode is None and {sigma_mode, m_mode} == {"rational", "float"}:
            # never mix scalar towers inside one computation
            sigma = linalg.to_float(sigma)
            m = linalg.to_float(m)
    try:
        return wishart.WishartParams(args.n, args.p, sigma, m)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _parse_orders(text: str) -> list[int]:
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        try:
            lo_i, hi_i = int(lo), int(hi)
        except ValueError as exc:
            raise UsageError(f"bad order range {text!r}") from exc
        if hi_i < lo_i:
            raise UsageError(f"bad order range {text!r}")
        return list(range(lo_i, hi_i + 1))
    try:
        return [int(text)]
    except ValueError as exc:
        raise UsageError(f"bad order {text!r}") from exc


def _method_value(method: str, params, i: int, args) -> dict:
    started = time.perf_counter()
    entry: dict = {"method": method, "i": i}
    try:
        if method == "closed-form":
            value = wishart.expected_esf_closed_form(params, i)
        elif method == "umbral":
            value = wishart.expected_esf_umbral(params, i)
        elif method == "wick":
            value = oracles.wick_expected_esf(params, i)
        elif method == "mc":
            est = oracles.mc_expected_esf(params, i, args.samples, args.seed)
            entry["stderr"] = est.stderr
            entry["samples"] = est.samples
            entry["seed"] = est.seed
            value = est.value
        else:
            raise UsageError(f"unknown method {method!r}")
    except (ValueError, ArithmeticError) as exc:
        raise NumericalError(f"{method} failed at i={i}: {exc}") from exc
    entry["value"] = format_scalar(value) if isinstance(value, Fraction) else value
    entry["_raw"] = value
    if not args.no_timing:
        entry["timing_ms"] = round(1000 * (time.perf_counter() - started), 3)
    return entry


def _params_echo(params: wishart.WishartParams) -> dict:
    echo = {
        "n": params.n,
        "p": params.p,
        "mode": params.mode,
        "sigma": [[format_scalar(v) for v in row] for row in params.sigma],
    }
    if params.m is not None:
        echo["m"] = [[format_scalar(v) for v in row] for row in params.m]
    return echo


def _strip_private(entries: list[dict]) -> list[dict]:
    return [{k: v for k, v in e.items() if not k.startswith("_")} for e in entries]


def _emit(args, payload: dict, csv_rows: list[list] | None = None) -> None:
    if args.output == "json":
        text = json.dumps(payload, indent=2)
    else:
        lines = [",".join(str(c) for c in row) for row in csv_rows or []]
        text = "\n".join(lines)
    out_path = getattr(args, "out", None)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# -- subcommands -------------------------------------------------------------------


def _cmd_compute(args) -> int:
    params = _build_params(args)
    entries = [_method_value(args.method, params, i, args) for i in _parse_orders(args.i)]
    payload = {
        "schema": SCHEMA_VERSION,
        "command": "compute",
        "method": args.method,
        "mode": params.mode,
        "params": _params_echo(params),
        "results": _strip_private(entries),
    }
    csv_rows = [["method", "i", "value", "stderr"]] + [
        [e["method"], e["i"], format_scalar(e["_raw"]), e.get("stderr", "")] for e in entries
    ]
    _emit(args, payload, csv_rows)
    return EXIT_OK


def _tolerance_kind(methods: list[str], mode: str) -> str:
    if "mc" in methods:
        return "statistical"
    if mode == "rational":
        return "exact"
    return "relative"


def _values_agree(kind: str, base: dict, other: dict) -> tuple[bool, float]:
    a, b = base["_raw"], other["_raw"]
    if kind == "exact" and isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b, float(abs(a - b))
    fa, fb = float(a), float(b)
    diff = abs(fa - fb)
    if kind == "statistical":
        spread = (base.get("stderr", 0.0) ** 2 + other.get("stderr", 0.0) ** 2) ** 0.5
        return diff <= 4 * spread if spread > 0 else diff == 0.0, diff
    scale = max(1.0, abs(fa), abs(fb))
    return diff <= FLOAT_RTOL * scale, diff


def _cmd_compare(args) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    if len(methods) < 2:
        raise UsageError("compare needs at least two methods")
    params = _build_params(args)
    rows = []
    worst = EXIT_OK
    for i in _parse_orders(args.i):
        entries = {m: _method_value(m, params, i, args) for m in methods}
        base = entries[methods[0]]
        row: dict = {"i": i, "values": {m: entries[m].get("value") for m in methods}}
        deviations = {}
        ok = True
        for m in methods[1:]:
            kind = _tolerance_kind([methods[0], m], params.mode)
            agree, diff = _values_agree(kind, base, entries[m])
            deviations[m] = {"abs": diff, "kind": kind, "pass": agree}
            if not agree:
                ok = False
                failure = EXIT_STATISTICAL if kind == "statistical" else EXIT_NUMERICAL
                worst = max(worst, failure)
        row["deviations"] = deviations
        row["pass"] = ok
        rows.append(row)
    payload = {
        "schema": SCHEMA_VERSION,
        "command": "compare",
        "methods": methods,
        "mode": params.mode,
        "params": _params_echo(params),
        "results": rows,
        "passed": worst == EXIT_OK,
    }
    csv_rows = [["i", "pass"] + methods] + [
        [r["i"], r["pass"]] + [r["values"][m] for m in methods] for r in rows
    ]
    _emit(args, payload, csv_rows)
    return worst


def _cmd_table(args) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    if not methods:
        raise UsageError("table needs at least one method")
    params = _build_params(args)
    rows = []
    for i in _parse_orders(args.i):
        entries = {m: _method_value(m, params, i, args) for m in methods}
        rows.append({"i": i, "values": {m: entries[m].get("value") for m in methods}})
    payload = {
        "schema": SCHEMA_VERSION,
        "command": "table",
        "methods": methods,
        "mode": params.mode,
        "params": _params_echo(params),
        "results": rows,
    }
    csv_rows = [["i"] + methods] + [[r["i"]] + [r["values"][m] for m in methods] for r in rows]
    _emit(args, payload, csv_rows)
    return EXIT_OK


def _cmd_selftest(args) -> int:
    results = selftest.run_selftest(args.filter)
    if not results:
        raise UsageError(f"no self-test matches filter {args.filter!r}")
    passed = all(r.passed for r in results)
    if args.json:
        payload = {
            "schema": SCHEMA_VERSION,
            "command": "selftest",
            "results": [
                {"name": r.name, "status": "pass" if r.passed else "fail", "detail": r.detail}
                for r in results
            ],
            "passed": passed,
        }
        print(json.dumps(payload, indent=2))
    else:
        width = max(len(r.name) for r in results)
        for r in results:
            marker = "PASS" if r.passed else "FAIL"
            print(f"{marker}  {r.name.ljust(width)}  {r.detail}")
        print(f"{'all checks passed' if passed else 'FAILURES PRESENT'}")
    return EXIT_OK if passed else EXIT_NUMERICAL


# -- argument parsing -----------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on usage problems, not argparse's 2
        raise UsageError(message)


def _add_model_arguments(sub) -> None:
    sub.add_argument("--n", type=int, required=True, help="degrees of freedom")
    sub.add_argument("--p", type=int, required=True, help="dimension")
    sub.add_argument("--sigma", required=True, help="covariance CSV path")
    sub.add_argument("--m", help="mean matrix CSV path (omitted: zero mean)")
    sub.add_argument("--i", required=True, help="order, or inclusive range 'a..b'")
    sub.add_argument("--mode", choices=["rational", "float"], help="force the scalar tower")
    sub.add_argument("--samples", type=int, default=100_000, help="Monte Carlo sample count")
    sub.add_argument("--seed", type=int, default=20200429, help="Monte Carlo seed")
    sub.add_argument("--output", choices=["json", "csv"], default="json")
    sub.add_argument("--out", help="write the report here instead of stdout")
    sub.add_argument("--no-timing", action="store_true", help="omit timing fields")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wishart-esf", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    compute = subs.add_parser("compute", help="one method, one or more orders")
    _add_model_arguments(compute)
    compute.add_argument(
        "--method", choices=["closed-form", "umbral", "wick", "mc"], default="closed-form"
    )
    compute.set_defaults(func=_cmd_compute)

    compare = subs.add_parser("compare", help="run several methods and check agreement")
    _add_model_arguments(compare)
    compare.add_argument("--methods", required=True, help="comma-separated method list")
    compare.set_defaults(func=_cmd_compare)

    table = subs.add_parser("table", help="values per method without judgement")
    _add_model_arguments(table)
    table.add_argument("--methods", required=True, help="comma-separated method list")
    table.set_defaults(func=_cmd_table)

    self_test = subs.add_parser("selftest", help="run the embedded check battery")
    self_test.add_argument("--filter", help="substring filter on check names")
    self_test.add_argument("--json", action="store_true", help="machine-readable output")
    self_test.set_defaults(func=_cmd_selftest)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
