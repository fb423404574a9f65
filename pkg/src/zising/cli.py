"""Command line front end.

Exit codes: 0 success, 1 malformed input file, 2 invalid region,
3 numerical failure (singular systems, oracle limits, failed checks, and
condition warnings under ``--strict``).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings

import numpy as np

from . import __version__
from .arrangement import GeometryError, arrangement_to_dict, build_arrangement, build_black_graph
from .correlations import (
    ConditionWarning,
    NumericalError,
    correlation_matrix,
    descent_transport_check,
    dual_correlation_matrix,
    duality_checks,
)
from .elliptic import EllipticDomainError, as_parameter
from .nearcritical import gamma_expansion
from .oracle import OracleError, exact_correlations
from .region import (
    RegionError,
    region_from_dict,
    region_to_dict,
    shift_labels,
    tau_descents,
    validate,
)

EXIT_OK, EXIT_JSON, EXIT_INVALID, EXIT_NUMERIC = 0, 1, 2, 3

CHECK_TOL = {"formula_vs_oracle": 1e-8, "transport": 1e-10, "duality_ratio": 1e-9,
             "duality_projector": 1e-8, "kramers_wannier": 1e-10, "structure": 1e-9}


class _Fail(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


class _FailWithOutput(_Fail):
    def __init__(self, code, message, output):
        super().__init__(code, message)
        self.output = output


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _Fail(EXIT_JSON, f"cannot read {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise _Fail(EXIT_JSON, f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    try:
        return region_from_dict(data)
    except RegionError as exc:
        raise _Fail(EXIT_INVALID, str(exc)) from None


def _valid_region(path):
    region = _load(path)
    problems = validate(region)
    if problems:
        raise _Fail(EXIT_INVALID, "invalid region:\n  " + "\n  ".join(problems))
    return region


def _matrix(M):
    return [[float(x) for x in row] for row in np.asarray(M)]


def _matrix_csv(M) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    n = len(M)
    w.writerow([f"b_{i}" for i in range(1, n + 1)])
    for row in M:
        w.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def _rows_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(x) if isinstance(x, (float, np.floating)) else x for x in row])
    return buf.getvalue()


def _dump_graph(args, region, param, payload):
    if not args.dump_graph:
        return
    arr = build_arrangement(region, args.seed)
    dump = arrangement_to_dict(arr, build_black_graph(arr, param))
    if args.format == "json":
        payload["arrangement"] = dump
    else:
        sys.stderr.write(json.dumps(dump, sort_keys=True) + "\n")


# ------------------------------------------------------------ subcommands

def cmd_validate(args):
    region = _load(args.region)
    problems = validate(region)
    if problems:
        raise _Fail(EXIT_INVALID, "invalid region:\n  " + "\n  ".join(problems))
    payload = {"valid": True, "n": region.n, "region": region_to_dict(region)}
    if args.format == "csv":
        return _rows_csv(["valid", "n"], [["true", region.n]])
    return payload


def cmd_correlate(args):
    region = _valid_region(args.region)
    param = as_parameter(args.m)
    res = correlation_matrix(region, param)
    payload = {"m": param.m, "M": _matrix(res.entries), "M_doubled": _matrix(res.doubled.entries),
               "condition": res.doubled.condition, "basis": res.basis}
    _dump_graph(args, region, param, payload)
    if args.format == "csv":
        return _matrix_csv(res.entries)
    return payload


def cmd_oracle(args):
    region = _valid_region(args.region)
    param = as_parameter(args.m)
    arr = build_arrangement(region, args.seed)
    graph = build_black_graph(arr, param)
    res = exact_correlations(graph)
    payload = {"m": param.m, "seed": args.seed, "M": _matrix(res.correlations), "logZ": res.logZ,
               "vertices": graph.num_vertices, "edges": len(graph.edges)}
    _dump_graph(args, region, param, payload)
    if args.format == "csv":
        return _matrix_csv(res.correlations)
    return payload


def cmd_check(args):
    region = _valid_region(args.region)
    param = as_parameter(args.m)
    rng = np.random.default_rng(args.seed)
    results = {}
    formula = correlation_matrix(region, param)
    results["structure"] = formula.doubled.structure_residual()
    arr = build_arrangement(region, args.seed)
    graph = build_black_graph(arr, param)
    try:
        oracle = exact_correlations(graph).correlations
        results["formula_vs_oracle"] = float(np.max(np.abs(formula.entries - oracle)))
    except OracleError as exc:
        results["formula_vs_oracle_skipped"] = str(exc)
    ts = rng.uniform(-math.pi, math.pi, 100)
    worst = 0.0
    for j in tau_descents(region):
        worst = max(worst, descent_transport_check(region, j, param, ts)["pointwise"])
    results["transport"] = worst
    dual = duality_checks(region, param, rng=rng, graph=graph)
    results["duality_ratio"] = dual["ratio_spread"]
    results["duality_projector"] = dual["projector"]
    results["kramers_wannier"] = dual["kramers_wannier"]
    failed = sorted(k for k, tol in CHECK_TOL.items() if k in results and not results[k] <= tol)
    payload = {"m": param.m, "seed": args.seed, "results": results, "tolerances": CHECK_TOL,
               "passed": not failed, "failed": failed}
    _dump_graph(args, region, param, payload)
    if args.format == "csv":
        rows = [[k, results[k], CHECK_TOL[k], "pass" if k not in failed else "fail"]
                for k in CHECK_TOL if k in results]
        text = _rows_csv(["check", "residual", "tolerance", "status"], rows)
    else:
        text = payload
    if failed:
        raise _FailWithOutput(EXIT_NUMERIC, "checks failed: " + ", ".join(failed), text)
    return text


def cmd_expand(args):
    region = _valid_region(args.region)
    sample = gamma_expansion(region, args.t)
    if args.format == "csv":
        rows = [[p, float(z), float(s)] for p, (z, s) in
                enumerate(zip(sample.zeroth, sample.second_order), start=1)]
        return _rows_csv(["p", "zeroth", "second_order"], rows)
    return {"t": sample.t, "zeroth": [float(x) for x in sample.zeroth],
            "second_order": [float(x) for x in sample.second_order]}


def cmd_dualize(args):
    region = _valid_region(args.region)
    param = as_parameter(args.m)
    res = dual_correlation_matrix(region, param)
    payload = {"m": param.m, "m_dual": param.m_dual, "dual_region": region_to_dict(shift_labels(region)),
               "M": _matrix(res.entries)}
    _dump_graph(args, region, param, payload)
    if args.format == "csv":
        return _matrix_csv(res.entries)
    return payload


COMMANDS = {
    "validate": (cmd_validate, "check a region file"),
    "correlate": (cmd_correlate, "boundary correlations from the curve formula"),
    "oracle": (cmd_oracle, "boundary correlations by exhaustive enumeration"),
    "check": (cmd_check, "compare formula, oracle, transport and duality"),
    "expand": (cmd_expand, "small-k expansion of the curve"),
    "dualize": (cmd_dualize, "correlations of the Kramers-Wannier dual model"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zising", description="Z-invariant Ising boundary correlations")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("region", help="region JSON file")
    common.add_argument("--m", type=float, default=0.0, help="elliptic parameter k^2 < 1 (default 0)")
    common.add_argument("--seed", type=int, default=0, help="arrangement jitter / sampling seed")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="write results here instead of stdout")
    common.add_argument("--dump-graph", action="store_true", help="include the chord arrangement and Ising graph")
    common.add_argument("--strict", action="store_true", help="treat condition warnings as failures")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name == "expand":
            p.add_argument("--t", type=float, default=0.0, help="angle at which to expand")
    return parser


def _emit(result, args):
    text = result if isinstance(result, str) else json.dumps(result, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    func = COMMANDS[args.command][0]
    try:
        if args.m >= 1.0 or not math.isfinite(args.m):
            raise _Fail(EXIT_INVALID, f"--m must be a finite number below 1, got {args.m}")
        with warnings.catch_warnings():
            warnings.simplefilter("error" if args.strict else "default", ConditionWarning)
            result = func(args)
    except _FailWithOutput as exc:
        _emit(exc.output, args)
        sys.stderr.write(f"error: {exc}\n")
        return exc.code
    except _Fail as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.code
    except RegionError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID
    except (NumericalError, ConditionWarning, OracleError, GeometryError, EllipticDomainError,
            FloatingPointError, np.linalg.LinAlgError) as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERIC
    _emit(result, args)
    return EXIT_OK


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
