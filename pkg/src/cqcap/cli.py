"""Command-line front end: ``capacity``, ``validate``, and ``gen`` subcommands.

Reports go to stdout as JSON with floats at 17 significant digits; errors go
to stderr as a one-line JSON object. Exit codes: 0 success, 2 file/parse
errors, 3 solver errors, 4 oracle disagreement.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import sys
import time

import numpy as np

from .capacity import CapacityResult, constrained_capacity, unconstrained_capacity
from .channel import (
    CqChannel,
    channel_from_jsonable,
    independence_check,
    random_channel,
    save_channel,
)
from .errors import (
    BadParams,
    BadTrace,
    BracketFailure,
    DimensionMismatch,
    InfeasibleCost,
    LengthMismatch,
    NotHermitian,
    NotPSD,
    NumericalBreakdown,
)
from .oracle import DEFAULT_GRID_RESOLUTION, GridSpec, grid_capacity
from .solver import IterationTrace

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_SOLVER = 3
EXIT_ORACLE = 4

PARSE_ERRORS = (
    OSError,
    ValueError,
    BadParams,
    BadTrace,
    DimensionMismatch,
    LengthMismatch,
    NotHermitian,
    NotPSD,
)
SOLVER_ERRORS = (InfeasibleCost, BracketFailure, NumericalBreakdown)


def _format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def _dumps(value) -> str:
    """JSON text with floats serialized at 17 significant digits."""
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _format_float(float(value))
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        inner = ", ".join(f"{json.dumps(str(k))}: {_dumps(v)}" for k, v in value.items())
        return "{" + inner + "}"
    if isinstance(value, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_dumps(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {type(value)!r}")


def _emit_error(exc: Exception) -> None:
    line = _dumps({"error": type(exc).__name__, "message": str(exc)})
    print(line, file=sys.stderr)


def _load(path: str) -> tuple[CqChannel, str]:
    with open(path, "rb") as fh:
        payload = fh.read()
    digest = hashlib.sha256(payload).hexdigest()
    channel = channel_from_jsonable(json.loads(payload.decode("utf-8")))
    return channel, digest


def _write_trace_csv(trace: IterationTrace, path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "f_bits", "lower_bits", "upper_bits", "expected_cost", "l1_step"])
        rows = zip(trace.steps, trace.objective_bits, trace.lower_bits,
                   trace.upper_bits, trace.expected_cost, trace.l1_step)
        for step, objective, lower, upper, cost, l1 in rows:
            writer.writerow([step] + [_format_float(v) for v in (objective, lower, upper, cost, l1)])


def _result_payload(result: CapacityResult) -> dict:
    return {
        "capacity_bits": result.capacity_bits,
        "probs": list(result.probs.probs),
        "multiplier_bits_per_cost_unit": result.multiplier,
        "expected_cost_units": result.expected_cost,
        "constraint_active": result.constraint_active,
        "gap_certificate_bits": list(result.gap_certificate_bits),
        "outer_iterations": result.outer_iterations,
        "termination": result.termination.value,
    }


def cmd_capacity(args) -> int:
    try:
        channel, digest = _load(args.channel)
    except PARSE_ERRORS as exc:
        _emit_error(exc)
        return EXIT_PARSE
    started = time.perf_counter()
    try:
        if args.cost_limit is None:
            result = unconstrained_capacity(channel, epsilon=args.eps, max_iter=args.max_iter)
        else:
            result = constrained_capacity(channel, args.cost_limit,
                                          epsilon=args.eps, max_iter=args.max_iter)
    except SOLVER_ERRORS as exc:
        _emit_error(exc)
        return EXIT_SOLVER
    elapsed = time.perf_counter() - started
    if args.trace is not None:
        try:
            _write_trace_csv(result.trace, args.trace)
        except OSError as exc:
            _emit_error(exc)
            return EXIT_PARSE
    report = {
        "input": {"path": args.channel, "sha256": digest},
        "config": {
            "cost_limit": args.cost_limit,
            "epsilon_bits": args.eps,
            "max_iter": args.max_iter,
        },
        "result": _result_payload(result),
        "timing_seconds": elapsed,
        "trace_path": args.trace,
    }
    print(_dumps(report))
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        channel, digest = _load(args.channel)
    except PARSE_ERRORS as exc:
        _emit_error(exc)
        return EXIT_PARSE
    print(f"channel: {args.channel} sha256={digest}")
    print(f"states: {channel.size} valid, dim={channel.dim}")
    report = independence_check(channel)
    print(
        f"independent: {str(report.independent).lower()} "
        f"min_gram_eigenvalue={_format_float(report.min_gram_eigenvalue)}"
    )
    if channel.size <= 4:
        resolution = args.oracle_grid or DEFAULT_GRID_RESOLUTION[channel.size]
        solved = unconstrained_capacity(channel)
        grid = grid_capacity(channel, GridSpec(resolution))
        gap = abs(solved.capacity_bits - grid.value_bits)
        lower, upper = solved.gap_certificate_bits
        print(
            f"solver_bits={_format_float(solved.capacity_bits)} "
            f"grid_bits={_format_float(grid.value_bits)} "
            f"gap_bits={_format_float(gap)} "
            f"slack_bits={_format_float(grid.slack_bits)}"
        )
        contained = (lower - grid.slack_bits <= grid.value_bits <= upper + grid.slack_bits)
        if not contained:
            print("oracle check: FAIL")
            return EXIT_ORACLE
        print("oracle check: ok")
    print("ok")
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        channel = random_channel(args.n, args.m, args.seed, args.kind)
        if args.costs == "uniform":
            channel = CqChannel(channel.states, np.ones(args.n))
        elif args.costs == "random":
            rng = np.random.default_rng([args.seed, 1])
            channel = CqChannel(channel.states, rng.random(args.n))
        save_channel(channel, args.out)
    except PARSE_ERRORS as exc:
        _emit_error(exc)
        return EXIT_PARSE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cqcap",
        description="Capacity of classical-quantum channels with certified bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    cap = sub.add_parser("capacity", help="compute capacity of a channel file")
    cap.add_argument("--channel", required=True, help="path to a channel JSON file")
    cap.add_argument("--cost-limit", type=float, default=None,
                     help="expected-cost budget; omit for unconstrained")
    cap.add_argument("--eps", type=float, default=1e-6,
                     help="target certified gap in bits (default 1e-6)")
    cap.add_argument("--max-iter", type=int, default=1_000_000,
                     help="iteration cap per inner solve (default 1e6)")
    cap.add_argument("--trace", default=None, help="write per-iteration CSV here")
    cap.set_defaults(func=cmd_capacity)

    val = sub.add_parser("validate", help="validate states and cross-check the oracle")
    val.add_argument("--channel", required=True)
    val.add_argument("--oracle-grid", type=int, default=None,
                     help="grid resolution for the oracle cross-check")
    val.set_defaults(func=cmd_validate)

    gen = sub.add_parser("gen", help="write a deterministic random channel file")
    gen.add_argument("--n", type=int, required=True, help="alphabet size")
    gen.add_argument("--m", type=int, required=True, help="output dimension")
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--kind", required=True, choices=("pure", "mixed", "diagonal"))
    gen.add_argument("--out", required=True)
    gen.add_argument("--costs", choices=("uniform", "random"), default=None)
    gen.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
