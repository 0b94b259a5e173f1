"""Command-line entry point: ``slot-pricer <command> --instance FILE ...``.

Exit codes: 0 success, 1 infeasible optimum, 2 invalid input, 3 unsupported mode.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import os
import sys
import time
from pathlib import Path
from typing import Sequence

import numpy as np

from slot_pricer import continuous, oracle
from slot_pricer.errors import ModeError, ValidationError
from slot_pricer.io import dumps_result, instance_hash, load_instance, num, region_json
from slot_pricer.model import Instance, compute_regions, envelope_regions, price_grid
from slot_pricer.solver import solve

log = logging.getLogger("slot_pricer")

EXIT_OK, EXIT_INFEASIBLE, EXIT_INVALID, EXIT_MODE = 0, 1, 2, 3


def _floats(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}") from exc
    if not values:
        raise argparse.ArgumentTypeError("expected at least one number")
    return values


def _positive(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _threads(args: argparse.Namespace) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("SLOT_PRICER_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValidationError(f"SLOT_PRICER_THREADS must be an integer, got {env!r}")
    return os.cpu_count() or 1


def _price_set(args: argparse.Namespace, instance: Instance) -> tuple[list[float], dict]:
    if args.prices is not None:
        prices = sorted(set(args.prices))
        return prices, {"prices": prices}
    prices = price_grid(instance, args.grid)
    return prices, {"grid_delta": args.grid, "prices": prices}


def _check_profile(profile: Sequence[float], instance: Instance) -> None:
    if len(profile) != instance.n:
        raise ValidationError(f"--profile: expected {instance.n} prices, got {len(profile)}")


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _base(command: str, instance: Instance, parameters: dict) -> dict:
    return {"command": command, "instance_sha256": instance_hash(instance), "parameters": parameters}


def cmd_validate(args, doc) -> int:
    _emit(dumps_result({**_base("validate", doc.instance, {}), "valid": True, "slots": doc.instance.n}), args.output)
    return EXIT_OK


def cmd_solve(args, doc) -> int:
    instance = doc.instance
    prices, params = _price_set(args, instance)
    result = solve(instance, prices)
    payload = _base("solve", instance, params)
    payload.update(
        value=num(result.value),
        profile=list(result.profile) if result.profile else None,
        path=[[v.slot, v.price] for v in result.path],
        transitions=result.transitions,
        arcs=result.arcs,
        regions=region_json(compute_regions(instance, result.profile)) if result.profile else None,
    )
    return _finish(payload, args, EXIT_OK if result.feasible else EXIT_INFEASIBLE)


def cmd_check(args, doc) -> int:
    instance = doc.instance
    _check_profile(args.profile, instance)
    payload = _base("check", instance, {"profile": args.profile})
    payload.update(region_json(compute_regions(instance, args.profile)))
    return _finish(payload, args, EXIT_OK)


def cmd_oracle(args, doc) -> int:
    instance = doc.instance
    prices, params = _price_set(args, instance)
    params["limit"] = args.limit
    result = oracle.enumerate_opt(instance, prices, args.limit)
    solved = solve(instance, prices)
    agrees = (
        result.value == solved.value
        if math.isinf(result.value) or math.isinf(solved.value)
        else abs(result.value - solved.value) <= 1e-9
    )
    payload = _base("oracle", instance, params)
    payload.update(
        value=num(result.value),
        argmax_profiles=[list(p) for p in result.argmax_profiles],
        profiles_evaluated=result.profiles_evaluated,
        solver_value=num(solved.value),
        solver_agrees=agrees,
    )
    return _finish(payload, args, EXIT_OK if result.value > -math.inf else EXIT_INFEASIBLE)


def cmd_bounds(args, doc) -> int:
    instance = doc.instance
    constants = continuous.derive_constants(instance)
    deltas = sorted(set(args.deltas), reverse=True)
    warnings = []
    if args.warn_delta_max:
        for d in deltas:
            if d > constants.delta_max:
                msg = f"delta={d} exceeds delta_max={constants.delta_max:.6g}; bounds stay valid but the rate analysis does not apply"
                log.warning(msg)
                warnings.append(msg)
    reports = continuous.gap_sweep(instance, deltas, threads=_threads(args))
    payload = _base("bounds", instance, {"deltas": deltas})
    payload.update(
        constants={
            "alpha": constants.alpha,
            "mu_upper": constants.mu_upper,
            "L": constants.L,
            "p_min": constants.p_min,
            "p_max": constants.p_max,
            "delta_max": num(constants.delta_max),
        },
        reports=[
            {
                "delta": r.delta,
                "lb": num(r.lb),
                "lb_profile": list(r.lb_profile) if r.lb_profile else None,
                "ub_raw": num(r.ub_raw),
                "ub": num(r.ub),
                "ub_profile": list(r.ub_profile) if r.ub_profile else None,
                "gap": num(r.gap),
            }
            for r in reports
        ],
        warnings=warnings,
    )
    feasible = all(r.lb > -math.inf for r in reports)
    return _finish(payload, args, EXIT_OK if feasible else EXIT_INFEASIBLE)


def envelope_rows(instance: Instance, profile: Sequence[float], samples: int, span: tuple[float, float] | None):
    """Rows ``(x, envelope, slot, served)`` on a uniform grid plus every finite region boundary."""
    if span is None:
        supp = instance.population.support()
        lo, hi = min(supp.lo, instance.times[0]), max(supp.hi, instance.times[-1])
        pad = 0.1 * (hi - lo) or 1.0
        span = (lo - pad, hi + pad)
    xs = set(np.linspace(span[0], span[1], samples).tolist())
    report = compute_regions(instance, profile)
    for iv in envelope_regions(instance, profile) + [s.served for s in report.slots]:
        for x in iv.as_pair() or ():
            if span[0] <= x <= span[1]:
                xs.add(x)
    xs = np.array(sorted(xs))
    costs = instance.total_costs(xs, profile)
    slot = np.argmin(costs, axis=0)
    env = costs[slot, np.arange(xs.size)]
    return [(float(x), float(e), int(k) + 1, int(e <= 0)) for x, e, k in zip(xs, env, slot)]


def cmd_envelope(args, doc) -> int:
    instance = doc.instance
    _check_profile(args.profile, instance)
    span = None
    if args.range is not None:
        if len(args.range) != 2 or not args.range[0] < args.range[1]:
            raise ValidationError("--range: expected two increasing numbers lo,hi")
        span = (args.range[0], args.range[1])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["x", "envelope", "slot", "served"])
    for x, e, k, s in envelope_rows(instance, args.profile, args.samples, span):
        writer.writerow([repr(x), repr(e), k, s])
    _emit(buf.getvalue(), args.output)
    return EXIT_OK


def _finish(payload: dict, args, code: int) -> int:
    payload["wall_time_s"] = round(time.perf_counter() - args._started, 6)
    _emit(dumps_result(payload), args.output)
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slot-pricer", description="Revenue-maximising time-slot pricing.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        p.add_argument("--instance", required=True, help="instance JSON file")
        p.add_argument("--output", help="write the result here instead of stdout")
        p.add_argument("--threads", type=int, help="worker threads (default: $SLOT_PRICER_THREADS or all cores)")
        return p

    def price_source(p: argparse.ArgumentParser) -> None:
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--prices", type=_floats, help="explicit comma-separated price set")
        g.add_argument("--grid", type=_positive, metavar="DELTA", help="all multiples of DELTA in [p_min, p_max + DELTA)")

    p = command("solve", "optimal prices over a finite price set")
    price_source(p)
    p.set_defaults(func=cmd_solve)

    p = command("bounds", "lower/upper bounds for real-valued prices")
    p.add_argument("--deltas", type=_floats, required=True, help="comma-separated grid steps")
    p.add_argument(
        "--warn-delta-max",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="warn when a step exceeds delta_max (default: on)",
    )
    p.set_defaults(func=cmd_bounds)

    p = command("check", "evaluate one price profile")
    p.add_argument("--profile", type=_floats, required=True)
    p.set_defaults(func=cmd_check)

    p = command("oracle", "brute-force enumeration over the price set")
    price_source(p)
    p.add_argument("--limit", type=int, default=oracle.DEFAULT_LIMIT, help="maximum number of profiles")
    p.set_defaults(func=cmd_oracle)

    p = command("envelope", "CSV samples of the lower envelope for one profile")
    p.add_argument("--profile", type=_floats, required=True)
    p.add_argument("--samples", type=int, default=401)
    p.add_argument("--range", type=_floats, metavar="LO,HI")
    p.set_defaults(func=cmd_envelope)

    p = command("validate", "schema and invariant check only")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    args._started = time.perf_counter()
    try:
        if any(not d > 0 for d in getattr(args, "deltas", ())):
            raise ValidationError("--deltas: every step must be positive")
        doc = load_instance(args.instance)
        return args.func(args, doc)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ModeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
