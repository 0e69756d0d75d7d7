"""Command line front end.

Subcommands
    exact     exact expected-age trajectory and objective for one attack
    brute     exhaustive search for optimal attacks (exact rationals)
    simulate  Monte Carlo batches (uniform random scheduler or round robin)
    bounds    closed-form bounds and optimality ratios for a config
    sweep     run a scheme over a Cartesian grid of integer parameters
    verify    certify the structural claims on a small exact grid

Exit codes: 0 success, 1 verification/comparison failure, 2 usage error,
3 infeasible or mis-shaped attack, 4 enumeration or sweep over the size cap.

Artifacts carry provenance: JSON output wraps the payload with the config,
the seed, and a sha256 of the canonical payload; CSV output prefixes the
same fields as '#' comment lines.  AOIJAM_WORKERS sets the default worker
count.
"""

from __future__ import annotations

import argparse
import hashlib
import itertools
import json
import os
import sys
from pathlib import Path

from .adversary import OverCapError, brute_force_optimum, centered_cbs, two_block_row
from .bounds import (
    bounds_table,
    deterministic_lower_bound,
    diversity_lower_bound,
    randomized_lower_bound,
    single_channel_upper_bound,
    subcarrier_upper_bound,
)
from .exact_age import (
    age_by_recursion,
    age_by_recursion_subcarrier,
    objective,
    trajectory_to_csv,
    trajectory_to_json,
)
from .model import (
    BlockingMatrix,
    CbsDescriptor,
    FeasibilityError,
    ShapeMismatchError,
    SystemConfig,
    as_fraction,
    cbs_to_matrix,
    matrix_from_text,
)
from .sched_sim import (
    empirical_vs_exact,
    report_to_csv,
    simulate_randomized,
    simulate_randomized_subcarrier,
    simulate_round_robin,
)
from .verify import all_passed, results_to_text, run_all


class UsageError(Exception):
    """Bad flag combination or malformed generator/vary spec."""


def _default_workers() -> int:
    raw = os.environ.get("AOIJAM_WORKERS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _config_from_args(args) -> SystemConfig:
    return SystemConfig(
        n_users=args.n,
        horizon=args.t,
        alpha=as_fraction(args.alpha),
        n_subcarriers=args.nsub,
    )


def _worst_case_matrix(config: SystemConfig) -> BlockingMatrix:
    """Canonical optimal-structure attack: a centered full-budget window.

    Single-channel: the window sits in user 1's row.  Diversity model: the
    window blocks one sub-carrier per slot, cycling through them.
    """
    budget = config.budget()
    if config.n_subcarriers is None:
        return cbs_to_matrix(config, centered_cbs(config, 1, budget))
    start = (config.horizon - budget) // 2 + 1
    zeros = [
        ((t - start) % config.n_subcarriers + 1, t)
        for t in range(start, start + budget)
    ]
    return BlockingMatrix.from_zeros(config.n_subcarriers, config.horizon, zeros)


def _matrix_from_gen(config: SystemConfig, rows: int, spec: str) -> BlockingMatrix:
    parts = spec.split(":")
    kind, raw_numbers = parts[0], parts[1:]
    try:
        numbers = [int(p) for p in raw_numbers]
    except ValueError as exc:
        raise UsageError(f"non-integer field in --gen spec {spec!r}") from exc
    if kind == "cbs" and len(numbers) == 3:
        row, start, length = numbers
        return cbs_to_matrix(config, CbsDescriptor(row=row, start=start, length=length), rows=rows)
    if kind == "centered" and len(numbers) == 2:
        row, length = numbers
        return cbs_to_matrix(config, centered_cbs(config, row, length), rows=rows)
    if kind == "twoblock" and len(numbers) == 5:
        row, s1, l1, s2, l2 = numbers
        if not 1 <= row <= rows:
            raise UsageError(f"--gen row {row} outside 1..{rows}")
        blocked = two_block_row(config.horizon, s1, l1, s2, l2)
        return BlockingMatrix.all_ones(rows, config.horizon).replace_row(row, blocked)
    raise UsageError(
        f"bad --gen spec {spec!r}; expected cbs:<row>:<start>:<len>, "
        "centered:<row>:<len>, or twoblock:<row>:<s1>:<l1>:<s2>:<l2>"
    )


def _resolve_matrix(config: SystemConfig, args, default: str = "all_ones") -> BlockingMatrix:
    rows = config.n_subcarriers or config.n_users
    if args.sigma and args.gen:
        raise UsageError("--sigma and --gen are mutually exclusive")
    if args.sigma:
        return matrix_from_text(Path(args.sigma).read_text())
    if args.gen:
        return _matrix_from_gen(config, rows, args.gen)
    if default == "worst":
        return _worst_case_matrix(config)
    return BlockingMatrix.all_ones(rows, config.horizon)


def _sha256(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def _write_output(out: str | None, text: str) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, config: SystemConfig, payload: dict, seed: int | None = None) -> None:
    body = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    envelope = {
        "provenance": {
            "tool": "aoijam",
            "config": config.to_dict(),
            "seed": seed,
            "content_sha256": _sha256(body),
        },
        "payload": payload,
    }
    _write_output(args.out, json.dumps(envelope, sort_keys=True, separators=(",", ":")) + "\n")


def _emit_csv(
    args,
    config: SystemConfig,
    body: str,
    seed: int | None = None,
    extra_comments: dict | None = None,
) -> None:
    lines = [
        "# tool=aoijam",
        "# config=" + json.dumps(config.to_dict(), sort_keys=True, separators=(",", ":")),
        f"# seed={'' if seed is None else seed}",
        f"# content_sha256={_sha256(body)}",
    ]
    for key, value in (extra_comments or {}).items():
        lines.append(f"# {key}={value}")
    _write_output(args.out, "\n".join(lines) + "\n" + body)


def _fraction_fields(value) -> dict:
    return {"num": str(value.numerator), "den": str(value.denominator), "float": float(value)}


def cmd_exact(args) -> int:
    config = _config_from_args(args)
    sigma = _resolve_matrix(config, args)
    if config.n_subcarriers is None:
        trajectory = age_by_recursion(config, sigma)
    else:
        trajectory = age_by_recursion_subcarrier(config, sigma)
    raw = objective(config, trajectory, "raw")
    shifted = objective(config, trajectory, "shifted")
    if args.format == "json":
        payload = {
            "objective": {"raw": _fraction_fields(raw), "shifted": _fraction_fields(shifted)},
            "trajectory": json.loads(trajectory_to_json(trajectory)),
        }
        _emit_json(args, config, payload)
    else:
        _emit_csv(
            args,
            config,
            trajectory_to_csv(trajectory, "raw"),
            extra_comments={"objective_raw": raw, "objective_shifted": shifted},
        )
    return 0


def cmd_brute(args) -> int:
    config = _config_from_args(args)
    result = brute_force_optimum(config, cap=args.cap, workers=args.workers)
    if args.format == "json":
        _emit_json(args, config, result.to_dict())
    else:
        rows = ["rank,value_num,value_den,value_float,matrix"]
        for rank, matrix in enumerate(result.maximizers, start=1):
            text = "|".join("".join(str(v) for v in row) for row in matrix.entries)
            rows.append(
                f"{rank},{result.best_value.numerator},{result.best_value.denominator},"
                f"{float(result.best_value)},{text}"
            )
        _emit_csv(
            args,
            config,
            "\n".join(rows) + "\n",
            extra_comments={"enumerated_count": result.enumerated_count},
        )
    return 0


def cmd_simulate(args) -> int:
    config = _config_from_args(args)
    comparison = None
    if args.scheme == "round-robin":
        if args.compare:
            raise UsageError("--compare needs the randomized scheduler")
        if args.sigma or args.gen:
            sigma = _resolve_matrix(config, args)
        elif args.adversary == "none":
            sigma = None
        else:
            sigma = "worst_case"
        report = simulate_round_robin(config, adversary=sigma, seed=args.seed)
    else:
        default = "all_ones" if args.adversary == "none" else "worst"
        sigma = _resolve_matrix(config, args, default=default)
        if args.scheme == "subcarrier":
            if config.n_subcarriers is None:
                raise UsageError("--scheme subcarrier needs --nsub")
            report = simulate_randomized_subcarrier(
                config, sigma, args.runs, args.seed, args.workers
            )
        else:
            report = simulate_randomized(config, sigma, args.runs, args.seed, args.workers)
        if args.compare:
            comparison = empirical_vs_exact(
                config, sigma, args.runs, args.seed, args.workers
            )
    if args.format == "json":
        payload = {
            "report": report.to_dict(),
            "comparison": None if comparison is None else comparison.to_dict(),
        }
        _emit_json(args, config, payload, seed=args.seed)
    else:
        extra = None if comparison is None else {
            "comparison_max_std_dev": comparison.max_std_dev,
            "comparison_flagged": comparison.flagged,
        }
        _emit_csv(args, config, report_to_csv(report), seed=args.seed, extra_comments=extra)
    return 1 if comparison is not None and comparison.flagged else 0


def cmd_bounds(args) -> int:
    config = _config_from_args(args)
    table = bounds_table(config)
    if args.format == "json":
        _emit_json(args, config, {"bounds": [report.to_dict() for report in table]})
    else:
        rows = ["name,value_num,value_den,value_float"]
        for report in table:
            rows.append(
                f"{report.name},{report.value.numerator},{report.value.denominator},"
                f"{float(report.value)}"
            )
        _emit_csv(args, config, "\n".join(rows) + "\n")
    return 0


_VARY_KEYS = {"n": "n_users", "t": "horizon", "nsub": "n_subcarriers", "runs": "n_runs"}


def _parse_vary(specs: list[str]) -> list[tuple[str, list[int]]]:
    axes = []
    for spec in specs:
        try:
            key, rng = spec.split("=", 1)
            start, stop, step = (int(p) for p in rng.split(":"))
        except ValueError as exc:
            raise UsageError(f"bad --vary spec {spec!r}; expected key=start:stop:step") from exc
        if key not in _VARY_KEYS:
            raise UsageError(f"--vary key must be one of {sorted(_VARY_KEYS)}, got {key!r}")
        if step < 1 or stop < start:
            raise UsageError(f"empty --vary range in {spec!r}")
        axes.append((key, list(range(start, stop + 1, step))))
    return axes


def _sweep_point_report(args, config: SystemConfig, n_runs: int):
    if args.scheme == "round-robin":
        adversary = None if args.adversary == "none" else "worst_case"
        return simulate_round_robin(config, adversary=adversary, seed=args.seed)
    if args.adversary == "none":
        rows = config.n_subcarriers or config.n_users
        sigma = BlockingMatrix.all_ones(rows, config.horizon)
    else:
        sigma = _worst_case_matrix(config)
    if args.scheme == "subcarrier":
        if config.n_subcarriers is None:
            raise UsageError("--scheme subcarrier needs --nsub (fixed or varied)")
        return simulate_randomized_subcarrier(config, sigma, n_runs, args.seed, args.workers)
    return simulate_randomized(config, sigma, n_runs, args.seed, args.workers)


def cmd_sweep(args) -> int:
    base = _config_from_args(args)
    axes = _parse_vary(args.vary or [])
    if not axes:
        raise UsageError("sweep needs at least one --vary axis")
    size = 1
    for _, values in axes:
        size *= len(values)
    if size > args.max_points:
        raise OverCapError(size, args.max_points)

    points = []
    for combo in itertools.product(*(values for _, values in axes)):
        overrides = dict(zip((key for key, _ in axes), combo))
        config = SystemConfig(
            n_users=overrides.get("n", base.n_users),
            horizon=overrides.get("t", base.horizon),
            alpha=base.alpha,
            n_subcarriers=overrides.get("nsub", base.n_subcarriers),
        )
        n_runs = overrides.get("runs", args.runs)
        report = _sweep_point_report(args, config, n_runs)
        point = {
            "n": config.n_users,
            "t": config.horizon,
            "alpha": str(config.alpha),
            "nsub": config.n_subcarriers,
            "scheme": args.scheme,
            "runs": report.n_runs,
            "seed": args.seed,
            "mean": report.empirical_overall_mean,
            "std_error": report.std_error,
            "deterministic_lb": float(deterministic_lower_bound(config.horizon, config.alpha)),
            "randomized_lb": float(
                randomized_lower_bound(config.horizon, config.alpha, config.n_users)
            ),
            "single_channel_ub": float(
                single_channel_upper_bound(config.horizon, config.n_users)
            ),
            "subcarrier_ub": (
                None
                if config.n_subcarriers is None
                else float(subcarrier_upper_bound(config.n_users, config.n_subcarriers))
            ),
            "diversity_lb": (
                None
                if config.n_subcarriers is None
                else float(diversity_lower_bound(config.n_users))
            ),
        }
        points.append(point)

    if args.format == "json":
        _emit_json(args, base, {"points": points}, seed=args.seed)
    else:
        columns = [
            "n", "t", "alpha", "nsub", "scheme", "runs", "seed", "mean", "std_error",
            "deterministic_lb", "randomized_lb", "single_channel_ub",
            "subcarrier_ub", "diversity_lb",
        ]
        rows = [",".join(columns)]
        for point in points:
            rows.append(
                ",".join("" if point[c] is None else str(point[c]) for c in columns)
            )
        _emit_csv(args, base, "\n".join(rows) + "\n", seed=args.seed)
    return 0


def cmd_verify(args) -> int:
    results = run_all(workers=args.workers)
    text = results_to_text(results) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    sys.stdout.write(text)
    return 0 if all_passed(results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aoijam",
        description="Exact and Monte Carlo age-of-information analysis under jamming.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    config_flags = argparse.ArgumentParser(add_help=False)
    config_flags.add_argument("--n", type=int, default=2, help="number of users")
    config_flags.add_argument("--t", type=int, default=10, help="horizon in slots")
    config_flags.add_argument(
        "--alpha", default="0", help="jamming budget fraction, e.g. 0.2 or 1/5"
    )
    config_flags.add_argument(
        "--nsub", type=int, default=None, help="sub-carriers (enables the diversity model)"
    )

    io_flags = argparse.ArgumentParser(add_help=False)
    io_flags.add_argument("--out", default=None, help="write to this file instead of stdout")
    io_flags.add_argument("--format", choices=("json", "csv"), default="json")

    worker_flags = argparse.ArgumentParser(add_help=False)
    worker_flags.add_argument(
        "--workers", type=int, default=_default_workers(),
        help="parallel workers (default AOIJAM_WORKERS or 1)",
    )

    matrix_flags = argparse.ArgumentParser(add_help=False)
    matrix_flags.add_argument("--sigma", default=None, help="file with a 0/1 matrix, one row per line")
    matrix_flags.add_argument(
        "--gen", default=None,
        help="cbs:<row>:<start>:<len> | centered:<row>:<len> | twoblock:<row>:<s1>:<l1>:<s2>:<l2>",
    )

    p_exact = sub.add_parser(
        "exact", parents=[config_flags, io_flags, matrix_flags],
        help="exact trajectory and objective for one attack",
    )
    p_exact.set_defaults(func=cmd_exact)

    p_brute = sub.add_parser(
        "brute", parents=[config_flags, io_flags, worker_flags],
        help="exhaustive search for optimal attacks",
    )
    p_brute.add_argument("--cap", type=int, default=10**8, help="candidate-count cap")
    p_brute.set_defaults(func=cmd_brute)

    p_sim = sub.add_parser(
        "simulate", parents=[config_flags, io_flags, worker_flags, matrix_flags],
        help="Monte Carlo simulation",
    )
    p_sim.add_argument("--runs", type=int, default=10_000)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument(
        "--scheme", choices=("randomized", "subcarrier", "round-robin"), default="randomized"
    )
    p_sim.add_argument(
        "--adversary", choices=("worst", "none"), default="worst",
        help="attack to use when no --sigma/--gen is given",
    )
    p_sim.add_argument(
        "--compare", action="store_true",
        help="also standardize per-slot means against the exact engine (exit 1 if >4 SE off)",
    )
    p_sim.set_defaults(func=cmd_simulate)

    p_bounds = sub.add_parser(
        "bounds", parents=[config_flags, io_flags], help="closed-form bounds for a config"
    )
    p_bounds.set_defaults(func=cmd_bounds)

    p_sweep = sub.add_parser(
        "sweep", parents=[config_flags, io_flags, worker_flags],
        help="run a scheme over a grid of integer parameters",
    )
    p_sweep.add_argument("--runs", type=int, default=10_000)
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument(
        "--scheme", choices=("randomized", "subcarrier", "round-robin"), default="randomized"
    )
    p_sweep.add_argument("--adversary", choices=("worst", "none"), default="worst")
    p_sweep.add_argument(
        "--vary", action="append", metavar="KEY=START:STOP:STEP",
        help="axis over n, t, nsub, or runs; repeatable, stop inclusive",
    )
    p_sweep.add_argument("--max-points", type=int, default=1000)
    p_sweep.set_defaults(func=cmd_sweep)

    p_verify = sub.add_parser(
        "verify", parents=[worker_flags], help="certify structural claims exactly"
    )
    p_verify.add_argument("--out", default=None, help="also write the report here")
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code is None:
            return 0
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"aoijam: error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"aoijam: error: {exc}", file=sys.stderr)
        return 2
    except OverCapError as exc:
        print(f"aoijam: error: {exc}", file=sys.stderr)
        return 4
    except (FeasibilityError, ShapeMismatchError) as exc:
        print(f"aoijam: error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"aoijam: error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main(sys.argv[1:]))
