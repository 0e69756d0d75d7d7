"""Monte Carlo simulation of the uniform random scheduler (and a round-robin
baseline) under jamming, with exact-engine cross-checks.

Randomness is counter-based: runs are grouped into fixed-size blocks (a pure
function of the horizon) and block b of a batch seeded with s draws from a
Philox stream keyed by (s, b).  Reports are therefore reproducible from the
seed alone and independent of the worker count; blocks are embarrassingly
parallel and their (count, sum, sum-of-squares) partials merge in block
order.

A run realizes one age process: every slot the scheduler picks a user
uniformly (and, in the diversity model, a sub-carrier uniformly); the picked
user's age resets to 1 in the next slot unless the slot was jammed.  Ages are
recorded at slots 1..horizon starting from age 1, the "raw" convention of the
exact engines, so empirical per-slot means estimate age_by_recursion values
directly.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._parallel import map_ordered
from .model import (
    BlockingMatrix,
    ShapeMismatchError,
    SimulationReport,
    SystemConfig,
    ensure_feasible,
)
from .exact_age import age_by_recursion, age_by_recursion_subcarrier

_BLOCK_TARGET_ELEMENTS = 2_000_000
_MAX_BLOCK_RUNS = 65_536


def _block_runs(horizon: int) -> int:
    return max(1, min(_MAX_BLOCK_RUNS, _BLOCK_TARGET_ELEMENTS // horizon))


def _block_layout(n_runs: int, horizon: int) -> list[tuple[int, int, int]]:
    """(block_index, first_run, count) triples covering 0..n_runs-1."""
    size = _block_runs(horizon)
    layout = []
    start = 0
    index = 0
    while start < n_runs:
        count = min(size, n_runs - start)
        layout.append((index, start, count))
        start += count
        index += 1
    return layout


def _block_rng(seed: int, block_index: int) -> np.random.Generator:
    key = np.array([seed & (2**64 - 1), block_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _ages_for_user(choices: np.ndarray, user_index: int, row: np.ndarray) -> np.ndarray:
    """(runs, horizon) realized ages of one 0-based user given scheduler picks.

    ``row`` marks the slots where a pick of this user actually lands (clear
    slots in the single-channel model, per-run clear indicators in the
    diversity model)."""
    runs, horizon = choices.shape
    success = (choices == user_index) & (row == 1)
    slots = np.arange(1, horizon + 1, dtype=np.int64)
    success_time = np.where(success, slots, 0)
    last = np.maximum.accumulate(success_time, axis=1)
    previous = np.empty_like(last)
    previous[:, 0] = 0
    previous[:, 1:] = last[:, :-1]
    return slots[None, :] - previous


def _draw_single(seed: int, block_index: int, count: int, horizon: int, n_users: int) -> np.ndarray:
    rng = _block_rng(seed, block_index)
    return rng.integers(0, n_users, size=(count, horizon), dtype=np.int64)


def _draw_subcarrier(
    seed: int, block_index: int, count: int, horizon: int, n_users: int, n_sub: int
) -> tuple[np.ndarray, np.ndarray]:
    rng = _block_rng(seed, block_index)
    users = rng.integers(0, n_users, size=(count, horizon), dtype=np.int64)
    subs = rng.integers(0, n_sub, size=(count, horizon), dtype=np.int64)
    return users, subs


def _clear_matrix_for_subcarrier(
    sub_choices: np.ndarray, sigma_entries: tuple[tuple[int, ...], ...]
) -> np.ndarray:
    """Per (run, slot) indicator that the chosen sub-carrier was clear."""
    sigma_arr = np.array(sigma_entries, dtype=np.int64)
    horizon = sub_choices.shape[1]
    return sigma_arr[sub_choices, np.arange(horizon)[None, :]]


def _sim_block_single(args) -> tuple[int, np.ndarray, float, float]:
    seed, block_index, _first, count, horizon, n_users, sigma_entries = args
    choices = _draw_single(seed, block_index, count, horizon, n_users)
    per_user = np.empty((count, n_users), dtype=np.float64)
    for u in range(n_users):
        row = np.array(sigma_entries[u], dtype=np.int64)
        per_user[:, u] = _ages_for_user(choices, u, row).mean(axis=1)
    overall = per_user.mean(axis=1)
    return count, per_user.sum(axis=0), float(overall.sum()), float((overall**2).sum())


def _sim_block_subcarrier(args) -> tuple[int, np.ndarray, float, float]:
    seed, block_index, _first, count, horizon, n_users, n_sub, sigma_entries = args
    users, subs = _draw_subcarrier(seed, block_index, count, horizon, n_users, n_sub)
    clear = _clear_matrix_for_subcarrier(subs, sigma_entries)
    effective = np.where(clear == 1, users, -1)
    ones = np.ones(horizon, dtype=np.int64)
    per_user = np.empty((count, n_users), dtype=np.float64)
    for u in range(n_users):
        per_user[:, u] = _ages_for_user(effective, u, ones).mean(axis=1)
    overall = per_user.mean(axis=1)
    return count, per_user.sum(axis=0), float(overall.sum()), float((overall**2).sum())


def _cmp_block_single(args) -> tuple[int, np.ndarray, np.ndarray]:
    seed, block_index, _first, count, horizon, n_users, sigma_entries = args
    choices = _draw_single(seed, block_index, count, horizon, n_users)
    sums = np.empty((n_users, horizon), dtype=np.float64)
    sumsq = np.empty((n_users, horizon), dtype=np.float64)
    for u in range(n_users):
        row = np.array(sigma_entries[u], dtype=np.int64)
        ages = _ages_for_user(choices, u, row).astype(np.float64)
        sums[u] = ages.sum(axis=0)
        sumsq[u] = (ages**2).sum(axis=0)
    return count, sums, sumsq


def _cmp_block_subcarrier(args) -> tuple[int, np.ndarray, np.ndarray]:
    seed, block_index, _first, count, horizon, n_users, n_sub, sigma_entries = args
    users, subs = _draw_subcarrier(seed, block_index, count, horizon, n_users, n_sub)
    clear = _clear_matrix_for_subcarrier(subs, sigma_entries)
    effective = np.where(clear == 1, users, -1)
    ones = np.ones(horizon, dtype=np.int64)
    sums = np.empty((n_users, horizon), dtype=np.float64)
    sumsq = np.empty((n_users, horizon), dtype=np.float64)
    for u in range(n_users):
        ages = _ages_for_user(effective, u, ones).astype(np.float64)
        sums[u] = ages.sum(axis=0)
        sumsq[u] = (ages**2).sum(axis=0)
    return count, sums, sumsq


def _merge_sim_blocks(
    scheme: str, results, n_users: int, n_runs: int, seed: int
) -> SimulationReport:
    total = 0
    user_sums = np.zeros(n_users, dtype=np.float64)
    overall_sum = 0.0
    overall_sumsq = 0.0
    for count, per_user_sum, o_sum, o_sumsq in results:
        total += count
        user_sums += per_user_sum
        overall_sum += o_sum
        overall_sumsq += o_sumsq
    mean = overall_sum / total
    if total > 1:
        variance = max(0.0, (overall_sumsq - overall_sum**2 / total) / (total - 1))
        std_error = math.sqrt(variance / total)
    else:
        std_error = 0.0
    return SimulationReport(
        scheme=scheme,
        empirical_overall_mean=mean,
        empirical_per_user_mean=tuple(user_sums / total),
        std_error=std_error,
        n_runs=n_runs,
        seed=seed,
    )


def simulate_randomized(
    config: SystemConfig,
    sigma: BlockingMatrix,
    n_runs: int,
    seed: int,
    workers: int = 1,
) -> SimulationReport:
    """Batch of independent runs of the uniform random scheduler."""
    if n_runs < 1:
        raise ValueError(f"n_runs must be >= 1, got {n_runs}")
    if sigma.rows != config.n_users or sigma.horizon != config.horizon:
        raise ShapeMismatchError(
            f"expected a {config.n_users}x{config.horizon} user matrix, got "
            f"{sigma.rows}x{sigma.horizon}"
        )
    ensure_feasible(config, sigma)
    jobs = [
        (seed, b, first, count, config.horizon, config.n_users, sigma.entries)
        for b, first, count in _block_layout(n_runs, config.horizon)
    ]
    results = map_ordered(_sim_block_single, jobs, workers)
    return _merge_sim_blocks("randomized", results, config.n_users, n_runs, seed)


def simulate_randomized_subcarrier(
    config: SystemConfig,
    sigma: BlockingMatrix,
    n_runs: int,
    seed: int,
    workers: int = 1,
) -> SimulationReport:
    """Diversity-model batch: a user and a sub-carrier are picked per slot."""
    if n_runs < 1:
        raise ValueError(f"n_runs must be >= 1, got {n_runs}")
    if config.n_subcarriers is None:
        raise ValueError("config has no n_subcarriers; not a diversity-model instance")
    if sigma.rows != config.n_subcarriers or sigma.horizon != config.horizon:
        raise ShapeMismatchError(
            f"expected a {config.n_subcarriers}x{config.horizon} sub-carrier "
            f"matrix, got {sigma.rows}x{sigma.horizon}"
        )
    ensure_feasible(config, sigma)
    jobs = [
        (
            seed,
            b,
            first,
            count,
            config.horizon,
            config.n_users,
            config.n_subcarriers,
            sigma.entries,
        )
        for b, first, count in _block_layout(n_runs, config.horizon)
    ]
    results = map_ordered(_sim_block_subcarrier, jobs, workers)
    return _merge_sim_blocks(
        "randomized_subcarrier", results, config.n_users, n_runs, seed
    )


def worst_case_round_robin_matrix(
    config: SystemConfig, block_start: int | None = None
) -> BlockingMatrix:
    """Jam whichever user round robin serves, for budget consecutive slots.

    The window defaults to the centered placement (one extra clear slot on
    the right when the slack is odd).
    """
    budget = config.budget()
    horizon = config.horizon
    if block_start is None:
        block_start = (horizon - budget) // 2 + 1
    if budget > 0 and not 1 <= block_start <= horizon - budget + 1:
        raise ValueError(
            f"window start {block_start} does not fit budget {budget} in 1..{horizon}"
        )
    zeros = []
    for t in range(block_start, block_start + budget):
        served = (t - 1) % config.n_users + 1
        zeros.append((served, t))
    return BlockingMatrix.from_zeros(config.n_users, horizon, zeros)


def simulate_round_robin(
    config: SystemConfig,
    adversary: BlockingMatrix | str | None = "worst_case",
    n_runs: int = 1,
    seed: int = 0,
    block_start: int | None = None,
) -> SimulationReport:
    """Deterministic round-robin baseline; n_runs collapses to 1.

    adversary is a BlockingMatrix, "worst_case" (jam the served user for
    budget consecutive slots, centered by default), or None for no jamming.
    """
    if adversary is None:
        sigma = BlockingMatrix.all_ones(config.n_users, config.horizon)
    elif isinstance(adversary, str):
        if adversary != "worst_case":
            raise ValueError(f"unknown adversary mode {adversary!r}")
        sigma = worst_case_round_robin_matrix(config, block_start)
    else:
        sigma = adversary
    if sigma.rows != config.n_users or sigma.horizon != config.horizon:
        raise ShapeMismatchError(
            f"expected a {config.n_users}x{config.horizon} user matrix, got "
            f"{sigma.rows}x{sigma.horizon}"
        )
    ensure_feasible(config, sigma)

    n = config.n_users
    horizon = config.horizon
    ages = [1] * n
    totals = [0] * n
    for t in range(1, horizon + 1):
        for u in range(n):
            totals[u] += ages[u]
        served = (t - 1) % n
        if sigma.entries[served][t - 1] == 1:
            next_served_age = 1
        else:
            next_served_age = ages[served] + 1
        for u in range(n):
            ages[u] = ages[u] + 1
        ages[served] = next_served_age
    per_user = tuple(total / horizon for total in totals)
    return SimulationReport(
        scheme="round_robin",
        empirical_overall_mean=sum(per_user) / n,
        empirical_per_user_mean=per_user,
        std_error=0.0,
        n_runs=1,
        seed=seed,
    )


@dataclass(frozen=True)
class ComparisonReport:
    """Standardized per-slot deviation of a simulated batch from exact values."""

    scheme: str
    n_runs: int
    seed: int
    max_std_dev: float
    worst_user: int
    worst_slot: int
    flagged: bool
    threshold: float = 4.0

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "n_runs": self.n_runs,
            "seed": self.seed,
            "max_std_dev": self.max_std_dev,
            "worst_user": self.worst_user,
            "worst_slot": self.worst_slot,
            "flagged": self.flagged,
            "threshold": self.threshold,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def empirical_vs_exact(
    config: SystemConfig,
    sigma: BlockingMatrix,
    n_runs: int,
    seed: int,
    workers: int = 1,
    scheme: str | None = None,
) -> ComparisonReport:
    """Compare per-(user, slot) empirical mean ages against the exact engine.

    The deviation is |empirical - exact| / SE with SE the across-run standard
    error; coordinates with SE == 0 score 0 when the means agree exactly and
    inf otherwise.  Deviations above 4 set the flag.
    """
    if n_runs < 2:
        raise ValueError(f"n_runs must be >= 2 to estimate deviations, got {n_runs}")
    if scheme is None:
        scheme = (
            "randomized"
            if sigma.rows == config.n_users
            else "randomized_subcarrier"
        )
    if scheme == "randomized":
        exact = age_by_recursion(config, sigma)
        jobs = [
            (seed, b, first, count, config.horizon, config.n_users, sigma.entries)
            for b, first, count in _block_layout(n_runs, config.horizon)
        ]
        results = map_ordered(_cmp_block_single, jobs, workers)
    elif scheme == "randomized_subcarrier":
        exact = age_by_recursion_subcarrier(config, sigma)
        jobs = [
            (
                seed,
                b,
                first,
                count,
                config.horizon,
                config.n_users,
                config.n_subcarriers,
                sigma.entries,
            )
            for b, first, count in _block_layout(n_runs, config.horizon)
        ]
        results = map_ordered(_cmp_block_subcarrier, jobs, workers)
    else:
        raise ValueError(f"unknown scheme {scheme!r}")

    n_users, horizon = config.n_users, config.horizon
    total = 0
    sums = np.zeros((n_users, horizon), dtype=np.float64)
    sumsq = np.zeros((n_users, horizon), dtype=np.float64)
    for count, block_sums, block_sumsq in results:
        total += count
        sums += block_sums
        sumsq += block_sumsq
    means = sums / total
    variances = np.maximum(0.0, (sumsq - sums**2 / total) / (total - 1))
    std_errors = np.sqrt(variances / total)
    exact_floats = np.array(
        [
            [float(v) for v in exact.user_values(u, "raw")]
            for u in range(1, n_users + 1)
        ],
        dtype=np.float64,
    )
    diffs = np.abs(means - exact_floats)
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(std_errors > 0, diffs / std_errors, np.where(diffs == 0, 0.0, np.inf))
    flat_index = int(np.argmax(z))
    worst_user, worst_slot = divmod(flat_index, horizon)
    max_z = float(z[worst_user, worst_slot])
    return ComparisonReport(
        scheme=scheme,
        n_runs=n_runs,
        seed=seed,
        max_std_dev=max_z,
        worst_user=worst_user + 1,
        worst_slot=worst_slot + 1,
        flagged=bool(max_z > 4.0),
    )


@dataclass(frozen=True)
class RunTrace:
    """One realized run, for debugging and invariant checks."""

    seed: int
    run_index: int
    scheme: str
    choices: tuple[int, ...]
    subcarrier_choices: tuple[int, ...] | None
    ages: tuple[tuple[int, ...], ...]


def sample_traces(
    config: SystemConfig,
    sigma: BlockingMatrix,
    n_traces: int,
    seed: int,
    scheme: str = "randomized",
) -> list[RunTrace]:
    """First n_traces runs of the batch a simulate_* call with the same seed
    would execute, fully materialized."""
    if n_traces < 1:
        raise ValueError(f"n_traces must be >= 1, got {n_traces}")
    ensure_feasible(config, sigma)
    horizon = config.horizon
    traces: list[RunTrace] = []
    for block_index, first, count in _block_layout(n_traces, horizon):
        if scheme == "randomized":
            if sigma.rows != config.n_users:
                raise ShapeMismatchError("single-channel traces need a user matrix")
            choices = _draw_single(seed, block_index, count, horizon, config.n_users)
            subs = None
            age_rows = [
                _ages_for_user(choices, u, np.array(sigma.entries[u], dtype=np.int64))
                for u in range(config.n_users)
            ]
        elif scheme == "randomized_subcarrier":
            if config.n_subcarriers is None or sigma.rows != config.n_subcarriers:
                raise ShapeMismatchError("diversity traces need a sub-carrier matrix")
            choices, subs = _draw_subcarrier(
                seed, block_index, count, horizon, config.n_users, config.n_subcarriers
            )
            clear = _clear_matrix_for_subcarrier(subs, sigma.entries)
            effective = np.where(clear == 1, choices, -1)
            ones = np.ones(horizon, dtype=np.int64)
            age_rows = [
                _ages_for_user(effective, u, ones) for u in range(config.n_users)
            ]
        else:
            raise ValueError(f"unknown scheme {scheme!r}")
        for r in range(count):
            traces.append(
                RunTrace(
                    seed=seed,
                    run_index=first + r,
                    scheme=scheme,
                    choices=tuple(int(v) + 1 for v in choices[r]),
                    subcarrier_choices=(
                        None if subs is None else tuple(int(v) + 1 for v in subs[r])
                    ),
                    ages=tuple(
                        tuple(int(a) for a in age_rows[u][r])
                        for u in range(config.n_users)
                    ),
                )
            )
    return traces


def traces_to_csv(traces: list[RunTrace]) -> str:
    """Compact per-run CSV: one row per (run, slot) with all user ages."""
    if not traces:
        raise ValueError("no traces to export")
    n_users = len(traces[0].ages)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["run", "t", "chosen_user", "chosen_subcarrier"]
        + [f"age_user_{u}" for u in range(1, n_users + 1)]
    )
    for trace in traces:
        horizon = len(trace.choices)
        for t in range(1, horizon + 1):
            sub = "" if trace.subcarrier_choices is None else trace.subcarrier_choices[t - 1]
            writer.writerow(
                [trace.run_index, t, trace.choices[t - 1], sub]
                + [trace.ages[u][t - 1] for u in range(n_users)]
            )
    return buf.getvalue()


def report_to_json(report: SimulationReport) -> str:
    return json.dumps(report.to_dict(), sort_keys=True, separators=(",", ":"))


def report_to_csv(report: SimulationReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["scheme", "n_runs", "seed", "overall_mean", "std_error"] + [
        f"user_{u}_mean" for u in range(1, len(report.empirical_per_user_mean) + 1)
    ]
    writer.writerow(header)
    writer.writerow(
        [report.scheme, report.n_runs, report.seed, report.empirical_overall_mean, report.std_error]
        + list(report.empirical_per_user_mean)
    )
    return buf.getvalue()
