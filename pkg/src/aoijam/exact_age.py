"""Exact expected-age engines for the uniform random scheduler.

With u users, a clear slot retains a (u-1)/u share of the expected age and a
blocked slot retains all of it, so the per-user expectation obeys

    age(t+1) = age(t) * m(t) + 1,    age(1) = 1,

where m(t) = 1 - sigma(t)/u is the slot's retention factor.  Unrolling the
recursion writes age(t+1) as 1 plus a sum of "trains": products of retention
factors over the intervals [k, t] for k = 1..t.  Both routes are implemented
independently and must agree exactly; everything is computed with
fractions.Fraction, never floats.

In the diversity model the retention factor is shared by all users:
m(t) = 1 - s(t)/(u * c) for c sub-carriers of which s(t) are clear.

Two slot conventions are exposed (see AgeTrajectory): "raw" keeps age 1 at
slot 1 and is what a simulator measures; "shifted" attributes the value
driven by blocking decisions 1..t to slot t, so the last slot's decision
still matters in the horizon mean.  Adversary certification uses "shifted",
simulator-facing comparisons use "raw".
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Sequence

from .model import (
    AgeTrajectory,
    BlockingMatrix,
    Convention,
    ShapeMismatchError,
    SystemConfig,
    ensure_feasible,
)


def _require_user_shape(config: SystemConfig, sigma: BlockingMatrix) -> None:
    if sigma.rows != config.n_users or sigma.horizon != config.horizon:
        raise ShapeMismatchError(
            f"expected a {config.n_users}x{config.horizon} user matrix, got "
            f"{sigma.rows}x{sigma.horizon}"
        )


def _require_subcarrier_shape(config: SystemConfig, sigma: BlockingMatrix) -> None:
    if config.n_subcarriers is None:
        raise ValueError("config has no n_subcarriers; not a diversity-model instance")
    if sigma.rows != config.n_subcarriers or sigma.horizon != config.horizon:
        raise ShapeMismatchError(
            f"expected a {config.n_subcarriers}x{config.horizon} sub-carrier "
            f"matrix, got {sigma.rows}x{sigma.horizon}"
        )


def row_multipliers(n_users: int, row: Sequence[int]) -> tuple[Fraction, ...]:
    """Per-slot retention factors for one user's blocking row."""
    clear = Fraction(n_users - 1, n_users)
    return tuple(clear if s else Fraction(1) for s in row)


def subcarrier_multipliers(config: SystemConfig, sigma: BlockingMatrix) -> tuple[Fraction, ...]:
    """Per-slot retention factors shared by all users in the diversity model."""
    _require_subcarrier_shape(config, sigma)
    ensure_feasible(config, sigma)
    n_sub = config.n_subcarriers
    denom = config.n_users * n_sub
    factors = []
    for blocked in sigma.column_zero_counts():
        clear_subcarriers = n_sub - blocked
        factors.append(Fraction(denom - clear_subcarriers, denom))
    return tuple(factors)


def _recursion_values(multipliers: Sequence[Fraction]) -> tuple[Fraction, ...]:
    values = [Fraction(1)]
    for m in multipliers:
        values.append(values[-1] * m + 1)
    return tuple(values)


def _train_values(multipliers: Sequence[Fraction]) -> tuple[Fraction, ...]:
    # Independent route: for each t, sum the train products over [k, t].
    values = [Fraction(1)]
    for t in range(1, len(multipliers) + 1):
        total = Fraction(0)
        product = Fraction(1)
        for j in range(t - 1, -1, -1):
            product *= multipliers[j]
            total += product
        values.append(total + 1)
    return tuple(values)


def train_value(
    config: SystemConfig, sigma_row: Sequence[int], start: int, end: int
) -> Fraction:
    """Product of retention factors over slots start..end (1-based, inclusive)."""
    horizon = len(sigma_row)
    if start > end:
        raise ValueError(f"train start {start} exceeds end {end}")
    if start < 1 or end > horizon:
        raise ValueError(f"train [{start}, {end}] outside 1..{horizon}")
    multipliers = row_multipliers(config.n_users, sigma_row)
    product = Fraction(1)
    for j in range(start - 1, end):
        product *= multipliers[j]
    return product


def subcarrier_train_value(
    config: SystemConfig, sigma: BlockingMatrix, start: int, end: int
) -> Fraction:
    """Diversity-model train: product of shared retention factors over start..end."""
    multipliers = subcarrier_multipliers(config, sigma)
    if start > end:
        raise ValueError(f"train start {start} exceeds end {end}")
    if start < 1 or end > len(multipliers):
        raise ValueError(f"train [{start}, {end}] outside 1..{len(multipliers)}")
    product = Fraction(1)
    for j in range(start - 1, end):
        product *= multipliers[j]
    return product


def age_by_recursion(config: SystemConfig, sigma: BlockingMatrix) -> AgeTrajectory:
    """Exact trajectory via the one-step recursion, one row per user."""
    _require_user_shape(config, sigma)
    ensure_feasible(config, sigma)
    return AgeTrajectory(
        tuple(
            _recursion_values(row_multipliers(config.n_users, row))
            for row in sigma.entries
        )
    )


def age_by_trains(config: SystemConfig, sigma: BlockingMatrix) -> AgeTrajectory:
    """Exact trajectory via train sums; must equal age_by_recursion exactly."""
    _require_user_shape(config, sigma)
    ensure_feasible(config, sigma)
    return AgeTrajectory(
        tuple(
            _train_values(row_multipliers(config.n_users, row))
            for row in sigma.entries
        )
    )


def age_by_recursion_subcarrier(config: SystemConfig, sigma: BlockingMatrix) -> AgeTrajectory:
    """Diversity-model trajectory: the shared recursion replicated per user."""
    shared = _recursion_values(subcarrier_multipliers(config, sigma))
    return AgeTrajectory(tuple(shared for _ in range(config.n_users)))


def age_by_trains_subcarrier(config: SystemConfig, sigma: BlockingMatrix) -> AgeTrajectory:
    """Diversity-model trajectory via train sums (independent route)."""
    shared = _train_values(subcarrier_multipliers(config, sigma))
    return AgeTrajectory(tuple(shared for _ in range(config.n_users)))


def row_age_total(
    n_users: int, sigma_row: Sequence[int], convention: Convention = "shifted"
) -> Fraction:
    """Sum of one user's ages over the horizon under a convention.

    Single-row helper for blocking-shape comparisons, where only the touched
    user's total moves.
    """
    values = _recursion_values(row_multipliers(n_users, sigma_row))
    seq = values[:-1] if convention == "raw" else values[1:]
    return sum(seq, Fraction(0))


def objective(
    config: SystemConfig, trajectory: AgeTrajectory, convention: Convention = "raw"
) -> Fraction:
    """Finite-horizon objective: mean age over users and slots, exact."""
    if trajectory.n_users != config.n_users or trajectory.horizon != config.horizon:
        raise ShapeMismatchError(
            f"trajectory is {trajectory.n_users}x{trajectory.horizon}, config "
            f"wants {config.n_users}x{config.horizon}"
        )
    return trajectory.overall_mean(convention)


# -------- trajectory export --------


def trajectory_to_csv(trajectory: AgeTrajectory, convention: Convention = "raw") -> str:
    """CSV rows (t, user, delta_exact_num, delta_exact_den, delta_float)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", "user", "delta_exact_num", "delta_exact_den", "delta_float"])
    for user in range(1, trajectory.n_users + 1):
        vals = trajectory.user_values(user, convention)
        for t, v in enumerate(vals, start=1):
            writer.writerow([t, user, v.numerator, v.denominator, float(v)])
    return buf.getvalue()


def trajectory_to_json(trajectory: AgeTrajectory) -> str:
    """JSON with both conventions, exact numerators/denominators as strings."""
    def encode(convention: Convention) -> list[list[dict]]:
        return [
            [
                {"num": str(v.numerator), "den": str(v.denominator), "float": float(v)}
                for v in trajectory.user_values(user, convention)
            ]
            for user in range(1, trajectory.n_users + 1)
        ]

    payload = {
        "n_users": trajectory.n_users,
        "horizon": trajectory.horizon,
        "raw": encode("raw"),
        "shifted": encode("shifted"),
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))
