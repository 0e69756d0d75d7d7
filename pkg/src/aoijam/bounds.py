"""Closed-form bounds on the long-run mean age under budgeted jamming, plus
the renewal-reward quantities behind the single-channel upper bound.

All formulas return exact rationals.  Notation: T is the horizon, N the user
count, alpha the jamming rate, C the sub-carrier count, q the per-slot
success probability of one user.

- The deterministic-scheduler lower bound T*alpha**2/2 comes from a jammer
  that blanks whichever user is served for floor(alpha*T) consecutive slots;
  the randomized-scheduler lower bound divides it by N.
- The single-channel upper bound (T+1)/(2N) + (N-1) charges the jammed user
  a worst case of age t at slot t and every other user its renewal mean N.
- The sub-carrier upper bound N*C/(C-1) is the renewal mean when one
  sub-carrier is blanked every slot; the matching lower bound is N/2 + 1/2.

``budget_upper_bound_diagnostic`` is a non-asymptotic refinement reported for
diagnosis only (it is NOT one of the headline bounds): it charges the jammed
user its renewal mean except during the blocked window (+1 per blocked slot,
geometric decay afterwards) and is capped by the baseline bound.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from .model import SystemConfig, as_fraction

BoundName = Literal[
    "deterministic_lb",
    "randomized_lb",
    "single_channel_ub",
    "single_channel_ub_budget_diag",
    "subcarrier_ub",
    "diversity_lb",
    "ratio_single",
    "ratio_subcarrier",
]

_RATIO_NAMES = ("ratio_single", "ratio_subcarrier")


@dataclass(frozen=True)
class BoundReport:
    """One named bound value with the inputs it was computed from."""

    name: BoundName
    value: Fraction
    inputs: dict

    def __post_init__(self) -> None:
        if self.value < 0:
            raise ValueError(f"bound {self.name} must be >= 0, got {self.value}")
        if self.name in _RATIO_NAMES and self.value < 1:
            raise ValueError(f"ratio {self.name} must be >= 1, got {self.value}")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "value": {
                "num": str(self.value.numerator),
                "den": str(self.value.denominator),
                "float": float(self.value),
            },
            "inputs": dict(self.inputs),
        }


def _check_horizon_alpha(horizon: int, alpha: Fraction) -> None:
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    if not 0 <= alpha <= 1:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")


def deterministic_lower_bound(
    horizon: int, alpha: Fraction | int | str | float
) -> Fraction:
    """T * alpha**2 / 2: floor for any deterministic schedule under jamming."""
    a = as_fraction(alpha)
    _check_horizon_alpha(horizon, a)
    return Fraction(horizon) * a * a / 2


def randomized_lower_bound(
    horizon: int, alpha: Fraction | int | str | float, n_users: int
) -> Fraction:
    """T * alpha**2 / (2N): floor for the uniform random scheduler."""
    if n_users < 1:
        raise ValueError(f"n_users must be >= 1, got {n_users}")
    return deterministic_lower_bound(horizon, alpha) / n_users


def single_channel_upper_bound(horizon: int, n_users: int) -> Fraction:
    """(T+1)/(2N) + (N-1): ceiling for the uniform random scheduler."""
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    if n_users < 1:
        raise ValueError(f"n_users must be >= 1, got {n_users}")
    return Fraction(horizon + 1, 2 * n_users) + (n_users - 1)


def budget_upper_bound_diagnostic(
    horizon: int, n_users: int, alpha: Fraction | int | str | float
) -> Fraction:
    """Budget-aware refinement of the single-channel ceiling (diagnostic only).

    With b = floor(alpha*T) blocked slots in one window, the jammed user's
    expected age is at most N before the window, grows by 1 per blocked slot,
    and decays geometrically back to N afterwards, giving

        N + (b*(b+1)/2 + b*(N-1)) / (N*T),

    capped by the baseline bound.  Valid for the raw-convention mean.
    """
    a = as_fraction(alpha)
    _check_horizon_alpha(horizon, a)
    if n_users < 1:
        raise ValueError(f"n_users must be >= 1, got {n_users}")
    b = math.floor(a * horizon)
    refined = n_users + Fraction(b * (b + 1), 2 * n_users * horizon) + Fraction(
        b * (n_users - 1), n_users * horizon
    )
    return min(refined, single_channel_upper_bound(horizon, n_users))


def cycle_cost(tau_tr: int, tau_ntr: int) -> Fraction:
    """Age accumulated over one renewal cycle: tau_tr slots held at age 1
    followed by tau_ntr slots of linear growth 2, 3, ...:

        tau_tr + tau_ntr**2 / 2 + 3 * tau_ntr / 2.
    """
    if tau_tr < 0 or tau_ntr < 0:
        raise ValueError("cycle segment lengths cannot be negative")
    return Fraction(tau_tr) + Fraction(tau_ntr**2, 2) + Fraction(3 * tau_ntr, 2)


@dataclass(frozen=True)
class RenewalQuantities:
    """Exact renewal-reward summary for per-slot success probability q."""

    expected_cycle_cost: Fraction
    expected_cycle_length: Fraction
    long_run_age: Fraction


def renewal_quantities(q: Fraction | int | str | float) -> RenewalQuantities:
    """E[cycle cost] = 1/(q^2 (1-q)), E[cycle length] = 1/(q (1-q)), and their
    ratio 1/q, the long-run mean age of a user served with probability q."""
    prob = as_fraction(q)
    if not 0 < prob < 1:
        raise ValueError(f"q must lie strictly inside (0, 1), got {prob}")
    cost = 1 / (prob * prob * (1 - prob))
    length = 1 / (prob * (1 - prob))
    return RenewalQuantities(
        expected_cycle_cost=cost,
        expected_cycle_length=length,
        long_run_age=cost / length,
    )


def subcarrier_upper_bound(n_users: int, n_subcarriers: int) -> Fraction:
    """N*C/(C-1): ceiling when one of C sub-carriers is blanked every slot."""
    if n_users < 1:
        raise ValueError(f"n_users must be >= 1, got {n_users}")
    if n_subcarriers < 2:
        raise ValueError(f"n_subcarriers must be >= 2, got {n_subcarriers}")
    return Fraction(n_users * n_subcarriers, n_subcarriers - 1)


def diversity_lower_bound(n_users: int) -> Fraction:
    """N/2 + 1/2: floor for the sub-carrier model."""
    if n_users < 1:
        raise ValueError(f"n_users must be >= 1, got {n_users}")
    return Fraction(n_users, 2) + Fraction(1, 2)


@dataclass(frozen=True)
class OptimalityRatios:
    """Upper/lower bound ratios, finite-horizon and asymptotic."""

    single_finite: Fraction
    single_asymptotic: Fraction
    subcarrier_finite: Fraction | None
    subcarrier_asymptotic: Fraction | None


def optimality_ratios(config: SystemConfig) -> OptimalityRatios:
    """Bound ratios for a config; asymptotics are 1/alpha**2 and 2C/(C-1).

    alpha == 0 makes the single-channel ratio undefined and raises.
    """
    if config.alpha == 0:
        raise ValueError("optimality ratio undefined at alpha = 0")
    single_finite = single_channel_upper_bound(
        config.horizon, config.n_users
    ) / randomized_lower_bound(config.horizon, config.alpha, config.n_users)
    single_asymptotic = 1 / (config.alpha * config.alpha)
    if config.n_subcarriers is None:
        sub_finite = None
        sub_asymptotic = None
    else:
        sub_finite = subcarrier_upper_bound(
            config.n_users, config.n_subcarriers
        ) / diversity_lower_bound(config.n_users)
        sub_asymptotic = Fraction(2 * config.n_subcarriers, config.n_subcarriers - 1)
    return OptimalityRatios(
        single_finite=single_finite,
        single_asymptotic=single_asymptotic,
        subcarrier_finite=sub_finite,
        subcarrier_asymptotic=sub_asymptotic,
    )


def bounds_table(config: SystemConfig) -> list[BoundReport]:
    """Every bound applicable to the config, as named reports."""
    base_inputs = {
        "n_users": config.n_users,
        "horizon": config.horizon,
        "alpha": str(config.alpha),
    }
    reports = [
        BoundReport(
            "deterministic_lb",
            deterministic_lower_bound(config.horizon, config.alpha),
            base_inputs,
        ),
        BoundReport(
            "randomized_lb",
            randomized_lower_bound(config.horizon, config.alpha, config.n_users),
            base_inputs,
        ),
        BoundReport(
            "single_channel_ub",
            single_channel_upper_bound(config.horizon, config.n_users),
            base_inputs,
        ),
        BoundReport(
            "single_channel_ub_budget_diag",
            budget_upper_bound_diagnostic(config.horizon, config.n_users, config.alpha),
            base_inputs,
        ),
    ]
    if config.n_subcarriers is not None:
        sub_inputs = dict(base_inputs, n_subcarriers=config.n_subcarriers)
        reports.append(
            BoundReport(
                "subcarrier_ub",
                subcarrier_upper_bound(config.n_users, config.n_subcarriers),
                sub_inputs,
            )
        )
        reports.append(
            BoundReport("diversity_lb", diversity_lower_bound(config.n_users), sub_inputs)
        )
    if config.alpha > 0:
        ratios = optimality_ratios(config)
        reports.append(BoundReport("ratio_single", ratios.single_finite, base_inputs))
        if ratios.subcarrier_finite is not None:
            reports.append(
                BoundReport(
                    "ratio_subcarrier",
                    ratios.subcarrier_finite,
                    dict(base_inputs, n_subcarriers=config.n_subcarriers),
                )
            )
    return reports


def bounds_table_to_json(reports: list[BoundReport]) -> str:
    return json.dumps(
        [r.to_dict() for r in reports], sort_keys=True, separators=(",", ":")
    )
