"""Exact-arithmetic certification of the structural claims the package rests
on, over a small grid of instances.

Each claim is checked by exhaustive enumeration with rational arithmetic, so
a PASS is a proof for the grid, not a statistical statement.  All age totals
here use the shifted convention (slot t is credited with the age value it
produces at t+1), under which time reversal is an exact tie and block
centering is exactly monotone; see exact_age for the two conventions.

The grid is deliberately small (n_users 2..3, horizons 6..10, budgets 1..3,
plus sub-carrier instances) so `aoijam verify` finishes in seconds.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .adversary import (
    brute_force_optimum,
    centered_cbs,
    merge_and_center_path,
    power_gap_inequality,
    two_block_row,
    zero_blocks,
)
from .bounds import (
    budget_upper_bound_diagnostic,
    randomized_lower_bound,
    single_channel_upper_bound,
)
from .exact_age import (
    age_by_recursion,
    age_by_recursion_subcarrier,
    age_by_trains,
    age_by_trains_subcarrier,
    row_age_total,
)
from .model import BlockingMatrix, CbsDescriptor, SystemConfig, cbs_to_matrix


@dataclass(frozen=True)
class ClaimResult:
    name: str
    passed: bool
    checked: int
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.detail} ({self.checked} checks)"


def _single_channel_grid() -> list[SystemConfig]:
    grid = []
    for n in (2, 3):
        for horizon in (6, 8, 10):
            for budget in (1, 2, 3):
                grid.append(
                    SystemConfig(
                        n_users=n, horizon=horizon, alpha=Fraction(budget, horizon)
                    )
                )
    return grid


def _subcarrier_grid() -> list[SystemConfig]:
    grid = []
    for n_sub in (2, 3):
        for horizon in (6, 8):
            for budget in (1, 2):
                grid.append(
                    SystemConfig(
                        n_users=2,
                        horizon=horizon,
                        alpha=Fraction(budget, horizon),
                        n_subcarriers=n_sub,
                    )
                )
    return grid


def _random_feasible(rows: int, horizon: int, budget: int, rng: random.Random) -> BlockingMatrix:
    columns = rng.sample(range(1, horizon + 1), min(budget, horizon))
    zeros = [(rng.randrange(1, rows + 1), t) for t in columns]
    return BlockingMatrix.from_zeros(rows, horizon, zeros)


def _centered_windows(horizon: int, length: int) -> set[int]:
    start = (horizon - length) // 2 + 1
    if (horizon - length) % 2 == 0:
        return {start}
    return {start, start + 1}


def check_engine_equivalence() -> ClaimResult:
    """Recursion and train-sum engines agree exactly on every tested matrix."""
    checked = 0
    for config in _single_channel_grid():
        rng = random.Random(1009 * config.n_users + config.horizon + config.budget())
        matrices = [
            BlockingMatrix.all_ones(config.n_users, config.horizon),
            cbs_to_matrix(config, centered_cbs(config, 1, config.budget())),
        ]
        matrices += [
            _random_feasible(config.n_users, config.horizon, config.budget(), rng)
            for _ in range(3)
        ]
        for sigma in matrices:
            if age_by_recursion(config, sigma) != age_by_trains(config, sigma):
                return ClaimResult(
                    "engine_equivalence", False, checked,
                    f"engines disagree on {config.n_users} users, horizon {config.horizon}",
                )
            checked += 1
    for config in _subcarrier_grid():
        rng = random.Random(2003 * config.n_subcarriers + config.horizon + config.budget())
        matrices = [BlockingMatrix.all_ones(config.n_subcarriers, config.horizon)]
        matrices += [
            _random_feasible(config.n_subcarriers, config.horizon, config.budget(), rng)
            for _ in range(3)
        ]
        for sigma in matrices:
            lhs = age_by_recursion_subcarrier(config, sigma)
            rhs = age_by_trains_subcarrier(config, sigma)
            if lhs != rhs:
                return ClaimResult(
                    "engine_equivalence", False, checked,
                    f"sub-carrier engines disagree at horizon {config.horizon}",
                )
            checked += 1
    return ClaimResult(
        "engine_equivalence", True, checked, "recursion == train sums on all instances"
    )


def check_reversal_tie() -> ClaimResult:
    """Reversing a blocking row in time never changes its shifted age total."""
    checked = 0
    for config in _single_channel_grid():
        horizon, n = config.horizon, config.n_users
        rng = random.Random(3001 * n + horizon + config.budget())
        rows = []
        for length in range(1, config.budget() + 1):
            for start in range(1, horizon - length + 2):
                descriptor = CbsDescriptor(row=1, start=start, length=length)
                rows.append(cbs_to_matrix(config, descriptor).row(1))
        rows += [
            _random_feasible(1, horizon, config.budget(), rng).row(1) for _ in range(5)
        ]
        for row in rows:
            forward = row_age_total(n, row, "shifted")
            backward = row_age_total(n, tuple(reversed(row)), "shifted")
            if forward != backward:
                return ClaimResult(
                    "reversal_tie", False, checked,
                    f"reversal changed the total for row {row}",
                )
            checked += 1
    return ClaimResult(
        "reversal_tie", True, checked, "time reversal is an exact tie for every row"
    )


def check_centering_monotonicity() -> ClaimResult:
    """Shifting a blocking window one slot toward the center strictly
    increases the shifted age total until the window is balanced."""
    checked = 0
    for config in _single_channel_grid():
        horizon, n = config.horizon, config.n_users
        for length in range(1, config.budget() + 1):
            totals = {}
            for start in range(1, horizon - length + 2):
                descriptor = CbsDescriptor(row=1, start=start, length=length)
                row = cbs_to_matrix(config, descriptor).row(1)
                totals[start] = row_age_total(n, row, "shifted")
            center = (horizon - length) // 2 + 1
            for start in range(1, center):
                if not totals[start] < totals[start + 1]:
                    return ClaimResult(
                        "centering_monotonicity", False, checked,
                        f"no strict gain moving start {start} right at horizon {horizon}",
                    )
                checked += 1
            for start, total in totals.items():
                mirror = horizon - length - start + 2
                if totals[mirror] != total:
                    return ClaimResult(
                        "centering_monotonicity", False, checked,
                        f"mirror starts {start}/{mirror} differ at horizon {horizon}",
                    )
                checked += 1
    return ClaimResult(
        "centering_monotonicity", True, checked,
        "strictly better toward the center, exact mirror ties",
    )


def check_merge_monotonicity() -> ClaimResult:
    """Merging two blocking windows and centering the result never loses
    value, and ends at the best row with that many blocked slots."""
    checked = 0
    for n in (2, 3):
        for horizon in (6, 8):
            for z in (2, 3):
                best_by_count = max(
                    row_age_total(
                        n,
                        tuple(0 if t in cols else 1 for t in range(1, horizon + 1)),
                        "shifted",
                    )
                    for cols in itertools.combinations(range(1, horizon + 1), z)
                )
                for l1 in range(1, z):
                    l2 = z - l1
                    for s1 in range(1, horizon - z + 1):
                        for s2 in range(s1 + l1 + 1, horizon - l2 + 2):
                            row = two_block_row(horizon, s1, l1, s2, l2)
                            path = merge_and_center_path(row)
                            totals = [row_age_total(n, r, "shifted") for r in path]
                            for before, after in zip(totals, totals[1:]):
                                if after < before:
                                    return ClaimResult(
                                        "merge_monotonicity", False, checked,
                                        f"a merge step lost value at horizon {horizon}",
                                    )
                            if totals[-1] != best_by_count:
                                return ClaimResult(
                                    "merge_monotonicity", False, checked,
                                    f"terminal row is not optimal for {z} zeros at horizon {horizon}",
                                )
                            checked += 1
    return ClaimResult(
        "merge_monotonicity", True, checked,
        "merge paths are monotone and end at the optimum for their zero count",
    )


def check_power_gap_grid() -> ClaimResult:
    """beta**(a-b) - beta**a <= beta**(c-b) - beta**c for 0 <= beta <= 1,
    c < a, b >= 0 (the inequality can fail for negative b)."""
    checked = 0
    skipped = 0
    for numerator in range(0, 9):
        beta = Fraction(numerator, 8)
        for a in range(1, 5):
            for c in range(0, a):
                for b in range(0, 5):
                    if beta == 0 and (a - b < 0 or c - b < 0):
                        skipped += 1
                        continue
                    if not power_gap_inequality(beta, a, b, c):
                        return ClaimResult(
                            "power_gap_grid", False, checked,
                            f"violated at beta={beta}, a={a}, b={b}, c={c}",
                        )
                    checked += 1
    return ClaimResult(
        "power_gap_grid", True, checked,
        f"holds on the whole grid ({skipped} zero-power poles skipped)",
    )


def check_single_user_block_structure(workers: int = 1) -> ClaimResult:
    """Every exhaustive-search maximizer blocks one user for budget
    consecutive, centered slots; the maximizer set is mirror-closed."""
    checked = 0
    for config in _single_channel_grid():
        result = brute_force_optimum(config, workers=workers)
        windows = _centered_windows(config.horizon, config.budget())
        seen: set[tuple[int, int]] = set()
        for sigma in result.maximizers:
            rows_with_zeros = [
                r for r in range(1, sigma.rows + 1) if 0 in sigma.row(r)
            ]
            if len(rows_with_zeros) != 1:
                return ClaimResult(
                    "single_user_block_structure", False, checked,
                    f"a maximizer blocks several users at horizon {config.horizon}",
                )
            row_index = rows_with_zeros[0]
            blocks = zero_blocks(sigma.row(row_index))
            if len(blocks) != 1 or blocks[0][1] != config.budget():
                return ClaimResult(
                    "single_user_block_structure", False, checked,
                    f"a maximizer is not one full-budget window at horizon {config.horizon}",
                )
            if blocks[0][0] not in windows:
                return ClaimResult(
                    "single_user_block_structure", False, checked,
                    f"a maximizer window is off-center at horizon {config.horizon}",
                )
            seen.add((row_index, blocks[0][0]))
            checked += 1
        expected = {
            (r, s) for r in range(1, config.n_users + 1) for s in windows
        }
        if seen != expected:
            return ClaimResult(
                "single_user_block_structure", False, checked,
                f"maximizer set is not the full mirror-closed family at horizon {config.horizon}",
            )
    return ClaimResult(
        "single_user_block_structure", True, checked,
        "all maximizers are centered single-user windows, mirror-closed",
    )


def check_subcarrier_block_structure(workers: int = 1) -> ClaimResult:
    """In the diversity model every maximizer blocks one sub-carrier per slot
    over budget consecutive centered slots, with all sub-carrier assignments
    tied."""
    checked = 0
    for config in _subcarrier_grid():
        result = brute_force_optimum(config, workers=workers)
        budget = config.budget()
        windows = _centered_windows(config.horizon, budget)
        seen_windows: set[int] = set()
        assignments: dict[int, set[tuple[int, ...]]] = {}
        for sigma in result.maximizers:
            counts = sigma.column_zero_counts()
            blocked_columns = [t for t, c in enumerate(counts, start=1) if c == 1]
            if any(c > 1 for c in counts) or len(blocked_columns) != budget:
                return ClaimResult(
                    "subcarrier_block_structure", False, checked,
                    f"a maximizer is not one-zero-per-column at horizon {config.horizon}",
                )
            start = blocked_columns[0]
            if blocked_columns != list(range(start, start + budget)):
                return ClaimResult(
                    "subcarrier_block_structure", False, checked,
                    f"blocked columns are not consecutive at horizon {config.horizon}",
                )
            if start not in windows:
                return ClaimResult(
                    "subcarrier_block_structure", False, checked,
                    f"blocked window is off-center at horizon {config.horizon}",
                )
            rows_hit = tuple(
                next(r for r in range(1, sigma.rows + 1) if sigma.sigma(r, t) == 0)
                for t in blocked_columns
            )
            seen_windows.add(start)
            assignments.setdefault(start, set()).add(rows_hit)
            checked += 1
        if seen_windows != windows:
            return ClaimResult(
                "subcarrier_block_structure", False, checked,
                f"not all centered windows are tied at horizon {config.horizon}",
            )
        full = set(
            itertools.product(range(1, config.n_subcarriers + 1), repeat=budget)
        )
        if any(assignments[s] != full for s in windows):
            return ClaimResult(
                "subcarrier_block_structure", False, checked,
                f"sub-carrier assignments are not all tied at horizon {config.horizon}",
            )
    return ClaimResult(
        "subcarrier_block_structure", True, checked,
        "maximizers block centered consecutive columns, any sub-carrier each slot",
    )


def check_bound_sandwich(workers: int = 1) -> ClaimResult:
    """The exhaustive optimum sits between the randomized lower bound and
    both upper bounds on every grid instance."""
    checked = 0
    for config in _single_channel_grid():
        best = brute_force_optimum(config, workers=workers).best_value
        lb = randomized_lower_bound(config.horizon, config.alpha, config.n_users)
        ub = single_channel_upper_bound(config.horizon, config.n_users)
        diag = budget_upper_bound_diagnostic(config.horizon, config.n_users, config.alpha)
        if not lb <= best <= ub:
            return ClaimResult(
                "bound_sandwich", False, checked,
                f"optimum {best} escapes [{lb}, {ub}] at horizon {config.horizon}",
            )
        if best > diag:
            return ClaimResult(
                "bound_sandwich", False, checked,
                f"optimum {best} exceeds the budget diagnostic {diag}",
            )
        checked += 1
    return ClaimResult(
        "bound_sandwich", True, checked,
        "lower bound <= exhaustive optimum <= both upper bounds",
    )


def run_all(workers: int = 1) -> list[ClaimResult]:
    return [
        check_engine_equivalence(),
        check_reversal_tie(),
        check_centering_monotonicity(),
        check_merge_monotonicity(),
        check_power_gap_grid(),
        check_single_user_block_structure(workers),
        check_subcarrier_block_structure(workers),
        check_bound_sandwich(workers),
    ]


def all_passed(results: list[ClaimResult]) -> bool:
    return all(r.passed for r in results)


def results_to_text(results: list[ClaimResult]) -> str:
    return "\n".join(r.line() for r in results)
