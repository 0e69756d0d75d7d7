"""Acceptance gate: twelve end-to-end criteria, one printed line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines.  Exact criteria use rational arithmetic (no tolerances); Monte Carlo
criteria use fixed seeds and the stated statistical bands, so the whole file
is deterministic.
"""

import itertools
import random
import time
from fractions import Fraction

from aoijam import (
    BlockingMatrix,
    SystemConfig,
    age_by_recursion,
    age_by_recursion_subcarrier,
    age_by_trains,
    age_by_trains_subcarrier,
    brute_force_optimum,
    budget_upper_bound_diagnostic,
    deterministic_lower_bound,
    diversity_lower_bound,
    empirical_vs_exact,
    merge_and_center_path,
    optimality_ratios,
    power_gap_inequality,
    randomized_lower_bound,
    row_age_total,
    simulate_randomized,
    simulate_randomized_subcarrier,
    simulate_round_robin,
    single_channel_upper_bound,
    subcarrier_upper_bound,
    two_block_row,
    zero_blocks,
)
from helpers import random_feasible_matrix

F = Fraction

GRID = [
    SystemConfig(n, horizon, F(budget, horizon))
    for n in (2, 3)
    for horizon in (6, 8, 10)
    for budget in (1, 2, 3)
]


def _criterion(label: str, passed: bool, detail: str) -> None:
    print(f"{'PASS' if passed else 'FAIL'} {label}: {detail}")
    assert passed, f"{label}: {detail}"


def _centered_windows(horizon: int, length: int) -> set[int]:
    start = (horizon - length) // 2 + 1
    return {start} if (horizon - length) % 2 == 0 else {start, start + 1}


def _cbs_row(horizon: int, start: int, length: int) -> tuple[int, ...]:
    return tuple(0 if start <= t < start + length else 1 for t in range(1, horizon + 1))


def test_c01_engine_equality_on_random_instances():
    rng = random.Random(20260815)
    t0 = time.monotonic()
    checked = 0
    for _ in range(800):
        n = rng.randint(1, 5)
        horizon = rng.randint(1, 12)
        budget = rng.randint(0, horizon)
        cfg = SystemConfig(n, horizon, F(budget, horizon))
        sigma = random_feasible_matrix(rng, n, horizon, budget)
        assert age_by_recursion(cfg, sigma) == age_by_trains(cfg, sigma)
        checked += 1
    for _ in range(200):
        n = rng.randint(1, 5)
        n_sub = rng.randint(2, 5)
        horizon = rng.randint(1, 12)
        budget = rng.randint(0, horizon)
        cfg = SystemConfig(n, horizon, F(budget, horizon), n_subcarriers=n_sub)
        sigma = random_feasible_matrix(rng, n_sub, horizon, budget)
        assert age_by_recursion_subcarrier(cfg, sigma) == age_by_trains_subcarrier(cfg, sigma)
        checked += 1
    elapsed = time.monotonic() - t0
    _criterion(
        "[C01] engine-equality",
        checked == 1000 and elapsed < 30,
        f"recursion == train sums on {checked} random matrices in {elapsed:.1f}s",
    )


def test_c02_brute_force_structure_on_grid():
    t0 = time.monotonic()
    for cfg in GRID:
        result = brute_force_optimum(cfg)
        windows = _centered_windows(cfg.horizon, cfg.budget())
        seen = set()
        for m in result.maximizers:
            rows_with_zeros = [r for r in range(1, m.rows + 1) if 0 in m.row(r)]
            assert len(rows_with_zeros) == 1, "attack touches several users"
            blocks = zero_blocks(m.row(rows_with_zeros[0]))
            assert len(blocks) == 1, "attack is not one window"
            start, length = blocks[0]
            assert length == cfg.budget(), "attack leaves budget unused"
            assert start in windows, "window is off-center"
            seen.add((rows_with_zeros[0], start))
        expected = {(r, s) for r in range(1, cfg.n_users + 1) for s in windows}
        assert seen == expected, "maximizer family incomplete"
    elapsed = time.monotonic() - t0
    _criterion(
        "[C02] optimal-attack-structure",
        elapsed < 300,
        f"all maximizers on {len(GRID)} instances are centered single-user "
        f"full-budget windows ({elapsed:.1f}s)",
    )


def test_c03_time_reversal_ties():
    checked = 0
    for n in (2, 3):
        for horizon in range(2, 13):
            for length in range(1, min(4, horizon) + 1):
                for start in range(1, horizon - length + 2):
                    row = _cbs_row(horizon, start, length)
                    assert row_age_total(n, row, "shifted") == row_age_total(
                        n, tuple(reversed(row)), "shifted"
                    )
                    checked += 1
    for cfg in GRID:
        maximizers = set(brute_force_optimum(cfg).maximizers)
        for m in maximizers:
            assert m.reversed_in_time() in maximizers
            checked += 1
    _criterion(
        "[C03] time-reversal-ties",
        True,
        f"exact ties for {checked} windows and mirror-closed maximizer sets",
    )


def test_c04_centering_monotonicity():
    checked = 0
    for n in (2, 3):
        for horizon in range(6, 13):
            for length in range(1, 5):
                totals = {
                    start: row_age_total(n, _cbs_row(horizon, start, length), "shifted")
                    for start in range(1, horizon - length + 2)
                }
                center = (horizon - length) // 2 + 1
                for start in range(1, center):
                    assert totals[start] < totals[start + 1]
                    checked += 1
                for start, value in totals.items():
                    assert totals[horizon - length - start + 2] == value
                    checked += 1
    _criterion(
        "[C04] centering-monotonicity",
        True,
        f"strict gain toward the center across {checked} comparisons",
    )


def test_c05_two_block_merge_paths():
    checked = 0
    for n in (2, 3):
        for horizon in (8, 10, 12):
            for z in (2, 3, 4):
                best = max(
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
                            path = merge_and_center_path(
                                two_block_row(horizon, s1, l1, s2, l2)
                            )
                            totals = [row_age_total(n, r, "shifted") for r in path]
                            assert all(
                                b >= a for a, b in zip(totals, totals[1:])
                            ), "a merge step lost value"
                            assert totals[-1] == best, "terminal row not optimal"
                            checked += 1
    _criterion(
        "[C05] merge-and-center",
        True,
        f"{checked} merge paths monotone, all ending at the zero-count optimum",
    )


def test_c06_power_gap_inequality_grid():
    checked = 0
    for numerator in range(0, 26):
        beta = F(numerator, 25)
        for a in range(1, 9):
            for c in range(0, a):
                for b in range(0, 11):
                    if beta == 0 and (a - b < 0 or c - b < 0):
                        continue
                    assert power_gap_inequality(beta, a, b, c)
                    checked += 1
    _criterion(
        "[C06] power-gap-inequality",
        checked >= 10_000,
        f"holds at {checked} grid points (beta in [0,1], c < a, b >= 0)",
    )


def test_c07_bound_sandwich_on_grid():
    for cfg in GRID:
        best = brute_force_optimum(cfg).best_value
        lb = randomized_lower_bound(cfg.horizon, cfg.alpha, cfg.n_users)
        ub = single_channel_upper_bound(cfg.horizon, cfg.n_users)
        diag = budget_upper_bound_diagnostic(cfg.horizon, cfg.n_users, cfg.alpha)
        assert lb <= best <= ub
        assert best <= diag
    _criterion(
        "[C07] bound-sandwich",
        True,
        f"lower bound <= exhaustive optimum <= upper bounds on {len(GRID)} instances",
    )


def test_c08_unjammed_mean_age_near_user_count():
    t0 = time.monotonic()
    details = []
    for n in (2, 4, 8):
        cfg = SystemConfig(n, 5000, 0)
        report = simulate_randomized(cfg, BlockingMatrix.all_ones(n, 5000), 200, seed=8)
        for mean in report.empirical_per_user_mean:
            assert abs(mean - n) / n < 0.02
        details.append(f"N={n}: {report.empirical_overall_mean:.3f}")
    elapsed = time.monotonic() - t0
    _criterion(
        "[C08] unjammed-steady-state",
        elapsed < 120,
        f"per-user means within 2% of N ({', '.join(details)}; {elapsed:.1f}s)",
    )


def test_c09_subcarrier_band_under_attack():
    details = []
    for n in (2, 4):
        for n_sub in (2, 4, 8):
            cfg = SystemConfig(n, 5000, F(1, 5), n_subcarriers=n_sub)
            budget = cfg.budget()
            start = (5000 - budget) // 2 + 1
            zeros = [((t - start) % n_sub + 1, t) for t in range(start, start + budget)]
            sigma = BlockingMatrix.from_zeros(n_sub, 5000, zeros)
            report = simulate_randomized_subcarrier(cfg, sigma, 200, seed=9)
            ub = float(subcarrier_upper_bound(n, n_sub))
            lb = float(diversity_lower_bound(n))
            mean, se = report.empirical_overall_mean, report.std_error
            assert mean <= ub + 3 * se, f"N={n}, C={n_sub}: {mean} above {ub}"
            assert mean >= lb - 3 * se, f"N={n}, C={n_sub}: {mean} below {lb}"
            details.append(f"N={n},C={n_sub}: {mean:.2f} in [{lb:.2f}, {ub:.2f}]")
    _criterion(
        "[C09] diversity-band",
        True,
        "; ".join(details),
    )


def test_c10_round_robin_quadratic_floor():
    cfg_t = {}
    for horizon in (200, 500, 1000):
        cfg = SystemConfig(4, horizon, F(1, 2))
        report = simulate_round_robin(cfg)
        floor = float(deterministic_lower_bound(horizon, F(1, 2)))
        assert report.empirical_overall_mean >= floor
        cfg_t[horizon] = report.empirical_overall_mean
    ratio = cfg_t[1000] / 1000
    target = 0.5**2 / 2
    assert abs(ratio - target) / target < 0.10
    _criterion(
        "[C10] round-robin-floor",
        True,
        f"means {cfg_t} all above T*alpha^2/2; mean/T = {ratio:.4f} vs {target}",
    )


def test_c11_simulation_matches_exact_engine():
    rng = random.Random(1105)
    instances = []
    for n, horizon in ((2, 10), (2, 20), (3, 15), (3, 30), (4, 10), (4, 20)):
        for budget in (0, 3):
            cfg = SystemConfig(n, horizon, F(budget, horizon))
            instances.append((cfg, random_feasible_matrix(rng, n, horizon, budget)))
    for n, n_sub, horizon in (
        (2, 2, 10), (2, 3, 20), (3, 2, 15), (3, 4, 10),
        (2, 4, 25), (4, 2, 10), (2, 2, 30), (3, 3, 20),
    ):
        cfg = SystemConfig(n, horizon, F(1, 5), n_subcarriers=n_sub)
        instances.append((cfg, random_feasible_matrix(rng, n_sub, horizon, cfg.budget())))
    assert len(instances) == 20
    worst = 0.0
    for cfg, sigma in instances:
        cmp = empirical_vs_exact(cfg, sigma, 100_000, seed=20260815)
        worst = max(worst, cmp.max_std_dev)
        assert not cmp.flagged, f"{cfg}: max z {cmp.max_std_dev}"
    _criterion(
        "[C11] simulation-vs-exact",
        worst <= 4,
        f"max standardized deviation {worst:.2f} over 20 instances x 1e5 runs",
    )


def test_c12_asymptotic_ratio_identities():
    for alpha in (F(1, 2), F(1, 3), F(1, 5)):
        for horizon in (10, 10**6):
            ratios = optimality_ratios(SystemConfig(2, horizon, alpha))
            assert ratios.single_asymptotic == 1 / alpha**2
    for n_sub in (2, 3, 5):
        ratios = optimality_ratios(SystemConfig(3, 50, F(1, 2), n_subcarriers=n_sub))
        assert ratios.subcarrier_asymptotic == F(2 * n_sub, n_sub - 1)
    half = optimality_ratios(SystemConfig(4, 100, F(1, 2), n_subcarriers=2))
    assert half.single_asymptotic == 4 and half.subcarrier_asymptotic == 4
    assert half.single_finite == single_channel_upper_bound(100, 4) / randomized_lower_bound(
        100, F(1, 2), 4
    )
    _criterion(
        "[C12] asymptotic-ratios",
        True,
        "1/alpha^2 and 2C/(C-1) hold exactly, both equal 4 at alpha=1/2, C=2",
    )
