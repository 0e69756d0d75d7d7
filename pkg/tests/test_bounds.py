"""Closed-form bounds, renewal quantities, and optimality ratios."""

from fractions import Fraction

import pytest

from aoijam import (
    SystemConfig,
    bounds_table,
    brute_force_optimum,
    budget_upper_bound_diagnostic,
    cycle_cost,
    deterministic_lower_bound,
    diversity_lower_bound,
    optimality_ratios,
    randomized_lower_bound,
    renewal_quantities,
    single_channel_upper_bound,
    subcarrier_upper_bound,
)

F = Fraction


def test_lower_bounds():
    assert deterministic_lower_bound(1000, F(1, 2)) == 125
    assert deterministic_lower_bound(10, "0.2") == F(1, 5)
    assert randomized_lower_bound(1000, F(1, 2), 4) == F(125, 4)
    with pytest.raises(ValueError):
        deterministic_lower_bound(0, F(1, 2))
    with pytest.raises(ValueError):
        deterministic_lower_bound(10, 2)


def test_single_channel_upper_bound():
    assert single_channel_upper_bound(999, 10) == 59
    assert single_channel_upper_bound(3, 2) == 2  # 4/4 + 1
    assert single_channel_upper_bound(1, 1) == 1


def test_budget_diagnostic_is_between_floor_and_baseline():
    for n, horizon, b in ((2, 10, 2), (4, 50, 10), (3, 30, 30)):
        alpha = F(b, horizon)
        diag = budget_upper_bound_diagnostic(horizon, n, alpha)
        assert diag <= single_channel_upper_bound(horizon, n)
        assert diag >= n or alpha == 1  # full blocking can saturate at the baseline
    # at alpha = 1 the baseline is the binding cap
    assert budget_upper_bound_diagnostic(10, 2, 1) == single_channel_upper_bound(10, 2)


def test_budget_diagnostic_dominates_exhaustive_optimum():
    for n, horizon, b in ((2, 6, 2), (3, 6, 3), (2, 8, 3), (3, 8, 2)):
        cfg = SystemConfig(n, horizon, F(b, horizon))
        best = brute_force_optimum(cfg).best_value
        assert best <= budget_upper_bound_diagnostic(horizon, n, cfg.alpha)


def test_subcarrier_bounds():
    assert subcarrier_upper_bound(2, 2) == 4
    assert subcarrier_upper_bound(4, 8) == F(32, 7)
    assert diversity_lower_bound(2) == F(3, 2)
    assert diversity_lower_bound(4) == F(5, 2)
    with pytest.raises(ValueError):
        subcarrier_upper_bound(2, 1)


def test_renewal_quantities_at_one_half():
    rq = renewal_quantities(F(1, 2))
    assert rq.expected_cycle_cost == 8
    assert rq.expected_cycle_length == 4
    assert rq.long_run_age == 2
    for q in (F(1, 3), F(2, 5), F(9, 10)):
        assert renewal_quantities(q).long_run_age == 1 / q
    with pytest.raises(ValueError):
        renewal_quantities(0)
    with pytest.raises(ValueError):
        renewal_quantities(1)


def test_renewal_formulas_match_truncated_expectation():
    # cycle = a geometric run of fresh slots then a geometric run of stale
    # slots; the closed forms equal the expectation, exactly in the tail limit
    for q in (F(1, 2), F(1, 3)):
        cutoff = 200
        cost = F(0)
        length = F(0)
        for i in range(1, cutoff + 1):
            p_fresh = q ** (i - 1) * (1 - q)
            for j in range(1, cutoff + 1):
                p = p_fresh * (1 - q) ** (j - 1) * q
                cost += p * cycle_cost(i, j)
                length += p * (i + j)
        rq = renewal_quantities(q)
        assert abs(rq.expected_cycle_cost - cost) < F(1, 10**9)
        assert abs(rq.expected_cycle_length - length) < F(1, 10**9)


def test_cycle_cost_values():
    assert cycle_cost(1, 0) == 1
    assert cycle_cost(2, 3) == 2 + F(9, 2) + F(9, 2)
    with pytest.raises(ValueError):
        cycle_cost(-1, 2)


def test_optimality_ratios():
    cfg = SystemConfig(4, 100, F(1, 2), n_subcarriers=2)
    ratios = optimality_ratios(cfg)
    assert ratios.single_asymptotic == 4
    assert ratios.subcarrier_asymptotic == 4
    assert ratios.single_finite == single_channel_upper_bound(100, 4) / randomized_lower_bound(100, F(1, 2), 4)
    assert ratios.subcarrier_finite == subcarrier_upper_bound(4, 2) / diversity_lower_bound(4)
    assert optimality_ratios(SystemConfig(2, 10, F(1, 4))).single_asymptotic == 16
    no_sub = optimality_ratios(SystemConfig(2, 10, F(1, 4)))
    assert no_sub.subcarrier_finite is None
    with pytest.raises(ValueError):
        optimality_ratios(SystemConfig(2, 10, 0))


def test_bounds_table_names():
    plain = {r.name for r in bounds_table(SystemConfig(2, 10, 0))}
    assert plain == {
        "deterministic_lb",
        "randomized_lb",
        "single_channel_ub",
        "single_channel_ub_budget_diag",
    }
    full = {r.name for r in bounds_table(SystemConfig(2, 10, F(1, 5), n_subcarriers=2))}
    assert full == plain | {"subcarrier_ub", "diversity_lb", "ratio_single", "ratio_subcarrier"}
    for report in bounds_table(SystemConfig(2, 10, F(1, 5), n_subcarriers=2)):
        assert report.value >= 0
        assert report.to_dict()["value"]["num"] == str(report.value.numerator)
