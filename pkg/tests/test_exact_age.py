"""Exact trajectory engines against hand-derived values and each other."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from aoijam import (
    BlockingMatrix,
    FeasibilityError,
    SystemConfig,
    age_by_recursion,
    age_by_recursion_subcarrier,
    age_by_trains,
    age_by_trains_subcarrier,
    objective,
    row_age_total,
    subcarrier_train_value,
    train_value,
    trajectory_to_csv,
    trajectory_to_json,
)
from helpers import naive_subcarrier_ages, naive_user_ages, random_feasible_matrix

F = Fraction


def test_all_clear_two_users():
    # 1, 3/2, 7/4, 15/8: each slot keeps half the age and adds 1
    cfg = SystemConfig(2, 3, 0)
    traj = age_by_recursion(cfg, BlockingMatrix.all_ones(2, 3))
    assert traj.values[0] == (F(1), F(3, 2), F(7, 4), F(15, 8))
    assert traj.values[1] == traj.values[0]
    assert objective(cfg, traj, "raw") == F(17, 12)


def test_one_blocked_slot_two_users():
    cfg = SystemConfig(2, 3, F(1, 3))
    m = BlockingMatrix.from_zeros(2, 3, [(1, 2)])
    traj = age_by_recursion(cfg, m)
    assert traj.values[0] == (F(1), F(3, 2), F(5, 2), F(9, 4))
    assert traj.values[1] == (F(1), F(3, 2), F(7, 4), F(15, 8))


def test_zero_budget_closed_form():
    # all-clear expected age: N - (N-1) * ((N-1)/N)**(t-1)
    for n in (2, 3, 5):
        cfg = SystemConfig(n, 12, 0)
        traj = age_by_recursion(cfg, BlockingMatrix.all_ones(n, 12))
        beta = F(n - 1, n)
        for t in range(1, 14):
            assert traj.values[0][t - 1] == n - (n - 1) * beta ** (t - 1)


def test_train_values():
    cfg = SystemConfig(5, 6, 0)
    assert train_value(cfg, (1,) * 6, 1, 4) == F(256, 625)
    assert train_value(cfg, (1,) * 6, 3, 3) == F(4, 5)
    # a blocked slot keeps the whole train
    cfg2 = SystemConfig(5, 6, F(1, 6))
    assert train_value(cfg2, (1, 1, 0, 1, 1, 1), 3, 3) == 1
    with pytest.raises(ValueError):
        train_value(cfg, (1,) * 6, 4, 3)
    with pytest.raises(ValueError):
        train_value(cfg, (1,) * 6, 0, 3)


def test_trains_sum_to_recursion_values():
    # age at t+1 = 1 + sum of train values for launches 1..t
    cfg = SystemConfig(2, 3, F(2, 3))
    row = (1, 0, 1)
    m = BlockingMatrix.all_ones(2, 3).replace_row(1, row)
    traj = age_by_recursion(cfg, m)
    total = 1 + sum(train_value(cfg, row, ell, 3) for ell in range(1, 4))
    assert traj.values[0][3] == total == F(9, 4)


def test_engines_agree_on_seeded_instances():
    rng = random.Random(404)
    for _ in range(60):
        n = rng.randint(1, 5)
        horizon = rng.randint(1, 12)
        budget = rng.randint(0, horizon)
        cfg = SystemConfig(n, horizon, F(budget, horizon))
        m = random_feasible_matrix(rng, n, horizon, budget)
        assert age_by_recursion(cfg, m) == age_by_trains(cfg, m)


def test_engines_match_naive_recursion():
    rng = random.Random(405)
    for _ in range(30):
        n = rng.randint(2, 4)
        horizon = rng.randint(2, 10)
        cfg = SystemConfig(n, horizon, F(1, 2))
        m = random_feasible_matrix(rng, n, horizon, cfg.budget())
        traj = age_by_recursion(cfg, m)
        for u in range(1, n + 1):
            assert list(traj.values[u - 1]) == naive_user_ages(n, m.row(u))


def test_subcarrier_engines():
    cfg = SystemConfig(2, 3, 0, n_subcarriers=2)
    traj = age_by_recursion_subcarrier(cfg, BlockingMatrix.all_ones(2, 3))
    assert traj.values[0] == (F(1), F(3, 2), F(7, 4), F(15, 8))
    assert traj.values[1] == traj.values[0]

    cfg2 = SystemConfig(2, 3, F(1, 3), n_subcarriers=2)
    m = BlockingMatrix.from_zeros(2, 3, [(1, 1)])
    traj2 = age_by_recursion_subcarrier(cfg2, m)
    assert traj2.values[0][1] == F(7, 4)
    assert age_by_trains_subcarrier(cfg2, m) == traj2

    rng = random.Random(406)
    for _ in range(30):
        n_sub = rng.randint(2, 4)
        horizon = rng.randint(2, 10)
        cfg3 = SystemConfig(rng.randint(1, 4), horizon, F(1, 2), n_subcarriers=n_sub)
        m3 = random_feasible_matrix(rng, n_sub, horizon, cfg3.budget())
        traj3 = age_by_recursion_subcarrier(cfg3, m3)
        assert traj3 == age_by_trains_subcarrier(cfg3, m3)
        shared = naive_subcarrier_ages(cfg3.n_users, n_sub, m3)
        assert list(traj3.values[0]) == shared


def test_subcarrier_train_value():
    cfg = SystemConfig(2, 3, 0, n_subcarriers=2)
    m = BlockingMatrix.all_ones(2, 3)
    # retention per clear slot is 1 - 2/4 = 1/2
    assert subcarrier_train_value(cfg, m, 1, 3) == F(1, 8)


def test_infeasible_matrix_rejected_by_engines():
    cfg = SystemConfig(2, 4, F(1, 4))
    over_budget = BlockingMatrix.from_zeros(2, 4, [(1, 1), (2, 3)])
    with pytest.raises(FeasibilityError):
        age_by_recursion(cfg, over_budget)
    with pytest.raises(FeasibilityError):
        age_by_trains(cfg, over_budget)


def test_objective_conventions():
    cfg = SystemConfig(2, 3, 0)
    traj = age_by_recursion(cfg, BlockingMatrix.all_ones(2, 3))
    assert objective(cfg, traj) == F(17, 12)  # raw is the default
    assert objective(cfg, traj, "shifted") == (F(3, 2) + F(7, 4) + F(15, 8)) / 3


def test_blocking_more_never_helps_the_scheduler():
    # adding a zero anywhere weakly increases every later age value
    rng = random.Random(407)
    for _ in range(25):
        n = rng.randint(2, 4)
        horizon = rng.randint(2, 10)
        cfg = SystemConfig(n, horizon, 1)
        m = random_feasible_matrix(rng, n, horizon, horizon // 2)
        clear_cells = [
            (r, t)
            for r in range(1, n + 1)
            for t in range(1, horizon + 1)
            if m.sigma(r, t) == 1 and m.column_zero_counts()[t - 1] == 0
        ]
        if not clear_cells:
            continue
        r, t = rng.choice(clear_cells)
        harder = m.replace_row(r, tuple(
            0 if i == t else v for i, v in enumerate(m.row(r), start=1)
        ))
        base = age_by_recursion(cfg, m)
        more = age_by_recursion(cfg, harder)
        for u in range(n):
            for i in range(horizon + 1):
                assert more.values[u][i] >= base.values[u][i]


@settings(max_examples=60)
@given(st.integers(2, 5), st.lists(st.integers(0, 1), min_size=1, max_size=12))
def test_row_total_reversal_invariance(n, bits):
    row = tuple(bits)
    assert row_age_total(n, row, "shifted") == row_age_total(
        n, tuple(reversed(row)), "shifted"
    )


def test_trajectory_exports():
    cfg = SystemConfig(2, 2, 0)
    traj = age_by_recursion(cfg, BlockingMatrix.all_ones(2, 2))
    csv_text = trajectory_to_csv(traj)
    lines = csv_text.strip().splitlines()
    assert lines[0] == "t,user,delta_exact_num,delta_exact_den,delta_float"
    assert lines[1] == "1,1,1,1,1.0"
    assert len(lines) == 1 + 2 * 2
    json_text = trajectory_to_json(traj)
    assert '"raw"' in json_text and '"shifted"' in json_text
