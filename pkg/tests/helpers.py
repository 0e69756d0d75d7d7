"""Independent oracles for cross-checking the package.

Everything here is deliberately written the slow, obvious way (plain
Fraction arithmetic, itertools enumeration) so agreement with the fast
engines is meaningful.
"""

import itertools
import random
from fractions import Fraction

from aoijam import BlockingMatrix, SystemConfig


def naive_user_ages(n_users: int, row: tuple[int, ...]) -> list[Fraction]:
    """Raw expected ages of one user at slots 1..T+1, straight recursion."""
    values = [Fraction(1)]
    for entry in row:
        prev = values[-1]
        if entry == 1:
            values.append(prev * Fraction(n_users - 1, n_users) + 1)
        else:
            values.append(prev + 1)
    return values


def naive_subcarrier_ages(
    n_users: int, n_sub: int, matrix: BlockingMatrix
) -> list[Fraction]:
    """Shared raw trajectory in the diversity model (same for every user)."""
    denom = n_users * n_sub
    values = [Fraction(1)]
    for t in range(1, matrix.horizon + 1):
        clear = sum(matrix.sigma(r, t) for r in range(1, matrix.rows + 1))
        values.append(values[-1] * Fraction(denom - clear, denom) + 1)
    return values


def naive_shifted_objective(config: SystemConfig, matrix: BlockingMatrix) -> Fraction:
    """Mean over users and slots of the ages at t=2..T+1."""
    if config.n_subcarriers is None:
        total = Fraction(0)
        for u in range(1, config.n_users + 1):
            total += sum(naive_user_ages(config.n_users, matrix.row(u))[1:])
        return total / (config.n_users * config.horizon)
    shared = naive_subcarrier_ages(config.n_users, config.n_subcarriers, matrix)
    return sum(shared[1:]) / config.horizon


def naive_optimum(config: SystemConfig) -> tuple[Fraction, list[BlockingMatrix]]:
    """Enumerate every feasible matrix directly: pick up to budget distinct
    columns and a row to zero in each.  Returns the exact best value and all
    argmax matrices, sorted by entries."""
    rows = config.n_subcarriers or config.n_users
    best = None
    argmax: list[BlockingMatrix] = []
    for k in range(config.budget() + 1):
        for cols in itertools.combinations(range(1, config.horizon + 1), k):
            for assignment in itertools.product(range(1, rows + 1), repeat=k):
                matrix = BlockingMatrix.from_zeros(
                    rows, config.horizon, list(zip(assignment, cols))
                )
                value = naive_shifted_objective(config, matrix)
                if best is None or value > best:
                    best, argmax = value, [matrix]
                elif value == best:
                    argmax.append(matrix)
    argmax.sort(key=lambda m: m.entries)
    return best, argmax


def random_feasible_matrix(
    rng: random.Random, rows: int, horizon: int, budget: int
) -> BlockingMatrix:
    zeros_count = rng.randint(0, min(budget, horizon))
    columns = rng.sample(range(1, horizon + 1), zeros_count)
    zeros = [(rng.randint(1, rows), t) for t in columns]
    return BlockingMatrix.from_zeros(rows, horizon, zeros)
