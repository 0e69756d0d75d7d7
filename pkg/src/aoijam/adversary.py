"""Blocking-shape transformations and exhaustive certification of optimal jamming.

The value of a blocking matrix is compared with exact rationals throughout, so
tie sets (time-mirror pairs, row relabelings) come out exactly.  The
exhaustive search walks slots left to right with per-slot choices {no block,
block row r}, prunes on the remaining budget, and partitions the tree by the
first slot's choice; partitions merge deterministically, so the result does
not depend on the worker count.

Shape operations act on single rows (tuples of 0/1):

- ``reverse_sequence`` mirrors a row in time; the horizon value is invariant.
- ``shift_cbs`` / ``centered_cbs`` move or place one consecutive blocked
  window; moving the window toward the center never lowers the value.
- ``merge_step`` pulls two blocked windows together, one slot at a time, never
  lowering the value; ``merge_and_center_path`` iterates it and then centers
  the merged window.

All value comparisons here use the "shifted" slot convention, under which
every slot's decision carries weight in the horizon mean (see exact_age).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence

from ._parallel import map_ordered
from .model import (
    BlockingMatrix,
    CbsDescriptor,
    SystemConfig,
    as_fraction,
    matrix_to_text,
)

SearchModel = Literal["single_channel", "subcarrier"]


class OverCapError(ValueError):
    """Enumeration would exceed the configured candidate cap."""

    def __init__(self, size: int, cap: int):
        super().__init__(f"enumeration size {size} exceeds cap {cap}")
        self.size = size
        self.cap = cap


def reverse_sequence(row: Sequence[int]) -> tuple[int, ...]:
    """Time-mirror of a blocking row."""
    return tuple(reversed(tuple(row)))


def zero_blocks(row: Sequence[int]) -> tuple[tuple[int, int], ...]:
    """Maximal runs of zeros as (1-based start, length) pairs."""
    blocks: list[tuple[int, int]] = []
    i = 0
    horizon = len(row)
    while i < horizon:
        if row[i] == 0:
            j = i
            while j < horizon and row[j] == 0:
                j += 1
            blocks.append((i + 1, j - i))
            i = j
        else:
            i += 1
    return tuple(blocks)


def row_from_blocks(horizon: int, blocks: Sequence[tuple[int, int]]) -> tuple[int, ...]:
    """Inverse of zero_blocks for non-overlapping (start, length) windows."""
    row = [1] * horizon
    for start, length in blocks:
        if length < 0 or start < 1 or start + length - 1 > horizon:
            raise ValueError(f"window ({start}, {length}) outside 1..{horizon}")
        for t in range(start, start + length):
            row[t - 1] = 0
    return tuple(row)


def shift_cbs(
    descriptor: CbsDescriptor, direction: Literal["left", "right"], horizon: int
) -> CbsDescriptor:
    """Move a blocked window one slot; refuses to push it off the horizon."""
    if direction == "left":
        if descriptor.start - 1 < 1:
            raise ValueError("cannot shift left: window already at slot 1")
        return CbsDescriptor(descriptor.row, descriptor.start - 1, descriptor.length)
    if direction == "right":
        if descriptor.end() + 1 > horizon:
            raise ValueError("cannot shift right: window already at the horizon")
        return CbsDescriptor(descriptor.row, descriptor.start + 1, descriptor.length)
    raise ValueError(f"direction must be 'left' or 'right', got {direction!r}")


def centered_cbs(config: SystemConfig, row: int, length: int) -> CbsDescriptor:
    """Centered blocked window; when the slack is odd the window sits one slot
    left of center (one more clear slot on the right)."""
    if length > config.horizon:
        raise ValueError(f"length {length} exceeds horizon {config.horizon}")
    start = (config.horizon - length) // 2 + 1
    return CbsDescriptor(row=row, start=start, length=length)


def two_block_row(
    horizon: int,
    first_start: int,
    first_length: int,
    second_start: int,
    second_length: int,
) -> tuple[int, ...]:
    """Row with two separated blocked windows (at least one clear slot between)."""
    if first_length < 1 or second_length < 1:
        raise ValueError("both windows need length >= 1")
    gap = second_start - (first_start + first_length)
    if gap < 1:
        raise ValueError("windows must be separated by at least one clear slot")
    return row_from_blocks(
        horizon, [(first_start, first_length), (second_start, second_length)]
    )


def merge_step(row: Sequence[int]) -> tuple[int, ...]:
    """One merging move on a row with exactly two blocked windows.

    With the row read as A clear, left window, B clear, right window, C clear:
    if A + B > C the right window moves one slot left, otherwise the left
    window moves one slot right.  Either move shrinks the gap by one and never
    lowers the shifted-convention value.
    """
    blocks = zero_blocks(row)
    if len(blocks) != 2:
        raise ValueError(f"row must contain exactly two blocked windows, found {len(blocks)}")
    (s1, l1), (s2, l2) = blocks
    horizon = len(row)
    left_clear = s1 - 1
    gap = s2 - (s1 + l1)
    right_clear = horizon - (s2 + l2 - 1)
    out = list(row)
    if left_clear + gap > right_clear:
        out[s2 - 2] = 0
        out[s2 + l2 - 2] = 1
    else:
        out[s1 + l1 - 1] = 0
        out[s1 - 1] = 1
    return tuple(out)


def merge_and_center_path(row: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    """States from a one- or two-window row to a single centered window.

    Applies merge_step until one window remains, then one-slot centering
    shifts until the clear slots on either side differ by at most one.  The
    shifted-convention value is non-decreasing along the whole path.
    """
    current = tuple(int(v) for v in row)
    blocks = zero_blocks(current)
    if len(blocks) > 2:
        raise ValueError("row must contain at most two blocked windows")
    states = [current]
    while len(zero_blocks(current)) == 2:
        current = merge_step(current)
        states.append(current)
    blocks = zero_blocks(current)
    if blocks:
        (start, length) = blocks[0]
        horizon = len(current)
        while True:
            left_clear = start - 1
            right_clear = horizon - (start + length - 1)
            if abs(left_clear - right_clear) <= 1:
                break
            start = start + 1 if left_clear < right_clear else start - 1
            current = row_from_blocks(horizon, [(start, length)])
            states.append(current)
    return tuple(states)


def power_gap_inequality(
    beta: Fraction | int | str | float, a: int, b: int, c: int
) -> bool:
    """Exact check that lowering the exponent widens the power gap:

        beta**(a-b) - beta**a  <=  beta**(c-b) - beta**c   for c < a.

    Evaluated with rational arithmetic; 0**0 is 1 and 0 raised to a negative
    exponent raises ZeroDivisionError (the expression has a pole there).
    The inequality can fail for b < 0: the caller is expected to use b >= 0.
    """
    base = as_fraction(beta)
    if not 0 <= base <= 1:
        raise ValueError(f"beta must lie in [0, 1], got {base}")
    if c >= a:
        raise ValueError(f"requires c < a, got c={c}, a={a}")
    lhs = base ** (a - b) - base**a
    rhs = base ** (c - b) - base**c
    return lhs <= rhs


# -------- exhaustive search --------


@dataclass(frozen=True)
class MaximizerSet:
    """Exact optimum of the shifted-convention objective plus every argmax."""

    best_value: Fraction
    maximizers: tuple[BlockingMatrix, ...]
    enumerated_count: int

    def to_dict(self) -> dict:
        return {
            "objective_convention": "shifted",
            "best_value": {
                "num": str(self.best_value.numerator),
                "den": str(self.best_value.denominator),
                "float": float(self.best_value),
            },
            "enumerated_count": self.enumerated_count,
            "maximizers": [matrix_to_text(m) for m in self.maximizers],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def _search_single_partition(args: tuple[int, int, int, int]) -> tuple[int, list[tuple[int, ...]], int]:
    """DFS over columns with the first column's choice fixed.

    Ages are carried as integers scaled by n**t (the shifted recursion
    age(t) = age(t-1)*(1 - sigma/n) + 1 becomes D(t) = D(t-1)*(n - sigma) + n**t),
    so candidate values share the denominator n**T and compare exactly.
    Returns (best scaled value, argmax choice vectors, leaf count).
    """
    n, horizon, budget, first = args
    best: int | None = None
    argmax: list[tuple[int, ...]] = []
    leaves = 0
    choices: list[int] = []

    def descend(col: int, zeros_used: int, d: tuple[int, ...], a: tuple[int, ...], npow: int) -> None:
        nonlocal best, leaves
        if col == horizon:
            leaves += 1
            value = sum(a)
            if best is None or value > best:
                best = value
                argmax.clear()
                argmax.append(tuple(choices))
            elif value == best:
                argmax.append(tuple(choices))
            return
        npow_next = npow * n
        d_clear = tuple(di * (n - 1) + npow_next for di in d)
        a_clear = tuple(ai * n + di for ai, di in zip(a, d_clear))
        branch = [-1] if zeros_used >= budget else [-1, *range(n)]
        if col == 0:
            branch = [first]
        for choice in branch:
            choices.append(choice)
            if choice < 0:
                descend(col + 1, zeros_used, d_clear, a_clear, npow_next)
            else:
                d_blk = list(d_clear)
                d_blk[choice] = d[choice] * n + npow_next
                a_blk = list(a_clear)
                a_blk[choice] = a[choice] * n + d_blk[choice]
                descend(col + 1, zeros_used + 1, tuple(d_blk), tuple(a_blk), npow_next)
            choices.pop()

    start_d = tuple(1 for _ in range(n))
    start_a = tuple(0 for _ in range(n))
    descend(0, 0, start_d, start_a, 1)
    return (best if best is not None else 0), argmax, leaves


def _search_subcarrier_partition(args: tuple[int, int, int, int, int]) -> tuple[int, list[tuple[int, ...]], int]:
    """Diversity-model DFS: all users share one trajectory, so the scaled age
    is a scalar with per-slot factor (m - s) for m = n_users * n_sub and s the
    count of clear sub-carriers in the slot."""
    n_users, n_sub, horizon, budget, first = args
    m = n_users * n_sub
    clear_factor = m - n_sub
    blocked_factor = m - n_sub + 1
    best: int | None = None
    argmax: list[tuple[int, ...]] = []
    leaves = 0
    choices: list[int] = []

    def descend(col: int, zeros_used: int, d: int, a: int, mpow: int) -> None:
        nonlocal best, leaves
        if col == horizon:
            leaves += 1
            if best is None or a > best:
                best = a
                argmax.clear()
                argmax.append(tuple(choices))
            elif a == best:
                argmax.append(tuple(choices))
            return
        mpow_next = mpow * m
        d_clear = d * clear_factor + mpow_next
        a_clear = a * m + d_clear
        d_blk = d * blocked_factor + mpow_next
        a_blk = a * m + d_blk
        branch = [-1] if zeros_used >= budget else [-1, *range(n_sub)]
        if col == 0:
            branch = [first]
        for choice in branch:
            choices.append(choice)
            if choice < 0:
                descend(col + 1, zeros_used, d_clear, a_clear, mpow_next)
            else:
                descend(col + 1, zeros_used + 1, d_blk, a_blk, mpow_next)
            choices.pop()

    descend(0, 0, 1, 0, 1)
    return (best if best is not None else 0), argmax, leaves


def _choices_to_matrix(rows: int, choices: Sequence[int]) -> BlockingMatrix:
    grid = [[1] * len(choices) for _ in range(rows)]
    for t, choice in enumerate(choices):
        if choice >= 0:
            grid[choice][t] = 0
    return BlockingMatrix(tuple(tuple(row) for row in grid))


def brute_force_optimum(
    config: SystemConfig,
    model: SearchModel | None = None,
    cap: int = 10**8,
    workers: int = 1,
) -> MaximizerSet:
    """Enumerate every feasible blocking matrix and return the exact optimum
    of the shifted-convention objective together with ALL maximizers.

    model defaults to "subcarrier" when the config carries n_subcarriers,
    else "single_channel".  Instances with (rows + 1)**horizon above ``cap``
    are refused with OverCapError.
    """
    if model is None:
        model = "subcarrier" if config.n_subcarriers is not None else "single_channel"
    if model not in ("single_channel", "subcarrier"):
        raise ValueError(f"unknown search model {model!r}")
    if model == "subcarrier":
        if config.n_subcarriers is None:
            raise ValueError("subcarrier search needs a config with n_subcarriers")
        rows = config.n_subcarriers
    else:
        rows = config.n_users
    horizon = config.horizon
    budget = config.budget()
    size = (rows + 1) ** horizon
    if size > cap:
        raise OverCapError(size, cap)

    firsts = [-1] + (list(range(rows)) if budget > 0 else [])
    if model == "single_channel":
        jobs = [(config.n_users, horizon, budget, f) for f in firsts]
        results = map_ordered(_search_single_partition, jobs, workers)
        denominator = config.n_users**horizon * config.n_users * horizon
    else:
        jobs = [(config.n_users, config.n_subcarriers, horizon, budget, f) for f in firsts]
        results = map_ordered(_search_subcarrier_partition, jobs, workers)
        denominator = (config.n_users * config.n_subcarriers) ** horizon * horizon

    best = max(part_best for part_best, _, _ in results)
    leaves = sum(part_leaves for _, _, part_leaves in results)
    winning: list[tuple[int, ...]] = []
    for part_best, part_argmax, _ in results:
        if part_best == best:
            winning.extend(part_argmax)
    matrices = sorted(
        (_choices_to_matrix(rows, c) for c in winning), key=lambda m: m.entries
    )
    return MaximizerSet(
        best_value=Fraction(best, denominator),
        maximizers=tuple(matrices),
        enumerated_count=leaves,
    )
