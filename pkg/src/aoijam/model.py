"""Domain types and feasibility checking for the jammed-scheduler system.

An instance is a base station serving ``n_users`` over ``horizon`` discrete
slots while a jammer may blank at most ``floor(alpha * horizon)`` slots in
total, and at most one row per slot.  Rows of a :class:`BlockingMatrix` are
users in the single-channel model and sub-carriers in the diversity model;
entries use 0 = blocked, 1 = clear.  Rows and slots are 1-based in the public
API to match the usual slotted-time write-up of the system.

All types are immutable after construction and safe to share across worker
processes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal, Sequence

Convention = Literal["raw", "shifted"]

_CONVENTIONS = ("raw", "shifted")


class ShapeMismatchError(ValueError):
    """Matrix shape is inconsistent with the configuration."""


class FeasibilityError(ValueError):
    """A blocking matrix or generator request violates a jamming constraint."""

    def __init__(self, message: str, verdict: "FeasibilityVerdict | None" = None):
        super().__init__(message)
        self.verdict = verdict


def as_fraction(value: Fraction | int | str | float) -> Fraction:
    """Coerce to an exact Fraction; floats go through their decimal literal,
    so as_fraction(0.2) == Fraction(1, 5)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


@dataclass(frozen=True)
class SystemConfig:
    """Scheduler/jammer instance: user count, horizon, jamming rate, and an
    optional sub-carrier count for the diversity model."""

    n_users: int
    horizon: int
    alpha: Fraction
    n_subcarriers: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", as_fraction(self.alpha))
        if self.n_users < 1:
            raise ValueError(f"n_users must be >= 1, got {self.n_users}")
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")
        if not 0 <= self.alpha <= 1:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.n_subcarriers is not None and self.n_subcarriers < 2:
            raise ValueError(
                f"n_subcarriers must be >= 2 when given, got {self.n_subcarriers}"
            )

    def budget(self) -> int:
        """Total slots the jammer may blank: floor(alpha * horizon)."""
        return math.floor(self.alpha * self.horizon)

    def row_counts(self) -> tuple[int, ...]:
        """Row counts a blocking matrix may legally have under this config."""
        counts = {self.n_users}
        if self.n_subcarriers is not None:
            counts.add(self.n_subcarriers)
        return tuple(sorted(counts))

    def to_dict(self) -> dict:
        return {
            "n_users": self.n_users,
            "horizon": self.horizon,
            "alpha": str(self.alpha),
            "n_subcarriers": self.n_subcarriers,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SystemConfig":
        return cls(
            n_users=int(data["n_users"]),
            horizon=int(data["horizon"]),
            alpha=as_fraction(data["alpha"]),
            n_subcarriers=(
                None if data.get("n_subcarriers") is None else int(data["n_subcarriers"])
            ),
        )


@dataclass(frozen=True)
class BlockingMatrix:
    """0/1 matrix of jamming decisions, one row per user or sub-carrier."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        normalized = tuple(tuple(int(v) for v in row) for row in self.entries)
        if not normalized or not normalized[0]:
            raise ValueError("blocking matrix must be non-empty")
        width = len(normalized[0])
        if any(len(row) != width for row in normalized):
            raise ValueError("blocking matrix rows must all have the same length")
        if any(v not in (0, 1) for row in normalized for v in row):
            raise ValueError("blocking matrix entries must be 0 or 1")
        object.__setattr__(self, "entries", normalized)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def horizon(self) -> int:
        return len(self.entries[0])

    def row(self, index: int) -> tuple[int, ...]:
        """Row by 1-based index."""
        if not 1 <= index <= self.rows:
            raise IndexError(f"row {index} outside 1..{self.rows}")
        return self.entries[index - 1]

    def sigma(self, row: int, slot: int) -> int:
        """Entry by 1-based (row, slot)."""
        if not 1 <= slot <= self.horizon:
            raise IndexError(f"slot {slot} outside 1..{self.horizon}")
        return self.row(row)[slot - 1]

    def total_zeros(self) -> int:
        return sum(row.count(0) for row in self.entries)

    def column_zero_counts(self) -> tuple[int, ...]:
        return tuple(
            sum(1 for row in self.entries if row[t] == 0) for t in range(self.horizon)
        )

    def replace_row(self, index: int, new_row: Sequence[int]) -> "BlockingMatrix":
        """Copy with the 1-based row replaced."""
        if len(new_row) != self.horizon:
            raise ValueError("replacement row has the wrong length")
        rows = list(self.entries)
        rows[index - 1] = tuple(int(v) for v in new_row)
        return BlockingMatrix(tuple(rows))

    def reversed_in_time(self) -> "BlockingMatrix":
        return BlockingMatrix(tuple(tuple(reversed(row)) for row in self.entries))

    @classmethod
    def all_ones(cls, rows: int, horizon: int) -> "BlockingMatrix":
        return cls(tuple(tuple(1 for _ in range(horizon)) for _ in range(rows)))

    @classmethod
    def from_zeros(
        cls, rows: int, horizon: int, zeros: Iterable[tuple[int, int]]
    ) -> "BlockingMatrix":
        """Build from 1-based (row, slot) blocked positions."""
        grid = [[1] * horizon for _ in range(rows)]
        for r, t in zeros:
            if not (1 <= r <= rows and 1 <= t <= horizon):
                raise ValueError(f"blocked position ({r}, {t}) outside the grid")
            grid[r - 1][t - 1] = 0
        return cls(tuple(tuple(row) for row in grid))


@dataclass(frozen=True)
class Violation:
    """One feasibility breach: which constraint, and where."""

    constraint: Literal["budget", "column"]
    detail: str
    column: int | None = None
    count: int = 0
    limit: int = 0


@dataclass(frozen=True)
class FeasibilityVerdict:
    feasible: bool
    violations: tuple[Violation, ...]


def validate(config: SystemConfig, sigma: BlockingMatrix) -> FeasibilityVerdict:
    """Check the jamming budget and the one-row-per-slot limit.

    Shape problems raise ShapeMismatchError; constraint problems are reported
    (all of them, independently) in the verdict rather than raised.
    """
    if sigma.horizon != config.horizon or sigma.rows not in config.row_counts():
        raise ShapeMismatchError(
            f"matrix is {sigma.rows}x{sigma.horizon}, config allows rows "
            f"{config.row_counts()} x horizon {config.horizon}"
        )
    violations: list[Violation] = []
    budget = config.budget()
    zeros = sigma.total_zeros()
    if zeros > budget:
        violations.append(
            Violation(
                constraint="budget",
                detail=f"{zeros} blocked slots exceed budget {budget}",
                count=zeros,
                limit=budget,
            )
        )
    for slot, count in enumerate(sigma.column_zero_counts(), start=1):
        if count > 1:
            violations.append(
                Violation(
                    constraint="column",
                    detail=f"slot {slot} blocks {count} rows (limit 1)",
                    column=slot,
                    count=count,
                    limit=1,
                )
            )
    return FeasibilityVerdict(feasible=not violations, violations=tuple(violations))


def ensure_feasible(config: SystemConfig, sigma: BlockingMatrix) -> None:
    """Raise FeasibilityError (with the full verdict attached) if infeasible."""
    verdict = validate(config, sigma)
    if not verdict.feasible:
        summary = "; ".join(v.detail for v in verdict.violations)
        raise FeasibilityError(f"infeasible blocking matrix: {summary}", verdict)


@dataclass(frozen=True)
class CbsDescriptor:
    """A consecutive blocked window: 1-based row, 1-based start slot, length.

    length == 0 denotes the empty window (an all-clear matrix).
    """

    row: int
    start: int
    length: int

    def __post_init__(self) -> None:
        if self.row < 1:
            raise ValueError(f"row must be >= 1, got {self.row}")
        if self.start < 1:
            raise ValueError(f"start must be >= 1, got {self.start}")
        if self.length < 0:
            raise ValueError(f"length must be >= 0, got {self.length}")

    def end(self) -> int:
        """Last blocked slot (start - 1 for the empty window)."""
        return self.start + self.length - 1

    def left_ones(self) -> int:
        return self.start - 1

    def right_ones(self, horizon: int) -> int:
        return horizon - self.end()


def cbs_to_matrix(
    config: SystemConfig, descriptor: CbsDescriptor, rows: int | None = None
) -> BlockingMatrix:
    """Materialize a consecutive blocked window as a full blocking matrix.

    rows defaults to n_users; pass config.n_subcarriers for the diversity
    model.  The window must fit the horizon and the jamming budget.
    """
    n_rows = config.n_users if rows is None else rows
    if descriptor.row > n_rows:
        raise ValueError(f"descriptor row {descriptor.row} outside 1..{n_rows}")
    if descriptor.length > 0 and descriptor.end() > config.horizon:
        raise ValueError(
            f"window [{descriptor.start}, {descriptor.end()}] exceeds horizon "
            f"{config.horizon}"
        )
    if descriptor.start > config.horizon:
        raise ValueError(
            f"start {descriptor.start} exceeds horizon {config.horizon}"
        )
    if descriptor.length > config.budget():
        raise FeasibilityError(
            f"window length {descriptor.length} exceeds budget {config.budget()}"
        )
    zeros = [
        (descriptor.row, t) for t in range(descriptor.start, descriptor.end() + 1)
    ]
    return BlockingMatrix.from_zeros(n_rows, config.horizon, zeros)


@dataclass(frozen=True)
class AgeTrajectory:
    """Exact expected ages, one row per user, raw slots 1..horizon+1.

    The stored sequence follows the one-step recursion from age 1, so
    values[u][0] == 1 for every user.  Two views of the same numbers are
    exposed: "raw" reports the value driven by blocking decisions 1..t-1 at
    slot t (slots 1..horizon), "shifted" attributes the value driven by
    decisions 1..t to slot t itself, which makes every slot of the horizon
    carry weight in the finite-horizon mean.
    """

    values: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        if not self.values:
            raise ValueError("trajectory must cover at least one user")
        width = len(self.values[0])
        if width < 2:
            raise ValueError("trajectory must cover at least one slot")
        one = Fraction(1)
        for row in self.values:
            if len(row) != width:
                raise ValueError("trajectory rows must have equal length")
            if row[0] != one:
                raise ValueError("age at slot 1 must be exactly 1")
            for prev, cur in zip(row, row[1:]):
                if cur < 1:
                    raise ValueError("ages must stay >= 1")
                if cur - 1 > prev:
                    raise ValueError("age may grow by at most 1 per slot")

    @property
    def n_users(self) -> int:
        return len(self.values)

    @property
    def horizon(self) -> int:
        return len(self.values[0]) - 1

    def user_values(self, user: int, convention: Convention = "raw") -> tuple[Fraction, ...]:
        """Ages of the 1-based user at slots 1..horizon under a convention."""
        if not 1 <= user <= self.n_users:
            raise IndexError(f"user {user} outside 1..{self.n_users}")
        if convention not in _CONVENTIONS:
            raise ValueError(f"convention must be one of {_CONVENTIONS}")
        row = self.values[user - 1]
        return row[:-1] if convention == "raw" else row[1:]

    def per_user_mean(self, user: int, convention: Convention = "raw") -> Fraction:
        vals = self.user_values(user, convention)
        return sum(vals, Fraction(0)) / len(vals)

    def per_user_means(self, convention: Convention = "raw") -> tuple[Fraction, ...]:
        return tuple(
            self.per_user_mean(u, convention) for u in range(1, self.n_users + 1)
        )

    def overall_mean(self, convention: Convention = "raw") -> Fraction:
        means = self.per_user_means(convention)
        return sum(means, Fraction(0)) / len(means)


@dataclass(frozen=True)
class SimulationReport:
    """Summary of a batch of simulated runs."""

    scheme: str
    empirical_overall_mean: float
    empirical_per_user_mean: tuple[float, ...]
    std_error: float
    n_runs: int
    seed: int

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "empirical_per_user_mean", tuple(float(v) for v in self.empirical_per_user_mean)
        )
        if self.n_runs < 1:
            raise ValueError("report must cover at least one run")
        if self.std_error < 0:
            raise ValueError("standard error cannot be negative")
        if self.empirical_overall_mean < 1 or any(
            v < 1 for v in self.empirical_per_user_mean
        ):
            raise ValueError("empirical mean ages cannot drop below 1")

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "empirical_overall_mean": self.empirical_overall_mean,
            "empirical_per_user_mean": list(self.empirical_per_user_mean),
            "std_error": self.std_error,
            "n_runs": self.n_runs,
            "seed": self.seed,
        }


# -------- serialization --------


def matrix_to_text(matrix: BlockingMatrix) -> str:
    """Plain grid: one row per line, characters '0'/'1'."""
    return "\n".join("".join(str(v) for v in row) for row in matrix.entries)


def matrix_from_text(text: str) -> BlockingMatrix:
    lines = [line.strip() for line in text.strip().splitlines() if line.strip()]
    if not lines:
        raise ValueError("empty grid")
    bad = set("".join(lines)) - {"0", "1"}
    if bad:
        raise ValueError(f"grid may only contain '0'/'1', found {sorted(bad)}")
    return BlockingMatrix(tuple(tuple(int(ch) for ch in line) for line in lines))


def matrix_to_json(config: SystemConfig, matrix: BlockingMatrix) -> str:
    """JSON wrapper carrying the config alongside the grid; round-trips
    bit-exactly through matrix_from_json."""
    payload = {"config": config.to_dict(), "grid": matrix_to_text(matrix)}
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def matrix_from_json(text: str) -> tuple[SystemConfig, BlockingMatrix]:
    payload = json.loads(text)
    config = SystemConfig.from_dict(payload["config"])
    matrix = matrix_from_text(payload["grid"])
    return config, matrix
