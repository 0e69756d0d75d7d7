"""Exact and Monte Carlo analysis of age of information for a uniform
randomized scheduler under a budget-constrained jamming adversary.

Exact expected-age trajectories are computed with rational arithmetic
(model, exact_age); optimal attacks are found by exhaustive search at small
scale (adversary); closed-form bounds and renewal quantities live in bounds;
Monte Carlo batches and exact-vs-empirical comparisons in sched_sim; and
verify certifies the structural claims on a small grid.
"""

from .model import (
    AgeTrajectory,
    BlockingMatrix,
    CbsDescriptor,
    FeasibilityError,
    FeasibilityVerdict,
    ShapeMismatchError,
    SimulationReport,
    SystemConfig,
    Violation,
    as_fraction,
    cbs_to_matrix,
    ensure_feasible,
    matrix_from_json,
    matrix_from_text,
    matrix_to_json,
    matrix_to_text,
    validate,
)
from .exact_age import (
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
from .adversary import (
    MaximizerSet,
    OverCapError,
    brute_force_optimum,
    centered_cbs,
    merge_and_center_path,
    merge_step,
    power_gap_inequality,
    row_from_blocks,
    shift_cbs,
    two_block_row,
    zero_blocks,
)
from .bounds import (
    BoundReport,
    OptimalityRatios,
    RenewalQuantities,
    bounds_table,
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
from .sched_sim import (
    ComparisonReport,
    RunTrace,
    empirical_vs_exact,
    sample_traces,
    simulate_randomized,
    simulate_randomized_subcarrier,
    simulate_round_robin,
    worst_case_round_robin_matrix,
)
from .verify import ClaimResult, all_passed, results_to_text, run_all

__version__ = "0.1.0"

__all__ = [
    "AgeTrajectory",
    "BlockingMatrix",
    "BoundReport",
    "CbsDescriptor",
    "ClaimResult",
    "ComparisonReport",
    "FeasibilityError",
    "FeasibilityVerdict",
    "MaximizerSet",
    "OptimalityRatios",
    "OverCapError",
    "RenewalQuantities",
    "RunTrace",
    "ShapeMismatchError",
    "SimulationReport",
    "SystemConfig",
    "Violation",
    "age_by_recursion",
    "age_by_recursion_subcarrier",
    "age_by_trains",
    "age_by_trains_subcarrier",
    "all_passed",
    "as_fraction",
    "bounds_table",
    "brute_force_optimum",
    "budget_upper_bound_diagnostic",
    "cbs_to_matrix",
    "centered_cbs",
    "cycle_cost",
    "deterministic_lower_bound",
    "diversity_lower_bound",
    "empirical_vs_exact",
    "ensure_feasible",
    "matrix_from_json",
    "matrix_from_text",
    "matrix_to_json",
    "matrix_to_text",
    "merge_and_center_path",
    "merge_step",
    "objective",
    "optimality_ratios",
    "power_gap_inequality",
    "randomized_lower_bound",
    "renewal_quantities",
    "results_to_text",
    "row_age_total",
    "row_from_blocks",
    "run_all",
    "sample_traces",
    "shift_cbs",
    "simulate_randomized",
    "simulate_randomized_subcarrier",
    "simulate_round_robin",
    "single_channel_upper_bound",
    "subcarrier_train_value",
    "subcarrier_upper_bound",
    "train_value",
    "trajectory_to_csv",
    "trajectory_to_json",
    "two_block_row",
    "validate",
    "worst_case_round_robin_matrix",
    "zero_blocks",
]
