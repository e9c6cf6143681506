"""Wavelet threshold estimation of Poisson process intensities."""

from poisswave._core import (
    BiorthBasis,
    CellAggregate,
    CoeffRecord,
    CoeffTable,
    ExperimentPlan,
    ExperimentReport,
    GammaNConfig,
    LambdaIndex,
    PointProcess,
    RiskBreakdown,
    Signal,
    SweepCell,
    TruthSummary,
    accumulate,
    attach_truth,
    child_seed,
    compute_truth,
    csv_cells,
    estimate,
    json_summary,
    reconstruct,
    risk_breakdown,
    run_plan,
    splitmix64,
    sweep_gamma,
    sweep_value_at,
    true_coeff,
    true_sigma2,
)

__all__ = [
    "BiorthBasis",
    "CellAggregate",
    "CoeffRecord",
    "CoeffTable",
    "ExperimentPlan",
    "ExperimentReport",
    "GammaNConfig",
    "LambdaIndex",
    "PointProcess",
    "RiskBreakdown",
    "Signal",
    "SweepCell",
    "TruthSummary",
    "accumulate",
    "attach_truth",
    "child_seed",
    "compute_truth",
    "csv_cells",
    "estimate",
    "json_summary",
    "reconstruct",
    "risk_breakdown",
    "run_plan",
    "splitmix64",
    "sweep_gamma",
    "sweep_value_at",
    "true_coeff",
    "true_sigma2",
]
