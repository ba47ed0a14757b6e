"""Joint data completion + geometric separation with recovery certificates.

The heavy lifting lives in the compiled extension ``geosep._core``: Parseval
frames, the constrained l1-analysis solver (primal-dual iteration plus an
exact LP oracle), the sparsity defect delta, the joint concentration kappa
(exact sign-pattern oracle and sampled lower bound) and the recovery bound
2*delta / (1 - 2*kappa).
"""

__version__ = "0.1.0"

from ._core import (
    Certificate,
    CutoffExceeded,
    Frame,
    OracleFailure,
    Partition,
    SolveResult,
    Supports,
    certify,
    compute_delta,
    dct_frame,
    error_bound,
    feasibility_residual,
    haar_frame,
    identity_frame,
    joint_ratio,
    kappa_exact,
    kappa_lower_estimate,
    lp_norm,
    objective_value,
    project_constraint,
    project_known,
    project_missing,
    random_tight_frame,
    select_supports,
    soft_threshold,
    solve_iterative,
    solve_lp_exact,
    union_frame,
)

__all__ = [
    "Certificate",
    "CutoffExceeded",
    "Frame",
    "OracleFailure",
    "Partition",
    "SolveResult",
    "Supports",
    "certify",
    "compute_delta",
    "dct_frame",
    "error_bound",
    "feasibility_residual",
    "haar_frame",
    "identity_frame",
    "joint_ratio",
    "kappa_exact",
    "kappa_lower_estimate",
    "lp_norm",
    "objective_value",
    "project_constraint",
    "project_known",
    "project_missing",
    "random_tight_frame",
    "select_supports",
    "soft_threshold",
    "solve_iterative",
    "solve_lp_exact",
    "union_frame",
]