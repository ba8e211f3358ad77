"""Quadrature rules for near-singular and near-hypersingular integrands.

The rules keep the nodes of an N-point Gauss-Legendre quadrature and
refit the weights so that polynomials of order below M multiplied by
any of 1, log(D)/2, D^(-1/2), D^(-1), with D(t) = (x-t)^2 + y^2, are
integrated exactly in the least-squares sense.  They act as drop-in
replacements for Gauss-Legendre rules when the field point (x, y) is
close to the integration element [-1, 1].
"""

from .errors import (
    ContractViolationError,
    EvaluationError,
    IterationFailureError,
    NearquadError,
    OverflowRiskError,
    SingularConfigurationError,
    ValidationFailureError,
)
from .experiments import (
    AuditEntry,
    AuditReport,
    ErrorReport,
    ErrorRow,
    SweepConfig,
    audit_moment_formulas,
    pointwise_error_curves,
    rms_reference_error,
    table_csv,
    table_rows,
    theta_grid,
    weight_deviation,
)
from .moments import (
    KERNEL_ORDER,
    MAX_MOMENTS,
    FieldPoint,
    KernelKind,
    MomentSet,
    kernel_values,
    legendre_moments,
    legendre_moments_expansion,
    moment_set,
    power_moments,
)
from .oracle import OracleResult, oracle_integrate
from .rulegen import (
    QuadratureRule,
    RuleSpec,
    apply_rule,
    build_moment_vector,
    build_psi,
    generate_rule,
    parse_rule_text,
    rule_to_dict,
    serialize_rule,
)
from .solver import SolveReport, solve_min_norm_lsq
from .special import GaussRule, gauss_legendre, legendre_eval, legendre_table

__version__ = "0.1.0"

__all__ = [
    "AuditEntry",
    "AuditReport",
    "ContractViolationError",
    "ErrorReport",
    "ErrorRow",
    "EvaluationError",
    "FieldPoint",
    "GaussRule",
    "IterationFailureError",
    "KERNEL_ORDER",
    "KernelKind",
    "MAX_MOMENTS",
    "MomentSet",
    "NearquadError",
    "OracleResult",
    "OverflowRiskError",
    "QuadratureRule",
    "RuleSpec",
    "SingularConfigurationError",
    "SolveReport",
    "SweepConfig",
    "ValidationFailureError",
    "apply_rule",
    "audit_moment_formulas",
    "build_moment_vector",
    "build_psi",
    "gauss_legendre",
    "generate_rule",
    "kernel_values",
    "legendre_eval",
    "legendre_moments",
    "legendre_moments_expansion",
    "legendre_table",
    "moment_set",
    "oracle_integrate",
    "parse_rule_text",
    "pointwise_error_curves",
    "power_moments",
    "rms_reference_error",
    "rule_to_dict",
    "serialize_rule",
    "solve_min_norm_lsq",
    "table_csv",
    "table_rows",
    "theta_grid",
    "weight_deviation",
]
