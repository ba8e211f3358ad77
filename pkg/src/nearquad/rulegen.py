"""Assembly of the weighted-basis system and quadrature-rule construction.

A rule keeps the N Gauss-Legendre nodes and refits the weights so that
all 4M weighted Legendre basis functions

    P_k(t),  P_k(t) log(D)/2,  P_k(t)/sqrt(D),  P_k(t)/D,   k = 0..M-1,

are integrated exactly in the least-squares sense, D(t) = (x-t)^2 + y^2.
The block order is (unit, log, inv_r, inv_r2).
"""

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolationError, EvaluationError
from .moments import (
    KERNEL_ORDER,
    FieldPoint,
    kernel_values,
    legendre_moments,
    power_moments,
)
from .solver import solve_min_norm_lsq
from .special import MAX_ORDER, gauss_legendre, legendre_table

MAX_BLOCK_ORDER = 32

# a rule whose moment residual exceeds this should not be trusted
RESIDUAL_WARN_THRESHOLD = 1e-8


@dataclass(frozen=True)
class RuleSpec:
    """Field point plus node count N and per-kernel polynomial order bound M."""

    point: FieldPoint
    N: int
    M: int

    def __post_init__(self):
        if not 1 <= self.N <= MAX_ORDER:
            raise ContractViolationError(
                f"node count must be in [1, {MAX_ORDER}], got {self.N}"
            )
        if not 1 <= self.M <= MAX_BLOCK_ORDER:
            raise ContractViolationError(
                f"block order must be in [1, {MAX_BLOCK_ORDER}], got {self.M}"
            )


@dataclass(frozen=True)
class QuadratureRule:
    """Refitted quadrature rule: Gauss-Legendre nodes, recomputed weights."""

    spec: RuleSpec
    nodes: np.ndarray
    weights: np.ndarray
    residual_norm: float
    basis_rows: int

    @property
    def residual_warning(self):
        """True when the weight fit was too poor for the rule to be reliable."""
        return self.residual_norm > RESIDUAL_WARN_THRESHOLD


def build_psi(spec, nodes):
    """Basis matrix of shape (4M, N): row block b, row k is P_k(t_j) u_b(t_j)."""
    nodes = np.asarray(nodes, dtype=float)
    if nodes.ndim != 1 or nodes.size != spec.N:
        raise ContractViolationError(
            f"expected {spec.N} nodes, got array of shape {nodes.shape}"
        )
    P = legendre_table(spec.M - 1, nodes)
    return np.vstack([P * kernel_values(k, spec.point, nodes) for k in KERNEL_ORDER])


def build_moment_vector(spec):
    """Right-hand side of length 4M: Legendre moments per kernel, block order."""
    return np.concatenate(
        [legendre_moments(power_moments(k, spec.point, spec.M)) for k in KERNEL_ORDER]
    )


def generate_rule(spec):
    """Fit quadrature weights at the Gauss-Legendre nodes for this spec."""
    gauss = gauss_legendre(spec.N)
    psi = build_psi(spec, gauss.nodes)
    moments = build_moment_vector(spec)
    report = solve_min_norm_lsq(psi, moments)
    return QuadratureRule(
        spec=spec,
        nodes=gauss.nodes,
        weights=report.solution,
        residual_norm=report.residual_norm,
        basis_rows=4 * spec.M,
    )


def apply_rule(rule, f):
    """Apply the rule to a scalar integrand: sum of w_i f(t_i)."""
    values = np.empty(rule.nodes.size)
    for i, t in enumerate(rule.nodes):
        values[i] = f(float(t))
        if not np.isfinite(values[i]):
            raise EvaluationError(
                f"integrand returned a non-finite value at node t = {t!r}"
            )
    return float(np.dot(rule.weights, values))


def serialize_rule(rule):
    """Flat text record: header 'x y N M residual', then N 't_i w_i' lines.

    All values carry 17 significant digits, enough to round-trip doubles.
    """
    point = rule.spec.point
    lines = [
        f"{point.x:.17g} {point.y:.17g} {rule.spec.N} {rule.spec.M} "
        f"{rule.residual_norm:.17g}"
    ]
    lines.extend(
        f"{t:.17g} {w:.17g}" for t, w in zip(rule.nodes, rule.weights)
    )
    return "\n".join(lines) + "\n"


def parse_rule_text(text):
    """Parse the serialize_rule format back into a plain dict."""
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise ContractViolationError("empty rule record")
    head = lines[0].split()
    if len(head) != 5:
        raise ContractViolationError("malformed rule header")
    x, y, N, M, residual = (
        float(head[0]), float(head[1]), int(head[2]), int(head[3]), float(head[4]),
    )
    if len(lines) != N + 1:
        raise ContractViolationError(f"expected {N} node lines, found {len(lines) - 1}")
    pairs = np.array([[float(v) for v in line.split()] for line in lines[1:]])
    return {
        "x": x,
        "y": y,
        "N": N,
        "M": M,
        "residual": residual,
        "nodes": pairs[:, 0],
        "weights": pairs[:, 1],
    }


def rule_to_dict(rule):
    """Structured export with the same fields as the text record."""
    point = rule.spec.point
    return {
        "x": point.x,
        "y": point.y,
        "N": rule.spec.N,
        "M": rule.spec.M,
        "residual": rule.residual_norm,
        "nodes": [float(t) for t in rule.nodes],
        "weights": [float(w) for w in rule.weights],
    }
