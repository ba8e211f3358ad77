"""Legendre polynomials and Gauss-Legendre node/weight generation."""

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolationError, IterationFailureError

MAX_ORDER = 512
_NEWTON_TOL = 1e-15
_NEWTON_MAX_ITER = 100


def legendre_eval(n, t):
    """Evaluate the Legendre polynomial P_n(t).

    Uses the stable three-term recurrence
    (k+1) P_{k+1} = (2k+1) t P_k - k P_{k-1}.
    """
    if n < 0:
        raise ContractViolationError("polynomial degree must be nonnegative")
    if n == 0:
        return 1.0
    p0, p1 = 1.0, float(t)
    for k in range(1, n):
        p0, p1 = p1, ((2 * k + 1) * t * p1 - k * p0) / (k + 1)
    return p1


def legendre_table(max_degree, t):
    """Values of P_0..P_max_degree at the points t, shape (max_degree+1, len(t))."""
    if max_degree < 0:
        raise ContractViolationError("polynomial degree must be nonnegative")
    t = np.asarray(t, dtype=float)
    table = np.ones((max_degree + 1, t.size))
    if max_degree >= 1:
        table[1] = t
    for k in range(1, max_degree):
        table[k + 1] = ((2 * k + 1) * t * table[k] - k * table[k - 1]) / (k + 1)
    return table


def _legendre_pair(n, t):
    """(P_{n-1}(t), P_n(t)) for n >= 1."""
    p0, p1 = 1.0, t
    for k in range(1, n):
        p0, p1 = p1, ((2 * k + 1) * t * p1 - k * p0) / (k + 1)
    return p0, p1


@dataclass(frozen=True)
class GaussRule:
    """Gauss-Legendre rule on [-1, 1]: strictly increasing nodes, positive weights."""

    order: int
    nodes: np.ndarray
    weights: np.ndarray


def gauss_legendre(n):
    """Construct the n-point Gauss-Legendre rule on [-1, 1].

    Nodes are the roots of P_n found by Newton iteration from the
    cos(pi*(i - 1/4)/(n + 1/2)) starting guesses; the negative half is
    mirrored from the positive half so the node set is exactly symmetric.
    Weight formula: w = 2 / ((1 - t^2) P_n'(t)^2).
    """
    if not 1 <= n <= MAX_ORDER:
        raise ContractViolationError(f"node count must be in [1, {MAX_ORDER}], got {n}")
    nodes = np.empty(n)
    weights = np.empty(n)
    for i in range(1, n // 2 + 1):
        t = np.cos(np.pi * (i - 0.25) / (n + 0.5))
        for _ in range(_NEWTON_MAX_ITER):
            pm, p = _legendre_pair(n, t)
            dp = n * (pm - t * p) / (1.0 - t * t)
            step = p / dp
            t -= step
            if abs(step) <= _NEWTON_TOL:
                break
        else:
            raise IterationFailureError(
                f"Newton iteration for node {i} of {n} did not converge"
            )
        pm, p = _legendre_pair(n, t)
        dp = n * (pm - t * p) / (1.0 - t * t)
        w = 2.0 / ((1.0 - t * t) * dp * dp)
        nodes[n - i] = t
        nodes[i - 1] = -t
        weights[n - i] = w
        weights[i - 1] = w
    if n % 2 == 1:
        # middle node is an exact root by symmetry
        mid = n // 2
        nodes[mid] = 0.0
        pm, _ = _legendre_pair(n, 0.0)
        dp = n * pm
        weights[mid] = 2.0 / (dp * dp)
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return GaussRule(order=n, nodes=nodes, weights=weights)
