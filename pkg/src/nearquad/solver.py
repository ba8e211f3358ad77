"""Minimum-norm least-squares solver for the weight-fitting system."""

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolationError

# singular values below max(rows, cols) * EPS * sigma_max are treated as zero
EPS = 2.0 ** -52


@dataclass(frozen=True)
class SolveReport:
    """Solution of one dense system with its residual and numerical rank."""

    solution: np.ndarray
    residual_norm: float
    rank: int


def solve_min_norm_lsq(A, b):
    """Minimum-norm least-squares solution of A w = b.

    Among all w minimizing ||A w - b||_2 the one of smallest ||w||_2 is
    returned, computed through an SVD with relative cutoff
    max(rows, cols) * 2^-52.  One rank-revealing path covers both the
    overdetermined and the underdetermined case, including the rank
    deficiency that appears near degenerate field points.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if A.ndim != 2 or A.size == 0:
        raise ContractViolationError("matrix must be two-dimensional and nonempty")
    if b.ndim != 1 or b.size != A.shape[0]:
        raise ContractViolationError(
            f"right-hand side length {b.size} does not match {A.shape[0]} rows"
        )
    if not (np.isfinite(A).all() and np.isfinite(b).all()):
        raise ContractViolationError("matrix and right-hand side must be finite")
    rcond = max(A.shape) * EPS
    solution, _, rank, _ = np.linalg.lstsq(A, b, rcond=rcond)
    residual = float(np.linalg.norm(A @ solution - b))
    solution.flags.writeable = False
    return SolveReport(solution=solution, residual_norm=residual, rank=int(rank))
