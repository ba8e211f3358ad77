import numpy as np
import pytest

from nearquad import ContractViolationError, solve_min_norm_lsq


def test_identity_system():
    report = solve_min_norm_lsq(np.eye(3), np.array([1.0, 2.0, 3.0]))
    assert report.solution == pytest.approx([1.0, 2.0, 3.0], abs=1e-15)
    assert report.residual_norm <= 1e-15
    assert report.rank == 3


def test_minimum_norm_pick_on_solution_line():
    # x + y = 2 has solutions (2-s, s); the smallest-norm one is (1, 1)
    report = solve_min_norm_lsq(np.array([[1.0, 1.0]]), np.array([2.0]))
    assert report.solution == pytest.approx([1.0, 1.0], abs=1e-14)
    assert report.residual_norm <= 1e-14
    assert report.rank == 1


def test_least_squares_mean():
    report = solve_min_norm_lsq(np.array([[1.0], [1.0]]), np.array([0.0, 2.0]))
    assert report.solution == pytest.approx([1.0], abs=1e-14)
    assert report.residual_norm == pytest.approx(np.sqrt(2.0), rel=1e-14)


@pytest.mark.parametrize("n", [2, 5, 12, 24, 32])
def test_random_full_rank_square(n):
    rng = np.random.default_rng(n)
    for _ in range(5):
        A = rng.uniform(-1, 1, size=(n, n))
        if np.linalg.cond(A) > 1e6:
            continue
        b = rng.uniform(-1, 1, size=n)
        report = solve_min_norm_lsq(A, b)
        assert report.residual_norm / np.linalg.norm(b) < 1e-10
        assert report.rank == n


@pytest.mark.parametrize("rows,cols", [(3, 7), (5, 12), (10, 40)])
def test_solution_orthogonal_to_null_space(rows, cols):
    rng = np.random.default_rng(rows * 100 + cols)
    A = rng.uniform(-1, 1, size=(rows, cols))
    b = rng.uniform(-1, 1, size=rows)
    report = solve_min_norm_lsq(A, b)
    w = report.solution
    # sample the null space: project random vectors onto it
    for _ in range(10):
        z = rng.uniform(-1, 1, size=cols)
        null_vec = z - A.T @ np.linalg.lstsq(A.T, z, rcond=None)[0]
        if np.linalg.norm(null_vec) < 1e-10:
            continue
        cosine = abs(np.dot(w, null_vec)) / (np.linalg.norm(w) * np.linalg.norm(null_vec))
        assert cosine < 1e-10


def test_rank_deficient_consistent_system():
    # duplicated rows: rank 1, consistent
    A = np.array([[1.0, 2.0], [2.0, 4.0]])
    b = np.array([3.0, 6.0])
    report = solve_min_norm_lsq(A, b)
    assert report.rank == 1
    assert report.residual_norm <= 1e-13
    assert A @ report.solution == pytest.approx(b, abs=1e-13)


def test_dimension_mismatch_rejected():
    with pytest.raises(ContractViolationError):
        solve_min_norm_lsq(np.eye(3), np.ones(4))


def test_non_finite_rejected():
    A = np.eye(2)
    A[0, 0] = np.nan
    with pytest.raises(ContractViolationError):
        solve_min_norm_lsq(A, np.ones(2))
    with pytest.raises(ContractViolationError):
        solve_min_norm_lsq(np.eye(2), np.array([1.0, np.inf]))


def test_empty_matrix_rejected():
    with pytest.raises(ContractViolationError):
        solve_min_norm_lsq(np.empty((0, 0)), np.empty(0))
