import numpy as np
import pytest

from src.admm_solver.svt import svt, nuclear_norm
from src.error_handling.exceptions import InvalidConfig, NonFinite


def prox_objective(Z, A, tau):
    return tau * nuclear_norm(Z) + 0.5 * np.sum((Z - A) ** 2)


def subgradient_prox(A, tau, iters=3000):
    """Reference minimizer of tau||Z||_* + 0.5||Z - A||^2 by diminishing-step subgradient descent"""
    Z = A.copy()
    best, best_value = Z.copy(), prox_objective(Z, A, tau)
    for k in range(1, iters + 1):
        U, s, Vt = np.linalg.svd(Z, full_matrices=False)
        grad = tau * (U[:, s > 1e-12] @ Vt[s > 1e-12, :]) + (Z - A)
        Z = Z - (0.5 / np.sqrt(k)) * grad
        value = prox_objective(Z, A, tau)
        if value < best_value:
            best, best_value = Z.copy(), value
    return best


def test_diagonal_case():
    out = svt(np.diag([2.0, 1.0]), 0.5)
    assert out == pytest.approx(np.diag([1.5, 0.5]), abs=1e-15)


@pytest.mark.parametrize("tau", [0.1, 1.0, 10.0])
def test_zero_matrix(tau):
    assert np.array_equal(svt(np.zeros((3, 4)), tau), np.zeros((3, 4)))


def test_large_threshold_gives_zero(rng):
    A = rng.standard_normal((4, 3))
    assert np.array_equal(svt(A, 100.0), np.zeros_like(A))


def test_singular_values_shrink_by_tau(rng):
    A = rng.standard_normal((6, 5))
    tau = 0.3
    s = np.linalg.svd(A, compute_uv=False)
    s_out = np.linalg.svd(svt(A, tau), compute_uv=False)
    assert s_out == pytest.approx(np.maximum(s - tau, 0.0), abs=1e-12)


def test_shrinkage_bound(rng):
    for _ in range(20):
        A = rng.standard_normal((6, 5))
        tau = rng.uniform(0.05, 3.0)
        assert np.linalg.norm(svt(A, tau) - A) <= np.sqrt(5) * tau + 1e-12


@pytest.mark.parametrize("tau", [0.1, 0.5, 2.0])
def test_optimal_against_random_perturbations(tau):
    rng = np.random.default_rng(int(tau * 100))
    for _ in range(20):
        A = rng.standard_normal((6, 5))
        Z = svt(A, tau)
        value = prox_objective(Z, A, tau)
        for _ in range(10):
            candidate = Z + 1e-3 * rng.standard_normal(Z.shape)
            assert value <= prox_objective(candidate, A, tau) + 1e-8


def test_matches_iterative_oracle():
    rng = np.random.default_rng(30)
    A = rng.standard_normal((6, 5))
    tau = 0.3
    Z = svt(A, tau)
    reference = subgradient_prox(A, tau)
    assert prox_objective(Z, A, tau) <= prox_objective(reference, A, tau) + 1e-8


def test_nuclear_norm():
    assert nuclear_norm(np.diag([3.0, -2.0])) == pytest.approx(5.0)


def test_threshold_must_be_positive():
    with pytest.raises(InvalidConfig):
        svt(np.eye(2), 0.0)


def test_non_finite_input():
    with pytest.raises(NonFinite):
        svt(np.array([[np.nan, 0.0]]), 1.0)
