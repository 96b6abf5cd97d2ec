"""
Shared fixtures
"""
import numpy as np
import pytest

from src.ldl_core.types import SolverState
from src.exp_harness.synthetic import synth_generate
from src.exp_harness.dataset_io import save_dataset


def random_simplex(rng: np.random.Generator, m: int, n: int) -> np.ndarray:
    """m x n matrix of strictly positive distributions"""
    D = rng.random((m, n)) + 0.05
    return D / D.sum(axis=0, keepdims=True)


def random_state(rng: np.random.Generator, m: int, d: int, n: int, rho: float = 1.0,
                 split_cols: int = None) -> SolverState:
    split_cols = n if split_cols is None else split_cols
    return SolverState(
        W=rng.standard_normal((m, d)),
        O=np.eye(m) + 0.3 * rng.standard_normal((m, m)),
        D=random_simplex(rng, m, n),
        Z=rng.standard_normal((m, split_cols)),
        Lambda=0.5 * rng.standard_normal((m, split_cols)),
        rho=rho,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_dataset():
    return synth_generate(d=5, m=4, n=24, rank_r=2, seed=3)


@pytest.fixture
def dataset_dir(tmp_path, small_dataset):
    directory = tmp_path / "clean"
    save_dataset(small_dataset, directory)
    return directory
