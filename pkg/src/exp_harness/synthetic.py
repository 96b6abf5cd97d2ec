"""
Synthetic datasets with a known low-rank logit structure
"""
import numpy as np
from scipy.special import softmax

from src.ldl_core.types import FeatureMatrix, DistributionMatrix, MAX_SEED
from src.exp_harness.dataset_io import Dataset
from src.error_handling.exceptions import InvalidRank, InvalidConfig
from src.error_handling.logger import get_logger

logger = get_logger("synthetic")


def synth_generate(d: int, m: int, n: int, rank_r: int, seed: int = 0) -> Dataset:
    """
    Generate a dataset whose true distributions are softmax(A B X)

    X, A (m x r) and B (r x d) all have standard normal entries, which makes
    the true distributions sharply peaked on one or two labels.

    Args:
        d: feature dimension
        m: number of labels
        n: number of instances
        rank_r: rank of the logit map A B
        seed: PCG64 seed

    Returns:
        Dataset named "synth-d{d}-m{m}-n{n}-r{r}-s{seed}"

    Raises:
        InvalidRank: rank_r outside [1, min(m, d)]
    """
    if min(d, m, n) < 1:
        raise InvalidConfig(f"d, m and n must be positive, got d={d}, m={m}, n={n}")
    if not 1 <= rank_r <= min(m, d):
        raise InvalidRank(f"rank must be in [1, {min(m, d)}], got {rank_r}", rank=rank_r)
    if not 0 <= int(seed) <= MAX_SEED:
        raise InvalidConfig(f"seed must be a 64-bit unsigned integer, got {seed}")

    rng = np.random.Generator(np.random.PCG64(int(seed)))
    X = rng.standard_normal((d, n))
    A = rng.standard_normal((m, rank_r))
    B = rng.standard_normal((rank_r, d))
    logits = A @ (B @ X)
    D = softmax(logits, axis=0)
    # softmax columns can be off by a few ulps
    D = D / D.sum(axis=0, keepdims=True)

    name = f"synth-d{d}-m{m}-n{n}-r{rank_r}-s{seed}"
    logger.info(f"Generated {name}")
    return Dataset(name=name, X=FeatureMatrix(X), D=DistributionMatrix(D))
