"""
Degradation of label distributions into multi-hot label sets

Greedy cumulative coverage: start from the most descriptive label, keep adding
the next most descriptive one until the covered mass H exceeds T. Ties are
broken by the lowest label index.
"""
from dataclasses import dataclass
import numpy as np

from config.settings import config
from src.ldl_core.types import DistributionMatrix, MultiLabelMatrix, check_simplex_columns
from src.error_handling.exceptions import BLDLError, InvalidConfig, InvalidDistribution, ShapeMismatch


@dataclass(frozen=True)
class DegradeConfig:
    """Coverage threshold T in (0, 1)"""
    threshold_t: float = config.DEGRADE_THRESHOLD_T

    def __post_init__(self):
        if not 0.0 < self.threshold_t < 1.0:
            raise InvalidConfig(
                f"threshold_t must be in (0, 1), got {self.threshold_t}", field="threshold_t"
            )


def _selection_size(d: np.ndarray, order: np.ndarray, threshold: float) -> int:
    covered = np.cumsum(d[order])
    above = np.flatnonzero(covered > threshold)
    return int(above[0]) + 1 if above.size else d.size


def degrade_to_multilabel(d, cfg: DegradeConfig) -> np.ndarray:
    """
    Degrade one distribution into its multi-hot relevance vector

    Args:
        d: label distribution (length m)
        cfg: degradation threshold

    Returns:
        0/1 vector with at least one relevant label
    """
    try:
        d = check_simplex_columns(np.asarray(d, dtype=float).reshape(-1, 1))[:, 0]
    except BLDLError as e:
        raise InvalidDistribution(str(e)) from e

    # stable sort on -d keeps the lowest index first among equal degrees
    order = np.argsort(-d, kind="stable")
    k = _selection_size(d, order, cfg.threshold_t)

    labels = np.zeros(d.size, dtype=np.uint8)
    labels[order[:k]] = 1
    return labels


def batch_degrade(D, cfg: DegradeConfig) -> MultiLabelMatrix:
    """
    Column-wise degrade_to_multilabel, vectorized over instances

    Raises:
        InvalidDistribution: with the offending column index
    """
    data = D.data if isinstance(D, DistributionMatrix) else np.asarray(D, dtype=float)
    try:
        data = check_simplex_columns(data)
    except BLDLError as e:
        column = e.context.get("col")
        raise InvalidDistribution(f"column {column}: {e}", column=column) from e

    m = data.shape[0]
    order = np.argsort(-data, axis=0, kind="stable")
    covered = np.cumsum(np.take_along_axis(data, order, axis=0), axis=0)
    above = covered > cfg.threshold_t
    k = np.where(above.any(axis=0), above.argmax(axis=0) + 1, m)

    # position of every label in its column's descending order
    ranks = np.empty_like(order)
    np.put_along_axis(ranks, order, np.broadcast_to(np.arange(m)[:, None], order.shape), axis=0)
    return MultiLabelMatrix((ranks < k[None, :]).astype(np.uint8))


def hamming_distance(L1, L2) -> float:
    """Fraction of disagreeing entries between two label matrices"""
    a = L1.data if isinstance(L1, MultiLabelMatrix) else np.asarray(L1)
    b = L2.data if isinstance(L2, MultiLabelMatrix) else np.asarray(L2)
    if a.shape != b.shape:
        raise ShapeMismatch(f"label shapes differ: {a.shape} vs {b.shape}")
    return float(np.mean(a != b))
