"""
LDL evaluation metrics

Four distances (lower is better): Chebyshev, Clark, Canberra, KL.
Two similarities (higher is better): Cosine, Intersection.
"""
from dataclasses import dataclass
from typing import Dict, Tuple
import numpy as np

from config.constants import MetricName
from src.ldl_core.types import DistributionMatrix, check_simplex_columns
from src.error_handling.exceptions import BLDLError, ShapeMismatch, InvalidDistribution

KL_EPSILON = 1e-12


def _safe_ratio(numerator: np.ndarray, denominator: np.ndarray) -> np.ndarray:
    # 0/0 terms contribute nothing
    out = np.zeros_like(numerator)
    np.divide(numerator, denominator, out=out, where=denominator > 0)
    return out


def _metric_columns(name: MetricName, D: np.ndarray, P: np.ndarray) -> np.ndarray:
    """Metric value for every column pair"""
    diff = D - P
    total = D + P
    if name is MetricName.CHEBYSHEV:
        return np.max(np.abs(diff), axis=0)
    if name is MetricName.CLARK:
        return np.sqrt(np.sum(_safe_ratio(diff ** 2, total ** 2), axis=0))
    if name is MetricName.CANBERRA:
        return np.sum(_safe_ratio(np.abs(diff), total), axis=0)
    if name is MetricName.KL:
        d = np.maximum(D, KL_EPSILON)
        p = np.maximum(P, KL_EPSILON)
        return np.sum(d * np.log(d / p), axis=0)
    if name is MetricName.COSINE:
        norms = np.sqrt(np.sum(D * D, axis=0) * np.sum(P * P, axis=0))
        return np.minimum(np.sum(D * P, axis=0) / norms, 1.0)
    if name is MetricName.INTERSECTION:
        # sum_j min(d_j, p_j) == 1 - 0.5 * sum_j |d_j - p_j| on the simplex
        return np.clip(1.0 - 0.5 * np.sum(np.abs(diff), axis=0), 0.0, 1.0)
    raise ValueError(f"Unknown metric: {name}")


def _checked_pair(d, p) -> Tuple[np.ndarray, np.ndarray]:
    d = d.data if isinstance(d, DistributionMatrix) else np.asarray(d, dtype=float)
    p = p.data if isinstance(p, DistributionMatrix) else np.asarray(p, dtype=float)
    if d.ndim == 1:
        d = d.reshape(-1, 1)
    if p.ndim == 1:
        p = p.reshape(-1, 1)
    if d.shape != p.shape:
        raise ShapeMismatch(f"shapes differ: {d.shape} vs {p.shape}")
    try:
        return check_simplex_columns(d), check_simplex_columns(p)
    except BLDLError as e:
        raise InvalidDistribution(str(e), column=e.context.get("col")) from e


def per_instance_metric(name: MetricName, d, p) -> float:
    """
    Metric between a true distribution d and a predicted distribution p

    Args:
        name: which metric
        d: true distribution (length m)
        p: predicted distribution (length m)

    Returns:
        Metric value
    """
    D, P = _checked_pair(d, p)
    if D.shape[1] != 1:
        raise ShapeMismatch(f"expected single distributions, got shape {D.shape}")
    return float(_metric_columns(MetricName(name), D, P)[0])


def metric_values(name: MetricName, D_true, P) -> np.ndarray:
    """Per-instance metric values for two m x n distribution matrices"""
    D, Q = _checked_pair(D_true, P)
    return _metric_columns(MetricName(name), D, Q)


def aggregate(name: MetricName, D_true, P) -> Tuple[float, float]:
    """Mean and population standard deviation over instances"""
    values = metric_values(name, D_true, P)
    return float(np.mean(values)), float(np.std(values))


@dataclass
class ScoreReport:
    """Mean and std of every metric over a set of instances"""
    per_metric: Dict[MetricName, Tuple[float, float]]
    n_instances: int

    def mean(self, name: MetricName) -> float:
        return self.per_metric[name][0]

    def std(self, name: MetricName) -> float:
        return self.per_metric[name][1]

    def to_dict(self) -> Dict:
        return {
            'n_instances': self.n_instances,
            'metrics': {
                name.value: {'mean': mean, 'std': std}
                for name, (mean, std) in self.per_metric.items()
            }
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "ScoreReport":
        return cls(
            per_metric={
                MetricName(key): (float(value['mean']), float(value['std']))
                for key, value in data['metrics'].items()
            },
            n_instances=int(data['n_instances'])
        )


def score_report(D_true, P) -> ScoreReport:
    """All six metrics for a prediction"""
    D, Q = _checked_pair(D_true, P)
    per_metric = {}
    for name in MetricName:
        values = _metric_columns(name, D, Q)
        per_metric[name] = (float(np.mean(values)), float(np.std(values)))
    return ScoreReport(per_metric=per_metric, n_instances=D.shape[1])
