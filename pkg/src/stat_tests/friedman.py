"""
Friedman test, F critical values and the Bonferroni-Dunn critical difference
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence
import math
import numpy as np
from scipy.optimize import bisect
from scipy.special import betainc
from scipy.stats import norm, rankdata

from config.constants import BONFERRONI_DUNN_Q, MetricDirection
from src.error_handling.exceptions import ShapeMismatch, InvalidConfig
from src.error_handling.logger import get_logger

logger = get_logger("stats")

F_QUANTILE_XTOL = 1e-10


@dataclass
class RankTable:
    """N x k matrix of per-dataset ranks (1 = best, ties averaged)"""
    ranks: np.ndarray
    method_names: List[str]

    def __post_init__(self):
        self.ranks = np.asarray(self.ranks, dtype=float)
        if self.ranks.ndim != 2 or self.ranks.shape[1] != len(self.method_names):
            raise ShapeMismatch(
                f"rank matrix {self.ranks.shape} does not match {len(self.method_names)} methods"
            )
        k = self.k
        expected = k * (k + 1) / 2.0
        if not np.allclose(self.ranks.sum(axis=1), expected, atol=1e-9):
            raise InvalidConfig(f"every rank row must sum to {expected}")

    @property
    def n_datasets(self) -> int:
        return self.ranks.shape[0]

    @property
    def k(self) -> int:
        return self.ranks.shape[1]

    def mean_ranks(self) -> np.ndarray:
        return self.ranks.mean(axis=0)

    @classmethod
    def from_scores(cls, scores, method_names: Sequence[str],
                    direction: MetricDirection = MetricDirection.DOWN) -> "RankTable":
        """
        Rank an N x k score matrix row by row

        Args:
            scores: N datasets x k methods
            method_names: k method identifiers
            direction: DOWN when smaller scores are better, UP otherwise
        """
        scores = np.asarray(scores, dtype=float)
        signed = scores if direction is MetricDirection.DOWN else -scores
        ranks = np.vstack([rankdata(row, method="average") for row in signed])
        return cls(ranks=ranks, method_names=list(method_names))


@dataclass
class FriedmanResult:
    chi2: float
    f_stat: float
    df1: int
    df2: int

    @property
    def degenerate(self) -> bool:
        """Perfect ordering on every dataset; the F statistic is unbounded"""
        return math.isinf(self.f_stat)


def friedman(ranks: RankTable) -> FriedmanResult:
    """
    Friedman chi-square and its Iman-Davenport F statistic

    A perfect ordering (chi2 = N(k-1)) yields f_stat = +inf instead of an error.
    """
    N, k = ranks.n_datasets, ranks.k
    if N < 2 or k < 2:
        raise InvalidConfig(f"friedman needs N >= 2 and k >= 2, got N={N}, k={k}")

    R = ranks.mean_ranks()
    chi2 = 12.0 * N / (k * (k + 1)) * (np.sum(R ** 2) - k * (k + 1) ** 2 / 4.0)
    chi2 = max(float(chi2), 0.0)
    denominator = N * (k - 1) - chi2
    if denominator <= 1e-12 * N * (k - 1):
        logger.warning(f"Friedman ranks are perfectly ordered (chi2={chi2}); F is unbounded")
        f_stat = math.inf
    else:
        f_stat = (N - 1) * chi2 / denominator
    return FriedmanResult(chi2=chi2, f_stat=float(f_stat), df1=k - 1, df2=(k - 1) * (N - 1))


def f_sf(x: float, df1: int, df2: int) -> float:
    """Upper tail of the F distribution via the regularized incomplete beta"""
    if x <= 0:
        return 1.0
    return float(betainc(df2 / 2.0, df1 / 2.0, df2 / (df2 + df1 * x)))


def f_critical(alpha: float, df1: int, df2: int) -> float:
    """Upper-alpha quantile of F(df1, df2), found by bisection"""
    if not 0.0 < alpha < 1.0:
        raise InvalidConfig(f"alpha must be in (0, 1), got {alpha}")

    upper = 1.0
    while f_sf(upper, df1, df2) > alpha:
        upper *= 2.0
    return float(bisect(lambda x: f_sf(x, df1, df2) - alpha, 0.0, upper,
                        xtol=F_QUANTILE_XTOL, maxiter=500))


def bonferroni_dunn_q(k: int, alpha: float = 0.05) -> float:
    """
    Two-tailed Bonferroni-Dunn critical value

    Bundled table for alpha in {0.05, 0.10} and k <= 10, otherwise the normal
    quantile at alpha / (2(k - 1)).
    """
    table = BONFERRONI_DUNN_Q.get(alpha)
    if table and k in table:
        return table[k]
    return float(norm.ppf(1.0 - alpha / (2.0 * (k - 1))))


def bonferroni_dunn_cd(k: int, n_datasets: int, q_alpha: Optional[float] = None,
                       alpha: float = 0.05) -> float:
    """CD = q_alpha * sqrt(k(k+1) / (6N))"""
    if k < 2 or n_datasets < 1:
        raise InvalidConfig(f"need k >= 2 and N >= 1, got k={k}, N={n_datasets}")
    q = bonferroni_dunn_q(k, alpha) if q_alpha is None else q_alpha
    if not q > 0:
        raise InvalidConfig(f"q_alpha must be positive, got {q}")
    return float(q * math.sqrt(k * (k + 1) / (6.0 * n_datasets)))
