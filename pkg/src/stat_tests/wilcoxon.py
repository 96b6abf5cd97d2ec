"""
Wilcoxon signed-rank test with an exact null distribution for small samples
"""
from dataclasses import dataclass
from typing import Optional
import numpy as np
from scipy.stats import norm, rankdata

from config.settings import config
from src.error_handling.exceptions import AllZeroDifferences, ShapeMismatch


@dataclass
class WilcoxonResult:
    w_plus: float
    p_two_sided: float
    n_eff: int
    exact: bool


def signed_rank_counts(ranks: np.ndarray) -> np.ndarray:
    """
    Null distribution of W+ over all 2^N sign assignments

    Ranks are doubled so averaged ties (multiples of 0.5) become integers.
    counts[s] is the number of sign assignments whose doubled W+ equals s.
    """
    doubled = np.rint(2.0 * np.asarray(ranks, dtype=float)).astype(np.int64)
    counts = np.zeros(int(doubled.sum()) + 1, dtype=np.float64)
    counts[0] = 1.0
    for r in doubled:
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[:counts.size - r]
        counts = counts + shifted
    return counts


def _exact_p(w_plus: float, ranks: np.ndarray) -> float:
    counts = signed_rank_counts(ranks)
    total = counts.sum()
    observed = int(round(2.0 * w_plus))
    lower = counts[:observed + 1].sum() / total
    upper = counts[observed:].sum() / total
    return float(min(1.0, 2.0 * min(lower, upper)))


def _normal_p(w_plus: float, abs_diff: np.ndarray, ranks: np.ndarray) -> float:
    n = ranks.size
    mean = n * (n + 1) / 4.0
    _, tie_sizes = np.unique(abs_diff, return_counts=True)
    variance = n * (n + 1) * (2 * n + 1) / 24.0 - np.sum(tie_sizes ** 3 - tie_sizes) / 48.0
    if variance <= 0:
        return 1.0
    z = (abs(w_plus - mean) - 0.5) / np.sqrt(variance)
    return float(min(1.0, 2.0 * norm.sf(max(z, 0.0))))


def wilcoxon_signed_rank(a, b, method: str = "auto",
                         exact_max_n: Optional[int] = None) -> WilcoxonResult:
    """
    Paired two-sided Wilcoxon signed-rank test

    Zero differences are dropped. With method="auto" the p-value is exact
    for N_eff <= exact_max_n (default 20) and a continuity-corrected normal
    approximation above.

    Args:
        a: first sample
        b: second sample (same length)
        method: "auto", "exact" or "approx"
        exact_max_n: override for the exact/approx switch

    Returns:
        WilcoxonResult(w_plus, p_two_sided, n_eff, exact)
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ShapeMismatch(f"paired samples must be equal-length vectors: {a.shape} vs {b.shape}")

    diff = a - b
    diff = diff[diff != 0]
    if diff.size == 0:
        raise AllZeroDifferences()

    abs_diff = np.abs(diff)
    ranks = rankdata(abs_diff, method="average")
    w_plus = float(ranks[diff > 0].sum())

    limit = config.WILCOXON_EXACT_MAX_N if exact_max_n is None else exact_max_n
    exact = method == "exact" or (method == "auto" and diff.size <= limit)
    if exact:
        p = _exact_p(w_plus, ranks)
    else:
        p = _normal_p(w_plus, abs_diff, ranks)
    return WilcoxonResult(w_plus=w_plus, p_two_sided=p, n_eff=int(diff.size), exact=exact)
