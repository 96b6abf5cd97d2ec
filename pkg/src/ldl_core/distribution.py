"""
Simplex validation, normalization and the inference-time predictor
"""
import numpy as np

from src.ldl_core.types import DistributionMatrix, FeatureMatrix
from src.error_handling.exceptions import ShapeMismatch, NonFinite

# Columns already this close to the simplex are returned untouched,
# which makes normalization exactly idempotent.
_RENORMALIZE_SLACK = 1e-12
_ZERO_MASS = 1e-12


def validate_distribution(M) -> DistributionMatrix:
    """
    Tag a matrix as a valid distribution matrix

    Raises:
        NegativeEntry: an entry is below -1e-12
        ColumnSumViolation: a column sum is outside [1 - 1e-9, 1 + 1e-9]
    """
    return DistributionMatrix(np.asarray(M, dtype=float))


def _normalize_matrix(M: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(M)):
        raise NonFinite("matrix to normalize")
    clamped = np.maximum(M, 0.0)
    totals = clamped.sum(axis=0)

    out = clamped / np.where(totals < _ZERO_MASS, 1.0, totals)
    settled = np.abs(totals - 1.0) <= _RENORMALIZE_SLACK
    out[:, settled] = clamped[:, settled]
    empty = totals < _ZERO_MASS
    out[:, empty] = 1.0 / M.shape[0]
    return out


def normalize_to_simplex(v) -> np.ndarray:
    """Clamp negatives to 0 and rescale to sum 1; uniform when no mass is left"""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.size < 1:
        raise ShapeMismatch(f"expected a non-empty vector, got shape {v.shape}")
    return _normalize_matrix(v.reshape(-1, 1))[:, 0]


def normalize_columns(M) -> DistributionMatrix:
    """Column-wise normalize_to_simplex, exported as a DistributionMatrix"""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] < 1:
        raise ShapeMismatch(f"expected a matrix, got shape {M.shape}")
    return DistributionMatrix(_normalize_matrix(M))


def predict(W, X) -> DistributionMatrix:
    """
    Predict label distributions for the columns of X

    Args:
        W: m x d predictor
        X: d x k features (FeatureMatrix or array)

    Returns:
        m x k DistributionMatrix, WX normalized column-wise
    """
    W = np.asarray(W, dtype=float)
    X = X.data if isinstance(X, FeatureMatrix) else np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if W.ndim != 2 or W.shape[1] != X.shape[0]:
        raise ShapeMismatch(f"cannot multiply W {W.shape} by X {X.shape}")
    if not (np.all(np.isfinite(W)) and np.all(np.isfinite(X))):
        raise NonFinite("predictor input")
    return normalize_columns(W @ X)


def frobenius_distance(A, B) -> float:
    """Frobenius norm of A - B"""
    A = A.data if isinstance(A, DistributionMatrix) else np.asarray(A, dtype=float)
    B = B.data if isinstance(B, DistributionMatrix) else np.asarray(B, dtype=float)
    if A.shape != B.shape:
        raise ShapeMismatch(f"shapes differ: {A.shape} vs {B.shape}")
    return float(np.linalg.norm(A - B))
