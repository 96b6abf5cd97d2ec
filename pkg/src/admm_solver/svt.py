"""
Nuclear norm and its proximal operator (singular value thresholding)
"""
import numpy as np
from scipy.linalg import svd

from src.error_handling.exceptions import NonFinite, InvalidConfig


def nuclear_norm(A) -> float:
    """Sum of singular values"""
    A = np.asarray(A, dtype=float)
    if not np.all(np.isfinite(A)):
        raise NonFinite("nuclear_norm input")
    return float(np.sum(svd(A, compute_uv=False)))


def svt(A, tau: float) -> np.ndarray:
    """
    Singular value thresholding

    Returns U diag(max(s - tau, 0)) V^T, the minimizer of
    tau * ||Z||_* + 0.5 * ||Z - A||_F^2.

    Args:
        A: input matrix
        tau: threshold, > 0

    Returns:
        Thresholded matrix, same shape as A
    """
    A = np.asarray(A, dtype=float)
    if not tau > 0:
        raise InvalidConfig(f"svt threshold must be positive, got {tau}")
    if not np.all(np.isfinite(A)):
        raise NonFinite("svt input")

    U, s, Vt = svd(A, full_matrices=False)
    s_thresh = np.maximum(s - tau, 0.0)
    keep = s_thresh > 0
    if not np.any(keep):
        return np.zeros_like(A)
    return (U[:, keep] * s_thresh[keep]) @ Vt[keep, :]
