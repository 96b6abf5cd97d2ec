"""
Closed-form ADMM subproblem updates

Column-instance storage: X is d x n, D, D_hat, L_hat, Z, Lambda are m x n,
W is m x d and O is m x m acting on the label dimension, so the degraded
recovered distribution is O^T D and the split quantity is O^T W X
(O^T W for BLDL_B, where Z and Lambda are m x d).

Every update solves the normal equations of its subproblem; products with
Lambda / rho are written as (rho * Z + Lambda) so rho = 0 stays well defined.
"""
import numpy as np
from scipy.linalg import cho_factor, cho_solve, eigh, LinAlgError

from config.constants import Variant
from src.ldl_core.types import SolverState, SolverConfig
from src.admm_solver.svt import svt, nuclear_norm
from src.error_handling.exceptions import SingularSystem


def split_operand(state: SolverState, X: np.ndarray, variant: Variant) -> np.ndarray:
    """The matrix whose degradation is split onto Z: W X, or W for BLDL_B"""
    return state.W if variant is Variant.BLDL_B else state.W @ X


def split_target(state: SolverState, X: np.ndarray, variant: Variant) -> np.ndarray:
    """O^T W X (or O^T W), the quantity Z must match"""
    return state.O.T @ split_operand(state, X, variant)


def effective_weights(cfg: SolverConfig):
    """(gamma, eta) with the recovery terms removed for BLDL_A"""
    if cfg.variant is Variant.BLDL_A:
        return 0.0, 0.0
    return cfg.gamma, cfg.eta


def _spd_solve(G: np.ndarray, R: np.ndarray, which: str) -> np.ndarray:
    """Solve G Y = R for symmetric positive-definite G"""
    G = 0.5 * (G + G.T)
    try:
        factor = cho_factor(G, lower=True, check_finite=True)
    except LinAlgError:
        raise SingularSystem(which, float(np.linalg.cond(G)))
    Y = cho_solve(factor, R)
    if not np.all(np.isfinite(Y)):
        raise SingularSystem(which, float(np.linalg.cond(G)))
    return Y


def update_W(state: SolverState, X: np.ndarray, D: np.ndarray, cfg: SolverConfig) -> np.ndarray:
    """
    W-subproblem: alpha||WX - D||^2 + lambda1||W||^2 + rho/2 ||Z + Lambda/rho - O^T M||^2

    The stationarity condition couples O O^T on the left with X X^T on the
    right. Diagonalizing O O^T = U diag(s) U^T decouples it into one d x d
    SPD solve per rotated row of W.
    """
    rho, O = state.rho, state.O
    gram_x = X @ X.T
    scaled = rho * state.Z + state.Lambda
    d = X.shape[0]

    if cfg.variant is Variant.BLDL_B:
        rhs = 2.0 * cfg.alpha * D @ X.T + O @ scaled
    else:
        rhs = 2.0 * cfg.alpha * D @ X.T + O @ scaled @ X.T

    s, U = eigh(O @ O.T)
    s = np.clip(s, 0.0, None)
    rhs_rot = U.T @ rhs
    W_rot = np.empty_like(rhs_rot)
    for i in range(rhs_rot.shape[0]):
        if cfg.variant is Variant.BLDL_B:
            G = 2.0 * cfg.alpha * gram_x + (2.0 * cfg.lambda1 + rho * s[i]) * np.eye(d)
        else:
            G = (2.0 * cfg.alpha + rho * s[i]) * gram_x + 2.0 * cfg.lambda1 * np.eye(d)
        W_rot[i] = _spd_solve(G, rhs_rot[i], "W-update")
    return U @ W_rot


def update_O(state: SolverState, X: np.ndarray, D_hat: np.ndarray, D: np.ndarray,
             L_hat: np.ndarray, cfg: SolverConfig) -> np.ndarray:
    """
    O-subproblem: beta||O^T D_hat - L_hat||^2 + gamma||O^T D - L_hat||^2
    + lambda2||O||^2 + rho/2 ||Z + Lambda/rho - O^T M||^2

    Normal equations (m x m):
    (2b D_hat D_hat^T + 2g D D^T + rho M M^T + 2l2 I) O
        = 2b D_hat L_hat^T + 2g D L_hat^T + M (rho Z + Lambda)^T
    """
    gamma, _ = effective_weights(cfg)
    M = split_operand(state, X, cfg.variant)
    m = D_hat.shape[0]

    G = (2.0 * cfg.beta * D_hat @ D_hat.T
         + 2.0 * gamma * D @ D.T
         + state.rho * M @ M.T
         + 2.0 * cfg.lambda2 * np.eye(m))
    rhs = (2.0 * cfg.beta * D_hat @ L_hat.T
           + 2.0 * gamma * D @ L_hat.T
           + M @ (state.rho * state.Z + state.Lambda).T)
    return _spd_solve(G, rhs, "O-update")


def update_D(state: SolverState, X: np.ndarray, D_hat: np.ndarray, L_hat: np.ndarray,
             cfg: SolverConfig) -> np.ndarray:
    """
    D-subproblem: alpha||WX - D||^2 + gamma||O^T D - L_hat||^2 + eta||D - D_hat||^2

    (2a I + 2g O O^T + 2e I) D = 2a WX + 2g O L_hat + 2e D_hat.
    BLDL_A keeps D frozen at D_hat.
    """
    if cfg.variant is Variant.BLDL_A:
        return np.array(D_hat, dtype=float, copy=True)

    gamma, eta = effective_weights(cfg)
    m = D_hat.shape[0]
    if cfg.alpha + eta <= 0 and gamma == 0:
        raise SingularSystem("D-update", float("inf"))

    G = 2.0 * (cfg.alpha + eta) * np.eye(m) + 2.0 * gamma * state.O @ state.O.T
    rhs = 2.0 * cfg.alpha * state.W @ X + 2.0 * gamma * state.O @ L_hat + 2.0 * eta * D_hat
    return _spd_solve(G, rhs, "D-update")


def update_Z(state: SolverState, X: np.ndarray, cfg: SolverConfig) -> np.ndarray:
    """Z = SVT_{tau/rho}(O^T M - Lambda/rho), tau the nuclear-norm weight"""
    target = split_target(state, X, cfg.variant)
    return svt(target - state.Lambda / state.rho, cfg.nuclear_weight / state.rho)


def update_multipliers(state: SolverState, X: np.ndarray, cfg: SolverConfig):
    """
    Lambda' = Lambda + rho (Z - O^T M),  rho' = min(mu rho, rho_max)

    Returns:
        (Lambda', rho')
    """
    target = split_target(state, X, cfg.variant)
    Lambda = state.Lambda + state.rho * (state.Z - target)
    rho = min(cfg.mu * state.rho, cfg.rho_max)
    return Lambda, rho


def evaluate_lagrangian(state: SolverState, X: np.ndarray, D_hat: np.ndarray,
                        L_hat: np.ndarray, cfg: SolverConfig) -> float:
    """Augmented Lagrangian value at the current iterate"""
    gamma, eta = effective_weights(cfg)
    W, O, D, Z, Lam, rho = state.W, state.O, state.D, state.Z, state.Lambda, state.rho
    residual = Z - split_target(state, X, cfg.variant)

    value = cfg.nuclear_weight * nuclear_norm(Z)
    value += cfg.alpha * np.sum((W @ X - D) ** 2)
    value += cfg.beta * np.sum((O.T @ D_hat - L_hat) ** 2)
    value += gamma * np.sum((O.T @ D - L_hat) ** 2)
    value += eta * np.sum((D - D_hat) ** 2)
    value += cfg.lambda1 * np.sum(W ** 2)
    value += cfg.lambda2 * np.sum(O ** 2)
    value += np.sum(Lam * residual)
    value += 0.5 * rho * np.sum(residual ** 2)
    return float(value)
