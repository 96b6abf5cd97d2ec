"""
BLDL solver: joint recovery of true label distributions and a low-rank
regularized predictor by ADMM
"""
from dataclasses import dataclass, replace, field
from pathlib import Path
from typing import Callable, List, Optional, Union
import time
import numpy as np
import pandas as pd

from config.constants import Variant, TRACE_CSV_HEADER
from src.ldl_core.types import (
    SolverConfig, SolverState, TracePoint, DistributionMatrix, FeatureMatrix, MultiLabelMatrix
)
from src.ldl_core.distribution import normalize_columns
from src.bias_degrade.degrade import DegradeConfig, batch_degrade, hamming_distance
from src.admm_solver.updates import (
    update_W, update_O, update_D, update_Z, update_multipliers,
    evaluate_lagrangian, split_target,
)
from src.error_handling.exceptions import ShapeMismatch, NonFinite
from src.error_handling.logger import get_logger

logger = get_logger("solver")

LOG_EVERY = 50

MatrixLike = Union[np.ndarray, FeatureMatrix, DistributionMatrix, MultiLabelMatrix]


@dataclass
class FitResult:
    """Outcome of one fit"""
    W: np.ndarray
    O: np.ndarray
    D_recovered: DistributionMatrix
    trace: List[TracePoint]
    converged: bool
    iters_run: int
    state: Optional[SolverState] = field(default=None, repr=False)
    elapsed: float = 0.0

    @property
    def final(self) -> TracePoint:
        return self.trace[-1]


def _array(value: MatrixLike) -> np.ndarray:
    if isinstance(value, MultiLabelMatrix):
        return value.as_float()
    if isinstance(value, (FeatureMatrix, DistributionMatrix)):
        return np.asarray(value.data, dtype=float)
    return np.asarray(value, dtype=float)


def _relative_change(new: np.ndarray, old: np.ndarray) -> float:
    return float(np.linalg.norm(new - old) / max(1.0, np.linalg.norm(old)))


class BLDLSolver:
    """
    ADMM solver for the biased label distribution learning model

    Update order per iteration is Gauss-Seidel: W, O, D, Z, then the
    multiplier and penalty, each using the freshest iterates.
    """

    def __init__(self, cfg: Optional[SolverConfig] = None,
                 degrade_cfg: Optional[DegradeConfig] = None):
        """
        Args:
            cfg: solver hyperparameters and variant
            degrade_cfg: threshold used for the hard delta2 trace column
        """
        self.cfg = cfg or SolverConfig()
        self.degrade_cfg = degrade_cfg or DegradeConfig()

    def initial_state(self, X: np.ndarray, D_hat: np.ndarray) -> SolverState:
        """W = 0, O = I, D = D_hat, Z = 0, Lambda = 0, rho = rho0"""
        m, n = D_hat.shape
        d = X.shape[0]
        split_cols = d if self.cfg.variant is Variant.BLDL_B else n
        return SolverState(
            W=np.zeros((m, d)),
            O=np.eye(m),
            D=np.array(D_hat, copy=True),
            Z=np.zeros((m, split_cols)),
            Lambda=np.zeros((m, split_cols)),
            rho=self.cfg.rho0,
            iter=0,
        )

    def step(self, state: SolverState, X: np.ndarray, D_hat: np.ndarray,
             L_hat: np.ndarray) -> SolverState:
        """One full ADMM sweep"""
        cfg = self.cfg
        state = replace(state, W=update_W(state, X, state.D, cfg))
        state = replace(state, O=update_O(state, X, D_hat, state.D, L_hat, cfg))
        state = replace(state, D=update_D(state, X, D_hat, L_hat, cfg))
        state = replace(state, Z=update_Z(state, X, cfg))
        Lambda, rho = update_multipliers(state, X, cfg)
        return replace(state, Lambda=Lambda, rho=rho, iter=state.iter + 1)

    def trace_point(self, state: SolverState, X: np.ndarray, D_hat: np.ndarray,
                    L_hat: np.ndarray, objective: float,
                    D_true: Optional[np.ndarray]) -> TracePoint:
        """Diagnostics at the end of an iteration"""
        residual = float(np.linalg.norm(state.Z - split_target(state, X, self.cfg.variant)))
        recovered_labels = batch_degrade(normalize_columns(state.D), self.degrade_cfg)
        recovery = None if D_true is None else float(np.linalg.norm(state.D - D_true))
        return TracePoint(
            iter=state.iter,
            primal_residual=residual,
            delta1=float(np.linalg.norm(state.D - D_hat)),
            delta2_soft=float(np.linalg.norm(state.O.T @ state.D - L_hat)),
            delta2_hard=hamming_distance(recovered_labels.as_float(), L_hat),
            objective=objective,
            recovery_error=recovery,
        )

    def fit(self, X: MatrixLike, D_hat: MatrixLike, L_hat: MatrixLike,
            D_true: Optional[MatrixLike] = None,
            callback: Optional[Callable[[SolverState], None]] = None) -> FitResult:
        """
        Run ADMM until the split residual and the iterate changes are small

        Args:
            X: d x n features
            D_hat: m x n biased distributions
            L_hat: m x n multi-hot labels degraded from D_hat
            D_true: optional clean distributions, enables the recovery trace
            callback: called with the state after every iteration

        Returns:
            FitResult with the predictor, degradation map, recovered
            distributions (simplex-projected) and the per-iteration trace
        """
        cfg = self.cfg
        X, D_hat, L_hat = _array(X), _array(D_hat), _array(L_hat)
        D_true = None if D_true is None else _array(D_true)
        self._check_shapes(X, D_hat, L_hat, D_true)

        m, n = D_hat.shape
        logger.info(
            f"Fitting {cfg.variant.value} (m={m}, d={X.shape[0]}, n={n}, "
            f"max_iters={cfg.max_iters})"
        )
        start = time.time()

        state = self.initial_state(X, D_hat)
        trace: List[TracePoint] = []
        converged = False

        for _ in range(cfg.max_iters):
            previous = state
            state = self.step(state, X, D_hat, L_hat)
            state.check_finite()

            objective = evaluate_lagrangian(state, X, D_hat, L_hat, cfg)
            if not np.isfinite(objective):
                raise NonFinite("objective", state.iter)
            point = self.trace_point(state, X, D_hat, L_hat, objective, D_true)
            trace.append(point)
            if callback is not None:
                callback(state)

            target_norm = np.linalg.norm(split_target(state, X, cfg.variant))
            relative_residual = point.primal_residual / max(1.0, target_norm)
            change = max(
                _relative_change(state.W, previous.W),
                _relative_change(state.O, previous.O),
                _relative_change(state.D, previous.D),
            )

            if state.iter % LOG_EVERY == 0:
                logger.debug(
                    f"iter {state.iter}: residual={relative_residual:.3e} "
                    f"change={change:.3e} rho={state.rho:.3e} objective={objective:.6g}"
                )

            if relative_residual < cfg.tol_primal and change < cfg.tol_change:
                converged = True
                break

        elapsed = time.time() - start
        logger.info(
            f"{cfg.variant.value} finished after {state.iter} iterations "
            f"(converged={converged}, residual={trace[-1].primal_residual:.3e}, {elapsed:.2f}s)"
        )

        return FitResult(
            W=state.W,
            O=state.O,
            D_recovered=normalize_columns(state.D),
            trace=trace,
            converged=converged,
            iters_run=state.iter,
            state=state,
            elapsed=elapsed,
        )

    @staticmethod
    def _check_shapes(X, D_hat, L_hat, D_true):
        if X.ndim != 2 or D_hat.ndim != 2:
            raise ShapeMismatch("X and D_hat must be matrices")
        if X.shape[1] != D_hat.shape[1]:
            raise ShapeMismatch(f"X has {X.shape[1]} instances, D_hat has {D_hat.shape[1]}")
        if L_hat.shape != D_hat.shape:
            raise ShapeMismatch(f"L_hat {L_hat.shape} does not match D_hat {D_hat.shape}")
        if D_true is not None and D_true.shape != D_hat.shape:
            raise ShapeMismatch(f"D_true {D_true.shape} does not match D_hat {D_hat.shape}")
        for name, value in (("X", X), ("D_hat", D_hat), ("L_hat", L_hat)):
            if not np.all(np.isfinite(value)):
                raise NonFinite(name)


def fit(X: MatrixLike, D_hat: MatrixLike, L_hat: MatrixLike, cfg: Optional[SolverConfig] = None,
        D_true: Optional[MatrixLike] = None, **kwargs) -> FitResult:
    """Functional wrapper around BLDLSolver.fit"""
    degrade_cfg = kwargs.pop("degrade_cfg", None)
    return BLDLSolver(cfg, degrade_cfg).fit(X, D_hat, L_hat, D_true=D_true, **kwargs)


def write_trace_csv(trace: List[TracePoint], path: Union[str, Path]) -> Path:
    """Write the trace with the fixed header; recovery_error is blank when unknown"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame([point.as_row() for point in trace], columns=TRACE_CSV_HEADER)
    frame.to_csv(path, index=False, float_format="%.17g")
    logger.info(f"Trace written to {path}")
    return path
