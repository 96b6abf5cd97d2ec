"""
Domain types shared by every module

Matrices are column-instance: X is d x n, distributions and label sets are
m x n. All types are immutable after construction (arrays are read-only).
"""
from dataclasses import dataclass, fields, asdict
from typing import Optional, Dict, Any
import numpy as np

from config.constants import Variant
from config.settings import config
from src.error_handling.exceptions import (
    NegativeEntry, ColumnSumViolation, ShapeMismatch, InvalidConfig, InvalidDistribution, NonFinite
)

SUM_TOLERANCE = 1e-9
CLAMP_THRESHOLD = -1e-12
MAX_SEED = 2**64 - 1


def _readonly(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


def _as_matrix(data, name: str) -> np.ndarray:
    array = np.asarray(data, dtype=float)
    if array.ndim == 1:
        array = array.reshape(-1, 1)
    if array.ndim != 2:
        raise ShapeMismatch(f"{name} must be a matrix, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise NonFinite(name)
    return array


def check_simplex_columns(data) -> np.ndarray:
    """
    Validate that every column lies on the probability simplex

    Entries in [CLAMP_THRESHOLD, 0) are clamped to 0; anything more negative
    is rejected, as is any column whose sum is off by more than SUM_TOLERANCE.

    Returns:
        Clamped copy of the matrix
    """
    array = _as_matrix(data, "distribution").copy()
    negative = np.argwhere(array < CLAMP_THRESHOLD)
    if negative.size:
        row, col = (int(i) for i in negative[np.lexsort((negative[:, 0], negative[:, 1]))][0])
        raise NegativeEntry(row, col, float(array[row, col]))
    array[array < 0] = 0.0
    sums = array.sum(axis=0)
    bad = np.flatnonzero(np.abs(sums - 1.0) > SUM_TOLERANCE)
    if bad.size:
        col = int(bad[0])
        raise ColumnSumViolation(col, float(sums[col]))
    return array


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    """d x n feature matrix, instances are columns"""
    data: np.ndarray

    def __post_init__(self):
        array = _as_matrix(self.data, "features")
        if array.shape[0] < 1 or array.shape[1] < 1:
            raise ShapeMismatch(f"features must be at least 1x1, got {array.shape}")
        object.__setattr__(self, "data", _readonly(array))

    @property
    def d(self) -> int:
        return self.data.shape[0]

    @property
    def n(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True, eq=False)
class DistributionMatrix:
    """m x n matrix whose columns are label distributions"""
    data: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "data", _readonly(check_simplex_columns(self.data)))

    @property
    def m(self) -> int:
        return self.data.shape[0]

    @property
    def n(self) -> int:
        return self.data.shape[1]

    def columns(self, index) -> "DistributionMatrix":
        """Sub-matrix of the selected instances"""
        return DistributionMatrix(self.data[:, index])


@dataclass(frozen=True, eq=False)
class MultiLabelMatrix:
    """m x n binary relevance matrix; every instance has a relevant label"""
    data: np.ndarray

    def __post_init__(self):
        array = np.asarray(self.data)
        if array.ndim == 1:
            array = array.reshape(-1, 1)
        if array.ndim != 2:
            raise ShapeMismatch(f"label matrix must be 2-D, got shape {array.shape}")
        if not np.all((array == 0) | (array == 1)):
            raise InvalidDistribution("label matrix entries must be 0 or 1")
        empty = np.flatnonzero(array.sum(axis=0) == 0)
        if empty.size:
            raise InvalidDistribution(f"instance {int(empty[0])} has no relevant label", column=int(empty[0]))
        object.__setattr__(self, "data", _readonly(array.astype(np.uint8)))

    @property
    def m(self) -> int:
        return self.data.shape[0]

    @property
    def n(self) -> int:
        return self.data.shape[1]

    def as_float(self) -> np.ndarray:
        return self.data.astype(float)


@dataclass(frozen=True)
class SolverConfig:
    """Hyperparameters of the ADMM solver"""
    alpha: float = config.BLDL_ALPHA
    beta: float = config.BLDL_BETA
    gamma: float = config.BLDL_GAMMA
    eta: float = config.BLDL_ETA
    lambda1: float = config.BLDL_LAMBDA1
    lambda2: float = config.BLDL_LAMBDA2
    nuclear_weight: float = config.BLDL_NUCLEAR_WEIGHT
    rho0: float = config.BLDL_RHO0
    mu: float = config.BLDL_MU
    rho_max: float = config.BLDL_RHO_MAX
    max_iters: int = config.BLDL_MAX_ITERS
    tol_primal: float = config.BLDL_TOL_PRIMAL
    tol_change: float = config.BLDL_TOL_CHANGE
    variant: Variant = Variant.BLDL
    seed: int = 0

    def __post_init__(self):
        if isinstance(self.variant, str):
            object.__setattr__(self, "variant", Variant.parse(self.variant))
        self.validate()

    def validate(self):
        for name in ("alpha", "beta", "gamma", "eta", "lambda1", "lambda2"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise InvalidConfig(f"{name} must be a nonnegative real, got {value}", field=name)
        if not (np.isfinite(self.nuclear_weight) and self.nuclear_weight > 0):
            raise InvalidConfig(f"nuclear_weight must be positive, got {self.nuclear_weight}",
                                field="nuclear_weight")
        if not self.rho0 > 0:
            raise InvalidConfig(f"rho0 must be positive, got {self.rho0}", field="rho0")
        if not self.mu > 1:
            raise InvalidConfig(f"mu must exceed 1, got {self.mu}", field="mu")
        if not self.rho_max >= self.rho0:
            raise InvalidConfig("rho_max must be >= rho0", field="rho_max")
        if int(self.max_iters) < 1:
            raise InvalidConfig("max_iters must be positive", field="max_iters")
        if not (self.tol_primal > 0 and self.tol_change > 0):
            raise InvalidConfig("tolerances must be positive", field="tol_primal")
        if not 0 <= int(self.seed) <= MAX_SEED:
            raise InvalidConfig("seed must be a 64-bit unsigned integer", field="seed")

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["variant"] = self.variant.value
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SolverConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise InvalidConfig(f"unknown solver config keys: {unknown}")
        return cls(**data)


@dataclass(frozen=True, eq=False)
class SolverState:
    """ADMM iterates; D is not simplex-constrained while iterating"""
    W: np.ndarray
    O: np.ndarray
    D: np.ndarray
    Z: np.ndarray
    Lambda: np.ndarray
    rho: float
    iter: int = 0

    def check_finite(self):
        for name in ("W", "O", "D", "Z", "Lambda"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise NonFinite(name, self.iter)
        if not np.isfinite(self.rho):
            raise NonFinite("rho", self.iter)


@dataclass(frozen=True)
class TracePoint:
    """Per-iteration diagnostics"""
    iter: int
    primal_residual: float
    delta1: float
    delta2_soft: float
    delta2_hard: float
    objective: float
    recovery_error: Optional[float] = None

    def as_row(self) -> Dict[str, Any]:
        row = asdict(self)
        if self.recovery_error is None:
            row["recovery_error"] = ""
        return row
