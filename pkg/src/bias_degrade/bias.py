"""
Biased-annotation simulation

Random draws come from numpy's PCG64 bit generator (``np.random.default_rng``)
seeded with the 64-bit BiasConfig seed, so a seed reproduces the same biased
matrix on every platform numpy supports.
"""
from dataclasses import dataclass, asdict
from typing import Optional, Dict, Any
import numpy as np

from config.constants import BiasScheme
from src.ldl_core.types import DistributionMatrix, MAX_SEED
from src.error_handling.exceptions import InvalidConfig, ShapeMismatch
from src.error_handling.logger import get_logger

logger = get_logger("bias")


@dataclass(frozen=True)
class BiasConfig:
    """Bias level C in [0, 1], generator seed and scheme"""
    c: float
    seed: int = 0
    scheme: BiasScheme = BiasScheme.DIRICHLET_MIX

    def __post_init__(self):
        if isinstance(self.scheme, str):
            object.__setattr__(self, "scheme", BiasScheme(self.scheme))
        if not 0.0 <= self.c <= 1.0:
            raise InvalidConfig(f"bias level c must be in [0, 1], got {self.c}", field="c")
        if not 0 <= int(self.seed) <= MAX_SEED:
            raise InvalidConfig("seed must be a 64-bit unsigned integer", field="seed")

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["scheme"] = self.scheme.value
        return data


def inject_bias(D: DistributionMatrix,
                cfg: BiasConfig,
                rng: Optional[np.random.Generator] = None) -> DistributionMatrix:
    """
    Mix every column with a random simplex point

    d_hat_i = (1 - C) * d_i + C * u_i,  u_i ~ Dirichlet(1, ..., 1)

    Args:
        D: clean distributions (m x n)
        cfg: bias configuration
        rng: generator override; defaults to default_rng(cfg.seed)

    Returns:
        Biased DistributionMatrix, deterministic for a fixed seed
    """
    if cfg.c == 0.0:
        return DistributionMatrix(D.data)

    rng = rng if rng is not None else np.random.default_rng(cfg.seed)
    U = np.asarray(rng.dirichlet(np.ones(D.m), size=D.n), dtype=float).T
    if U.shape != D.data.shape:
        raise ShapeMismatch(f"Dirichlet draw has shape {U.shape}, expected {D.data.shape}")

    biased = (1.0 - cfg.c) * D.data + cfg.c * U
    logger.debug(f"Injected bias C={cfg.c} into {D.n} instances (seed={cfg.seed})")
    # Column sums drift by a few ulps; rescale so the simplex check stays tight
    return DistributionMatrix(biased / biased.sum(axis=0, keepdims=True))
