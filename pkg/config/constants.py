"""
Constants for the BLDL toolkit
"""
from enum import Enum


class Variant(Enum):
    """Solver variants"""
    BLDL = "bldl"
    BLDL_A = "bldl-a"   # recovery removed, D frozen at the biased observation
    BLDL_B = "bldl-b"   # low-rank constraint moved from O^T W X to O^T W

    @classmethod
    def parse(cls, value: str) -> "Variant":
        """Accept 'bldl-a', 'BLDL_A' or 'bldl_a'"""
        key = value.strip().lower().replace("_", "-")
        for variant in cls:
            if variant.value == key:
                return variant
        raise ValueError(f"Unknown variant: {value}")


class MetricDirection(Enum):
    """Which way is better"""
    DOWN = "down"
    UP = "up"


class MetricName(Enum):
    """LDL evaluation metrics"""
    CHEBYSHEV = "Chebyshev"
    CLARK = "Clark"
    CANBERRA = "Canberra"
    KL = "KL"
    COSINE = "Cosine"
    INTERSECTION = "Intersection"

    @property
    def direction(self) -> MetricDirection:
        if self in (MetricName.COSINE, MetricName.INTERSECTION):
            return MetricDirection.UP
        return MetricDirection.DOWN


class BiasScheme(Enum):
    """Bias simulation schemes"""
    DIRICHLET_MIX = "DirichletMix"


class ErrorType(Enum):
    """Error types"""
    NEGATIVE_ENTRY = "negative_entry"
    COLUMN_SUM_VIOLATION = "column_sum_violation"
    INVALID_DISTRIBUTION = "invalid_distribution"
    SHAPE_MISMATCH = "shape_mismatch"
    PARSE_ERROR = "parse_error"
    ROW_COUNT_MISMATCH = "row_count_mismatch"
    INVALID_RANK = "invalid_rank"
    INVALID_CONFIG = "invalid_config"
    ALL_ZERO_DIFFERENCES = "all_zero_differences"
    SINGULAR_SYSTEM = "singular_system"
    NON_FINITE = "non_finite"


# Error messages
ERROR_MESSAGES = {
    ErrorType.NEGATIVE_ENTRY: "Distribution has a negative description degree.",
    ErrorType.COLUMN_SUM_VIOLATION: "Distribution column does not sum to 1.",
    ErrorType.INVALID_DISTRIBUTION: "Input is not a valid label distribution.",
    ErrorType.SHAPE_MISMATCH: "Matrix shapes are incompatible.",
    ErrorType.PARSE_ERROR: "Could not parse input file.",
    ErrorType.ROW_COUNT_MISMATCH: "Feature and distribution files disagree on instance count.",
    ErrorType.INVALID_RANK: "Requested rank is outside [1, min(m, d)].",
    ErrorType.INVALID_CONFIG: "Configuration value out of range.",
    ErrorType.ALL_ZERO_DIFFERENCES: "All paired differences are zero; test is undefined.",
    ErrorType.SINGULAR_SYSTEM: "Normal equations are numerically singular.",
    ErrorType.NON_FINITE: "Iterate left the finite range.",
}

# Input errors exit with 1, numerical failures with 2
INPUT_ERRORS = {
    ErrorType.NEGATIVE_ENTRY,
    ErrorType.COLUMN_SUM_VIOLATION,
    ErrorType.INVALID_DISTRIBUTION,
    ErrorType.SHAPE_MISMATCH,
    ErrorType.PARSE_ERROR,
    ErrorType.ROW_COUNT_MISMATCH,
    ErrorType.INVALID_RANK,
    ErrorType.INVALID_CONFIG,
    ErrorType.ALL_ZERO_DIFFERENCES,
}

TRACE_CSV_HEADER = [
    "iter",
    "primal_residual",
    "delta1",
    "delta2_soft",
    "delta2_hard",
    "objective",
    "recovery_error",
]

# Two-tailed Bonferroni-Dunn critical values q_alpha by number of methods k
BONFERRONI_DUNN_Q = {
    0.05: {2: 1.960, 3: 2.241, 4: 2.394, 5: 2.498, 6: 2.576,
           7: 2.638, 8: 2.690, 9: 2.724, 10: 2.773},
    0.10: {2: 1.645, 3: 1.960, 4: 2.128, 5: 2.241, 6: 2.326,
           7: 2.394, 8: 2.450, 9: 2.498, 10: 2.539},
}

# Parameter grids used by the sensitivity study
SENSITIVITY_GRIDS = {
    "alpha": [0.1, 0.05, 0.01, 0.005, 0.001],
    "beta": [0.1, 0.05, 0.01, 0.005, 0.001],
    "lambda1": [0.1, 0.05, 0.01, 0.005, 0.001],
    "eta": [1.0, 10.0, 50.0, 100.0, 150.0],
}

DEFAULT_BIAS_LEVELS = [0.1, 0.2, 0.3]
