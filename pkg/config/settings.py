"""
Global configuration settings
"""
import os
from dotenv import load_dotenv
from pathlib import Path

load_dotenv()


class Config:
    """Configuration class"""

    # Paths
    BASE_DIR = Path(__file__).resolve().parent.parent
    OUTPUT_DIR = Path(os.getenv("OUTPUT_DIR", str(BASE_DIR / "results")))

    # Solver defaults (centers of the sensitivity grids)
    BLDL_ALPHA = float(os.getenv("BLDL_ALPHA", "0.05"))
    BLDL_BETA = float(os.getenv("BLDL_BETA", "0.05"))
    BLDL_GAMMA = float(os.getenv("BLDL_GAMMA", "1.0"))
    BLDL_ETA = float(os.getenv("BLDL_ETA", "50.0"))
    BLDL_LAMBDA1 = float(os.getenv("BLDL_LAMBDA1", "0.01"))
    BLDL_LAMBDA2 = float(os.getenv("BLDL_LAMBDA2", "0.01"))
    BLDL_NUCLEAR_WEIGHT = float(os.getenv("BLDL_NUCLEAR_WEIGHT", "1.0"))
    BLDL_NUCLEAR_WEIGHT = float(os.getenv("BLDL_NUCLEAR_WEIGHT", "1.0"))
    BLDL_RHO0 = float(os.getenv("BLDL_RHO0", "1e-3"))
    BLDL_MU = float(os.getenv("BLDL_MU", "1.05"))
    BLDL_RHO_MAX = float(os.getenv("BLDL_RHO_MAX", "1e6"))
    BLDL_MAX_ITERS = int(os.getenv("BLDL_MAX_ITERS", "500"))
    BLDL_TOL_PRIMAL = float(os.getenv("BLDL_TOL_PRIMAL", "1e-4"))
    BLDL_TOL_CHANGE = float(os.getenv("BLDL_TOL_CHANGE", "1e-5"))

    # Annotation simulation
    DEGRADE_THRESHOLD_T = float(os.getenv("DEGRADE_THRESHOLD_T", "0.7"))

    # Experiment protocol
    DEFAULT_FOLDS = int(os.getenv("DEFAULT_FOLDS", "5"))
    WILCOXON_EXACT_MAX_N = int(os.getenv("WILCOXON_EXACT_MAX_N", "20"))
    SHOW_PROGRESS = os.getenv("SHOW_PROGRESS", "false").lower() == "true"

    # Logging
    LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
    # empty disables the log file
    LOG_FILE = os.getenv("LOG_FILE", str(BASE_DIR / "bldl.log"))

config = Config()
