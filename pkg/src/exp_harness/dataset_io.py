"""
Dataset loading and saving

Files are CSV with one instance per row and an optional header row; the
in-memory layout is column-instance (features d x n, distributions m x n).
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union
import re
import numpy as np
import pandas as pd

from src.ldl_core.types import FeatureMatrix, DistributionMatrix, MultiLabelMatrix
from src.ldl_core.distribution import normalize_columns
from src.error_handling.exceptions import (
    BLDLError, ParseError, RowCountMismatch, InvalidDistribution, ShapeMismatch
)
from src.error_handling.logger import get_logger

logger = get_logger("io")

FEATURES_FILE = "features.csv"
DISTRIBUTIONS_FILE = "distributions.csv"
LABELS_FILE = "labels.csv"
TRUTH_FILE = "truth.csv"
FLOAT_FORMAT = "%.17g"

PathLike = Union[str, Path]


@dataclass
class Dataset:
    """Features and label distributions of one dataset"""
    name: str
    X: FeatureMatrix
    D: DistributionMatrix

    def __post_init__(self):
        if self.X.n != self.D.n:
            raise RowCountMismatch(
                f"{self.name}: features have {self.X.n} instances, distributions {self.D.n}"
            )

    @property
    def n(self) -> int:
        return self.X.n

    def subset(self, index) -> "Dataset":
        return Dataset(self.name, FeatureMatrix(self.X.data[:, index]), self.D.columns(index))


def _is_number(cell: str) -> bool:
    try:
        float(cell)
        return True
    except (TypeError, ValueError):
        return False


def read_matrix_csv(path: PathLike) -> np.ndarray:
    """
    Read a numeric CSV (rows = instances) into an n x k array

    A first row that does not parse as numbers is treated as a header.

    Raises:
        ParseError: with the 1-based line number of the first bad row
    """
    path = Path(path)
    try:
        frame = pd.read_csv(path, header=None, dtype=str, skip_blank_lines=True,
                            skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise ParseError(str(path), 1, "file is empty")
    except pd.errors.ParserError as e:
        match = re.search(r"line (\d+)", str(e))
        raise ParseError(str(path), int(match.group(1)) if match else 0, str(e))

    offset = 1
    first = frame.iloc[0].dropna().tolist()
    if first and not all(_is_number(cell) for cell in first):
        frame = frame.iloc[1:]
        offset = 2
    if frame.empty:
        raise ParseError(str(path), offset, "no data rows")

    try:
        # float() on each cell keeps %.17g output bit-exact
        values = frame.astype(float).to_numpy()
    except ValueError:
        values = frame.apply(pd.to_numeric, errors="coerce").to_numpy(dtype=float)
    bad = np.argwhere(~np.isfinite(values))
    if bad.size:
        row = int(bad[0][0])
        raise ParseError(str(path), row + offset, f"non-numeric or missing value in column {int(bad[0][1]) + 1}")
    return values


def load_features(path: PathLike) -> FeatureMatrix:
    return FeatureMatrix(read_matrix_csv(path).T)


def load_distributions(path: PathLike) -> DistributionMatrix:
    """Validate and renormalize; errors name the 1-based data row"""
    rows = read_matrix_csv(path)
    try:
        DistributionMatrix(rows.T)
    except BLDLError as e:
        row = e.context.get("col")
        raise InvalidDistribution(
            f"{path}: row {row + 1 if row is not None else '?'}: {e}",
            row=None if row is None else row + 1,
        ) from e
    return normalize_columns(rows.T)


def load_multilabel(path: PathLike) -> MultiLabelMatrix:
    return MultiLabelMatrix(np.rint(read_matrix_csv(path)).astype(np.uint8).T)


def load_dataset(features_path: PathLike, distributions_path: PathLike,
                 name: Optional[str] = None) -> Dataset:
    """
    Load a dataset from two CSV files

    Args:
        features_path: one instance per row, d columns
        distributions_path: one instance per row, m columns

    Returns:
        Dataset in column-instance layout
    """
    X = load_features(features_path)
    D = load_distributions(distributions_path)
    if X.n != D.n:
        raise RowCountMismatch(
            f"{features_path} has {X.n} rows but {distributions_path} has {D.n}"
        )
    name = name or Path(features_path).resolve().parent.name
    logger.info(f"Loaded dataset '{name}' (n={X.n}, d={X.d}, m={D.m})")
    return Dataset(name=name, X=X, D=D)


def load_dataset_dir(directory: PathLike) -> Dataset:
    directory = Path(directory)
    return load_dataset(directory / FEATURES_FILE, directory / DISTRIBUTIONS_FILE,
                        name=directory.resolve().name)


def write_matrix_csv(matrix, path: PathLike, integer: bool = False) -> Path:
    """Write a column-instance matrix as one row per instance"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = np.asarray(getattr(matrix, "data", matrix))
    if data.ndim != 2:
        raise ShapeMismatch(f"expected a matrix, got shape {data.shape}")
    frame = pd.DataFrame(data.T)
    if integer:
        frame.astype(int).to_csv(path, header=False, index=False)
    else:
        frame.to_csv(path, header=False, index=False, float_format=FLOAT_FORMAT)
    return path


def save_dataset(dataset: Dataset, directory: PathLike) -> Path:
    """Write features.csv and distributions.csv at 17 significant digits"""
    directory = Path(directory)
    write_matrix_csv(dataset.X, directory / FEATURES_FILE)
    write_matrix_csv(dataset.D, directory / DISTRIBUTIONS_FILE)
    logger.info(f"Saved dataset '{dataset.name}' to {directory}")
    return directory


def save_multilabel(labels: MultiLabelMatrix, path: PathLike) -> Path:
    """Write a 0/1 label matrix as labels.csv-style integer rows"""
    return write_matrix_csv(labels, path, integer=True)
