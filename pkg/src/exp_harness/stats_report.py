"""
Cross-dataset statistics: Friedman, Bonferroni-Dunn CD and Wilcoxon
against a control method
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union
import glob
import json
import numpy as np
import pandas as pd

from config.constants import MetricName, MetricDirection
from src.ldl_metrics.metrics import ScoreReport
from src.stat_tests.friedman import (
    RankTable, friedman, f_critical, bonferroni_dunn_q, bonferroni_dunn_cd
)
from src.stat_tests.wilcoxon import wilcoxon_signed_rank
from src.error_handling.exceptions import AllZeroDifferences, InvalidConfig, ParseError
from src.error_handling.logger import get_logger

logger = get_logger("stats")

PathLike = Union[str, Path]


@dataclass
class DatasetScores:
    """Per-method score reports on one dataset"""
    dataset: str
    methods: Dict[str, ScoreReport]


def load_report_tables(pattern: str) -> List[DatasetScores]:
    """Read every report.json matching a glob, in sorted path order"""
    paths = sorted(glob.glob(pattern, recursive=True))
    if not paths:
        raise InvalidConfig(f"no report files match {pattern}")
    tables = []
    for path in paths:
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as e:
            raise ParseError(path, e.lineno, e.msg)
        if "methods" not in data:
            raise ParseError(path, 1, "missing 'methods'")
        tables.append(DatasetScores(
            dataset=data.get("dataset", Path(path).parent.name),
            methods={name: ScoreReport.from_dict(report) for name, report in data["methods"].items()},
        ))
    logger.info(f"Loaded {len(tables)} report tables")
    return tables


def score_matrix(tables: List[DatasetScores], methods: List[str], metric: MetricName) -> np.ndarray:
    """N datasets x k methods matrix of metric means"""
    return np.array([[table.methods[method].mean(metric) for method in methods] for table in tables])


def win_tie_loss(control: np.ndarray, other: np.ndarray, direction: MetricDirection) -> Dict[str, int]:
    """Datasets on which the control is better, equal or worse"""
    better = control < other if direction is MetricDirection.DOWN else control > other
    tie = control == other
    return {
        "win": int(np.sum(better)),
        "tie": int(np.sum(tie)),
        "loss": int(np.sum(~better & ~tie)),
    }


def _pairwise(scores: np.ndarray, methods: List[str], control: str, metric: MetricName,
              alpha: float) -> List[Dict[str, Any]]:
    c = methods.index(control)
    records = []
    for j, method in enumerate(methods):
        if j == c:
            continue
        record = {"method": method}
        record.update(win_tie_loss(scores[:, c], scores[:, j], metric.direction))
        try:
            result = wilcoxon_signed_rank(scores[:, c], scores[:, j])
            record.update({
                "w_plus": result.w_plus,
                "p_value": result.p_two_sided,
                "n_eff": result.n_eff,
                "exact": result.exact,
                "significant": result.p_two_sided < alpha,
                "all_tied": False,
            })
        except AllZeroDifferences:
            logger.warning(f"{metric.value}: {control} and {method} score identically on every dataset")
            record.update({
                "w_plus": 0.0, "p_value": 1.0, "n_eff": 0, "exact": True,
                "significant": False, "all_tied": True,
            })
        records.append(record)
    return records


def metric_record(tables: List[DatasetScores], methods: List[str], control: str,
                  metric: MetricName, alpha: float = 0.05,
                  q_alpha: Optional[float] = None) -> Dict[str, Any]:
    """Friedman, CD and Wilcoxon results for one metric"""
    scores = score_matrix(tables, methods, metric)
    ranks = RankTable.from_scores(scores, methods, metric.direction)
    result = friedman(ranks)
    critical = f_critical(alpha, result.df1, result.df2)
    q = bonferroni_dunn_q(ranks.k, alpha) if q_alpha is None else q_alpha
    cd = bonferroni_dunn_cd(ranks.k, ranks.n_datasets, q_alpha=q)

    mean_ranks = ranks.mean_ranks()
    control_rank = mean_ranks[methods.index(control)]
    return {
        "metric": metric.value,
        "direction": metric.direction.value,
        "n_datasets": ranks.n_datasets,
        "methods": methods,
        "mean_ranks": {m: float(r) for m, r in zip(methods, mean_ranks)},
        "chi2": result.chi2,
        "f_stat": None if result.degenerate else result.f_stat,
        "degenerate": result.degenerate,
        "df1": result.df1,
        "df2": result.df2,
        "f_critical": critical,
        "reject_null": result.degenerate or result.f_stat > critical,
        "q_alpha": q,
        "cd": cd,
        "control": control,
        "within_cd_of_control": [
            m for m, r in zip(methods, mean_ranks) if abs(r - control_rank) <= cd
        ],
        "wilcoxon": _pairwise(scores, methods, control, metric, alpha),
    }


def cd_diagram_frame(records: Iterable[Dict[str, Any]]) -> pd.DataFrame:
    """Plot-ready rows: metric, method, mean rank, CD, control flags"""
    rows = []
    for record in records:
        for method, rank in record["mean_ranks"].items():
            rows.append({
                "metric": record["metric"],
                "method": method,
                "mean_rank": rank,
                "cd": record["cd"],
                "is_control": method == record["control"],
                "within_cd_of_control": method in record["within_cd_of_control"],
            })
    return pd.DataFrame(rows)


def emit_stats(tables: List[DatasetScores], control: str, alpha: float = 0.05,
               q_alpha: Optional[float] = None,
               out: Optional[PathLike] = None) -> List[Dict[str, Any]]:
    """
    One statistics record per metric across datasets

    Args:
        tables: per-dataset score reports; every table needs the same methods
        control: method compared pairwise against all others
        alpha: significance level for F, CD and Wilcoxon decisions
        q_alpha: Bonferroni-Dunn critical value override
        out: JSON output path; a *_cd.csv is written next to it

    Returns:
        List of records in MetricName order
    """
    if len(tables) < 2:
        raise InvalidConfig(f"statistics need at least 2 datasets, got {len(tables)}")
    methods = sorted(tables[0].methods)
    for table in tables[1:]:
        if sorted(table.methods) != methods:
            raise InvalidConfig(
                f"dataset {table.dataset} has methods {sorted(table.methods)}, expected {methods}"
            )
    if len(methods) < 2:
        raise InvalidConfig("statistics need at least 2 methods")
    if control not in methods:
        raise InvalidConfig(f"control method '{control}' not among {methods}")

    records = [metric_record(tables, methods, control, metric, alpha, q_alpha) for metric in MetricName]

    if out is not None:
        out = Path(out)
        out.parent.mkdir(parents=True, exist_ok=True)
        with open(out, "w") as f:
            json.dump({"datasets": [t.dataset for t in tables], "alpha": alpha, "records": records},
                      f, indent=2, sort_keys=True)
        cd_path = out.with_name(f"{out.stem}_cd.csv")
        cd_diagram_frame(records).to_csv(cd_path, index=False, float_format="%.17g")
        logger.info(f"Statistics written to {out} and {cd_path}")
    return records
