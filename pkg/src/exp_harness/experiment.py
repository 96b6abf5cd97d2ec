"""
Cross-validated experiments, sensitivity grids and bias sweeps

Every run is deterministic for a fixed ExperimentSpec: the fold split, the
bias draws and the per-task seeds all derive from spec.seed. Wall-clock
values only appear under the "metadata" key of report.json.
"""
from dataclasses import dataclass, field, fields, replace
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union
import json
import numpy as np
import pandas as pd
from tqdm import tqdm

from config.constants import Variant, MetricName, DEFAULT_BIAS_LEVELS
from config.settings import config
from src.ldl_core.types import SolverConfig, MAX_SEED
from src.ldl_core.distribution import predict, frobenius_distance
from src.bias_degrade.bias import BiasConfig, inject_bias
from src.bias_degrade.degrade import DegradeConfig, batch_degrade
from src.admm_solver.solver import BLDLSolver, write_trace_csv
from src.ldl_metrics.metrics import ScoreReport, score_report
from src.exp_harness.dataset_io import Dataset, load_dataset, load_dataset_dir
from src.exp_harness.synthetic import synth_generate
from src.error_handling.exceptions import BLDLError, InvalidConfig
from src.error_handling.logger import get_logger

logger = get_logger("experiment")

REPORT_FILE = "report.json"
SCORES_FILE = "scores.csv"
RECOVERY_FILE = "recovery.csv"
TRACE_DIR = "traces"
FLOAT_FORMAT = "%.17g"

PathLike = Union[str, Path]


def derive_seed(*parts: int) -> int:
    """Deterministic 64-bit seed from integer parts"""
    state = np.random.SeedSequence([int(p) for p in parts]).generate_state(1, dtype=np.uint64)
    return int(state[0])


def fold_indices(n: int, folds: int, seed: int) -> List[np.ndarray]:
    """Seeded permutation cut into contiguous, near-equal blocks"""
    if folds < 2:
        raise InvalidConfig(f"need at least 2 folds, got {folds}", field="folds")
    if folds > n:
        raise InvalidConfig(f"cannot split {n} instances into {folds} folds", field="folds")
    order = np.random.default_rng(derive_seed(seed)).permutation(n)
    return [np.sort(block) for block in np.array_split(order, folds)]


@dataclass
class ExperimentSpec:
    """
    Everything needed to reproduce one experiment

    dataset is either {"synthetic": {"d", "m", "n", "rank", "seed"}},
    {"dir": path} or {"features": path, "distributions": path}.
    """
    name: str
    dataset: Dict[str, Any]
    bias: BiasConfig = field(default_factory=lambda: BiasConfig(c=0.2))
    degrade: DegradeConfig = field(default_factory=DegradeConfig)
    solver: SolverConfig = field(default_factory=SolverConfig)
    variants: List[Variant] = field(default_factory=lambda: list(Variant))
    folds: int = config.DEFAULT_FOLDS
    seed: int = 0
    output_dir: Path = config.OUTPUT_DIR

    def __post_init__(self):
        self.variants = [v if isinstance(v, Variant) else Variant.parse(v) for v in self.variants]
        if not self.variants:
            raise InvalidConfig("at least one variant is required", field="variants")
        self.output_dir = Path(self.output_dir)
        if int(self.folds) < 2:
            raise InvalidConfig(f"need at least 2 folds, got {self.folds}", field="folds")
        if not 0 <= int(self.seed) <= MAX_SEED:
            raise InvalidConfig("seed must be a 64-bit unsigned integer", field="seed")
        if not any(key in self.dataset for key in ("synthetic", "dir", "features")):
            raise InvalidConfig(f"dataset must name synthetic, dir or features: {self.dataset}")

    @property
    def run_dir(self) -> Path:
        return self.output_dir / self.name

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "dataset": self.dataset,
            "bias": self.bias.to_dict(),
            "degrade": {"threshold_t": self.degrade.threshold_t},
            "solver": self.solver.to_dict(),
            "variants": [v.value for v in self.variants],
            "folds": self.folds,
            "seed": self.seed,
            "output_dir": str(self.output_dir),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any], base_dir: Optional[Path] = None) -> "ExperimentSpec":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise InvalidConfig(f"unknown experiment spec keys: {unknown}")
        data = dict(data)
        try:
            if "bias" in data:
                data["bias"] = BiasConfig(**data["bias"])
            if "degrade" in data:
                data["degrade"] = DegradeConfig(**data["degrade"])
            if "solver" in data:
                data["solver"] = SolverConfig.from_dict(data["solver"])
        except (TypeError, ValueError) as e:
            raise InvalidConfig(f"invalid experiment spec: {e}")
        if base_dir is not None and isinstance(data.get("dataset"), dict):
            data["dataset"] = {
                key: (str(base_dir / value) if key in ("dir", "features", "distributions")
                      and not Path(value).is_absolute() else value)
                for key, value in data["dataset"].items()
            }
        if base_dir is not None and "output_dir" in data and not Path(data["output_dir"]).is_absolute():
            data["output_dir"] = base_dir / data["output_dir"]
        try:
            return cls(**data)
        except (TypeError, ValueError) as e:
            raise InvalidConfig(f"invalid experiment spec: {e}")

    @classmethod
    def load(cls, path: PathLike) -> "ExperimentSpec":
        path = Path(path)
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as e:
            raise InvalidConfig(f"{path}: invalid JSON at line {e.lineno}: {e.msg}")
        return cls.from_dict(data, base_dir=path.resolve().parent)


def load_spec_dataset(spec: ExperimentSpec) -> Dataset:
    """Materialize the dataset an ExperimentSpec refers to"""
    ref = spec.dataset
    if "synthetic" in ref:
        params = ref["synthetic"]
        return synth_generate(
            d=int(params["d"]), m=int(params["m"]), n=int(params["n"]),
            rank_r=int(params["rank"]), seed=int(params.get("seed", 0)),
        )
    if "dir" in ref:
        return load_dataset_dir(ref["dir"])
    return load_dataset(ref["features"], ref["distributions"], name=ref.get("name"))


@dataclass
class FoldRecord:
    """One (fold, variant) fit"""
    fold: int
    variant: Variant
    scores: Dict[MetricName, float]
    n_test: int
    recovered_error: float
    biased_error: float
    converged: bool
    iters: int
    delta1: float
    delta2_soft: float
    delta2_hard: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "fold": self.fold,
            "variant": self.variant.value,
            "n_test": self.n_test,
            "recovered_error": self.recovered_error,
            "biased_error": self.biased_error,
            "converged": self.converged,
            "iters": self.iters,
            "delta1": self.delta1,
            "delta2_soft": self.delta2_soft,
            "delta2_hard": self.delta2_hard,
            "scores": {name.value: value for name, value in self.scores.items()},
        }


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    dataset_name: str
    reports: Dict[str, ScoreReport]
    folds: List[FoldRecord]

    def report(self, variant: Union[Variant, str]) -> ScoreReport:
        key = variant.value if isinstance(variant, Variant) else Variant.parse(variant).value
        return self.reports[key]

    def mean_recovery(self, variant: Variant) -> Dict[str, float]:
        records = [r for r in self.folds if r.variant is variant]
        return {
            "recovered_error": float(np.mean([r.recovered_error for r in records])),
            "biased_error": float(np.mean([r.biased_error for r in records])),
            "converged_folds": sum(r.converged for r in records),
        }

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dataset": self.dataset_name,
            "spec": self.spec.to_dict(),
            "methods": {name: report.to_dict() for name, report in self.reports.items()},
            "folds": [record.to_dict() for record in self.folds],
        }


def _aggregate_folds(records: List[FoldRecord]) -> ScoreReport:
    """Mean and population std of the per-fold means"""
    per_metric = {}
    for name in MetricName:
        values = np.array([r.scores[name] for r in records])
        per_metric[name] = (float(values.mean()), float(values.std()))
    return ScoreReport(per_metric=per_metric, n_instances=sum(r.n_test for r in records))


def run_fold(dataset: Dataset, spec: ExperimentSpec, fold: int, train: np.ndarray,
             test: np.ndarray, grid_index: int = 0,
             trace_dir: Optional[Path] = None) -> List[FoldRecord]:
    """Bias the training split, degrade it, fit every variant and score on the test split"""
    train_set, test_set = dataset.subset(train), dataset.subset(test)
    bias_cfg = replace(spec.bias, seed=derive_seed(spec.bias.seed, spec.seed, fold))
    D_hat = inject_bias(train_set.D, bias_cfg)
    L_hat = batch_degrade(D_hat, spec.degrade)
    biased_error = frobenius_distance(D_hat, train_set.D)

    records = []
    for variant in spec.variants:
        cfg = replace(spec.solver, variant=variant, seed=derive_seed(spec.seed, fold, grid_index))
        try:
            result = BLDLSolver(cfg, spec.degrade).fit(
                train_set.X, D_hat, L_hat, D_true=train_set.D
            )
        except BLDLError as e:
            raise e.with_context(fold=fold, variant=variant.value)

        P = predict(result.W, test_set.X)
        report = score_report(test_set.D, P)
        if trace_dir is not None:
            write_trace_csv(result.trace, trace_dir / f"{variant.value}_fold{fold}.csv")

        final = result.final
        records.append(FoldRecord(
            fold=fold,
            variant=variant,
            scores={name: report.mean(name) for name in MetricName},
            n_test=test_set.n,
            recovered_error=frobenius_distance(result.D_recovered, train_set.D),
            biased_error=biased_error,
            converged=result.converged,
            iters=result.iters_run,
            delta1=final.delta1,
            delta2_soft=final.delta2_soft,
            delta2_hard=final.delta2_hard,
        ))
    return records


def run_experiment(spec: ExperimentSpec, dataset: Optional[Dataset] = None,
                   grid_index: int = 0, write: bool = True) -> ExperimentResult:
    """
    k-fold cross-validated comparison of the configured variants

    Args:
        spec: experiment description
        dataset: preloaded dataset, otherwise loaded from spec.dataset
        grid_index: position in a sensitivity grid, mixed into task seeds
        write: write report.json, scores.csv, recovery.csv and traces

    Returns:
        ExperimentResult with one ScoreReport per variant
    """
    dataset = dataset or load_spec_dataset(spec)
    splits = fold_indices(dataset.n, spec.folds, spec.seed)
    all_indices = np.arange(dataset.n)
    trace_dir = spec.run_dir / TRACE_DIR if write else None

    logger.info(
        f"Experiment '{spec.name}' on {dataset.name}: {spec.folds} folds, "
        f"variants={[v.value for v in spec.variants]}, C={spec.bias.c}"
    )

    records: List[FoldRecord] = []
    for fold, test in enumerate(tqdm(splits, desc=spec.name, disable=not config.SHOW_PROGRESS)):
        train = np.setdiff1d(all_indices, test)
        records.extend(run_fold(dataset, spec, fold, train, test, grid_index, trace_dir))

    reports = {
        variant.value: _aggregate_folds([r for r in records if r.variant is variant])
        for variant in spec.variants
    }
    result = ExperimentResult(spec=spec, dataset_name=dataset.name, reports=reports, folds=records)

    for variant in spec.variants:
        report = reports[variant.value]
        logger.info(
            f"{variant.value}: Chebyshev={report.mean(MetricName.CHEBYSHEV):.4f}"
            f"±{report.std(MetricName.CHEBYSHEV):.4f}"
        )

    if write:
        write_experiment(result)
    return result


def _scores_frame(result: ExperimentResult) -> pd.DataFrame:
    rows = []
    for method, report in result.reports.items():
        row = {"method": method}
        for name in MetricName:
            row[f"{name.value}_mean"] = report.mean(name)
            row[f"{name.value}_std"] = report.std(name)
        rows.append(row)
    return pd.DataFrame(rows)


def write_experiment(result: ExperimentResult) -> Path:
    """Write report.json, scores.csv and recovery.csv under the run directory"""
    run_dir = result.spec.run_dir
    run_dir.mkdir(parents=True, exist_ok=True)

    payload = result.to_dict()
    payload["metadata"] = {"created": datetime.now().isoformat(timespec="seconds")}
    with open(run_dir / REPORT_FILE, "w") as f:
        json.dump(payload, f, indent=2, sort_keys=True)

    _scores_frame(result).to_csv(run_dir / SCORES_FILE, index=False, float_format=FLOAT_FORMAT)

    recovery = pd.DataFrame([
        {key: value for key, value in record.to_dict().items() if key != "scores"}
        for record in result.folds
    ])
    recovery.to_csv(run_dir / RECOVERY_FILE, index=False, float_format=FLOAT_FORMAT)

    logger.info(f"Experiment report written to {run_dir}")
    return run_dir


def _summary_rows(result: ExperimentResult, extra: Dict[str, Any]) -> List[Dict[str, Any]]:
    rows = []
    for variant in result.spec.variants:
        report = result.reports[variant.value]
        row = dict(extra)
        row["variant"] = variant.value
        row.update({name.value: report.mean(name) for name in MetricName})
        row.update(result.mean_recovery(variant))
        rows.append(row)
    return rows


def run_sensitivity(spec: ExperimentSpec, param: str, grid: Sequence[float],
                    write: bool = True) -> pd.DataFrame:
    """
    Repeat the experiment with one solver hyperparameter swept over a grid

    Returns:
        One row per (grid value, variant) with mean metric values and
        mean recovery errors
    """
    numeric = {f.name for f in fields(SolverConfig)} - {"variant", "seed", "max_iters"}
    if param not in numeric:
        raise InvalidConfig(f"cannot sweep '{param}'; choose one of {sorted(numeric)}", field=param)
    if not grid:
        raise InvalidConfig("sensitivity grid is empty")

    dataset = load_spec_dataset(spec)
    rows = []
    for index, value in enumerate(grid):
        point = replace(
            spec,
            name=f"{spec.name}/{param}={value:g}",
            solver=replace(spec.solver, **{param: float(value)}),
        )
        logger.info(f"Sensitivity {param}={value:g} ({index + 1}/{len(grid)})")
        result = run_experiment(point, dataset=dataset, grid_index=index, write=write)
        rows.extend(_summary_rows(result, {"param": param, "value": float(value)}))

    frame = pd.DataFrame(rows)
    if write:
        spec.run_dir.mkdir(parents=True, exist_ok=True)
        frame.to_csv(spec.run_dir / f"sensitivity_{param}.csv", index=False, float_format=FLOAT_FORMAT)
    return frame


def run_bias_sweep(spec: ExperimentSpec, levels: Sequence[float] = DEFAULT_BIAS_LEVELS,
                   write: bool = True) -> pd.DataFrame:
    """Repeat the experiment at several bias levels C"""
    if not levels:
        raise InvalidConfig("bias levels are empty")

    dataset = load_spec_dataset(spec)
    rows = []
    for index, level in enumerate(levels):
        point = replace(
            spec,
            name=f"{spec.name}/c={level:g}",
            bias=replace(spec.bias, c=float(level)),
        )
        result = run_experiment(point, dataset=dataset, grid_index=index, write=write)
        rows.extend(_summary_rows(result, {"c": float(level)}))

    frame = pd.DataFrame(rows)
    if write:
        spec.run_dir.mkdir(parents=True, exist_ok=True)
        frame.to_csv(spec.run_dir / "bias_sweep.csv", index=False, float_format=FLOAT_FORMAT)
    return frame
