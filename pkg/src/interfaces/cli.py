"""
Command-line interface for the BLDL toolkit

Exit codes: 0 success, 1 input error, 2 numerical failure.
"""
import sys
import json
import argparse
import shutil
from pathlib import Path
from typing import List, Optional
import numpy as np
import pandas as pd

from config.constants import Variant, SENSITIVITY_GRIDS, DEFAULT_BIAS_LEVELS
from config.settings import config
from src.ldl_core.types import SolverConfig
from src.ldl_core.distribution import predict
from src.bias_degrade.bias import BiasConfig, inject_bias
from src.bias_degrade.degrade import DegradeConfig, batch_degrade
from src.admm_solver.solver import BLDLSolver, write_trace_csv
from src.ldl_metrics.metrics import score_report
from src.exp_harness.dataset_io import (
    Dataset, load_dataset_dir, load_distributions, load_features, load_multilabel,
    save_dataset, save_multilabel, write_matrix_csv,
    FEATURES_FILE, LABELS_FILE, TRUTH_FILE, FLOAT_FORMAT,
)
from src.exp_harness.synthetic import synth_generate
from src.exp_harness.experiment import ExperimentSpec, run_experiment, run_sensitivity, run_bias_sweep
from src.exp_harness.stats_report import load_report_tables, emit_stats
from src.error_handling.exceptions import BLDLError, InvalidConfig
from src.error_handling.handlers import error_handler, exit_code_for, EXIT_OK, EXIT_INPUT_ERROR
from src.error_handling.logger import get_logger, set_level

logger = get_logger("cli")


def _parse_floats(text: str) -> List[float]:
    try:
        return [float(value) for value in text.split(",") if value.strip()]
    except ValueError:
        raise InvalidConfig(f"expected comma-separated numbers, got '{text}'")


def _write_plain_csv(matrix: np.ndarray, path: Path) -> Path:
    """Write a parameter matrix row for row"""
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(np.asarray(matrix)).to_csv(path, header=False, index=False, float_format=FLOAT_FORMAT)
    return path


def _copy_truth(source: Path, target: Path):
    if (source / TRUTH_FILE).exists() and source.resolve() != target.resolve():
        target.mkdir(parents=True, exist_ok=True)
        shutil.copyfile(source / TRUTH_FILE, target / TRUTH_FILE)


class CLIInterface:
    """Command-line interface"""

    def process_command(self, args) -> int:
        """Dispatch a parsed command; errors become exit codes"""

        handlers = {
            'synth': self.cmd_synth,
            'bias': self.cmd_bias,
            'degrade': self.cmd_degrade,
            'fit': self.cmd_fit,
            'eval': self.cmd_eval,
            'experiment': self.cmd_experiment,
            'sensitivity': self.cmd_sensitivity,
            'sweep': self.cmd_sweep,
            'stats': self.cmd_stats,
        }
        handler = handlers.get(args.command)
        if handler is None:
            print("❌ Unknown command")
            return EXIT_INPUT_ERROR

        try:
            return handler(args)

        except BLDLError as e:
            error_handler.handle_error(e, context={'command': args.command})
            print(f"❌ Error: {str(e)}")
            return exit_code_for(e)

        except (OSError, ValueError) as e:
            logger.error(f"Command '{args.command}' failed: {str(e)}")
            print(f"❌ Error: {str(e)}")
            return EXIT_INPUT_ERROR

    def cmd_synth(self, args) -> int:
        """Generate a synthetic dataset"""
        dataset = synth_generate(args.d, args.m, args.n, args.rank, args.seed)
        save_dataset(dataset, args.out)
        print(f"✅ {dataset.name} written to {args.out}")
        return EXIT_OK

    def cmd_bias(self, args) -> int:
        """Inject annotation bias; the clean distributions are kept as truth.csv"""
        source, target = Path(args.input), Path(args.out)
        dataset = load_dataset_dir(source)
        biased = inject_bias(dataset.D, BiasConfig(c=args.c, seed=args.seed))

        save_dataset(Dataset(dataset.name, dataset.X, biased), target)
        if (source / TRUTH_FILE).exists():
            _copy_truth(source, target)
        else:
            write_matrix_csv(dataset.D, target / TRUTH_FILE)
        print(f"✅ Biased dataset (C={args.c}) written to {target}")
        return EXIT_OK

    def cmd_degrade(self, args) -> int:
        """Degrade distributions to multi-hot labels.csv"""
        source, target = Path(args.input), Path(args.out)
        dataset = load_dataset_dir(source)
        labels = batch_degrade(dataset.D, DegradeConfig(threshold_t=args.t))

        save_dataset(dataset, target)
        save_multilabel(labels, target / LABELS_FILE)
        _copy_truth(source, target)
        print(f"✅ Labels (T={args.t}, mean {labels.data.sum(axis=0).mean():.2f} per instance) "
              f"written to {target / LABELS_FILE}")
        return EXIT_OK

    def cmd_fit(self, args) -> int:
        """Fit one solver variant and write its parameters, recovery and trace"""
        source, target = Path(args.input), Path(args.out)
        dataset = load_dataset_dir(source)

        cfg_data = {}
        if args.config:
            cfg_data = json.loads(Path(args.config).read_text())
        if args.variant:
            cfg_data['variant'] = args.variant
        cfg = SolverConfig.from_dict(cfg_data)

        degrade_cfg = DegradeConfig()
        if (source / LABELS_FILE).exists():
            labels = load_multilabel(source / LABELS_FILE)
        else:
            logger.info(f"No {LABELS_FILE} in {source}; degrading with T={degrade_cfg.threshold_t}")
            labels = batch_degrade(dataset.D, degrade_cfg)
        truth = load_distributions(source / TRUTH_FILE) if (source / TRUTH_FILE).exists() else None

        result = BLDLSolver(cfg, degrade_cfg).fit(dataset.X, dataset.D, labels, D_true=truth)

        _write_plain_csv(result.W, target / "W.csv")
        _write_plain_csv(result.O, target / "O.csv")
        write_matrix_csv(result.D_recovered, target / "recovered.csv")
        write_trace_csv(result.trace, Path(args.trace) if args.trace else target / "trace.csv")

        if args.predict_on:
            X_new = load_features(Path(args.predict_on) / FEATURES_FILE)
            write_matrix_csv(predict(result.W, X_new), target / "predictions.csv")

        final = result.final
        print(f"✅ {cfg.variant.value}: {result.iters_run} iterations, converged={result.converged}")
        print(f"   residual={final.primal_residual:.3e}  delta1={final.delta1:.4f}  "
              f"delta2={final.delta2_soft:.4f}")
        if final.recovery_error is not None:
            print(f"   recovery error={final.recovery_error:.4f}")
        return EXIT_OK

    def cmd_eval(self, args) -> int:
        """Score predictions against true distributions"""
        predictions = load_distributions(args.pred)
        truth = load_distributions(args.truth)
        report = score_report(truth, predictions)

        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        with open(out, 'w') as f:
            json.dump(report.to_dict(), f, indent=2)

        for name, (mean, std) in report.per_metric.items():
            print(f"   {name.value:<13} {mean:.4f} ± {std:.4f}")
        return EXIT_OK

    def cmd_experiment(self, args) -> int:
        """Run a cross-validated experiment from a JSON spec"""
        spec = ExperimentSpec.load(args.spec)
        result = run_experiment(spec)
        for method, report in result.reports.items():
            print(f"   {method:<7} " + "  ".join(
                f"{name.value}={mean:.4f}" for name, (mean, _) in report.per_metric.items()
            ))
        print(f"✅ Reports written to {spec.run_dir}")
        return EXIT_OK

    def cmd_sensitivity(self, args) -> int:
        """Sweep one solver hyperparameter"""
        spec = ExperimentSpec.load(args.spec)
        grid = _parse_floats(args.grid) if args.grid else SENSITIVITY_GRIDS.get(args.param)
        if not grid:
            raise InvalidConfig(f"no grid given and no default grid for '{args.param}'")
        frame = run_sensitivity(spec, args.param, grid)
        print(frame.to_string(index=False))
        return EXIT_OK

    def cmd_sweep(self, args) -> int:
        """Repeat an experiment over bias levels"""
        spec = ExperimentSpec.load(args.spec)
        levels = _parse_floats(args.levels) if args.levels else DEFAULT_BIAS_LEVELS
        frame = run_bias_sweep(spec, levels)
        print(frame.to_string(index=False))
        return EXIT_OK

    def cmd_stats(self, args) -> int:
        """Friedman / Bonferroni-Dunn / Wilcoxon across report files"""
        tables = load_report_tables(args.reports)
        records = emit_stats(tables, args.control, alpha=args.alpha, q_alpha=args.q_alpha, out=args.out)
        for record in records:
            f_stat = "inf" if record['degenerate'] else f"{record['f_stat']:.4f}"
            print(f"   {record['metric']:<13} F={f_stat} (crit {record['f_critical']:.4f})  "
                  f"CD={record['cd']:.4f}")
        return EXIT_OK


def create_parser() -> argparse.ArgumentParser:
    """Create argument parser"""

    parser = argparse.ArgumentParser(
        description="Label distribution learning under biased annotations",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s synth --d 20 --m 8 --n 200 --rank 3 --seed 7 --out data/clean
  %(prog)s bias --in data/clean --c 0.2 --seed 7 --out data/biased
  %(prog)s degrade --in data/biased --t 0.7 --out data/biased
  %(prog)s fit --in data/biased --variant bldl --out results/fit
  %(prog)s experiment --spec experiment.json
  %(prog)s stats --reports "results/*/report.json" --control bldl --out results/stats.json
        """
    )

    parser.add_argument('--log-level', dest='log_level', help='Override LOG_LEVEL (DEBUG, INFO, ...)')

    subparsers = parser.add_subparsers(dest='command', help='Command to execute')

    synth_parser = subparsers.add_parser('synth', help='Generate a synthetic dataset')
    synth_parser.add_argument('--d', type=int, required=True, help='Feature dimension')
    synth_parser.add_argument('--m', type=int, required=True, help='Number of labels')
    synth_parser.add_argument('--n', type=int, required=True, help='Number of instances')
    synth_parser.add_argument('--rank', type=int, required=True, help='Rank of the logit map')
    synth_parser.add_argument('--seed', type=int, default=0)
    synth_parser.add_argument('--out', required=True, help='Output directory')

    bias_parser = subparsers.add_parser('bias', help='Inject annotation bias')
    bias_parser.add_argument('--in', dest='input', required=True, help='Dataset directory')
    bias_parser.add_argument('--c', type=float, required=True, help='Bias level in [0, 1]')
    bias_parser.add_argument('--seed', type=int, default=0)
    bias_parser.add_argument('--out', required=True, help='Output directory')

    degrade_parser = subparsers.add_parser('degrade', help='Degrade distributions to labels')
    degrade_parser.add_argument('--in', dest='input', required=True, help='Dataset directory')
    degrade_parser.add_argument('--t', type=float, default=config.DEGRADE_THRESHOLD_T,
                                help='Coverage threshold in (0, 1)')
    degrade_parser.add_argument('--out', required=True, help='Output directory')

    fit_parser = subparsers.add_parser('fit', help='Fit a solver variant')
    fit_parser.add_argument('--in', dest='input', required=True, help='Dataset directory')
    fit_parser.add_argument('--config', help='Solver config JSON')
    fit_parser.add_argument('--variant', choices=[v.value for v in Variant])
    fit_parser.add_argument('--trace', help='Trace CSV path (default OUT/trace.csv)')
    fit_parser.add_argument('--out', required=True, help='Output directory')
    fit_parser.add_argument('--predict-on', dest='predict_on',
                            help='Directory with features.csv to predict')

    eval_parser = subparsers.add_parser('eval', help='Score predictions')
    eval_parser.add_argument('--pred', required=True, help='Predicted distributions CSV')
    eval_parser.add_argument('--truth', required=True, help='True distributions CSV')
    eval_parser.add_argument('--out', required=True, help='Report JSON path')

    experiment_parser = subparsers.add_parser('experiment', help='Run a cross-validated experiment')
    experiment_parser.add_argument('--spec', required=True, help='ExperimentSpec JSON')

    sensitivity_parser = subparsers.add_parser('sensitivity', help='Hyperparameter sensitivity')
    sensitivity_parser.add_argument('--spec', required=True, help='ExperimentSpec JSON')
    sensitivity_parser.add_argument('--param', required=True, choices=sorted(SENSITIVITY_GRIDS))
    sensitivity_parser.add_argument('--grid', help='Comma-separated values')

    sweep_parser = subparsers.add_parser('sweep', help='Repeat an experiment over bias levels')
    sweep_parser.add_argument('--spec', required=True, help='ExperimentSpec JSON')
    sweep_parser.add_argument('--levels', help='Comma-separated bias levels')

    stats_parser = subparsers.add_parser('stats', help='Statistical comparison across datasets')
    stats_parser.add_argument('--reports', required=True, help='Glob of report.json files')
    stats_parser.add_argument('--control', required=True, help='Control method name')
    stats_parser.add_argument('--alpha', type=float, default=0.05)
    stats_parser.add_argument('--q-alpha', dest='q_alpha', type=float,
                              help='Bonferroni-Dunn critical value override')
    stats_parser.add_argument('--out', required=True, help='Statistics JSON path')

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""

    parser = create_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return EXIT_INPUT_ERROR

    if args.log_level:
        try:
            set_level(args.log_level)
        except BLDLError as e:
            print(f"❌ {e}")
            return EXIT_INPUT_ERROR

    cli = CLIInterface()
    return cli.process_command(args)


if __name__ == '__main__':
    sys.exit(main())
