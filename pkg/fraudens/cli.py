# -*- coding: utf-8 -*-
# -----------------------------------------------------------------------------
# cli - Command line surface: run, balance, grid, score and synth
#
# Part of the fraudens hybrid ensemble fraud detection package
#
# Python Compatibility: Requires Python 3.8 or later
# Doc Environment: Sphinx with autodoc, autosummary, napoleon, and autoenum
#
# -----------------------------------------------------------------------------
# MIT License - see LICENSE.txt
# -----------------------------------------------------------------------------
# Edit History:
# 17-Oct-26 Initial edit
# 17-Oct-26 Stage timings and stage names in every diagnostic
# 17-Oct-26 Grid search fits its scaler on the inner training split only
# -----------------------------------------------------------------------------
"""The ``fraudens`` command.

Subcommands:

    ``run``      ingest, balance, cross-validate; write the report, ROC
                 curves, the grid table and optionally the trained model
    ``balance``  ingest and IHT undersampling only; write the kept rows
                 and their indices
    ``grid``     ingest, balance and the ensemble weight search only
    ``score``    apply a saved model to a CSV file
    ``synth``    write the bundled synthetic dataset

Exit status: 0 success, 1 usage or configuration error, 2 data error,
3 training or evaluation error.

"""

import argparse
import logging
import sys
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Dict, Iterator, Optional, Sequence, Tuple

import pandas as pd

from fraudens import __version__
from fraudens.config import PipelineConfig, build_config
from fraudens.dataset import (Dataset, load_csv, read_dataset, write_csv,
                              write_frame, write_indices)
from fraudens.docenum import DocIntEnum
from fraudens.ensemble import write_grid_table
from fraudens.evaluate import (MODEL_NAMES, EvaluationReport, cross_validate,
                               select_weights, train_base_models,
                               write_report, write_roc_csv)
from fraudens.exceptions import (DataFileException, FraudensException,
                                 StageException)
from fraudens.persist import SavedModel, load_model, save_model, score_rows
from fraudens.preprocess import LabelMap, decode_labels, fit_transform
from fraudens.resample import balance_dataset
from fraudens.seeding import derive_seed
from fraudens.synthetic import make_imbalanced

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

class ExitStatus(DocIntEnum):
    """Process exit status of the fraudens command"""
    OK       = 0, "Success"
    USAGE    = 1, "Bad flags or configuration"
    DATA     = 2, "Unreadable, malformed or mismatched input"
    TRAINING = 3, "Training or evaluation failed"

class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with the status of configuration errors"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(ExitStatus.USAGE, f"{self.prog}: error: {message}\n")

def exit_status_for(exc: BaseException) -> ExitStatus:
    """Process exit status for an exception: its category, TRAINING if foreign"""
    if isinstance(exc, FraudensException) and exc.category in (1, 2, 3):
        return ExitStatus(exc.category)
    return ExitStatus.TRAINING

@contextmanager
def _stage(name: str, timings: Dict[str, float]) -> Iterator[None]:
    logger.info("stage=%s status=start", name)
    start = time.perf_counter()
    try:
        yield
    except StageException:
        raise
    except Exception as ex:
        raise StageException(name, ex) from ex
    timings[name] = (time.perf_counter() - start) * 1000.0
    logger.info("stage=%s status=done elapsed_ms=%.1f", name, timings[name])

def _ingest(config: PipelineConfig, timings: Dict[str, float]) -> Tuple[Dataset, LabelMap]:
    with _stage("ingest", timings):
        dataset, label_map, removed = read_dataset(config.check_input(), config.label_column)
        n0, n1 = dataset.class_counts()
        logger.info("stage=ingest samples=%d features=%d class0=%d class1=%d removed=%d",
                    dataset.n_samples, dataset.n_features, n0, n1, removed)
    return dataset, label_map

def _balance(dataset: Dataset, config: PipelineConfig, timings: Dict[str, float]):
    if not config.resample_enabled:
        logger.info("stage=balance status=skipped")
        return dataset, None
    with _stage("balance", timings):
        return balance_dataset(dataset, config.resample_config())

def fit_final_model(dataset: Dataset, label_map: LabelMap, config: PipelineConfig) -> SavedModel:
    """Train the deployable ensemble on every row of ``dataset``.

    Weights are searched on a stratified hold-out of the data, then the
    four models are refitted on all of it.

    """
    seed = derive_seed(config.seed, "final")
    search = select_weights(dataset.features, dataset.labels, config, seed, scale=True)
    scaler, X = fit_transform(dataset.features)
    models = train_base_models(X, dataset.labels, config.models.seeded(seed, config.threads))
    return SavedModel(dataset.feature_names, config.label_column, scaler, label_map, tuple(models),
                      search.weights, config.to_dict())

def run_pipeline(config: PipelineConfig) -> EvaluationReport:
    """The full pipeline; writes every artifact ``config.output`` asks for."""
    timings: Dict[str, float] = {}
    out = config.out_dir
    dataset, label_map = _ingest(config, timings)
    dataset, _ = _balance(dataset, config, timings)
    with _stage("evaluate", timings):
        report = cross_validate(dataset, config)
    with _stage("export", timings):
        if config.output.roc:
            for name in MODEL_NAMES:
                write_roc_csv(report.roc[name], out / f"roc_{name}.csv")
        if config.output.grid_table and report.selection:
            write_grid_table(report.selection[0], out / "grid_scores.csv")
        if config.output.save_model:
            save_model(fit_final_model(dataset, label_map, config), out / "model.json")
    report.timings_ms.update(timings)
    if config.output.report:
        write_report(report, out / "report.json")
    return report

def _cmd_run(args: argparse.Namespace) -> int:
    run_pipeline(_config_from_args(args))
    return ExitStatus.OK

def _cmd_balance(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    timings: Dict[str, float] = {}
    dataset, _ = _ingest(config, timings)
    if not config.resample_enabled:
        logger.warning("stage=balance --no-resample given; writing the input rows unchanged")
    balanced, result = _balance(dataset, config, timings)
    kept = range(dataset.n_samples) if result is None else result.kept_indices
    with _stage("export", timings):
        write_csv(balanced, config.out_dir / "balanced.csv", config.label_column)
        write_indices(kept, config.out_dir / "kept_indices.csv")
    return ExitStatus.OK

def _cmd_grid(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    timings: Dict[str, float] = {}
    dataset, _ = _ingest(config, timings)
    dataset, _ = _balance(dataset, config, timings)
    with _stage("grid", timings):
        result = select_weights(dataset.features, dataset.labels, config,
                                derive_seed(config.seed, "grid"), scale=True)
        write_grid_table(result, config.out_dir / "grid_scores.csv")
    weights = " ".join(f"{k}={v}" for k, v in result.weights.to_dict().items())
    print(f"{weights} {result.metric.value}={result.score:.6f} accuracy={result.accuracy:.6f} "
          f"equal_weights={result.baseline_score:.6f}")
    return ExitStatus.OK

def _cmd_score(args: argparse.Namespace) -> int:
    timings: Dict[str, float] = {}
    with _stage("score", timings):
        for p in (args.model, args.input):
            if not Path(p).is_file():
                raise DataFileException(p, "File does not exist")
        model = load_model(args.model)
        rows = score_rows(model, load_csv(args.input))
    frame = pd.DataFrame(rows, columns=["row_index", "probability", "label"])
    frame["label"] = decode_labels(frame["label"], model.label_map)
    if args.output:
        write_frame(frame, args.output)
    else:
        frame.to_csv(sys.stdout, index=False, lineterminator="\n")
    return ExitStatus.OK

def _cmd_synth(args: argparse.Namespace) -> int:
    dataset = make_imbalanced(args.seed, args.n_majority, args.n_minority, args.n_features, args.separable)
    write_csv(dataset, args.output)
    logger.info("stage=synth path=%s samples=%d separable=%s", args.output, dataset.n_samples, args.separable)
    return ExitStatus.OK

def _config_from_args(args: argparse.Namespace) -> PipelineConfig:
    overrides = {k: getattr(args, k) for k in ("input", "label_column", "seed", "folds", "threads",
                                               "ratio", "no_resample", "out_dir", "save_model")}
    return build_config(args.config, overrides)

def _add_logging_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    g.add_argument("-q", "--quiet", action="store_true", help="warnings and errors only")

def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="fraudens", description="Hybrid ensemble fraud detection pipeline")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    pipeline = _ArgumentParser(add_help=False)
    pipeline.add_argument("--config", help="YAML configuration file")
    pipeline.add_argument("--input", help="transaction CSV file")
    pipeline.add_argument("--label-column", help="class column header (default Class)")
    pipeline.add_argument("--seed", type=int, help="root random seed (required here or in the config)")
    pipeline.add_argument("--folds", type=int, help="cross-validation folds (default 10)")
    pipeline.add_argument("--ratio", type=float, help="minority:majority ratio after undersampling (default 1.0)")
    pipeline.add_argument("--no-resample", action="store_true", help="skip IHT undersampling")
    pipeline.add_argument("--out-dir", help="directory for all outputs (default out)")
    pipeline.add_argument("--save-model", action="store_true", help="also write the trained ensemble to model.json")
    pipeline.add_argument("--threads", type=int, help="worker thread bound (default machine parallelism)")
    _add_logging_flags(pipeline)

    p = sub.add_parser("run", parents=[pipeline], help="full pipeline with report")
    p.set_defaults(func=_cmd_run)
    p = sub.add_parser("balance", parents=[pipeline], help="IHT undersampling only")
    p.set_defaults(func=_cmd_balance)
    p = sub.add_parser("grid", parents=[pipeline], help="ensemble weight search only")
    p.set_defaults(func=_cmd_grid)

    p = sub.add_parser("score", help="score a CSV file with a saved model")
    p.add_argument("--model", required=True, help="saved model file")
    p.add_argument("--input", required=True, help="CSV file with the training feature columns")
    p.add_argument("--output", help="output CSV (default standard output)")
    _add_logging_flags(p)
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("synth", help="write the bundled synthetic dataset")
    p.add_argument("--output", required=True, help="CSV file to write")
    p.add_argument("--seed", type=int, required=True, help="generator seed")
    p.add_argument("--n-majority", type=int, default=1000)
    p.add_argument("--n-minority", type=int, default=50)
    p.add_argument("--n-features", type=int, default=8)
    p.add_argument("--separable", action="store_true", help="place the classes far apart")
    _add_logging_flags(p)
    p.set_defaults(func=_cmd_synth)
    return parser

def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point; returns the exit status"""
    args = build_parser().parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)
    logging.getLogger("fraudens").setLevel(level)
    try:
        return args.func(args)
    except FraudensException as ex:
        cause = getattr(ex, "cause", None)
        if cause is not None and not isinstance(cause, FraudensException):
            logger.exception("command=%s unexpected failure", args.command)
        else:
            logger.error("command=%s error=0x%X %s", args.command, ex.number, ex)
        return exit_status_for(ex)
    except Exception:
        logger.exception("command=%s unexpected failure", args.command)
        return ExitStatus.TRAINING
