# -*- coding: utf-8 -*-
# -----------------------------------------------------------------------------
# config - Pipeline configuration from a YAML file plus command line overrides
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
# -----------------------------------------------------------------------------
"""Run settings for the whole pipeline.

A configuration file is YAML with these sections, every key optional
except ``seed`` (which may instead come from ``--seed``)::

    input: creditcard.csv
    label_column: Class
    seed: 42
    folds: 10
    threads: 4
    resample:
      enabled: true
      target_ratio: 1.0
      cv_folds: 5
      logistic: {learning_rate: 0.1, epochs: 300, l2: 0.0001}
    models:
      dt:  {max_depth: null, min_samples_split: 2}
      rf:  {n_trees: 100, max_features: null, bootstrap: true}
      knn: {k: 5}
      mlp: {hidden_layers: [64], learning_rate: 0.01, epochs: 100, batch_size: 32}
    grid:
      values: [0, 0.25, 0.5, 0.75, 1.0]
      metric: macro_f1
      selection: once
    output:
      out_dir: out
      report: true
      roc: true
      grid_table: true
      save_model: false

Unknown keys are errors. Command line flags override the file.

"""

import copy
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

import yaml

from fraudens.classifiers import (DTParams, KNNParams, MLPParams, ModelParams,
                                  RFParams)
from fraudens.dataset import DEFAULT_LABEL_COLUMN
from fraudens.ensemble import SelectionMetric, WeightGrid, WeightSelection
from fraudens.exceptions import (ConfigurationException, DataFileException,
                                 FraudensException)
from fraudens.resample import LogisticConfig, ResampleConfig
from fraudens.seeding import derive_seed

logger = logging.getLogger(__name__)

_SECTIONS = {
    "": {"input", "label_column", "seed", "folds", "threads", "resample", "models", "grid", "output"},
    "resample": {"enabled", "target_ratio", "cv_folds", "logistic"},
    "resample.logistic": {"learning_rate", "epochs", "l2"},
    "models": {"dt", "rf", "knn", "mlp"},
    "models.dt": {"max_depth", "min_samples_split"},
    "models.rf": {"n_trees", "max_features", "bootstrap", "max_depth", "min_samples_split"},
    "models.knn": {"k", "distance"},
    "models.mlp": {"hidden_layers", "learning_rate", "epochs", "batch_size"},
    "grid": {"values", "metric", "selection"},
    "output": {"out_dir", "report", "roc", "grid_table", "save_model"},
}

@dataclass(frozen=True)
class OutputConfig:
    """What a run writes, all under ``out_dir``"""
    out_dir: str = "out"
    report: bool = True
    roc: bool = True
    grid_table: bool = True
    save_model: bool = False

@dataclass(frozen=True)
class PipelineConfig:
    """Every setting of a pipeline run.

    Attributes:
        seed: Root of every random stream, required.
        input: Transaction CSV path.
        label_column: Header of the class column.
        folds: Cross-validation folds, at least 2.
        threads: Worker thread bound, ``None`` for the machine default.
        resample_enabled: Run IHT undersampling before cross-validation.
        resample: IHT settings; its seed is derived from :attr:`seed`.
        models: Base learner hyperparameters.
        grid: Weight search candidates and metric.
        weight_selection: Search once or on every fold.
        output: Artifacts to write.

    """
    seed: int
    input: Optional[str] = None
    label_column: str = DEFAULT_LABEL_COLUMN
    folds: int = 10
    threads: Optional[int] = None
    resample_enabled: bool = True
    resample: ResampleConfig = field(default_factory=ResampleConfig)
    models: ModelParams = field(default_factory=ModelParams)
    grid: WeightGrid = field(default_factory=WeightGrid)
    weight_selection: WeightSelection = WeightSelection.ONCE
    output: OutputConfig = field(default_factory=OutputConfig)

    def __post_init__(self):
        if isinstance(self.seed, bool) or not isinstance(self.seed, int):
            raise ConfigurationException(f"seed must be an integer, got {self.seed!r}")
        if self.folds < 2:
            raise ConfigurationException(f"folds must be at least 2, got {self.folds}")
        if self.threads is not None and self.threads < 1:
            raise ConfigurationException(f"threads must be positive, got {self.threads}")

    @property
    def out_dir(self) -> Path:
        return Path(self.output.out_dir)

    def resample_config(self) -> ResampleConfig:
        """The IHT settings with their seed and thread bound filled in"""
        r = self.resample
        return ResampleConfig(r.target_ratio, r.cv_folds, r.logistic,
                              derive_seed(self.seed, "resample"), self.threads)

    def check_input(self) -> Path:
        """The input path, which must name an existing file

        Raises:
            ConfigurationException: No input was configured.
            DataFileException: The file does not exist.

        """
        if not self.input:
            raise ConfigurationException("No input file given (use --input or 'input:' in the config file)")
        path = Path(self.input)
        if not path.is_file():
            raise DataFileException(path, "Input file does not exist")
        return path

    def to_dict(self) -> Dict[str, Any]:
        """Plain form, the configuration echo of reports and saved models"""
        lr = self.resample.logistic
        return {
            "input": self.input,
            "label_column": self.label_column,
            "seed": self.seed,
            "folds": self.folds,
            "threads": self.threads,
            "resample": {"enabled": self.resample_enabled, "target_ratio": self.resample.target_ratio,
                         "cv_folds": self.resample.cv_folds,
                         "logistic": {"learning_rate": lr.learning_rate, "epochs": lr.epochs, "l2": lr.l2}},
            "models": {kind: {k: v for k, v in p.items() if k != "seed"}
                       for kind, p in self.models.to_dict().items()},
            "grid": {"values": list(self.grid.values), "metric": self.grid.metric.value,
                     "selection": self.weight_selection.value},
            "output": {"out_dir": self.output.out_dir, "report": self.output.report, "roc": self.output.roc,
                       "grid_table": self.output.grid_table, "save_model": self.output.save_model},
        }

def _check_keys(d: Any, section: str) -> Dict[str, Any]:
    if d is None:
        return {}
    if not isinstance(d, Mapping):
        raise ConfigurationException(f"Section '{section or 'top level'}' must be a mapping, got {type(d).__name__}")
    unknown = sorted(set(d) - _SECTIONS[section])
    if unknown:
        where = f" in section '{section}'" if section else ""
        raise ConfigurationException(f"Unknown configuration key '{unknown[0]}'{where}")
    return dict(d)

def _enum(enum_cls, value, key: str):
    try:
        return enum_cls.parse(value)
    except ValueError as ex:
        raise ConfigurationException(f"{key}: {ex}") from ex

def config_from_dict(d: Mapping[str, Any]) -> PipelineConfig:
    """Build a :class:`PipelineConfig` from the parsed file layout

    Raises:
        ConfigurationException: Unknown key, wrong type or missing seed.
        InvalidValueException: A value is out of range.

    """
    top = _check_keys(d, "")
    if top.get("seed") is None:
        raise ConfigurationException("A seed is required (use --seed or 'seed:' in the config file)")
    res = _check_keys(top.get("resample"), "resample")
    lr = _check_keys(res.get("logistic"), "resample.logistic")
    models = _check_keys(top.get("models"), "models")
    grid = _check_keys(top.get("grid"), "grid")
    out = _check_keys(top.get("output"), "output")
    try:
        resample = ResampleConfig(
            target_ratio=res.get("target_ratio", ResampleConfig.target_ratio),
            cv_folds=res.get("cv_folds", ResampleConfig.cv_folds),
            logistic=LogisticConfig(**lr))
        params = ModelParams(
            dt=DTParams(**_check_keys(models.get("dt"), "models.dt")),
            rf=RFParams(**_check_keys(models.get("rf"), "models.rf")),
            knn=KNNParams(**_check_keys(models.get("knn"), "models.knn")),
            mlp=MLPParams(**_check_keys(models.get("mlp"), "models.mlp")))
        weight_grid = WeightGrid(
            values=tuple(grid.get("values", WeightGrid.values)),
            metric=_enum(SelectionMetric, grid.get("metric", SelectionMetric.MACRO_F1.value), "grid.metric"))
        return PipelineConfig(
            seed=top["seed"],
            input=None if top.get("input") is None else str(top["input"]),
            label_column=str(top.get("label_column", DEFAULT_LABEL_COLUMN)),
            folds=top.get("folds", 10),
            threads=top.get("threads"),
            resample_enabled=bool(res.get("enabled", True)),
            resample=resample,
            models=params,
            grid=weight_grid,
            weight_selection=_enum(WeightSelection, grid.get("selection", WeightSelection.ONCE.value),
                                   "grid.selection"),
            output=OutputConfig(**out))
    except FraudensException:
        raise
    except (TypeError, ValueError) as ex:
        raise ConfigurationException(f"Invalid configuration value: {ex}") from ex

def load_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    """Parse a YAML configuration file into its raw mapping

    Raises:
        ConfigurationException: The file is missing or not valid YAML.

    """
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8") as f:
            d = yaml.safe_load(f)
    except OSError as ex:
        raise ConfigurationException(f"Cannot read configuration file {path}: {ex.strerror or ex}") from ex
    except yaml.YAMLError as ex:
        raise ConfigurationException(f"Configuration file {path} is not valid YAML: {ex}") from ex
    if d is None:
        return {}
    if not isinstance(d, dict):
        raise ConfigurationException(f"Configuration file {path} must hold a mapping")
    return d

def apply_overrides(d: Mapping[str, Any], overrides: Mapping[str, Any]) -> Dict[str, Any]:
    """Merge command line values into the raw configuration; flags win.

    Recognized overrides are ``input``, ``label_column``, ``seed``,
    ``folds``, ``threads``, ``ratio``, ``no_resample``, ``out_dir`` and
    ``save_model``. ``None`` and ``False`` values mean "not given".

    """
    d = copy.deepcopy(dict(d))
    for key in ("input", "label_column", "seed", "folds", "threads"):
        if overrides.get(key) is not None:
            d[key] = overrides[key]
    if overrides.get("ratio") is not None or overrides.get("no_resample"):
        res = dict(d.get("resample") or {})
        if overrides.get("ratio") is not None:
            res["target_ratio"] = overrides["ratio"]
        if overrides.get("no_resample"):
            res["enabled"] = False
        d["resample"] = res
    if overrides.get("out_dir") is not None or overrides.get("save_model"):
        out = dict(d.get("output") or {})
        if overrides.get("out_dir") is not None:
            out["out_dir"] = overrides["out_dir"]
        if overrides.get("save_model"):
            out["save_model"] = True
        d["output"] = out
    return d

def build_config(path: Optional[Union[str, Path]] = None, overrides: Optional[Mapping[str, Any]] = None) -> PipelineConfig:
    """The run configuration from an optional file and flag overrides"""
    d = load_config_file(path) if path is not None else {}
    cfg = config_from_dict(apply_overrides(d, overrides or {}))
    logger.debug("stage=config source=%s seed=%d folds=%d resample=%s",
                 path or "flags", cfg.seed, cfg.folds, cfg.resample_enabled)
    return cfg
