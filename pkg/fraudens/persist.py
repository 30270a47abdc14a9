# -*- coding: utf-8 -*-
# -----------------------------------------------------------------------------
# persist - Saved model document: scaler, label map, four models and weights
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
# 17-Oct-26 Score features are taken from the raw DataFrame by column name
# -----------------------------------------------------------------------------

import hashlib
import json
import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np
from dateutil import parser as dateparser
from typing_extensions import Literal, TypedDict

from fraudens.classifiers import BASE_KINDS, TrainedModel
from fraudens.dataset import RawDataset, check_numeric
from fraudens.ensemble import EnsembleWeights, ensemble_predict_proba
from fraudens.exceptions import (ChecksumException, ColumnMismatchException,
                                 DataFileException, ModelFormatException)
from fraudens.preprocess import LabelMap, ScalerParams, transform

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1

class SavedModelDocument(TypedDict):
    format_version: Literal[1]
    created: str
    feature_names: List[str]
    label_column: str
    scaler: dict
    label_map: dict
    models: dict
    weights: dict
    config: dict
    checksum: str

@dataclass(frozen=True, eq=False)
class SavedModel:
    """A trained ensemble ready to score new transactions.

    Attributes:
        feature_names: Training feature columns, in model input order.
        label_column: Header of the class column in training data.
        scaler: Standardization fitted on the training rows.
        label_map: Category text of class codes 0 and 1.
        models: DT, RF, KNN and MLP, in that order.
        weights: Soft voting weights.
        config: Configuration echo of the training run.
        created: UTC time of creation.

    """
    feature_names: Tuple[str, ...]
    label_column: str
    scaler: ScalerParams
    label_map: LabelMap
    models: Tuple[TrainedModel, ...]
    weights: EnsembleWeights
    config: dict = field(default_factory=dict)
    created: datetime = field(default_factory=lambda: datetime.now(timezone.utc))

    def predict_proba(self, features: np.ndarray) -> np.ndarray:
        """P(class 1) of raw (unscaled) feature rows"""
        return ensemble_predict_proba(self.models, self.weights, transform(self.scaler, features))

    def predict(self, features: np.ndarray, threshold: float = 0.5) -> np.ndarray:
        return (self.predict_proba(features) >= threshold).astype(np.int64)

    def to_document(self) -> SavedModelDocument:
        body = {
            "format_version": FORMAT_VERSION,
            "created": self.created.isoformat(),
            "feature_names": list(self.feature_names),
            "label_column": self.label_column,
            "scaler": self.scaler.to_dict(),
            "label_map": self.label_map.to_dict(),
            "models": {m.kind.value: m.to_dict() for m in self.models},
            "weights": self.weights.to_dict(),
            "config": self.config,
        }
        body["checksum"] = document_checksum(body)
        return body

    @classmethod
    def from_document(cls, doc: dict) -> "SavedModel":
        """Rebuild from :meth:`to_document` output after checking it

        Raises:
            ChecksumException: The content does not match its checksum.
            ModelFormatException: Unknown version or malformed content.

        """
        if not isinstance(doc, dict):
            raise ModelFormatException("Saved model must be a JSON object")
        if doc.get("format_version") != FORMAT_VERSION:
            raise ModelFormatException(f"Unsupported saved model version {doc.get('format_version')!r}")
        body = {k: v for k, v in doc.items() if k != "checksum"}
        expected = doc.get("checksum")
        actual = document_checksum(body)
        if expected != actual:
            raise ChecksumException(f"Saved model checksum mismatch: stored {expected}, computed {actual}")
        try:
            models = tuple(TrainedModel.from_dict(doc["models"][k.value]) for k in BASE_KINDS)
            return cls(tuple(doc["feature_names"]), doc["label_column"], ScalerParams.from_dict(doc["scaler"]),
                       LabelMap.from_dict(doc["label_map"]), models, EnsembleWeights.from_dict(doc["weights"]),
                       doc.get("config", {}), dateparser.isoparse(doc["created"]))
        except (KeyError, TypeError, ValueError) as ex:
            raise ModelFormatException(f"Malformed saved model: {ex!r}") from ex

def document_checksum(body: dict) -> str:
    """SHA-256 hex digest of the canonical JSON form (sorted keys, compact separators)"""
    text = json.dumps(body, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()

def save_model(model: SavedModel, path: Union[str, Path]) -> None:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8") as f:
            json.dump(model.to_document(), f)
    except OSError as ex:
        raise DataFileException(path, f"Cannot write file: {ex.strerror or ex}") from ex
    logger.info("stage=save path=%s", path)

def load_model(path: Union[str, Path]) -> SavedModel:
    """Read and verify a saved model

    Raises:
        DataFileException: The file cannot be read.
        ChecksumException: The content was altered.
        ModelFormatException: Not a saved model this version understands.

    """
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8") as f:
            doc = json.load(f)
    except OSError as ex:
        raise DataFileException(path, f"Cannot read file: {ex.strerror or ex}") from ex
    except (json.JSONDecodeError, UnicodeDecodeError) as ex:
        # truncated or overwritten content fails here before the checksum is reached
        raise ChecksumException(f"Saved model {path} is not readable JSON: {ex}") from ex
    return SavedModel.from_document(doc)

def score_features(model: SavedModel, raw: RawDataset) -> np.ndarray:
    """Feature matrix of ``raw`` in the model's column order.

    The label column may be present and is ignored; any other difference
    from the training columns is an error.

    Raises:
        ColumnMismatchException: Lists the missing and the unexpected columns.
        SchemaException: A feature cell is missing or not a number.

    """
    names = [c for c in raw.column_names if c != model.label_column]
    missing = [c for c in model.feature_names if c not in names]
    extra = [c for c in names if c not in model.feature_names]
    if missing or extra:
        raise ColumnMismatchException(missing, extra)
    check_numeric(raw, model.feature_names)
    return raw.frame[list(model.feature_names)].to_numpy(dtype=np.float64)

def score_rows(model: SavedModel, raw: RawDataset) -> List[Tuple[int, float, int]]:
    """(row index, P(class 1), label code) for every row of ``raw``"""
    X = score_features(model, raw)
    p = model.predict_proba(X)
    return [(i, float(pi), int(pi >= 0.5)) for i, pi in enumerate(p)]
