# -*- coding: utf-8 -*-
# -----------------------------------------------------------------------------
# exceptions - Implements the fraudens exception classes
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
# 17-Oct-26 Number ranges now map onto CLI exit codes (high byte)
# -----------------------------------------------------------------------------

from typing import List, Sequence, Tuple

class FraudensException(Exception):
    """Common base of every exception raised by the package.

    The ``number`` attribute identifies the failure. Its high byte is the
    category, which is also the command line exit status:

        :0x1xx: Usage or configuration error (exit 1)
        :0x2xx: Data error (exit 2)
        :0x3xx: Training or evaluation error (exit 3)

    """
    number = 0x300

    def __init__(
        self,
        message: str
    ):
        super().__init__(message)

    @property
    def category(self) -> int:
        """The high byte of :attr:`number`, the CLI exit status"""
        return self.number >> 8

# ---------------------
# USAGE (exit status 1)
# ---------------------

class ConfigurationException(FraudensException):
    """Numeric value: 0x101 (257)

    Bad, unknown or missing configuration key, or a missing seed.

    """
    def __init__(
        self,
        message: str
    ):
        self.number = 0x101
        super().__init__(message)

class InvalidValueException(FraudensException):
    """Numeric value: 0x102 (258)

    A hyperparameter or argument is outside its permitted range.

    """
    def __init__(
        self,
        message: str
    ):
        self.number = 0x102
        super().__init__(message)

# --------------------
# DATA (exit status 2)
# --------------------

class DataFileException(FraudensException):
    """Numeric value: 0x201 (513)

    A file could not be read or written. The message names the path.

    """
    def __init__(
        self,
        path: str,
        message: str
    ):
        self.number = 0x201
        self.path = str(path)
        super().__init__(f"{message} (path {path})")

class RaggedRowException(FraudensException):
    """Numeric value: 0x202 (514)

    A CSV row has a cell count different from the header. ``line`` is
    the 1-based line number in the file (the header is line 1).

    """
    def __init__(
        self,
        line: int,
        expected: int,
        actual: int
    ):
        self.number = 0x202
        self.line = line
        super().__init__(f"Ragged row at line {line}: expected {expected} cells, found {actual}")

class SchemaException(FraudensException):
    """Numeric value: 0x203 (515)

    The raw table does not satisfy the schema. ``violations`` lists every
    offending (row, column) pair; it is empty when the label column itself
    is missing.

    """
    def __init__(
        self,
        message: str,
        violations: Sequence[Tuple[int, str]] = ()
    ):
        self.number = 0x203
        self.violations: List[Tuple[int, str]] = list(violations)
        super().__init__(message)

class EmptyDatasetException(FraudensException):
    """Numeric value: 0x204 (516)"""
    def __init__(
        self,
        message: str
    ):
        self.number = 0x204
        super().__init__(message)

class UnseenLabelException(FraudensException):
    """Numeric value: 0x205 (517)

    A class label value is not present in the label map.

    """
    def __init__(
        self,
        label: str
    ):
        self.number = 0x205
        self.label = label
        super().__init__(f"Label '{label}' is not in the label map")

class DimensionMismatchException(FraudensException):
    """Numeric value: 0x206 (518)"""
    def __init__(
        self,
        message: str
    ):
        self.number = 0x206
        super().__init__(message)

class ChecksumException(FraudensException):
    """Numeric value: 0x207 (519)

    A saved model document does not match its recorded checksum.

    """
    def __init__(
        self,
        message: str
    ):
        self.number = 0x207
        super().__init__(message)

class ModelFormatException(FraudensException):
    """Numeric value: 0x208 (520)

    Unknown format version or a malformed saved model document.

    """
    def __init__(
        self,
        message: str
    ):
        self.number = 0x208
        super().__init__(message)

class ColumnMismatchException(FraudensException):
    """Numeric value: 0x209 (521)

    The columns of a file to be scored do not match the training features.

    """
    def __init__(
        self,
        missing: Sequence[str],
        extra: Sequence[str]
    ):
        self.number = 0x209
        self.missing = list(missing)
        self.extra = list(extra)
        super().__init__(f"Column mismatch: missing {self.missing}, extra {self.extra}")

# -------------------------------------
# TRAINING / EVALUATION (exit status 3)
# -------------------------------------

class SingleClassException(FraudensException):
    """Numeric value: 0x301 (769)"""
    def __init__(
        self,
        message: str
    ):
        self.number = 0x301
        super().__init__(message)

class DivergenceException(FraudensException):
    """Numeric value: 0x302 (770)

    Training produced a non-finite loss, usually a learning rate that is
    too large for the data.

    """
    def __init__(
        self,
        model: str,
        epoch: int,
        loss: float
    ):
        self.number = 0x302
        self.model = model
        self.epoch = epoch
        super().__init__(f"{model} diverged at epoch {epoch} (loss {loss}); reduce the learning rate")

class FoldConstructionException(FraudensException):
    """Numeric value: 0x303 (771)"""
    def __init__(
        self,
        message: str
    ):
        self.number = 0x303
        super().__init__(message)

class UnsortedCurveException(FraudensException):
    """Numeric value: 0x304 (772)"""
    def __init__(
        self,
        message: str
    ):
        self.number = 0x304
        super().__init__(message)

class FoldException(FraudensException):
    """Raised when one cross-validation fold fails.

    The ``number`` is copied from the wrapped exception so that the exit
    status reflects the original failure; it is 0x305 (773) for causes
    outside this package.

    """
    def __init__(
        self,
        fold: int,
        cause: BaseException
    ):
        self.number = getattr(cause, "number", 0x305)
        self.fold = fold
        self.cause = cause
        super().__init__(f"Fold {fold} failed: {cause}")

class StageException(FraudensException):
    """Raised by the pipeline driver when a stage fails.

    As with :class:`FoldException` the wrapped exception's ``number`` is
    kept; 0x306 (774) for foreign causes.

    """
    def __init__(
        self,
        stage: str,
        cause: BaseException
    ):
        self.number = getattr(cause, "number", 0x306)
        self.stage = stage
        self.cause = cause
        super().__init__(f"Stage '{stage}' failed: {cause}")
