# PyTest Unit tests for exception numbering, documented enums and seeding
import pytest

from fraudens import exceptions as fx
from fraudens.cli import ExitStatus
from fraudens.ensemble import SelectionMetric
from fraudens.model import ModelKind
from fraudens.seeding import derive_seed, make_rng

@pytest.mark.parametrize("exc, number", [
    (fx.ConfigurationException("x"), 0x101),
    (fx.InvalidValueException("x"), 0x102),
    (fx.DataFileException("a.csv", "x"), 0x201),
    (fx.ColumnMismatchException(["a"], []), 0x209),
    (fx.SingleClassException("x"), 0x301),
    (fx.FoldConstructionException("x"), 0x303),
    (fx.FoldException(2, RuntimeError("x")), 0x305),
    (fx.StageException("ingest", KeyError("x")), 0x306),
])
def test_numbers(exc, number):
    assert exc.number == number
    assert exc.category == number >> 8
    assert isinstance(exc, fx.FraudensException)

def test_wrapped_number():
    print("Test fold and stage wrappers keep the cause's number")
    cause = fx.ChecksumException("x")
    assert fx.FoldException(3, cause).number == cause.number
    s = fx.StageException("score", cause)
    assert s.number == cause.number and s.stage == "score"
    assert "score" in str(s)

def test_doc_enums():
    assert ExitStatus.DATA == 2
    assert ExitStatus(3) is ExitStatus.TRAINING
    assert ExitStatus.USAGE.__doc__ == "Bad flags or configuration"
    assert ModelKind.KNN == "knn" and str(ModelKind.KNN) == "knn"
    assert SelectionMetric.parse("MACRO_F1") is SelectionMetric.MACRO_F1
    with pytest.raises(ValueError) as e:
        SelectionMetric.parse("auc")
    assert "accuracy" in str(e.value)

def test_derive_seed():
    print("Test child seeds depend only on their coordinates")
    a = derive_seed(42, "fold", 3)
    assert a == derive_seed(42, "fold", 3)
    assert 0 <= a < 2 ** 63
    assert len({derive_seed(42, "fold", i) for i in range(100)}) == 100
    assert derive_seed(42, "fold", 0) != derive_seed(42, "tree", 0)
    assert derive_seed(42, "fold") != derive_seed(43, "fold")
    assert make_rng(1, "x").random() == make_rng(1, "x").random()
