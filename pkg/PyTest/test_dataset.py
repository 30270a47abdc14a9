# PyTest Unit tests for transaction CSV ingest
import os
import time
import pytest
import numpy as np
import conftest

from fraudens.dataset import (CREDITCARD_COLUMNS, Dataset, RawDataset, drop_incomplete, load_csv,
                              read_dataset, read_indices, to_dataset, validate_schema, write_csv,
                              write_indices)
from fraudens.exceptions import (DataFileException, EmptyDatasetException, RaggedRowException,
                                 SchemaException, UnseenLabelException)
from fraudens.preprocess import LabelMap
data_name = "blobs"

def test_minimal_file(tmp_csv):
    print("Test header a,b plus one row")
    raw = load_csv(tmp_csv("a,b\n1,2\n"))
    assert raw.column_names == ("a", "b")
    assert raw.n_rows == 1
    assert raw.row(0) == (1.0, 2.0)
    assert raw.removed_count == 0

def test_windows_line_endings_and_blank_lines(tmp_csv):
    raw = load_csv(tmp_csv("a,b\r\n1,2\r\n\r\n3,4"))
    assert [raw.row(i) for i in range(raw.n_rows)] == [(1.0, 2.0), (3.0, 4.0)]

def test_quoted_header_and_labels(tmp_csv):
    raw = load_csv(tmp_csv('"Time","V1","Class"\n0,-1.35,"0"\n1,"2,5",1\n'))
    assert raw.column_names == ("Time", "V1", "Class")
    assert raw.row(0) == (0.0, -1.35, 0.0)
    assert raw.row(1)[1] == "2,5"

def test_cell_parsing(tmp_csv):
    print("Test numbers, text, empty and non-finite cells")
    raw = load_csv(tmp_csv("a,b,c,d\n1.5, x ,,inf\n"))
    assert raw.row(0) == (1.5, "x", None, None)

def test_python_only_number_spellings(tmp_csv):
    print("Test 1_000 is text, not the number 1000")
    raw = load_csv(tmp_csv("a,b,Class\n1_000,2,0\n3,4,1\n"))
    assert raw.row(0)[0] == "1_000"
    with pytest.raises(SchemaException) as e:
        validate_schema(raw, "Class")
    assert e.value.violations == [(0, "a")]

def test_ragged_row(tmp_csv):
    print("Test short row reported at its line")
    with pytest.raises(RaggedRowException) as e:
        load_csv(tmp_csv("a,b\n1\n"))
    assert e.value.line == 2
    assert e.value.number == 0x202
    with pytest.raises(RaggedRowException) as e:
        load_csv(tmp_csv("a,b\n1,2\n3,4\n5,6,7\n"))
    assert e.value.line == 4
    with pytest.raises(RaggedRowException) as e:
        load_csv(tmp_csv("a,b\n1,2\n\n3\n"))
    assert e.value.line == 4

def test_missing_and_empty_files(tmp_path, tmp_csv):
    missing = tmp_path / "nope.csv"
    with pytest.raises(DataFileException) as e:
        load_csv(missing)
    assert str(missing) in str(e.value)
    assert e.value.category == 2
    with pytest.raises(DataFileException):
        load_csv(tmp_csv(""))
    with pytest.raises(DataFileException):
        load_csv(tmp_csv("\n\n", "blank.csv"))

def test_duplicate_header(tmp_csv):
    with pytest.raises(SchemaException):
        load_csv(tmp_csv("a,a\n1,2\n"))

def test_raw_invariants():
    with pytest.raises(SchemaException):
        RawDataset.from_rows(("a", "a"), ())
    with pytest.raises(RaggedRowException):
        RawDataset.from_rows(("a", "b"), ((1.0,),))
    raw = RawDataset.from_rows(("a", "b"), ((1.0, " y "), (None, 2.0)))
    assert raw.row(0) == (1.0, "y")
    assert raw.row(1) == (None, 2.0)

def test_validate_schema(tmp_csv):
    print("Test label column and text feature cells")
    raw = load_csv(tmp_csv("a,b,Class\n1,2,0\n3,abc,1\n4,,0\n"))
    with pytest.raises(SchemaException) as e:
        validate_schema(raw, "Class")
    assert e.value.violations == [(1, "b")]
    with pytest.raises(SchemaException) as e:
        validate_schema(raw, "Klass")
    assert e.value.violations == []
    ok = load_csv(tmp_csv("a,b,Class\n1,2,0\n3,,normal\n", "ok.csv"))
    validate_schema(ok, "Class")

def test_drop_incomplete(tmp_csv):
    print("Test row 2 with a missing cell is removed")
    raw = load_csv(tmp_csv("a,b\n1,2\n3,\n5,6\n"))
    kept = drop_incomplete(raw)
    assert [kept.row(i) for i in range(kept.n_rows)] == [(1.0, 2.0), (5.0, 6.0)]
    assert kept.removed_count == 1
    again = drop_incomplete(kept)
    assert again.frame.equals(kept.frame)
    assert again.removed_count == 0
    with pytest.raises(EmptyDatasetException):
        drop_incomplete(load_csv(tmp_csv("a,b\n1,\n,2\n", "all.csv")))

def test_to_dataset(tmp_csv):
    raw = load_csv(tmp_csv("a,Class,b\n1,0,2\n3,1,4\n"))
    ds = to_dataset(raw, "Class", LabelMap.identity())
    assert ds.feature_names == ("a", "b")
    assert ds.features.tolist() == [[1.0, 2.0], [3.0, 4.0]]
    assert ds.labels.tolist() == [0, 1]
    text = load_csv(tmp_csv("a,Class\n1,fraudulent\n2,refund\n", "text.csv"))
    m = LabelMap(["normal", "fraudulent"])
    with pytest.raises(UnseenLabelException) as e:
        to_dataset(text, "Class", m)
    assert e.value.label == "refund"
    one = to_dataset(RawDataset(text.frame.iloc[:1]), "Class", m)
    assert one.labels.tolist() == [1]

def test_dataset_invariants():
    with pytest.raises(SchemaException):
        Dataset(np.array([[np.nan]]), np.array([0]))
    with pytest.raises(SchemaException):
        Dataset(np.zeros((2, 1)), np.array([0, 2]))
    with pytest.raises(SchemaException):
        Dataset(np.zeros((2, 1)), np.array([0]))
    ds = Dataset(np.zeros((3, 2)), [0, 1, 1])
    assert ds.feature_names == ("x0", "x1")
    assert ds.class_counts() == (1, 2)

def test_read_dataset_textual_labels(tmp_csv):
    print("Test normal/fraudulent labels map to 0/1")
    ds, m, removed = read_dataset(tmp_csv("v,Class\n1,fraudulent\n2,normal\n,normal\n"), "Class")
    assert m.categories == ("normal", "fraudulent")
    assert ds.labels.tolist() == [1, 0]
    assert removed == 1

def test_csv_round_trip(dataset, tmp_path):
    print("Test write_csv then load_csv is exact")
    p = tmp_path / "blobs.csv"
    write_csv(dataset, p)
    ds, m, removed = read_dataset(p, "Class")
    assert removed == 0
    assert m == LabelMap.identity()
    assert np.array_equal(ds.features, dataset.features)
    assert np.array_equal(ds.labels, dataset.labels)
    assert ds.feature_names == dataset.feature_names
    first = p.read_text(encoding="utf-8").splitlines()[1].split(",")
    assert float(first[0]) == dataset.features[0, 0]

def test_indices_round_trip(tmp_path):
    p = tmp_path / "kept.csv"
    write_indices([0, 3, 7], p)
    assert p.read_text(encoding="utf-8") == "index\n0\n3\n7\n"
    assert read_indices(p) == [0, 3, 7]

@pytest.mark.skipif(not os.path.isfile(conftest.CREDITCARD), reason="FRAUDENS_CREDITCARD not set")
def test_creditcard_file():
    print("Test public credit card file shape")
    raw = load_csv(conftest.CREDITCARD)
    assert raw.column_names == CREDITCARD_COLUMNS
    assert raw.n_rows == 284807
    validate_schema(raw, "Class")

def test_creditcard_shaped_ingest(tmp_path):
    print("Test a 50,000 row credit card shaped file loads in a vectorized pass")
    rng = np.random.default_rng(5)
    n = 50_000
    X = rng.normal(size=(n, 30))
    y = (rng.random(n) < 0.002).astype(np.int64)
    p = tmp_path / "wide.csv"
    write_csv(Dataset(X, y, CREDITCARD_COLUMNS[:-1]), p)
    start = time.perf_counter()
    ds, m, removed = read_dataset(p, "Class")
    elapsed = time.perf_counter() - start
    print(f"  loaded {ds.n_samples} x {ds.n_features} in {elapsed:.2f} s")
    assert ds.features.shape == (n, 30) and removed == 0
    assert np.array_equal(ds.features, X)
    assert np.array_equal(ds.labels, y)
    assert elapsed < 3.0
