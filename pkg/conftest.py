import os
import pytest
from pathlib import Path

from fraudens.synthetic import make_blobs, make_imbalanced, make_symmetric_pair

#
# Public credit card file for the end to end test, skipped when absent
#
CREDITCARD = os.environ.get("FRAUDENS_CREDITCARD", "")

#
# Common function to build the named synthetic set, also usable in
# @pytest.mark.parametrize() and module level code
#
def get_dataset(name: str):
    if name == "blobs":
        return make_blobs((60, 60), n_features=2, separation=8.0, seed=7)
    if name == "wide_blobs":
        return make_blobs((100, 100), n_features=5, separation=2.0, seed=8)
    if name == "imbalanced":
        return make_imbalanced(11)
    if name == "separable":
        return make_imbalanced(11, separable=True)
    if name == "symmetric":
        return make_symmetric_pair(20, n_features=2, separation=2.0, seed=3)
    raise KeyError(name)

@pytest.fixture(scope="module")
def dataset(request):
    n = getattr(request.module, "data_name")
    ds = get_dataset(n)
    print(f"Setup: {n} dataset {ds.n_samples} x {ds.n_features}, classes {ds.class_counts()}")
    return ds

#
# Writes CSV text into the test's temporary directory
#
@pytest.fixture
def tmp_csv(tmp_path):
    def write(text: str, name: str = "data.csv") -> Path:
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return p
    return write
