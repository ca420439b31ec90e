import json

import numpy as np
import pytest

from mlchain.bench import AlgorithmSpec, derive_seed, run_cv
from mlchain.bench.harness import fit_algorithm
from mlchain.metrics import METRICS
from mlchain.data import kfold_indices
from mlchain.mlc import Dataset, build_subset_pool, predict, subset_correct_batch
from mlchain.synth import make_spec, sample


@pytest.fixture(scope="module")
def small():
    return sample(make_spec(4, 0.5, 0.1, seed=1), 120, seed=2)


def test_derive_seed_is_stable():
    assert derive_seed(0, 1) == derive_seed(0, 1)
    assert len({derive_seed(0, r) for r in range(100)}) == 100
    assert 0 <= derive_seed(7) < 2**32


def test_identical_algorithms_give_null_test(small):
    specs = [AlgorithmSpec("br", name="A"), AlgorithmSpec("br", name="B")]
    report = run_cv(small, specs, folds=5, repeats=2)
    for metric in METRICS:
        c = report.comparison("A", "B", metric)
        assert c.result.t == 0.0 and c.result.p == 1.0 and c.better is None
    assert report["A"].folds == report["B"].folds


def test_fold_counts_and_sd(small):
    report = run_cv(small, AlgorithmSpec("cc"), folds=4, repeats=3)
    res = report["CC"]
    assert all(len(res.folds[m]) == 12 for m in METRICS)
    s = res.summary("hamming")
    assert s.sd == pytest.approx(np.std(res.folds["hamming"], ddof=1))


def test_subset_correction_is_closed_world(small):
    specs = [AlgorithmSpec(a) for a in ("br", "cc", "ns", "ecc", "stacking")]
    report = run_cv(small, specs, folds=3, repeats=2, subset_correction=True)
    assert report.audit["closed_world_checked"] == 5 * 2 * small.n
    assert report.audit["closed_world_violations"] == 0
    assert set(report.results) == {"BR_SC", "CC_SC", "NS_SC", "ECC_SC", "STACK_SC"}


def test_subset_correction_independent_audit(small):
    # Re-derive one fold and check the corrected predictions from outside the harness.
    spec = AlgorithmSpec("br")
    train_idx, test_idx = kfold_indices(small.n, 3, derive_seed(0, 0))[0]
    train, test = small.subset(train_idx), small.subset(test_idx)
    model, tf = fit_algorithm(spec, train, 0, 0)
    pool = build_subset_pool(train.labels)
    fixed = subset_correct_batch(predict(model, tf(test.features)), pool)
    seen = {tuple(r) for r in train.labels}
    assert all(tuple(r) in seen for r in fixed)


def test_mixed_correction_flags(small):
    specs = [AlgorithmSpec("br", subset_correction=False), AlgorithmSpec("br", subset_correction=True)]
    report = run_cv(small, specs, folds=3, repeats=1)
    assert list(report.results) == ["BR", "BR_SC"]


def test_report_schema(small):
    report = run_cv(small, [AlgorithmSpec("br"), AlgorithmSpec("ns", order="random")], folds=3, repeats=1, seed=4)
    doc = json.loads(report.to_json())
    assert doc["schema"] == "mlchain.report" and doc["version"] == 1
    prov = doc["provenance"]
    assert (prov["n"], prov["m"], prov["folds"], prov["repeats"], prov["seed"]) == (120, 4, 3, 1, 4)
    assert prov["sd_over"] == "folds"
    ns = doc["algorithms"]["NS"]
    assert ns["spec"]["order"] == "random"
    assert ns["spec"]["config"]["regularization"] == 1e-4
    assert set(ns["metrics"]) == set(METRICS)
    assert len(doc["significance"]) == len(METRICS)
    for row in doc["significance"]:
        assert 0.0 <= row["p"] <= 1.0
        assert {"t", "dof", "significant_0.05", "significant_0.01"} <= set(row)


def test_deterministic(small):
    specs = [AlgorithmSpec("ecc", ensemble_size=3), AlgorithmSpec("cc", order="random")]
    a = run_cv(small, specs, folds=3, repeats=2, seed=11).to_json()
    b = run_cv(small, specs, folds=3, repeats=2, seed=11).to_json()
    assert a == b
    assert a != run_cv(small, specs, folds=3, repeats=2, seed=12).to_json()


def test_standardize_runs(small):
    X = small.features * [1e4, 1e-4]
    data = Dataset(X, small.labels)
    report = run_cv(data, AlgorithmSpec("br", standardize=True), folds=3, repeats=1)
    assert np.mean(report["BR"].folds["hamming"]) < 0.4


def test_invalid_specs(small):
    with pytest.raises(ValueError):
        AlgorithmSpec("svm")
    with pytest.raises(ValueError):
        AlgorithmSpec("cc", order="sorted")
    with pytest.raises(ValueError):
        run_cv(small, [AlgorithmSpec("br"), AlgorithmSpec("br")], folds=3)


@pytest.mark.slow
def test_cc_close_to_br_under_strong_dependence():
    data = sample(make_spec(10, 0.0, 0.1, seed=0), 500, seed=1)
    report = run_cv(data, [AlgorithmSpec("br"), AlgorithmSpec("cc")], folds=10, repeats=3)
    br = report["BR"].summary("hamming").mean
    cc = report["CC"].summary("hamming").mean
    assert abs(cc - br) <= 0.03
