import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mlchain.data import DataFormatError, kfold_indices, load, load_arff, load_csv, save_csv, stats
from mlchain.mlc import Dataset
from mlchain.synth import make_spec, sample


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestCSV:
    def test_two_rows(self, tmp_path):
        data = load_csv(write(tmp_path, "a.csv", "1.0,0,1\n2.0,1,0\n"), 2)
        assert (data.n, data.d, data.m) == (2, 1, 2)
        assert data.features.tolist() == [[1.0], [2.0]]
        assert data.labels.tolist() == [[0, 1], [1, 0]]

    def test_header_detected(self, tmp_path):
        data = load_csv(write(tmp_path, "a.csv", "f1,f2,happy\n0.5,1e-3,1\n-2,3,0\n"), 1)
        assert data.n == 2 and data.label_names == ("happy",)

    def test_blank_lines_ignored(self, tmp_path):
        assert load_csv(write(tmp_path, "a.csv", "1,0\n\n2,1\n"), 1).n == 2

    def test_bad_label_names_line(self, tmp_path):
        path = write(tmp_path, "a.csv", "1.0,0,1\n2.0,2,0\n")
        with pytest.raises(DataFormatError, match="line 2"):
            load_csv(path, 2)

    @pytest.mark.parametrize(
        "text,match",
        [
            ("1,0\n1,2,0\n", "line 2: expected 2 columns"),
            ("1,0\nabc,1\n", "line 2: non-numeric"),
            ("1,0\n,1\n", "line 2: missing"),
            ("1,0\nnan,1\n", "line 2: non-finite"),
            ("1,0\n", "cannot hold"),
            ("x,y\n", "no data rows"),
        ],
    )
    def test_malformed(self, tmp_path, text, match):
        m = 2 if match == "cannot hold" else 1
        with pytest.raises(DataFormatError, match=match):
            load_csv(write(tmp_path, "a.csv", text), m)

    def test_round_trip_random(self, tmp_path):
        rng = np.random.default_rng(0)
        X = rng.normal(size=(30, 4)) * 10.0 ** rng.integers(-200, 200, (30, 4))
        data = Dataset(X, rng.integers(0, 2, (30, 3)), ("a", "b", "c"))
        path = tmp_path / "r.csv"
        save_csv(data, path)
        back = load_csv(path, 3)
        assert back.features.tobytes() == data.features.tobytes()
        assert np.array_equal(back.labels, data.labels)
        assert back.label_names == data.label_names

    def test_round_trip_without_header(self, tmp_path):
        data = sample(make_spec(2, 0.5), 20, seed=1)
        path = tmp_path / "r.csv"
        save_csv(data, path, header=False)
        assert load_csv(path, 2).features.tobytes() == data.features.tobytes()


@settings(max_examples=50, deadline=None)
@given(
    st.integers(1, 6).flatmap(
        lambda d: st.integers(1, 4).flatmap(
            lambda m: st.tuples(
                st.lists(
                    st.lists(st.floats(allow_nan=False, allow_infinity=False), min_size=d, max_size=d),
                    min_size=1,
                    max_size=15,
                ),
                st.just(m),
                st.integers(0, 2**32 - 1),
            )
        )
    )
)
def test_csv_round_trip_property(tmp_path_factory, case):
    rows, m, seed = case
    X = np.array(rows, dtype=np.float64)
    Y = np.random.default_rng(seed).integers(0, 2, (len(rows), m))
    data = Dataset(X, Y)
    path = tmp_path_factory.mktemp("rt") / "d.csv"
    save_csv(data, path)
    back = load_csv(path, m)
    assert back.features.tobytes() == data.features.tobytes()
    assert np.array_equal(back.labels, data.labels)


MINIMAL_ARFF = """% comment
@relation toy
@attribute a numeric
@attribute 'b c' REAL
@attribute lab {0,1}
@data
1.5,2,1
-1,0.25,0
"""


class TestARFF:
    def test_minimal(self, tmp_path):
        data = load_arff(write(tmp_path, "t.arff", MINIMAL_ARFF), 1)
        assert (data.n, data.d, data.m) == (2, 2, 1)
        assert data.features.tolist() == [[1.5, 2.0], [-1.0, 0.25]]
        assert data.labels[:, 0].tolist() == [1, 0]
        assert data.label_names == ("lab",)

    def test_labels_at_front(self, tmp_path):
        text = "@relation r\n@attribute y {0,1}\n@attribute x numeric\n@data\n1,3.5\n0,-1\n"
        data = load(write(tmp_path, "t.arff", text), 1, fmt="arff", labels_at="front")
        assert data.features[:, 0].tolist() == [3.5, -1.0]
        assert data.labels[:, 0].tolist() == [1, 0]

    def test_sparse_rejected(self, tmp_path):
        path = write(tmp_path, "s.arff", MINIMAL_ARFF + "{0 1.0, 2 1}\n")
        with pytest.raises(DataFormatError, match="sparse format unsupported"):
            load_arff(path, 1)

    @pytest.mark.parametrize("typ", ["string", "date 'yyyy'", "{red,green}"])
    def test_unsupported_types(self, tmp_path, typ):
        text = f"@relation r\n@attribute s {typ}\n@attribute y {{0,1}}\n@data\n"
        with pytest.raises(DataFormatError, match="unsupported"):
            load_arff(write(tmp_path, "u.arff", text), 1)

    def test_missing_value_rejected(self, tmp_path):
        path = write(tmp_path, "m.arff", MINIMAL_ARFF.replace("-1,0.25,0", "-1,?,0"))
        with pytest.raises(DataFormatError, match="line 8: missing"):
            load_arff(path, 1)

    def test_wrong_width(self, tmp_path):
        path = write(tmp_path, "w.arff", MINIMAL_ARFF + "1,2\n")
        with pytest.raises(DataFormatError, match="line 9"):
            load_arff(path, 1)

    def test_unknown_format(self, tmp_path):
        with pytest.raises(ValueError):
            load(write(tmp_path, "x", "1,0\n"), 1, fmt="xml")


class TestStats:
    def test_example(self):
        s = stats(Dataset(np.zeros((2, 1)), [[1, 0], [1, 1]]))
        assert (s.cardinality, s.distinct_subsets, s.observation_rate) == (1.5, 2, 0.5)

    def test_identical_rows(self):
        s = stats(Dataset(np.zeros((5, 1)), np.ones((5, 3))))
        assert s.distinct_subsets == 1 and s.cardinality == 3.0

    def test_dependent_synthetic(self):
        s = stats(sample(make_spec(8, 0.0, 0.0), 400, seed=3))
        assert s.distinct_subsets <= 2
        assert 0.0 <= s.cardinality <= 8 and 0.0 < s.observation_rate <= 1.0


class TestKFold:
    def test_singletons(self):
        folds = kfold_indices(10, 10, seed=0)
        assert sorted(int(te[0]) for _, te in folds) == list(range(10))
        assert all(te.size == 1 and tr.size == 9 for tr, te in folds)

    def test_deterministic(self):
        a, b = kfold_indices(50, 5, seed=3), kfold_indices(50, 5, seed=3)
        assert all(np.array_equal(x[1], y[1]) for x, y in zip(a, b))
        c = kfold_indices(50, 5, seed=4)
        assert not all(np.array_equal(x[1], y[1]) for x, y in zip(a, c))

    @pytest.mark.parametrize("n,k", [(5, 1), (5, 6), (0, 2)])
    def test_invalid(self, n, k):
        with pytest.raises(ValueError):
            kfold_indices(n, k)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(2, 300).flatmap(lambda n: st.tuples(st.just(n), st.integers(2, n))), st.integers(0, 2**32 - 1))
    def test_partition(self, nk, seed):
        n, k = nk
        folds = kfold_indices(n, k, seed)
        tests = np.concatenate([te for _, te in folds])
        assert np.array_equal(np.sort(tests), np.arange(n))
        sizes = {te.size for _, te in folds}
        assert sizes <= {n // k, -(-n // k)}
        for tr, te in folds:
            assert np.intersect1d(tr, te).size == 0 and tr.size + te.size == n
