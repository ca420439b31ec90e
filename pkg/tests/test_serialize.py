import json

import numpy as np
import pytest

from mlchain.linlearn import LinearModel
from mlchain.mlc import (
    ChainModel,
    Dataset,
    dumps,
    load_model,
    loads,
    predict,
    save_model,
    train_br,
    train_ecc,
    train_ns,
    train_stacking,
)


@pytest.fixture(scope="module")
def data():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(50, 3)) * [1e-3, 1.0, 1e3]
    Y = (X @ rng.normal(size=(3, 3)) + rng.normal(size=(50, 3)) > 0).astype(int)
    return Dataset(X, Y)


def trained(data):
    return [
        train_br(data),
        train_ns(data, (2, 0, 1)),
        train_stacking(data, level2_targets="true"),
        train_ecc(data, k=3, threshold=0.4, seed=9),
    ]


def test_round_trip_is_exact(data):
    for model in trained(data):
        back = loads(dumps(model))
        assert back == model
        assert type(back) is type(model)
        assert np.array_equal(predict(back, data.features), predict(model, data.features))


def test_weights_bit_identical(data):
    model = train_br(data)
    back = loads(dumps(model))
    for a, b in zip(model.classifiers, back.classifiers):
        assert a.weights.tobytes() == b.weights.tobytes()
        assert a.bias == b.bias


def test_awkward_floats():
    weights = [5e-324, -0.0, 1.7976931348623157e308, 0.1 + 0.2, -1e-300]
    model = ChainModel((0,), [LinearModel(weights, np.nextafter(1.0, 2.0), 1e-4)])
    back = loads(dumps(model))
    assert back.classifiers[0].weights.tobytes() == model.classifiers[0].weights.tobytes()
    assert back.classifiers[0].bias == np.nextafter(1.0, 2.0)


def test_file_round_trip(tmp_path, data):
    model = train_ns(data)
    path = tmp_path / "model.json"
    save_model(model, path)
    assert load_model(path) == model
    doc = json.loads(path.read_text())
    assert doc["format"] == "mlchain-model" and doc["version"] == 1
    assert doc["kind"] == "chain" and doc["strategy"] == "NS"
    assert doc["order"] == [0, 1, 2]


def test_untrained_objective_stored_as_null():
    model = ChainModel((0,), [LinearModel([1.0], 0.0)])
    text = dumps(model)
    assert "NaN" not in text
    assert loads(text) == model


@pytest.mark.parametrize(
    "doc",
    [
        {"format": "other", "version": 1, "kind": "br"},
        {"format": "mlchain-model", "version": 99, "kind": "br"},
        {"format": "mlchain-model", "version": 1, "kind": "forest"},
    ],
)
def test_rejects_foreign_documents(doc):
    with pytest.raises(ValueError):
        loads(json.dumps(doc))
