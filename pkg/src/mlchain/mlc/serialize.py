"""JSON serialization of trained models.

Document layout (format version 1)::

    {
      "format": "mlchain-model",
      "version": 1,
      "kind": "br" | "chain" | "stacking" | "ensemble",
      ...kind-specific fields...
    }

Each binary classifier is stored as ``{"weights": [...], "bias": b,
"regularization": lam, "iterations": k, "objective": f, "converged": bool}``.
Floats are written with Python's shortest round-trip repr, so loading
restores every finite parameter bit for bit. A non-finite ``objective``
(hand-built models) is stored as ``null``.

kind-specific fields:

- ``br``: ``classifiers`` (list, label order)
- ``chain``: ``strategy`` ("CC"/"NS"), ``order`` (label index per chain
  position), ``classifiers`` (chain order)
- ``stacking``: ``level2_targets``, ``level1`` (a ``br`` body), ``level2``
- ``ensemble``: ``threshold``, ``member_seeds``, ``members`` (``chain`` bodies)
"""

from __future__ import annotations

import json
import math
from pathlib import Path

from ..linlearn import LinearModel
from .core import BRModel, ChainModel, EnsembleModel, StackingModel

FORMAT = "mlchain-model"
VERSION = 1


def _linear_to_dict(model: LinearModel) -> dict:
    return {
        "weights": [float(w) for w in model.weights],
        "bias": model.bias,
        "regularization": model.regularization,
        "iterations": model.iterations,
        "objective": model.objective if math.isfinite(model.objective) else None,
        "converged": model.converged,
    }


def _linear_from_dict(doc: dict) -> LinearModel:
    objective = doc.get("objective")
    return LinearModel(
        weights=doc["weights"],
        bias=doc["bias"],
        regularization=doc.get("regularization", 0.0),
        iterations=doc.get("iterations", 0),
        objective=float("nan") if objective is None else objective,
        converged=doc.get("converged", False),
    )


def _body(model) -> dict:
    if isinstance(model, BRModel):
        return {"kind": "br", "classifiers": [_linear_to_dict(c) for c in model.classifiers]}
    if isinstance(model, ChainModel):
        return {
            "kind": "chain",
            "strategy": model.strategy,
            "order": list(model.order),
            "classifiers": [_linear_to_dict(c) for c in model.classifiers],
        }
    if isinstance(model, StackingModel):
        return {
            "kind": "stacking",
            "level2_targets": model.level2_targets,
            "level1": _body(model.level1),
            "level2": [_linear_to_dict(c) for c in model.level2],
        }
    if isinstance(model, EnsembleModel):
        return {
            "kind": "ensemble",
            "threshold": model.threshold,
            "member_seeds": list(model.member_seeds),
            "members": [_body(mm) for mm in model.members],
        }
    raise TypeError(f"cannot serialize {type(model).__name__}")


def _from_body(doc: dict):
    kind = doc.get("kind")
    if kind == "br":
        return BRModel([_linear_from_dict(c) for c in doc["classifiers"]])
    if kind == "chain":
        return ChainModel(
            doc["order"], [_linear_from_dict(c) for c in doc["classifiers"]], doc["strategy"]
        )
    if kind == "stacking":
        return StackingModel(
            _from_body(doc["level1"]),
            [_linear_from_dict(c) for c in doc["level2"]],
            doc.get("level2_targets", "predicted"),
        )
    if kind == "ensemble":
        return EnsembleModel(
            [_from_body(mm) for mm in doc["members"]], doc["threshold"], doc["member_seeds"]
        )
    raise ValueError(f"unknown model kind {kind!r}")


def model_to_dict(model) -> dict:
    return {"format": FORMAT, "version": VERSION, **_body(model)}


def model_from_dict(doc: dict):
    if doc.get("format") != FORMAT:
        raise ValueError(f"not an {FORMAT} document")
    if doc.get("version") != VERSION:
        raise ValueError(f"unsupported model format version {doc.get('version')!r}")
    return _from_body(doc)


def dumps(model) -> str:
    return json.dumps(model_to_dict(model), indent=1, allow_nan=False)


def loads(text: str):
    return model_from_dict(json.loads(text))


def save_model(model, path) -> None:
    Path(path).write_text(dumps(model) + "\n", encoding="utf-8")


def load_model(path):
    return loads(Path(path).read_text(encoding="utf-8"))
