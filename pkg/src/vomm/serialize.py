"""Versioned JSON model artifacts.

A saved model is one JSON document: an envelope (format name + version,
algorithm id, creation timestamp, optional digest of the training input)
around the alphabet, the typed parameters, and a backend-neutral state
payload (plain node lists as exported by the kernels).  Loading rebuilds
the predictor on whichever kernel backend is active.

Alphabet tokens must survive a JSON round trip, so byte and string
alphabets are safe; exotic token types are rejected at save time.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from datetime import datetime, timezone

from . import core
from ._kernels import ContextTreeModel, LzTrie, PpmTrie
from .classify import Classifier
from .ctw import BiCtwPredictor, CtwPredictor, DeCtwPredictor, DecompositionTree, _NodePredictor
from .lz import Lz78Predictor, LzMsPredictor
from .ppm import PpmPredictor
from .pst import PstPredictor, PstStarPredictor
from .registry import ALGORITHMS

MODEL_FORMAT = "vomm-model"
CLASSIFIER_FORMAT = "vomm-classifier"
FORMAT_VERSION = 1


def digest_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def digest_sequences(data) -> str:
    h = hashlib.sha256()
    for seq in core.as_sequences(data):
        h.update(b"\x00seq\x00")
        for i in seq.indices:
            h.update(str(i).encode())
            h.update(b",")
    return h.hexdigest()


def _alphabet_payload(alphabet: core.Alphabet) -> dict:
    symbols = list(alphabet.symbols())
    if any(not isinstance(s, (int, str)) for s in symbols):
        raise core.DataError("only int or str alphabet tokens can be serialized")
    return {"symbols": symbols}


def _alphabet_from(payload: dict) -> core.Alphabet:
    return core.Alphabet(payload["symbols"])


def _state_payload(pred) -> dict:
    if isinstance(pred, LzMsPredictor):  # covers the plain variant too
        return {"nodes": pred.trie.export_nodes()}
    if isinstance(pred, PpmPredictor):
        return {"nodes": pred.trie.export_nodes(), "trained": pred.trie.export_meta(), "tail": list(pred.tail)}
    if isinstance(pred, BiCtwPredictor):
        return {"nodes": pred.model.export_nodes(), "tail_bits": list(pred.tail_bits)}
    if isinstance(pred, CtwPredictor):
        return {"nodes": pred.model.export_nodes(), "tail": list(pred.tail)}
    if isinstance(pred, DeCtwPredictor):
        return {
            "tree": pred.tree.to_payload(),
            "nodes": [{"model": np_.model.export_nodes(), "tail": list(np_.tail)} for np_ in pred.nodes],
        }
    if isinstance(pred, (PstPredictor, PstStarPredictor)):
        return {
            "nodes": [[list(label), list(pred.tree[label])] for label in sorted(pred.tree, key=lambda t: (len(t), t))],
            "tail": list(pred.tail),
        }
    raise core.DataError(f"cannot serialize predictor type {type(pred).__name__}")


def _predictor_from(algorithm: str, alphabet: core.Alphabet, params, state: dict):
    k = alphabet.size
    if algorithm in ("lz78", "lzms"):
        cls = Lz78Predictor if algorithm == "lz78" else LzMsPredictor
        return cls(alphabet, LzTrie.from_nodes(k, state["nodes"]), params)
    if algorithm == "ppmc":
        trie = PpmTrie.from_nodes(k, params.D, state["nodes"], state["trained"])
        return PpmPredictor(alphabet, trie, params, list(state["tail"]))
    if algorithm == "ctw":
        model = ContextTreeModel.from_nodes(2, params.D, params.alpha, [0, 1], state["nodes"])
        return CtwPredictor(alphabet, model, params, list(state["tail"]))
    if algorithm == "bictw":
        model = ContextTreeModel.from_nodes(2, params.D, params.alpha, [0, 1], state["nodes"])
        return BiCtwPredictor(alphabet, model, params, list(state["tail_bits"]))
    if algorithm == "dectw":
        tree = DecompositionTree.from_payload(state["tree"], k)
        nodes = []
        for dn, row in zip(tree.internal, state["nodes"]):
            np_ = _NodePredictor(dn, params.D, params.alpha)
            np_.model = ContextTreeModel.from_nodes(len(np_.local_syms), params.D, params.alpha, np_.side, row["model"])
            np_.tail = list(row["tail"])
            nodes.append(np_)
        return DeCtwPredictor(alphabet, tree, nodes, params)
    if algorithm in ("pst", "pststar"):
        cls = PstPredictor if algorithm == "pst" else PstStarPredictor
        tree = {tuple(label): list(probs) for label, probs in state["nodes"]}
        return cls(alphabet, params, tree, list(state["tail"]))
    raise core.DataError(f"unknown algorithm {algorithm!r} in artifact")


def model_document(pred, input_digest: str | None = None, tuning: dict | None = None) -> dict:
    doc = {
        "format": MODEL_FORMAT,
        "format_version": FORMAT_VERSION,
        "algorithm": pred.algorithm,
        "created": datetime.now(timezone.utc).isoformat(),
        "input_digest": input_digest,
        "alphabet": _alphabet_payload(pred.alphabet),
        "params": dataclasses.asdict(pred.params),
        "state": _state_payload(pred),
    }
    if tuning is not None:
        doc["tuning"] = tuning  # advisory record of how params were picked
    return doc


def save_model(pred, path, input_digest: str | None = None, tuning: dict | None = None) -> None:
    doc = model_document(pred, input_digest, tuning)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, separators=(",", ":"))
        fh.write("\n")


def _check_envelope(doc: dict, expected_format: str) -> None:
    if not isinstance(doc, dict) or doc.get("format") != expected_format:
        raise core.DataError(f"not a {expected_format} artifact")
    if doc.get("format_version") != FORMAT_VERSION:
        raise core.DataError(f"unsupported artifact version {doc.get('format_version')!r} (this build reads {FORMAT_VERSION})")


def model_from_document(doc: dict):
    _check_envelope(doc, MODEL_FORMAT)
    algorithm = doc["algorithm"]
    if algorithm not in ALGORITHMS:
        raise core.DataError(f"unknown algorithm {algorithm!r} in artifact")
    params_cls, _ = ALGORITHMS[algorithm]
    alphabet = _alphabet_from(doc["alphabet"])
    params = params_cls(**doc["params"])
    return _predictor_from(algorithm, alphabet, params, doc["state"])


def load_model(path):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise core.DataError(f"unreadable model file {path}: {exc}") from exc
    return model_from_document(doc)


def save_classifier(clf: Classifier, path, input_digest: str | None = None) -> None:
    doc = {
        "format": CLASSIFIER_FORMAT,
        "format_version": FORMAT_VERSION,
        "algorithm": clf.algorithm,
        "created": datetime.now(timezone.utc).isoformat(),
        "input_digest": input_digest,
        "alphabet": _alphabet_payload(clf.models[0].alphabet),
        "labels": clf.label_names,
        "params_per_class": [dataclasses.asdict(m.params) for m in clf.models],
        "states": [_state_payload(m) for m in clf.models],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, separators=(",", ":"))
        fh.write("\n")


def load_classifier(path) -> Classifier:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise core.DataError(f"unreadable classifier file {path}: {exc}") from exc
    _check_envelope(doc, CLASSIFIER_FORMAT)
    algorithm = doc["algorithm"]
    if algorithm not in ALGORITHMS:
        raise core.DataError(f"unknown algorithm {algorithm!r} in artifact")
    params_cls, _ = ALGORITHMS[algorithm]
    alphabet = _alphabet_from(doc["alphabet"])
    models = []
    for p, state in zip(doc["params_per_class"], doc["states"]):
        models.append(_predictor_from(algorithm, alphabet, params_cls(**p), state))
    return Classifier(algorithm, doc["labels"], models, doc["params_per_class"])
