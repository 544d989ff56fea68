"""Algorithm lookup: string id -> (parameter class, predictor class).

Also converts loose key=value maps (CLI flags, grid files) into typed
parameter objects, coercing strings by field type and warning about keys
the algorithm does not use.
"""

from __future__ import annotations

import dataclasses
import warnings

from . import core
from .ctw import BiCtwParams, BiCtwPredictor, CtwParams, CtwPredictor, DeCtwParams, DeCtwPredictor
from .lz import Lz78Predictor, LzMsParams, LzMsPredictor
from .ppm import PpmParams, PpmPredictor
from .pst import PstParams, PstPredictor, PstStarParams, PstStarPredictor

ALGORITHMS = {
    "lz78": (LzMsParams, Lz78Predictor),
    "lzms": (LzMsParams, LzMsPredictor),
    "ppmc": (PpmParams, PpmPredictor),
    "ctw": (CtwParams, CtwPredictor),
    "bictw": (BiCtwParams, BiCtwPredictor),
    "dectw": (DeCtwParams, DeCtwPredictor),
    "pst": (PstParams, PstPredictor),
    "pststar": (PstStarParams, PstStarPredictor),
}


def resolve(algorithm: str):
    try:
        return ALGORITHMS[algorithm]
    except KeyError:
        raise core.DataError(f"unknown algorithm {algorithm!r}; choose from {', '.join(sorted(ALGORITHMS))}") from None


def _coerce(value, typ):
    if isinstance(value, str):
        if typ is bool:
            low = value.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise core.DataError(f"expected a boolean, got {value!r}")
        if typ is int:
            return int(value)
        if typ is float:
            return float(value)
    return value


def make_params(algorithm: str, mapping: dict | None):
    """Build the algorithm's parameter object from a plain mapping.

    Unused keys are dropped with a warning so shared grids (e.g. a depth
    column that one algorithm ignores) stay usable.
    """
    params_cls, _ = resolve(algorithm)
    fields = {f.name: f for f in dataclasses.fields(params_cls)}
    kwargs = {}
    for key, value in (mapping or {}).items():
        f = fields.get(key)
        if f is None:
            warnings.warn(f"{algorithm}: parameter {key!r} is not used and was ignored", core.VommWarning, stacklevel=2)
            continue
        try:
            kwargs[key] = _coerce(value, f.type if isinstance(f.type, type) else {"int": int, "float": float, "bool": bool, "str": str}.get(f.type, str))
        except ValueError as exc:
            raise core.DataError(f"{algorithm}: bad value for {key!r}: {value!r}") from exc
    try:
        return params_cls(**kwargs)
    except TypeError as exc:
        raise core.DataError(f"{algorithm}: {exc}") from None


def train(algorithm: str, data, params=None, **overrides):
    """Train by algorithm id; ``params`` may be a mapping or a typed object."""
    params_cls, predictor_cls = resolve(algorithm)
    if params is None or isinstance(params, dict):
        merged = dict(params or {})
        merged.update(overrides)
        params = make_params(algorithm, merged)
    elif not isinstance(params, params_cls):
        raise core.DataError(f"{algorithm} expects {params_cls.__name__}, got {type(params).__name__}")
    return predictor_cls.train(data, params)
