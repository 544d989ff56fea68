"""Log-loss evaluation and hyper-parameter selection.

The evaluation protocol for a single long sequence is a half split: train
on the first half (round up), score average log-loss on the second half
with the first half as context history.

Hyper-parameters are picked by 5-fold cross-validation on the training
part alone.  The sequence is cut into five contiguous folds; for each
fold the model trains on the surrounding blocks (kept as separate
sequences, contexts never cross the gap) and is scored on the fold with
the left block as history.  A grid point's score is the median of its
five fold losses; the lowest median wins, ties going to the earliest grid
position.  The winner is retrained on the whole training part.

A grid-point failure (e.g. a smoothing value invalid for the alphabet
size) scores infinity with a warning instead of aborting the sweep.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

from . import core, registry


def _median(values: list[float]) -> float:
    s = sorted(values)
    return s[(len(s) - 1) // 2] if len(s) % 2 == 0 else s[len(s) // 2]


def median_of_five(values) -> float:
    vals = list(values)
    if len(vals) != 5:
        raise core.DataError(f"expected exactly 5 fold losses, got {len(vals)}")
    return sorted(vals)[2]


# ---------------------------------------------------------------------------
# default grids


def _pairs(name_a, values_a, name_b, values_b):
    return [{name_a: a, name_b: b} for a in values_a for b in values_b]


def default_prediction_grid(algorithm: str) -> list[dict]:
    if algorithm == "lz78":
        return [{}]
    if algorithm == "lzms":
        # the depth column is accepted for grid compatibility but unused
        return [
            {"D": d, "M": m, "S": s}
            for d in (5, 10, 15, 20)
            for m in (0, 2, 4, 6, 8)
            for s in (0, 2, 4, 6, 8, 10, 12, 14, 16, 18)
        ]
    if algorithm == "ppmc":
        return [{"D": d} for d in (1, 3, 5, 7, 9, 11, 13, 15, 17, 19)]
    if algorithm in ("ctw", "bictw"):
        return [{"D": d} for d in (8, 16, 32, 64)]
    if algorithm == "dectw":
        return [{"D": d} for d in (2, 4, 8, 16, 32)]
    if algorithm in ("pst", "pststar"):
        vals = (0.0001, 0.001, 0.01, 0.1)
        grid = _pairs("Pmin", vals, "gamma", vals)
        for g in grid:
            g.update(alpha=0.0, r=1.05, D=12)
        return grid
    registry.resolve(algorithm)
    raise core.DataError(f"no default prediction grid for {algorithm!r}")


def default_classification_grid(algorithm: str) -> list[dict]:
    if algorithm == "lz78":
        return [{}]
    if algorithm == "lzms":
        return _pairs("M", (0, 2, 4, 6, 8), "S", (0, 2, 4, 6, 8))
    if algorithm == "ppmc":
        return [{"D": d} for d in (1, 3, 5, 7, 9)]
    if algorithm in ("ctw", "bictw"):
        return [{"D": d} for d in (8, 16, 32)]
    if algorithm == "dectw":
        return [{"D": d} for d in (4, 8)]
    if algorithm == "pststar":
        return [
            {"hits": h, "Nmin": n, "gamma": 0.001, "r": 1.05, "D": d}
            for h in (2, 3, 4)
            for n in (2, 3, 4, 5)
            for d in (10, 15, 20)
        ]
    if algorithm == "pst":
        return default_prediction_grid("pst")
    registry.resolve(algorithm)
    raise core.DataError(f"no default classification grid for {algorithm!r}")


def builtin_grid(name: str, algorithm: str) -> list[dict]:
    if name == "prediction":
        return default_prediction_grid(algorithm)
    if name == "classification":
        return default_classification_grid(algorithm)
    raise core.DataError(f"unknown builtin grid {name!r} (have: prediction, classification)")


# ---------------------------------------------------------------------------
# cross-validation tuning


@dataclass
class GridPointResult:
    params: dict
    fold_losses: list[float]
    median: float


@dataclass
class TuneResult:
    algorithm: str
    best: GridPointResult
    table: list[GridPointResult]
    predictor: object = field(default=None, repr=False)

    @property
    def best_params(self) -> dict:
        return self.best.params


def _contiguous_folds(n: int, folds: int) -> list[tuple[int, int]]:
    """Fold boundaries; the remainder widens the front folds."""
    if n < folds:
        raise core.DataError(f"need at least {folds} symbols for {folds}-fold splits, got {n}")
    base, rem = divmod(n, folds)
    spans, start = [], 0
    for i in range(folds):
        size = base + (1 if i < rem else 0)
        spans.append((start, start + size))
        start += size
    return spans


def _single_sequence(data) -> core.Sequence:
    seqs = core.as_sequences(data)
    if len(seqs) != 1:
        raise core.DataError("this tuner works on one sequence; use cv_tune_sequences for a corpus")
    return seqs[0]


def _score_grid(algorithm, grid, fold_sets):
    """fold_sets: list of (train_parts, validation_seq, history_seq)."""
    table = []
    for params in grid:
        losses = []
        failure = None
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", core.VommWarning)  # ignored-key noise, once per point is plenty
            try:
                typed = registry.make_params(algorithm, params)
                _, predictor_cls = registry.resolve(algorithm)
                for train_parts, valid, hist in fold_sets:
                    pred = predictor_cls.train(train_parts, typed)
                    losses.append(core.average_log_loss(pred, valid, history=hist))
            except core.VommError as exc:
                failure = exc
        if failure is not None:
            warnings.warn(f"{algorithm} grid point {params} failed: {failure}", core.VommWarning, stacklevel=3)
            table.append(GridPointResult(dict(params), losses, float("inf")))
            continue
        table.append(GridPointResult(dict(params), losses, _median(losses)))
    return table


def _pick_best(table: list[GridPointResult]) -> GridPointResult:
    best = table[0]
    for row in table[1:]:
        if row.median < best.median:  # strict: ties keep the earliest entry
            best = row
    if best.median == float("inf"):
        raise core.DataError("every grid point failed")
    return best


def cv_tune(algorithm: str, data, grid: list[dict] | None = None, folds: int = 5, retrain: bool = True) -> TuneResult:
    """Pick hyper-parameters for one training sequence by contiguous-fold
    cross-validation; optionally retrain the winner on the whole sequence."""
    seq = _single_sequence(data)
    if grid is None:
        grid = default_prediction_grid(algorithm)
    if not grid:
        raise core.DataError("empty parameter grid")
    if len(seq) < 2 * folds:
        raise core.DataError(f"cross-validation needs at least {2 * folds} symbols, got {len(seq)}")
    spans = _contiguous_folds(len(seq), folds)
    fold_sets = []
    for a, b in spans:
        left, right = seq[:a], seq[b:]
        parts = [p for p in (left, right) if len(p)]
        fold_sets.append((parts, seq[a:b], left))
    table = _score_grid(algorithm, grid, fold_sets)
    best = _pick_best(table)
    predictor = registry.train(algorithm, [seq], best.params) if retrain else None
    return TuneResult(algorithm, best, table, predictor)


def cv_tune_sequences(algorithm: str, data, grid: list[dict] | None = None, folds: int = 5, retrain: bool = True) -> TuneResult:
    """Like :func:`cv_tune` but folds are over whole sequences of a corpus.

    Validation sequences are scored from empty history and a fold's loss is
    the total log-loss over its sequences divided by their total length.
    """
    seqs = core.as_sequences(data)
    if grid is None:
        grid = default_classification_grid(algorithm)
    if not grid:
        raise core.DataError("empty parameter grid")
    if len(seqs) < folds:
        raise core.DataError(f"need at least {folds} sequences for {folds}-fold splits, got {len(seqs)}")
    spans = _contiguous_folds(len(seqs), folds)
    empty = core.Sequence.empty(seqs[0].alphabet)
    fold_sets = []
    for a, b in spans:
        train_parts = seqs[:a] + seqs[b:]
        fold_sets.append((train_parts, seqs[a:b], empty))
    table = []
    _, predictor_cls = registry.resolve(algorithm)
    for params in grid:
        losses = []
        failure = None
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", core.VommWarning)
            try:
                typed = registry.make_params(algorithm, params)
                for train_parts, valid_seqs, hist in fold_sets:
                    pred = predictor_cls.train(train_parts, typed)
                    total_bits = 0.0
                    total_syms = 0
                    for v in valid_seqs:
                        total_bits += core.sequence_log_prob(pred, v, history=hist)
                        total_syms += len(v)
                    if total_syms == 0:
                        raise core.DataError("validation fold holds no symbols")
                    losses.append(-total_bits / total_syms)
            except core.VommError as exc:
                failure = exc
        if failure is not None:
            warnings.warn(f"{algorithm} grid point {params} failed: {failure}", core.VommWarning, stacklevel=2)
            table.append(GridPointResult(dict(params), losses, float("inf")))
            continue
        table.append(GridPointResult(dict(params), losses, _median(losses)))
    best = _pick_best(table)
    predictor = registry.train(algorithm, seqs, best.params) if retrain else None
    return TuneResult(algorithm, best, table, predictor)


# ---------------------------------------------------------------------------
# the standard single-sequence protocol


@dataclass
class EvalResult:
    algorithm: str
    params: dict
    loss: float
    tune: TuneResult | None = None
    predictor: object = field(default=None, repr=False)


def _half_split_input(data) -> tuple[core.Sequence, core.Sequence]:
    seq = _single_sequence(data)
    if len(seq) < 20:
        raise core.DataError(f"half-split evaluation needs at least 20 symbols, got {len(seq)}")
    return core.half_split(seq)


def half_split_eval(algorithm: str, data, params: dict | None = None) -> EvalResult:
    """Train on the first half, score on the second with the first as
    history, using the given parameters as-is (no tuning)."""
    train, test = _half_split_input(data)
    pred = registry.train(algorithm, [train], params or {})
    loss = core.average_log_loss(pred, test, history=train)
    return EvalResult(algorithm, dict(params or {}), loss, None, pred)


def tuned_half_split_eval(algorithm: str, data, grid: list[dict] | None = None, folds: int = 5) -> EvalResult:
    """Full protocol: tune on the first half by cross-validation, retrain
    on it, score on the second half."""
    train, test = _half_split_input(data)
    tune = cv_tune(algorithm, [train], grid, folds=folds)
    loss = core.average_log_loss(tune.predictor, test, history=train)
    return EvalResult(algorithm, tune.best_params, loss, tune, tune.predictor)


# ---------------------------------------------------------------------------
# parsing-tweak ablation


@dataclass
class AblationResult:
    m_only: EvalResult
    s_only: EvalResult
    joint: EvalResult

    def summary(self) -> dict:
        return {
            "M_only": {"params": self.m_only.params, "loss": self.m_only.loss, "cv_median": self.m_only.tune.best.median},
            "S_only": {"params": self.s_only.params, "loss": self.s_only.loss, "cv_median": self.s_only.tune.best.median},
            "joint": {"params": self.joint.params, "loss": self.joint.loss, "cv_median": self.joint.tune.best.median},
        }


def lzms_ablation(data, Ms=(0, 2, 4, 6, 8), Ss=(0, 2, 4, 6, 8, 10, 12, 14, 16, 18), folds: int = 5) -> AblationResult:
    """Half-split evaluation of the two parsing tweaks separately and
    jointly: tune M with S=0, tune S with M=0, tune both, each time
    retraining the winner on the first half and scoring the second.

    The joint grid contains both single-parameter grids, so its best
    cross-validation median can never exceed theirs.  (Held-out loss after
    retraining carries no such guarantee.)
    """
    m_grid = [{"M": m, "S": 0} for m in Ms]
    s_grid = [{"M": 0, "S": s} for s in Ss]
    joint = [{"M": m, "S": s} for m in Ms for s in Ss]
    return AblationResult(
        m_only=tuned_half_split_eval("lzms", data, m_grid, folds=folds),
        s_only=tuned_half_split_eval("lzms", data, s_grid, folds=folds),
        joint=tuned_half_split_eval("lzms", data, joint, folds=folds),
    )
