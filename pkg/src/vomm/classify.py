"""Winner-takes-all sequence classification.

One predictor per class, trained on that class's sequences.  A test
sequence gets the label whose predictor assigns it the highest total log
probability, scored from empty history.  Exact ties go to the lowest
class index, with a warning.

Per-class hyper-parameters may be tuned with an inner sequence-fold
cross-validation before the final per-class training.
"""

from __future__ import annotations

import math
import statistics
import warnings
from dataclasses import dataclass, field

from . import core, evaluation, registry


def group_by_label(pairs) -> tuple[list[list[core.Sequence]], list]:
    """Split (sequence, label) pairs into per-class lists.

    Labels are ordered by first appearance; all sequences must share one
    alphabet.
    """
    names: list = []
    groups: dict = {}
    alphabet = None
    for seq, label in pairs:
        if not isinstance(seq, core.Sequence):
            raise core.DataError("labeled data must contain Sequence objects")
        if alphabet is None:
            alphabet = seq.alphabet
        elif seq.alphabet is not alphabet:
            raise core.DataError("all labeled sequences must share one alphabet")
        if label not in groups:
            groups[label] = []
            names.append(label)
        groups[label].append(seq)
    if len(names) < 2:
        raise core.DataError(f"classification needs at least 2 classes, got {len(names)}")
    return [groups[n] for n in names], names


def wta_classify(models: list, seq: core.Sequence, history=None) -> tuple[int, list[float]]:
    """Class index with the highest sequence log probability, plus all
    scores.  ``history`` defaults to empty."""
    if history is None:
        history = core.Sequence.empty(seq.alphabet)
    scores = [core.sequence_log_prob(m, seq, history=history) for m in models]
    best = max(range(len(scores)), key=lambda i: scores[i])
    winners = [i for i, s in enumerate(scores) if s == scores[best]]
    if len(winners) > 1:
        warnings.warn(
            f"classification tie between classes {winners}; keeping the lowest index",
            core.VommWarning,
            stacklevel=2,
        )
        best = winners[0]
    return best, scores


@dataclass
class Classifier:
    algorithm: str
    label_names: list
    models: list = field(repr=False)
    params_per_class: list[dict] = field(default_factory=list)

    def classify(self, seq: core.Sequence):
        idx, scores = wta_classify(self.models, seq)
        return self.label_names[idx], scores

    def classify_index(self, seq: core.Sequence) -> int:
        return wta_classify(self.models, seq)[0]


def _tune_or_default(algorithm, class_seqs, grid, inner_folds):
    folds = min(inner_folds, len(class_seqs))
    if folds >= 2:
        try:
            tune = evaluation.cv_tune_sequences(algorithm, class_seqs, grid, folds=folds, retrain=False)
            return tune.best_params
        except core.VommError as exc:
            warnings.warn(f"per-class tuning failed ({exc}); using the first grid point", core.VommWarning, stacklevel=3)
    else:
        warnings.warn(
            f"class has {len(class_seqs)} training sequence(s), too few to cross-validate; using the first grid point",
            core.VommWarning,
            stacklevel=3,
        )
    g = grid if grid is not None else evaluation.default_classification_grid(algorithm)
    return dict(g[0])


def fit_classifier(
    algorithm: str,
    class_sequences: list[list[core.Sequence]],
    label_names: list | None = None,
    params: dict | None = None,
    grid: list[dict] | None = None,
    tune: bool = False,
    inner_folds: int = 5,
) -> Classifier:
    """Train one model per class.  With ``tune`` each class picks its own
    parameters by inner cross-validation over its sequences; otherwise
    ``params`` is used for every class."""
    if label_names is None:
        label_names = list(range(len(class_sequences)))
    if len(class_sequences) != len(label_names):
        raise core.DataError("one label per class required")
    models, chosen = [], []
    for seqs in class_sequences:
        if not seqs:
            raise core.DataError("every class needs at least one training sequence")
        p = _tune_or_default(algorithm, seqs, grid, inner_folds) if tune else dict(params or {})
        models.append(registry.train(algorithm, seqs, p))
        chosen.append(p)
    return Classifier(algorithm, list(label_names), models, chosen)


# ---------------------------------------------------------------------------
# cross-validated error measurement


@dataclass
class ClassificationReport:
    label_names: list
    per_class_error: dict
    macro_error: float
    weighted_error: float
    fold_errors: list[float]
    sem: float
    confusion: list[list[int]]
    total: int

    def lines(self) -> list[str]:
        out = [f"sequences: {self.total}"]
        for name in self.label_names:
            out.append(f"class {name}: error {self.per_class_error[name]:.4f}")
        out.append(f"macro error: {self.macro_error:.4f}")
        out.append(f"weighted error: {self.weighted_error:.4f}")
        out.append(f"sem over folds: {self.sem:.4f}")
        return out


def _stratified_folds(class_sequences, folds):
    """Per-class contiguous splits; fold i pools slice i of every class."""
    per_class_spans = []
    for seqs in class_sequences:
        n = len(seqs)
        base, rem = divmod(n, folds)
        spans, start = [], 0
        for i in range(folds):
            size = base + (1 if i < rem else 0)
            spans.append((start, start + size))
            start += size
        per_class_spans.append(spans)
    return per_class_spans


def cross_validated_classification(
    algorithm: str,
    class_sequences: list[list[core.Sequence]],
    label_names: list | None = None,
    params: dict | None = None,
    grid: list[dict] | None = None,
    folds: int = 5,
    tune: bool = False,
    inner_folds: int = 5,
) -> ClassificationReport:
    """Stratified contiguous cross-validation of winner-takes-all
    classification; class models are retrained from scratch per fold."""
    if label_names is None:
        label_names = list(range(len(class_sequences)))
    n_classes = len(class_sequences)
    if any(len(seqs) < folds for seqs in class_sequences):
        raise core.DataError(f"every class needs at least {folds} sequences for {folds}-fold evaluation")
    spans = _stratified_folds(class_sequences, folds)
    confusion = [[0] * n_classes for _ in range(n_classes)]
    trials = [0] * n_classes
    mistakes = [0] * n_classes
    fold_errors = []
    for f in range(folds):
        train_groups, test_items = [], []
        for c, seqs in enumerate(class_sequences):
            a, b = spans[c][f]
            train_groups.append(seqs[:a] + seqs[b:])
            test_items.extend((s, c) for s in seqs[a:b])
        clf = fit_classifier(algorithm, train_groups, label_names, params=params, grid=grid, tune=tune, inner_folds=inner_folds)
        wrong = 0
        for seq, true_c in test_items:
            pred_c = clf.classify_index(seq)
            confusion[true_c][pred_c] += 1
            trials[true_c] += 1
            if pred_c != true_c:
                mistakes[true_c] += 1
                wrong += 1
        fold_errors.append(wrong / len(test_items))
    per_class = {label_names[c]: (mistakes[c] / trials[c] if trials[c] else 0.0) for c in range(n_classes)}
    macro = sum(per_class.values()) / n_classes
    total = sum(trials)
    weighted = sum(mistakes) / total
    sem = statistics.stdev(fold_errors) / math.sqrt(len(fold_errors)) if len(fold_errors) > 1 else 0.0
    return ClassificationReport(list(label_names), per_class, macro, weighted, fold_errors, sem, confusion, total)
