"""Synthetic order-1 Markov corpora for demos and end-to-end checks.

Each class is a chain over the letters ``abcd`` that strongly prefers a
class-specific successor: from symbol i, class c moves to (i + 1 + c) mod 4
with probability 0.7 and anywhere else with 0.1.  Classes are therefore
well separated and any context model that captures first-order structure
classifies long samples almost perfectly.
"""

from __future__ import annotations

import random

from . import core

SYNTH_SYMBOLS = "abcd"
_PREFERRED = 0.7


def synth_alphabet() -> core.Alphabet:
    return core.Alphabet(SYNTH_SYMBOLS)


def transition_row(class_index: int, symbol: int, k: int = 4) -> list[float]:
    fav = (symbol + 1 + class_index) % k
    other = (1.0 - _PREFERRED) / (k - 1)
    return [_PREFERRED if j == fav else other for j in range(k)]


def synthetic_markov_corpus(
    per_class: int = 50,
    length: int = 200,
    n_classes: int = 2,
    seed: int = 7,
) -> tuple[list[list[core.Sequence]], list[str], core.Alphabet]:
    """Sampled corpus: (per-class sequence lists, label names, alphabet)."""
    k = len(SYNTH_SYMBOLS)
    if not (2 <= n_classes <= k):
        raise core.DataError(f"n_classes must be 2..{k}, got {n_classes}")
    if per_class < 1 or length < 2:
        raise core.DataError("need per_class >= 1 and length >= 2")
    alphabet = synth_alphabet()
    rng = random.Random(seed)
    rows = [[transition_row(c, i, k) for i in range(k)] for c in range(n_classes)]
    classes = []
    for c in range(n_classes):
        seqs = []
        for _ in range(per_class):
            sym = rng.randrange(k)
            out = [sym]
            for _ in range(length - 1):
                sym = rng.choices(range(k), weights=rows[c][sym])[0]
                out.append(sym)
            seqs.append(core.Sequence(alphabet, out))
        classes.append(seqs)
    return classes, [f"class{c}" for c in range(n_classes)], alphabet
