"""Prediction by partial matching with method-C escapes.

Training fills a trie of depth D+1 whose node counters are substring
occurrence counts: the counter on the path s.sigma is the number of times
s.sigma occurs in the training data.  Scoring starts at the longest
available context suffix and escapes to shorter ones:

    P(sigma | s)  = N(s.sigma) / (|Sigma_s| + sum N(s.sigma'))   if seen
    P(escape | s) = |Sigma_s| / (|Sigma_s| + sum N(s.sigma'))

where Sigma_s is the set of symbols seen after s.  With exclusion on,
symbols already accounted for by a longer context drop out of the count
sum (the |Sigma_s| term keeps its full size) and the final fallback is
uniform over the not-yet-excluded alphabet, which makes the conditional
sum to exactly 1.  With exclusion off the fallback is uniform over the
whole alphabet and a small, documented probability leak remains.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import core
from ._kernels import PpmTrie


@dataclass(frozen=True)
class PpmParams:
    """D = maximum context length; base_at_epsilon picks the distribution
    used after escaping below the unigram level ("uniform" or
    "training-frequency")."""

    D: int
    exclusion: bool = True
    base_at_epsilon: str = "uniform"

    def __post_init__(self):
        if self.D < 0:
            raise core.DataError(f"PPM order D must be >= 0, got {self.D}")
        if self.base_at_epsilon not in ("uniform", "training-frequency"):
            raise core.DataError(f"unknown base distribution {self.base_at_epsilon!r}")

    @property
    def base_mode(self) -> int:
        return PpmTrie.BASE_TRAIN_FREQ if self.base_at_epsilon == "training-frequency" else PpmTrie.BASE_UNIFORM


def ppm_train(data, params: PpmParams) -> PpmTrie:
    seqs = core.as_sequences(data)
    trie = PpmTrie(seqs[0].alphabet.size, params.D)
    for seq in seqs:
        trie.fit_sequence(seq.indices)
    return trie


def ppm_prob(trie: PpmTrie, symbol: int, context, params: PpmParams) -> float:
    return trie.conditional(core._context_indices(context), symbol, params.exclusion, params.base_mode)


class _PpmSession(core.PredictionSession):
    __slots__ = ("_trie", "_params", "_window")

    def __init__(self, trie: PpmTrie, params: PpmParams, history: list[int]):
        self._trie = trie
        self._params = params
        self._window = history[-params.D :] if params.D else []

    def conditional(self, symbol: int) -> float:
        return self._trie.conditional(self._window, symbol, self._params.exclusion, self._params.base_mode)

    def advance(self, symbol: int) -> None:
        if self._params.D:
            self._window.append(symbol)
            if len(self._window) > self._params.D:
                self._window.pop(0)


class PpmPredictor(core.Predictor):
    algorithm = "ppmc"

    def __init__(self, alphabet: core.Alphabet, trie: PpmTrie, params: PpmParams, tail: list[int]):
        self.alphabet = alphabet
        self.trie = trie
        self.params = params
        self.tail = tail  # default test-time context: the training data's end

    @classmethod
    def train(cls, data, params: PpmParams) -> "PpmPredictor":
        seqs = core.as_sequences(data)
        trie = ppm_train(seqs, params)
        tail = seqs[-1].indices[-params.D :] if params.D else []
        return cls(seqs[0].alphabet, trie, params, tail)

    def prob(self, symbol: int, context) -> float:
        return ppm_prob(self.trie, symbol, context, self.params)

    def session(self, history: core.Sequence | None = None) -> core.PredictionSession:
        hist = self.tail if history is None else core._context_indices(history)
        return _PpmSession(self.trie, self.params, list(hist))
