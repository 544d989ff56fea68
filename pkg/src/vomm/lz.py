"""LZ78-style phrase-dictionary predictors.

The classic parser splits the input into the shortest phrases not yet in
the dictionary ("abracadabra" -> a|b|r|ac|ad|ab|ra) and keeps them in a
trie whose counts are structural: a leaf counts 1, an inner node counts
the sum of its children.  Prediction walks the context through the trie,
restarting at the root whenever the walk steps onto a leaf, and reads the
next-symbol distribution off the landing node's child counts.

The M/S variant adds two loss-reducing tweaks to the parser:

* input shifting: S extra parsing passes starting at offsets 1..S feed the
  same dictionary, so phrase boundaries are less arbitrary;
* back-shift parsing: after a phrase of length L ends at position e, the
  next phrase starts at e - min(M, L), letting phrases overlap.

At prediction time, instead of restarting at the root after a leaf, the
walk restarts from the node reached by tracing the last M consumed symbols
from the root (root if that node does not exist).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import core
from ._kernels import LzTrie


@dataclass(frozen=True)
class LzMsParams:
    """M = back-shift length, S = number of extra parsing passes."""

    M: int = 0
    S: int = 0

    def __post_init__(self):
        if self.M < 0 or self.S < 0:
            raise core.DataError(f"M and S must be non-negative, got {self}")


def _parse_into(trie: LzTrie, seq: core.Sequence, params: LzMsParams) -> list[core.Sequence]:
    phrases: list[core.Sequence] = []
    idx = seq.indices
    for shift in range(params.S + 1):
        if shift >= len(idx):
            break
        tail = idx[shift:]
        for start, end in trie.parse(tail, params.M):
            phrases.append(seq[shift + start : shift + end])
    return phrases


def lzms_parse(data, params: LzMsParams) -> tuple[list[core.Sequence], LzTrie]:
    """Parse training data with input shifting and back-shift parsing.

    Returns the phrases in parse order (all passes of a sequence before the
    next sequence) and the shared trie.  Passes never cross sequence
    boundaries.
    """
    seqs = core.as_sequences(data)
    trie = LzTrie(seqs[0].alphabet.size)
    phrases: list[core.Sequence] = []
    for seq in seqs:
        phrases.extend(_parse_into(trie, seq, params))
    return phrases, trie


def lz78_parse(data) -> tuple[list[core.Sequence], LzTrie]:
    """Plain LZ78 parse: single pass, no back shift."""
    return lzms_parse(data, LzMsParams(0, 0))


def lzms_prob(trie: LzTrie, symbol: int, context, back_shift: int = 0) -> float:
    ctx = core._context_indices(context)
    state = trie.reset_state(ctx, back_shift)
    return trie.conditional(state, symbol)


def lz78_prob(trie: LzTrie, symbol: int, context) -> float:
    return lzms_prob(trie, symbol, context, 0)


class _LzSession(core.PredictionSession):
    __slots__ = ("_trie", "_m", "_state", "_recent")

    def __init__(self, trie: LzTrie, m: int, history: list[int]):
        self._trie = trie
        self._m = m
        self._state = trie.reset_state(history, m)
        self._recent = history[-m:] if m else []

    def conditional(self, symbol: int) -> float:
        return self._trie.conditional(self._state, symbol)

    def advance(self, symbol: int) -> None:
        if self._m:
            self._recent.append(symbol)
            if len(self._recent) > self._m:
                self._recent.pop(0)
            recent = self._recent
        else:
            recent = []
        self._state = self._trie.advance_state(self._state, symbol, recent)


class LzMsPredictor(core.Predictor):
    """Phrase-trie predictor with the M/S parsing and prediction tweaks."""

    algorithm = "lzms"

    def __init__(self, alphabet: core.Alphabet, trie: LzTrie, params: LzMsParams):
        self.alphabet = alphabet
        self.trie = trie
        self.params = params

    @classmethod
    def train(cls, data, params: LzMsParams | None = None) -> "LzMsPredictor":
        params = params or LzMsParams()
        seqs = core.as_sequences(data)
        _, trie = lzms_parse(seqs, params)
        return cls(seqs[0].alphabet, trie, params)

    def prob(self, symbol: int, context) -> float:
        return lzms_prob(self.trie, symbol, context, self.params.M)

    def session(self, history: core.Sequence | None = None) -> core.PredictionSession:
        # No stored training tail: the dictionary changed while it was
        # being built, so there is no meaningful end-of-training state.
        hist = [] if history is None else core._context_indices(history)
        return _LzSession(self.trie, self.params.M, hist)


class Lz78Predictor(LzMsPredictor):
    algorithm = "lz78"

    @classmethod
    def train(cls, data, params=None) -> "Lz78Predictor":
        if params is not None and (params.M or params.S):
            raise core.DataError("plain LZ78 takes no M/S parameters")
        seqs = core.as_sequences(data)
        _, trie = lz78_parse(seqs)
        return cls(seqs[0].alphabet, trie, LzMsParams(0, 0))
