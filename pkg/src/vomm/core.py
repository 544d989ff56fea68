"""Shared contract for sequence predictors.

Everything in this package works over a fixed finite alphabet.  A trained
predictor assigns a conditional probability to the next symbol given the
symbols before it, and is scored by its average log-loss on a test
sequence:

    loss = -(1/T) * sum_i log2 P(x_i | x_1 .. x_{i-1})

in bits per symbol.  Predictors are frozen once trained: training
structures are never mutated by queries, so a trained model may be shared
across threads.  Per-evaluation state (rolling context windows, mixture
accumulators) lives in a session object created per scoring run; sessions
are single-threaded.
"""

from __future__ import annotations

import abc
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence as PySequence


class VommError(Exception):
    """Base class for library errors."""


class DataError(VommError):
    """Malformed or unusable input data."""


class NumericError(VommError):
    """A numeric failure, e.g. a non-positive conditional probability."""


class VommWarning(UserWarning):
    """Non-fatal library conditions (ignored parameters, tie-breaks)."""


class Alphabet:
    """Ordered set of distinct symbol tokens; indices are positions.

    The token <-> index mapping is fixed at construction and never changes,
    so serialized models remain valid.  Tokens may be any hashable values
    (ints for byte alphabets, strings for token files).
    """

    __slots__ = ("_symbols", "_index")

    def __init__(self, symbols: Iterable):
        syms = tuple(symbols)
        if len(syms) < 2:
            raise DataError(f"alphabet needs at least 2 symbols, got {len(syms)}")
        index = {}
        for i, s in enumerate(syms):
            if s in index:
                raise DataError(f"duplicate alphabet symbol: {s!r}")
            index[s] = i
        self._symbols = syms
        self._index = index

    @classmethod
    def for_bytes(cls) -> "Alphabet":
        return cls(range(256))

    @classmethod
    def binary(cls) -> "Alphabet":
        return cls("01")

    @property
    def size(self) -> int:
        return len(self._symbols)

    def __len__(self) -> int:
        return len(self._symbols)

    def symbols(self) -> tuple:
        return self._symbols

    def symbol(self, i: int):
        return self._symbols[i]

    def index(self, token) -> int:
        try:
            return self._index[token]
        except KeyError:
            raise DataError(f"token {token!r} not in alphabet") from None

    def __contains__(self, token) -> bool:
        return token in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self._symbols == other._symbols

    def __hash__(self) -> int:
        return hash(self._symbols)

    def __repr__(self) -> str:
        if self.size > 8:
            return f"Alphabet(k={self.size})"
        return f"Alphabet({list(self._symbols)!r})"


class Sequence:
    """Immutable symbol sequence over an :class:`Alphabet`.

    Internally a list of symbol indices.  Concatenation via ``+`` requires
    both operands to share the alphabet; the empty sequence is the identity.
    """

    __slots__ = ("alphabet", "_indices")

    def __init__(self, alphabet: Alphabet, indices: Iterable[int] = ()):
        idx = list(indices)
        k = alphabet.size
        for v in idx:
            if not (0 <= v < k):
                raise DataError(f"symbol index {v} out of range for k={k}")
        self.alphabet = alphabet
        self._indices = idx

    @classmethod
    def of_tokens(cls, alphabet: Alphabet, tokens: Iterable) -> "Sequence":
        return cls(alphabet, (alphabet.index(t) for t in tokens))

    @classmethod
    def of_text(cls, alphabet: Alphabet, text: str) -> "Sequence":
        """Each character of ``text`` is one token."""
        return cls.of_tokens(alphabet, text)

    @classmethod
    def empty(cls, alphabet: Alphabet) -> "Sequence":
        return cls(alphabet)

    @property
    def indices(self) -> list[int]:
        return self._indices

    def tokens(self) -> list:
        sym = self.alphabet.symbol
        return [sym(i) for i in self._indices]

    def text(self) -> str:
        return "".join(str(t) for t in self.tokens())

    def __len__(self) -> int:
        return len(self._indices)

    def __iter__(self) -> Iterator[int]:
        return iter(self._indices)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Sequence(self.alphabet, self._indices[item])
        return self._indices[item]

    def __add__(self, other: "Sequence") -> "Sequence":
        if not isinstance(other, Sequence):
            return NotImplemented
        if other.alphabet != self.alphabet:
            raise DataError("cannot concatenate sequences over different alphabets")
        return Sequence(self.alphabet, self._indices + other._indices)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Sequence)
            and self.alphabet == other.alphabet
            and self._indices == other._indices
        )

    def __hash__(self) -> int:
        return hash((self.alphabet, tuple(self._indices)))

    def __repr__(self) -> str:
        body = self.text() if len(self) <= 24 else self[:24].text() + "..."
        return f"Sequence({body!r}, n={len(self)})"


def as_sequences(data) -> list[Sequence]:
    """Normalize a Sequence or list of Sequences to a non-empty list.

    All sequences must share one alphabet.  Training on several sequences
    means counting within each one independently: contexts and parses never
    cross a sequence boundary.
    """
    if isinstance(data, Sequence):
        return [data]
    seqs = list(data)
    if not seqs:
        raise DataError("no training sequences given")
    alphabet = seqs[0].alphabet
    for s in seqs:
        if s.alphabet != alphabet:
            raise DataError("training sequences use different alphabets")
    return seqs


class PredictionSession(abc.ABC):
    """Per-evaluation state for sequential scoring.

    ``conditional`` peeks at the next-symbol probability without consuming
    it; ``advance`` consumes a symbol.  ``step`` does both and is what the
    scoring loop calls.
    """

    @abc.abstractmethod
    def conditional(self, symbol: int) -> float: ...

    @abc.abstractmethod
    def advance(self, symbol: int) -> None: ...

    def step(self, symbol: int) -> float:
        p = self.conditional(symbol)
        self.advance(symbol)
        return p


class Predictor(abc.ABC):
    """A trained next-symbol predictor over a fixed alphabet.

    Implementations are immutable after training.  ``prob`` answers a
    one-shot conditional query; ``session`` starts a sequential scoring run
    whose per-symbol conditionals multiply out to the model's probability
    for the whole test sequence (the chain rule).  For mixture models the
    session carries evaluation state, so mid-sequence conditionals may
    differ from one-shot ``prob`` queries with the same visible context;
    both are normalized distributions.
    """

    algorithm: str = ""
    alphabet: Alphabet

    @abc.abstractmethod
    def prob(self, symbol: int, context) -> float:
        """P(symbol | context) for a single query; context is a Sequence or
        iterable of symbol indices (only a bounded suffix is used)."""

    @abc.abstractmethod
    def session(self, history: Sequence | None = None) -> PredictionSession:
        """Start a scoring session.  ``history`` supplies the context that
        precedes the test sequence; None means the predictor's stored
        default (the tail of its training data, where that is meaningful)."""

    def distribution(self, context) -> list[float]:
        return [self.prob(s, context) for s in range(self.alphabet.size)]


def _context_indices(context) -> list[int]:
    if context is None:
        return []
    if isinstance(context, Sequence):
        return context.indices
    return list(context)


def _accumulate_log2(predictor: Predictor, test: Sequence, history: Sequence | None) -> float:
    sess = predictor.session(history)
    total = 0.0
    for i, sym in enumerate(test):
        p = sess.step(sym)
        if not (p > 0.0) or math.isnan(p):
            raise NumericError(
                f"non-positive conditional probability {p!r} at test position {i} "
                f"(symbol {test.alphabet.symbol(sym)!r})"
            )
        total += math.log2(p)
    return total


def sequence_log_prob(predictor: Predictor, test: Sequence, history: Sequence | None = None) -> float:
    """log2 of the probability the model assigns to ``test`` after ``history``.

    Empty test -> 0.0.  Equals -len(test) * average_log_loss(...) when the
    test is non-empty.
    """
    if len(test) == 0:
        return 0.0
    return _accumulate_log2(predictor, test, history)


def average_log_loss(predictor: Predictor, test: Sequence, history: Sequence | None = None) -> float:
    """Average log-loss of ``predictor`` on ``test`` in bits per symbol."""
    if len(test) == 0:
        raise DataError("average log-loss needs a non-empty test sequence")
    return -_accumulate_log2(predictor, test, history) / len(test)


def half_split(seq: Sequence) -> tuple[Sequence, Sequence]:
    """Split into (training, test) halves; odd length puts the extra symbol
    in the training half."""
    n = len(seq)
    if n < 2:
        raise DataError(f"sequence of length {n} cannot be half-split")
    cut = (n + 1) // 2
    return seq[:cut], seq[cut:]


def subsequence_after_context(q: Sequence, s: Sequence) -> Sequence:
    """Symbols of ``q`` immediately following each occurrence of ``s``.

    Occurrences may overlap; an occurrence ending at the last position
    contributes nothing.  Empty ``s`` returns ``q`` itself.
    """
    if q.alphabet != s.alphabet:
        raise DataError("context and sequence must share an alphabet")
    qi, si = q.indices, s.indices
    m = len(si)
    out = [qi[i + m] for i in range(len(qi) - m) if qi[i : i + m] == si]
    return Sequence(q.alphabet, out)


@dataclass(frozen=True)
class KtCounter:
    """Binary observation counts with an add-alpha smoothing weight.

    ``alpha`` = 1/2 gives the classic Krichevsky-Trofimov estimator; other
    values select other members of the same add-constant family.
    """

    n0: int = 0
    n1: int = 0
    alpha: float = 0.5

    def conditional(self, bit: int) -> float:
        num = (self.n1 if bit else self.n0) + self.alpha
        return num / (self.n0 + self.n1 + 2.0 * self.alpha)

    def incremented(self, bit: int) -> "KtCounter":
        return KtCounter(self.n0 + (0 if bit else 1), self.n1 + (1 if bit else 0), self.alpha)


def kt_conditional(counter: KtCounter, bit: int) -> float:
    """Probability the estimator assigns to ``bit`` given the counts so far."""
    if bit not in (0, 1):
        raise DataError(f"bit must be 0 or 1, got {bit!r}")
    return counter.conditional(bit)


def kt_sequence_prob(bits: PySequence[int], alpha: float = 0.5) -> float:
    """Probability of a bit string under the sequential add-alpha estimator,
    starting from empty counts."""
    c = KtCounter(alpha=alpha)
    p = 1.0
    for b in bits:
        p *= kt_conditional(c, b)
        c = c.incremented(b)
    return p
