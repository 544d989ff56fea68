"""Context-tree weighting predictors.

The binary model maintains, for every context suffix s up to depth D, the
counts of bits observed after s in training, and scores a test sequence by
the weighted mixture

    P_s(x) = 1/2 * Pkt_s(x) + 1/2 * P_0s(x) * P_1s(x)      |s| < D
    P_s(x) = Pkt_s(x)                                       |s| = D

where Pkt_s multiplies the add-alpha conditionals of the test bits whose
context passes through s, with counters frozen at their training values.
This mixture equals a sum over all pruned context trees M of
2^-C(M) * P_M(x), with C(M) = |M| - 1 + |{s in M : |s| < D}|; the
brute-force enumeration of that sum lives here too and serves as the test
oracle.

Two alphabet extensions are provided:

* bit-encoded CTW: symbols become fixed-width big-endian codewords over
  one binary tree of depth D bits; when the alphabet size is not a power
  of two, symbol probabilities are renormalized over the valid codewords;
* decomposed CTW: a Huffman tree built from training frequencies splits
  the alphabet; each internal node learns a binary predictor whose context
  tree branches on the node's own sub-alphabet (the training data projected
  onto it), so a symbol's probability is the product of the branch
  probabilities along its root-to-leaf path.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from . import core
from .core import KtCounter, kt_conditional, kt_sequence_prob  # noqa: F401  (re-export)
from ._kernels import ContextTreeModel, ContextTreeSession

KT_ALPHA = 0.5
DECOMPOSED_ALPHA = 0.125  # smoothing used by the decomposed variant


# ---------------------------------------------------------------------------
# binary CTW


@dataclass(frozen=True)
class CtwParams:
    D: int
    alpha: float = KT_ALPHA
    adaptive: bool = False

    def __post_init__(self):
        if self.D < 0:
            raise core.DataError(f"context depth must be >= 0, got {self.D}")
        if not (self.alpha > 0.0):
            raise core.DataError("alpha must be positive")


def ctw_train(data, D: int, alpha: float = KT_ALPHA) -> ContextTreeModel:
    """Count a binary training sequence into a depth-D context tree.

    The first D symbols of each sequence only seed context and are not
    counted, so counters at node s equal the bit counts of the subsequence
    following s over the remaining positions.
    """
    seqs = core.as_sequences(data)
    if seqs[0].alphabet.size != 2:
        raise core.DataError("binary context trees need a 2-symbol alphabet")
    model = ContextTreeModel(2, D, alpha, [0, 1])
    for seq in seqs:
        model.fit_stream(seq.indices)
    return model


def _padded_contexts(depth: int, history: list[int], bits: list[int]):
    """Depth-long context tuple preceding each test bit; short histories are
    padded with 0 so every bit sees a full-depth context."""
    buf = [0] * depth + list(history[len(history) - depth :] if depth else [])
    buf = buf[len(buf) - depth :] if depth else []
    out = []
    for b in bits:
        out.append(tuple(buf))
        if depth:
            buf.append(b)
            buf.pop(0)
    return out


def ctw_sequence_prob(model: ContextTreeModel, x, history=None) -> float:
    """Mixture probability of bit sequence ``x`` with frozen counters.

    Direct recursive evaluation, independent of the incremental session
    machinery; meant for reference and testing at small scale (returns a
    linear probability).
    """
    bits = x.indices if isinstance(x, core.Sequence) else list(x)
    hist = core._context_indices(history)
    depth, alpha = model.depth, model.alpha
    counts: dict[tuple, list[int]] = {}
    for ctx, b in zip(_padded_contexts(depth, hist, bits), bits):
        for L in range(depth + 1):
            node = ctx[depth - L :]
            c = counts.get(node)
            if c is None:
                c = counts[node] = [0, 0]
            c[b] += 1

    def value(node: tuple) -> float:  # log2 of the mixture at this subtree
        c = counts.get(node)
        if c is None:
            return 0.0
        n0, n1 = model.counters(node)
        denom = n0 + n1 + 2.0 * alpha
        log_beta = c[0] * math.log2((n0 + alpha) / denom) + c[1] * math.log2((n1 + alpha) / denom)
        if len(node) == depth:
            return log_beta
        sub = value((0,) + node) + value((1,) + node)
        return _log2_add(-1.0 + log_beta, -1.0 + sub)

    return 2.0 ** value(())


def _log2_add(a: float, b: float) -> float:
    if a < b:
        a, b = b, a
    return a + math.log2(1.0 + 2.0 ** (b - a))


def ctw_conditional(session: core.PredictionSession, bit: int) -> float:
    """Conditional probability of ``bit`` given everything the session has
    consumed; the session then consumes the bit."""
    return session.step(bit)


class _BitSession(core.PredictionSession):
    __slots__ = ("_ks",)

    def __init__(self, ks: ContextTreeSession):
        self._ks = ks

    def conditional(self, symbol: int) -> float:
        return self._ks.probe_bit(symbol)

    def advance(self, symbol: int) -> None:
        self._ks.advance(symbol)

    def step(self, symbol: int) -> float:
        return self._ks.advance(symbol)


class CtwPredictor(core.Predictor):
    algorithm = "ctw"

    def __init__(self, alphabet: core.Alphabet, model: ContextTreeModel, params: CtwParams, tail: list[int]):
        self.alphabet = alphabet
        self.model = model
        self.params = params
        self.tail = tail

    @classmethod
    def train(cls, data, params: CtwParams) -> "CtwPredictor":
        seqs = core.as_sequences(data)
        model = ctw_train(seqs, params.D, params.alpha)
        tail = seqs[-1].indices[-params.D :] if params.D else []
        return cls(seqs[0].alphabet, model, params, tail)

    def _session(self, history) -> ContextTreeSession:
        hist = self.tail if history is None else core._context_indices(history)
        return ContextTreeSession(self.model, list(hist), self.params.adaptive)

    def prob(self, symbol: int, context) -> float:
        return ContextTreeSession(self.model, core._context_indices(context), self.params.adaptive).probe_bit(symbol)

    def session(self, history: core.Sequence | None = None) -> core.PredictionSession:
        return _BitSession(self._session(history))


# ---------------------------------------------------------------------------
# model-enumeration oracle


def enumerate_models(depth: int) -> list[frozenset]:
    """All pruned context trees of maximum depth ``depth``.

    A model is a complete, proper suffix set: every depth-``depth`` context
    has exactly one suffix in it.  Contexts are chronological tuples (most
    recent symbol last).  Exponential; guarded to depth <= 4.
    """
    if depth > 4:
        raise core.DataError(f"model enumeration is test-only and capped at depth 4, got {depth}")

    def rec(s: tuple) -> list[frozenset]:
        out = [frozenset({s})]
        if len(s) < depth:
            for a in rec((0,) + s):
                for b in rec((1,) + s):
                    out.append(a | b)
        return out

    return rec(())


def model_cost(model: frozenset, depth: int) -> int:
    """Description length exponent: |M| - 1 plus one per non-maximal-depth
    leaf (each internal split and each early stop costs one bit)."""
    return (len(model) - 1) + sum(1 for s in model if len(s) < depth)


def tree_source_mixture_prob(model: ContextTreeModel, x, history=None) -> float:
    """Brute-force evaluation of the weighted sum over all pruned trees,
    using the trained model's frozen counters.  Must equal
    :func:`ctw_sequence_prob`; test oracle only."""
    bits = x.indices if isinstance(x, core.Sequence) else list(x)
    hist = core._context_indices(history)
    depth, alpha = model.depth, model.alpha
    contexts = _padded_contexts(depth, hist, bits)
    total = 0.0
    for m in enumerate_models(depth):
        p = 1.0
        for ctx, b in zip(contexts, bits):
            s = next(s for s in m if ctx[depth - len(s) :] == s)
            n0, n1 = model.counters(s)
            p *= kt_conditional(KtCounter(n0, n1, alpha), b)
        total += 2.0 ** (-model_cost(m, depth)) * p
    return total


# ---------------------------------------------------------------------------
# bit-encoded CTW


@dataclass(frozen=True)
class BiCtwParams:
    D: int  # context depth in bits
    alpha: float = KT_ALPHA
    adaptive: bool = False

    def __post_init__(self):
        if self.D < 0:
            raise core.DataError(f"context depth must be >= 0, got {self.D}")
        if not (self.alpha > 0.0):
            raise core.DataError("alpha must be positive")


def _codewords(k: int) -> tuple[int, list[tuple[int, ...]], bool]:
    width = max(1, (k - 1).bit_length())
    words = [tuple((i >> (width - 1 - j)) & 1 for j in range(width)) for i in range(k)]
    return width, words, (1 << width) == k


def _to_bits(indices: list[int], words: list[tuple[int, ...]]) -> list[int]:
    out: list[int] = []
    for s in indices:
        out.extend(words[s])
    return out


def bi_ctw_train(data, D: int, alpha: float = KT_ALPHA) -> ContextTreeModel:
    """Train one binary context tree over the fixed-width bit encoding."""
    seqs = core.as_sequences(data)
    _, words, _ = _codewords(seqs[0].alphabet.size)
    model = ContextTreeModel(2, D, alpha, [0, 1])
    for seq in seqs:
        model.fit_stream(_to_bits(seq.indices, words))
    return model


class _BiCtwSession(core.PredictionSession):
    __slots__ = ("_ks", "_words", "_pow2")

    def __init__(self, ks: ContextTreeSession, words: list[tuple[int, ...]], pow2: bool):
        self._ks = ks
        self._words = words
        self._pow2 = pow2

    def _raw(self, symbol: int) -> float:
        return self._ks.probe_events(list(self._words[symbol]))

    def conditional(self, symbol: int) -> float:
        if self._pow2:
            return self._raw(symbol)
        raws = [self._raw(s) for s in range(len(self._words))]
        return raws[symbol] / sum(raws)

    def advance(self, symbol: int) -> None:
        for b in self._words[symbol]:
            self._ks.advance(b)

    def step(self, symbol: int) -> float:
        if self._pow2:
            p = 1.0
            for b in self._words[symbol]:
                p *= self._ks.advance(b)
            return p
        p = self.conditional(symbol)
        self.advance(symbol)
        return p


class BiCtwPredictor(core.Predictor):
    algorithm = "bictw"

    def __init__(self, alphabet, model: ContextTreeModel, params: BiCtwParams, tail_bits: list[int]):
        self.alphabet = alphabet
        self.model = model
        self.params = params
        self.tail_bits = tail_bits
        self.width, self.words, self.pow2 = _codewords(alphabet.size)

    @classmethod
    def train(cls, data, params: BiCtwParams) -> "BiCtwPredictor":
        seqs = core.as_sequences(data)
        model = bi_ctw_train(seqs, params.D, params.alpha)
        _, words, _ = _codewords(seqs[0].alphabet.size)
        bits = _to_bits(seqs[-1].indices, words)
        return cls(seqs[0].alphabet, model, params, bits[-params.D :] if params.D else [])

    def _bit_session(self, history) -> ContextTreeSession:
        if history is None:
            bits = self.tail_bits
        else:
            bits = _to_bits(core._context_indices(history), self.words)
        return ContextTreeSession(self.model, list(bits[-self.params.D :] if self.params.D else []), self.params.adaptive)

    def prob(self, symbol: int, context) -> float:
        sess = _BiCtwSession(self._bit_session(core._context_indices(context)), self.words, self.pow2)
        return sess.conditional(symbol)

    def session(self, history: core.Sequence | None = None) -> core.PredictionSession:
        return _BiCtwSession(self._bit_session(history), self.words, self.pow2)

    def prob_bit_raw(self, symbol: int, context) -> float:
        """Unnormalized codeword probability (testing hook)."""
        sess = _BiCtwSession(self._bit_session(core._context_indices(context)), self.words, self.pow2)
        return sess._raw(symbol)


# ---------------------------------------------------------------------------
# alphabet decomposition


class DecompositionNode:
    """Binary split of a sub-alphabet; leaves hold single symbols."""

    __slots__ = ("symbol", "left", "right", "sigma")

    def __init__(self, symbol=None, left=None, right=None):
        self.symbol = symbol
        self.left = left
        self.right = right
        if symbol is not None:
            self.sigma = (symbol,)
        else:
            self.sigma = tuple(sorted(left.sigma + right.sigma))

    @property
    def is_leaf(self) -> bool:
        return self.symbol is not None

    def to_payload(self):
        if self.is_leaf:
            return {"symbol": self.symbol}
        return {"left": self.left.to_payload(), "right": self.right.to_payload()}

    @classmethod
    def from_payload(cls, payload) -> "DecompositionNode":
        if "symbol" in payload:
            return cls(symbol=payload["symbol"])
        return cls(left=cls.from_payload(payload["left"]), right=cls.from_payload(payload["right"]))


class DecompositionTree:
    """Root of a decomposition plus flat access to its internal nodes."""

    def __init__(self, root: DecompositionNode, k: int):
        if root.is_leaf:
            raise core.DataError("decomposition tree must split at least two symbols")
        if len(root.sigma) != k:
            raise core.DataError("decomposition tree must cover the whole alphabet")
        self.root = root
        self.k = k
        self.internal: list[DecompositionNode] = []
        self.paths: list[list[tuple[int, int]]] = [[] for _ in range(k)]

        def visit(node: DecompositionNode):
            idx = len(self.internal)
            self.internal.append(node)
            for direction, child in ((0, node.left), (1, node.right)):
                for sym in child.sigma:
                    self.paths[sym].append((idx, direction))
                if not child.is_leaf:
                    visit(child)

        visit(root)

    def to_payload(self):
        return self.root.to_payload()

    @classmethod
    def from_payload(cls, payload, k: int) -> "DecompositionTree":
        return cls(DecompositionNode.from_payload(payload), k)


def huffman_decomposition(counts: list[int]) -> DecompositionTree:
    """Huffman tree over symbol frequencies (zero counts included).

    Deterministic: equal-weight subtrees merge highest minimum symbol
    index first, which also fixes left/right order (first popped -> left).
    """
    k = len(counts)
    if k < 2:
        raise core.DataError("decomposition needs at least 2 symbols")
    heap = [(counts[s], -s, DecompositionNode(symbol=s)) for s in range(k)]
    heapq.heapify(heap)
    while len(heap) > 1:
        c1, m1, left = heapq.heappop(heap)
        c2, m2, right = heapq.heappop(heap)
        heapq.heappush(heap, (c1 + c2, max(m1, m2), DecompositionNode(left=left, right=right)))
    return DecompositionTree(heap[0][2], k)


@dataclass(frozen=True)
class DeCtwParams:
    D: int  # context depth, in sub-alphabet symbols
    alpha: float = DECOMPOSED_ALPHA
    adaptive: bool = False

    def __post_init__(self):
        if self.D < 0:
            raise core.DataError(f"context depth must be >= 0, got {self.D}")
        if not (self.alpha > 0.0):
            raise core.DataError("alpha must be positive")


class _NodePredictor:
    """One internal decomposition node: its sub-alphabet, the local context
    tree, and the tail of the projected training data."""

    __slots__ = ("local_syms", "local_of", "side", "model", "tail")

    def __init__(self, node: DecompositionNode, depth: int, alpha: float):
        self.local_syms = sorted(node.sigma)
        self.local_of = {s: i for i, s in enumerate(self.local_syms)}
        left = set(node.left.sigma)
        side = [0 if s in left else 1 for s in self.local_syms]
        self.side = side
        self.model = ContextTreeModel(len(self.local_syms), depth, alpha, side)
        self.tail: list[int] = []

    def project(self, indices: list[int]) -> list[int]:
        lo = self.local_of
        return [lo[s] for s in indices if s in lo]


def de_ctw_train(data, D: int, tree: DecompositionTree, alpha: float = DECOMPOSED_ALPHA) -> list[_NodePredictor]:
    """Train the per-node binary predictors of a decomposed model.

    Each internal node sees the training data projected onto its own
    sub-alphabet (projections never cross sequence boundaries) and, per
    projected stream, skips its first D positions as context seed.
    """
    seqs = core.as_sequences(data)
    nodes = [_NodePredictor(n, D, alpha) for n in tree.internal]
    for seq in seqs:
        for np_ in nodes:
            stream = np_.project(seq.indices)
            np_.model.fit_stream(stream)
            np_.tail = stream[-D:] if D else []
    return nodes


class _DeCtwSession(core.PredictionSession):
    __slots__ = ("_pred", "_sessions")

    def __init__(self, pred: "DeCtwPredictor", sessions: list[ContextTreeSession]):
        self._pred = pred
        self._sessions = sessions

    def conditional(self, symbol: int) -> float:
        p = 1.0
        for idx, direction in self._pred.tree.paths[symbol]:
            p *= self._sessions[idx].probe_bit(direction)
        return p

    def advance(self, symbol: int) -> None:
        for idx, _ in self._pred.tree.paths[symbol]:
            node = self._pred.nodes[idx]
            self._sessions[idx].advance(node.local_of[symbol])

    def step(self, symbol: int) -> float:
        p = 1.0
        for idx, _ in self._pred.tree.paths[symbol]:
            node = self._pred.nodes[idx]
            p *= self._sessions[idx].advance(node.local_of[symbol])
        return p


class DeCtwPredictor(core.Predictor):
    algorithm = "dectw"

    def __init__(self, alphabet, tree: DecompositionTree, nodes: list[_NodePredictor], params: DeCtwParams):
        self.alphabet = alphabet
        self.tree = tree
        self.nodes = nodes
        self.params = params

    @classmethod
    def train(cls, data, params: DeCtwParams) -> "DeCtwPredictor":
        seqs = core.as_sequences(data)
        k = seqs[0].alphabet.size
        counts = [0] * k
        for seq in seqs:
            for s in seq.indices:
                counts[s] += 1
        tree = huffman_decomposition(counts)
        nodes = de_ctw_train(seqs, params.D, tree, params.alpha)
        return cls(seqs[0].alphabet, tree, nodes, params)

    def _sessions(self, history) -> list[ContextTreeSession]:
        out = []
        for np_ in self.nodes:
            if history is None:
                local = np_.tail
            else:
                local = np_.project(core._context_indices(history))
            out.append(ContextTreeSession(np_.model, list(local[-self.params.D :] if self.params.D else []), self.params.adaptive))
        return out

    def prob(self, symbol: int, context) -> float:
        return _DeCtwSession(self, self._sessions(core._context_indices(context))).conditional(symbol)

    def session(self, history: core.Sequence | None = None) -> core.PredictionSession:
        return _DeCtwSession(self, self._sessions(history))


def de_ctw_prob(nodes: list[_NodePredictor], tree: DecompositionTree, symbol: int, context, D: int, adaptive: bool = False) -> float:
    """Functional query against trained node predictors."""
    p = 1.0
    ctx = core._context_indices(context)
    for idx, direction in tree.paths[symbol]:
        np_ = nodes[idx]
        local = np_.project(ctx)
        sess = ContextTreeSession(np_.model, local[-D:] if D else [], adaptive)
        p *= sess.probe_bit(direction)
    return p
