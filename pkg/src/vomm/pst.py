"""Prediction suffix trees.

A suffix tree over contexts is grown from data in two phases: candidate
contexts are gathered level by level (short to long), and a candidate is
kept when some symbol is noticeably more or less likely after it than
after its one-symbol-shorter suffix.  Kept nodes pull in all their
suffixes so lookups can walk the tree.  Final per-node distributions are
the empirical follower frequencies smoothed toward uniform.

Two variants share the machinery:

* the frequency variant admits candidates whose relative window frequency
  reaches Pmin and tests significance against (1 + alpha) * gamma;
* the hit-count variant (multi-sequence corpora) admits candidates seen in
  at least Nmin distinct sequences and tests significance by a minimum
  follower count.

Contexts are tuples in chronological order, most recent symbol last.
Occurrences never span sequence boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import core


@dataclass(frozen=True)
class PstParams:
    Pmin: float
    gamma: float
    alpha: float = 0.0
    r: float = 1.05
    D: int = 12

    def __post_init__(self):
        # Pmin above 1 is legal and yields the bare smoothed-unigram tree
        if self.Pmin < 0.0:
            raise core.DataError(f"Pmin must be >= 0, got {self.Pmin}")
        if self.gamma < 0.0:
            raise core.DataError("gamma must be >= 0")
        if self.alpha < 0.0:
            raise core.DataError("alpha must be >= 0")
        if not (self.r > 1.0):
            raise core.DataError(f"ratio threshold r must exceed 1, got {self.r}")
        if self.D < 0:
            raise core.DataError(f"context depth must be >= 0, got {self.D}")


@dataclass(frozen=True)
class PstStarParams:
    hits: int = 2
    Nmin: int = 2
    gamma: float = 0.001
    r: float = 1.05
    D: int = 12

    def __post_init__(self):
        if self.hits < 1:
            raise core.DataError("hits must be >= 1")
        if self.Nmin < 1:
            raise core.DataError("Nmin must be >= 1")
        if self.gamma < 0.0:
            raise core.DataError("gamma must be >= 0")
        if not (self.r > 1.0):
            raise core.DataError(f"ratio threshold r must exceed 1, got {self.r}")
        if self.D < 0:
            raise core.DataError(f"context depth must be >= 0, got {self.D}")


class _Node:
    """Scan record for one enumerated context."""

    __slots__ = ("count", "followers", "total", "distinct")

    def __init__(self, count, followers, total, distinct):
        self.count = count
        self.followers = followers  # dict symbol -> follower count
        self.total = total
        self.distinct = distinct  # number of distinct sequences containing it


def _empirical(node: _Node, k: int) -> list[float]:
    # a context seen only at sequence ends predicts nothing; fall back to uniform
    if node.total == 0:
        return [1.0 / k] * k
    return [node.followers.get(s, 0) / node.total for s in range(k)]


def _scan_levels(seqs, depth, record_filter):
    """Enumerate contexts level by level, recording counts.

    ``record_filter(node, length)`` decides whether a context's occurrences
    are carried to the next level (its extensions enumerated).  Returns the
    record table; every enumerated context's one-shorter suffix is also in
    the table.
    """
    streams = [s.indices for s in seqs]
    records: dict[tuple, _Node] = {}

    def make(positions) -> _Node:
        followers: dict[int, int] = {}
        total = 0
        js = set()
        for j, i in positions:
            js.add(j)
            st = streams[j]
            if i < len(st):
                sym = st[i]
                followers[sym] = followers.get(sym, 0) + 1
                total += 1
        return _Node(len(positions), followers, total, len(js))

    root_pos = [(j, i) for j, st in enumerate(streams) for i in range(len(st) + 1)]
    records[()] = make(root_pos)
    level = {(): root_pos}
    for L in range(1, depth + 1):
        grouped: dict[tuple, list] = {}
        for label, positions in level.items():
            for j, i in positions:
                if i >= L:
                    ext = (streams[j][i - L],) + label
                    grouped.setdefault(ext, []).append((j, i))
        level = {}
        for label, positions in grouped.items():
            node = make(positions)
            records[label] = node
            if record_filter(node, L):
                level[label] = positions
        if not level:
            break
    return records


def _window_denominators(seqs, depth) -> list[int]:
    lens = [len(s) for s in seqs]
    return [sum(max(0, n - L + 1) for n in lens) for L in range(depth + 1)]


def _grow_tree(records, depth, is_candidate, is_significant) -> set:
    """Accepted node set: significant candidates plus all their suffixes."""
    accepted = {()}
    for label in sorted(records, key=len):
        L = len(label)
        if L == 0 or not is_candidate(records[label], L):
            continue
        if is_significant(label):
            suf = label
            while suf:
                accepted.add(suf)
                suf = suf[1:]
    return accepted


def _ratio_flags(ps: float, pp: float, r: float) -> bool:
    if pp == 0.0:
        return True
    ratio = ps / pp
    return ratio >= r or ratio <= 1.0 / r


def _smooth(p: list[float], gamma: float) -> list[float]:
    k = len(p)
    scale = 1.0 - k * gamma
    return [scale * v + gamma for v in p]


def _deepest_suffix(tree: dict, context: list[int], depth: int) -> tuple:
    """Longest context suffix present in the tree.  The tree is
    suffix-closed, so the first miss ends the walk."""
    best = ()
    for L in range(1, min(depth, len(context)) + 1):
        label = tuple(context[len(context) - L :])
        if label not in tree:
            break
        best = label
    return best


class _PstSession(core.PredictionSession):
    __slots__ = ("_pred", "_ctx")

    def __init__(self, pred, context: list[int]):
        self._pred = pred
        self._ctx = context[-pred.params.D :] if pred.params.D else []

    def conditional(self, symbol: int) -> float:
        return self._pred._lookup(self._ctx)[symbol]

    def advance(self, symbol: int) -> None:
        self._ctx.append(symbol)
        if len(self._ctx) > self._pred.params.D:
            self._ctx.pop(0)


class _SuffixTreePredictor(core.Predictor):
    """Shared query side: suffix lookup over smoothed node tables."""

    def __init__(self, alphabet: core.Alphabet, params, tree: dict, tail: list[int]):
        self.alphabet = alphabet
        self.params = params
        self.tree = tree  # label tuple -> smoothed distribution
        self.tail = tail

    def _lookup(self, context: list[int]) -> list[float]:
        return self.tree[_deepest_suffix(self.tree, context, self.params.D)]

    def prob(self, symbol: int, context) -> float:
        return self._lookup(core._context_indices(context))[symbol]

    def session(self, history: core.Sequence | None = None) -> core.PredictionSession:
        ctx = self.tail if history is None else core._context_indices(history)
        return _PstSession(self, list(ctx))

    def node_labels(self) -> list[tuple]:
        return sorted(self.tree, key=lambda t: (len(t), t))

    def node_distribution(self, label: tuple) -> list[float]:
        return list(self.tree[tuple(label)])


def _construct(seqs, params):
    """Scan + grow for either parameter flavor; returns (records, accepted)."""
    k = seqs[0].alphabet.size
    if isinstance(params, PstStarParams):
        def keep(node: _Node, L: int) -> bool:
            # distinct-sequence support only shrinks with longer contexts
            return node.distinct >= params.Nmin

        records = _scan_levels(seqs, params.D, keep)

        def is_candidate(node: _Node, L: int) -> bool:
            return node.distinct >= params.Nmin

        def is_significant(label: tuple) -> bool:
            node = records[label]
            ps = _empirical(node, k)
            pp = _empirical(records[label[1:]], k)
            return any(
                node.followers.get(s, 0) >= params.hits and _ratio_flags(ps[s], pp[s], params.r)
                for s in range(k)
            )
    else:
        denoms = _window_denominators(seqs, params.D)
        # any deeper candidate needs at least Pmin * denom(D) raw occurrences,
        # so that is the pruning bar while scanning (a suffix may miss Pmin at
        # its own length yet have an admissible extension)
        slack = params.Pmin * denoms[params.D]

        def keep(node: _Node, L: int) -> bool:
            return node.count >= slack

        records = _scan_levels(seqs, params.D, keep)

        def is_candidate(node: _Node, L: int) -> bool:
            return denoms[L] > 0 and node.count / denoms[L] >= params.Pmin

        bar = (1.0 + params.alpha) * params.gamma

        def is_significant(label: tuple) -> bool:
            ps = _empirical(records[label], k)
            pp = _empirical(records[label[1:]], k)
            return any(ps[s] >= bar and _ratio_flags(ps[s], pp[s], params.r) for s in range(k))

    accepted = _grow_tree(records, params.D, is_candidate, is_significant)
    return records, accepted


def pst_candidates(data, params) -> dict:
    """Candidate contexts with their empirical follower distributions.

    Context tuples map to P(next symbol | context); the empty context is
    always included.  Accepts either parameter flavor.
    """
    seqs = core.as_sequences(data)
    k = seqs[0].alphabet.size
    if isinstance(params, PstStarParams):
        records = _scan_levels(seqs, params.D, lambda node, L: node.distinct >= params.Nmin)

        def is_candidate(node, L):
            return node.distinct >= params.Nmin
    else:
        denoms = _window_denominators(seqs, params.D)
        slack = params.Pmin * denoms[params.D]
        records = _scan_levels(seqs, params.D, lambda node, L: node.count >= slack)

        def is_candidate(node, L):
            return denoms[L] > 0 and node.count / denoms[L] >= params.Pmin

    out = {(): _empirical(records[()], k)}
    for label, node in records.items():
        if label and is_candidate(node, len(label)):
            out[label] = _empirical(node, k)
    return out


def pst_grow(data, params) -> set:
    """Node label set after the significance test and suffix closure."""
    seqs = core.as_sequences(data)
    _, accepted = _construct(seqs, params)
    return accepted


def pst_smooth(dist: list[float], gamma: float) -> list[float]:
    """(1 - k*gamma) * P + gamma; entries >= gamma, total exactly 1."""
    if len(dist) * gamma >= 1.0:
        raise core.DataError(f"gamma={gamma} too large for a {len(dist)}-symbol distribution")
    return _smooth(dist, gamma)


def pst_prob(predictor: "_SuffixTreePredictor", symbol: int, context) -> float:
    return predictor.prob(symbol, context)


def _finalize(cls, seqs, params):
    k = seqs[0].alphabet.size
    if k * params.gamma >= 1.0:
        raise core.DataError(f"gamma={params.gamma} too large for a {k}-symbol alphabet (needs gamma < 1/k)")
    records, accepted = _construct(seqs, params)
    tree = {label: _smooth(_empirical(records[label], k), params.gamma) for label in accepted}
    tail = seqs[-1].indices[-params.D :] if params.D else []
    return cls(seqs[0].alphabet, params, tree, tail)


class PstPredictor(_SuffixTreePredictor):
    algorithm = "pst"

    @classmethod
    def train(cls, data, params: PstParams) -> "PstPredictor":
        seqs = core.as_sequences(data)
        if not isinstance(params, PstParams):
            raise core.DataError("pst expects PstParams")
        return _finalize(cls, seqs, params)


class PstStarPredictor(_SuffixTreePredictor):
    algorithm = "pststar"

    @classmethod
    def train(cls, data, params: PstStarParams) -> "PstStarPredictor":
        seqs = core.as_sequences(data)
        if not isinstance(params, PstStarParams):
            raise core.DataError("pststar expects PstStarParams")
        return _finalize(cls, seqs, params)
