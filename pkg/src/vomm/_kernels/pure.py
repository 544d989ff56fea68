"""Pure-Python kernels: the per-symbol counting and scoring loops.

Three structures live here, mirrored 1:1 by the compiled backend in
``vomm._kernels._native``:

* ``LzTrie``      - phrase trie with structural counts (LZ78 / LZ-MS)
* ``PpmTrie``     - bounded-depth substring-count trie with escape scoring
* ``ContextTreeModel`` / ``ContextTreeSession`` - binary-output context-tree
  mixture over an m-ary context alphabet (plain binary trees, bit-encoded
  trees, and the per-node trees of a decomposed model are all instances)

Kernels speak plain ints and lists so exported state is backend neutral.
"""

from __future__ import annotations

import math

BACKEND_NAME = "pure"

_LOG2_HALF = -1.0


def _log2_add(a: float, b: float) -> float:
    # log2(2^a + 2^b), factored around the max to stay finite
    if a < b:
        a, b = b, a
    return a + math.log2(1.0 + 2.0 ** (b - a))


class LzTrie:
    """Phrase trie with all-children expansion and structural counts.

    A node is "expanded" exactly when its phrase (the path from the root)
    is in the dictionary; expansion materializes all k children as leaves.
    A leaf counts 1; an expanded node counts the sum of its children, so
    expanding a leaf adds k-1 to every ancestor.  The empty dictionary is a
    bare unexpanded root.
    """

    __slots__ = ("k", "_children", "_count", "_parent", "_xorder", "_expansions")

    def __init__(self, k: int):
        self.k = k
        self._children: list[list[int] | None] = [None]
        self._count: list[int] = [1]
        self._parent: list[int] = [-1]
        self._xorder: list[int] = [0]  # 1-based expansion ordinal, 0 = leaf
        self._expansions = 0

    # -- construction -------------------------------------------------

    def _expand(self, v: int) -> None:
        k = self.k
        base = len(self._count)
        self._children[v] = list(range(base, base + k))
        self._children.extend([None] * k)
        self._count.extend([1] * k)
        self._parent.extend([v] * k)
        self._xorder.extend([0] * k)
        self._expansions += 1
        self._xorder[v] = self._expansions
        self._count[v] = k
        p = self._parent[v]
        while p >= 0:
            self._count[p] += k - 1
            p = self._parent[p]

    def parse(self, seq: list[int], back_shift: int) -> list[tuple[int, int]]:
        """One parsing pass over ``seq``; returns (start, end) phrase spans.

        Each phrase is the shortest string not yet in the dictionary; after
        a phrase of length L ending at e, parsing resumes at
        e - min(back_shift, L).  A trailing partial phrase is discarded.
        """
        phrases: list[tuple[int, int]] = []
        n = len(seq)
        pos = 0
        while pos < n:
            v = 0
            i = pos
            while True:
                if i >= n:
                    return phrases  # trailing partial phrase: discard
                kids = self._children[v]
                if kids is None:
                    # only the bare root before the first phrase
                    self._expand(v)
                    kids = self._children[v]
                c = kids[seq[i]]
                if self._children[c] is None:
                    self._expand(c)
                    phrases.append((pos, i + 1))
                    length = i + 1 - pos
                    pos = i + 1 - min(back_shift, length)
                    break
                v = c
                i += 1
        return phrases

    # -- prediction ----------------------------------------------------

    def _trace(self, recent: list[int]) -> int:
        v = 0
        for sym in recent:
            kids = self._children[v]
            if kids is None:
                return 0
            c = kids[sym]
            if self._children[c] is None:
                return 0
            v = c
        return v

    def advance_state(self, state: int, sym: int, recent: list[int]) -> int:
        """Consume one context symbol.  ``recent`` is the trailing window of
        consumed symbols including ``sym`` (at most the back-shift length);
        it seeds the restart point when the walk steps onto a leaf."""
        kids = self._children[state]
        if kids is None:
            return state
        c = kids[sym]
        if self._children[c] is not None:
            return c
        return self._trace(recent)

    def reset_state(self, context: list[int], trace_len: int) -> int:
        state = 0
        for i, sym in enumerate(context):
            lo = i + 1 - trace_len if trace_len else i + 1
            state = self.advance_state(state, sym, context[max(0, lo) : i + 1])
        return state

    def conditional(self, state: int, sym: int) -> float:
        kids = self._children[state]
        if kids is None:
            return 1.0 / self.k
        return self._count[kids[sym]] / self._count[state]

    def distribution(self, state: int) -> list[float]:
        kids = self._children[state]
        if kids is None:
            return [1.0 / self.k] * self.k
        total = self._count[state]
        return [self._count[c] / total for c in kids]

    # -- introspection / state -----------------------------------------

    def node_count(self) -> int:
        return len(self._count)

    def is_expanded(self, v: int) -> bool:
        return self._children[v] is not None

    def count_of(self, v: int) -> int:
        return self._count[v]

    def child(self, v: int, sym: int) -> int:
        kids = self._children[v]
        return -1 if kids is None else kids[sym]

    def expanded_paths(self) -> list[list[int]]:
        """Phrase paths of expanded nodes (root excluded), ordered by when
        each phrase entered the dictionary, which is parse order."""
        syms: dict[int, int] = {}
        for v, kids in enumerate(self._children):
            if kids is not None:
                for s, c in enumerate(kids):
                    syms[c] = s
        out = []
        for v in range(1, len(self._count)):
            if self._children[v] is not None:
                path = []
                u = v
                while u != 0:
                    path.append(syms[u])
                    u = self._parent[u]
                out.append((self._xorder[v], path[::-1]))
        return [path for _, path in sorted(out)]

    def export_nodes(self) -> list[list[int]]:
        """[parent, symbol-from-parent, count, expansion ordinal] per node,
        indexed by node id (root first with parent/symbol -1; ordinal 0
        marks a leaf)."""
        syms = [-1] * len(self._count)
        for v, kids in enumerate(self._children):
            if kids is not None:
                for s, c in enumerate(kids):
                    syms[c] = s
        return [
            [self._parent[v], syms[v], self._count[v], self._xorder[v]]
            for v in range(len(self._count))
        ]

    @classmethod
    def from_nodes(cls, k: int, nodes: list[list[int]]) -> "LzTrie":
        trie = cls(k)
        n = len(nodes)
        trie._children = [None] * n
        trie._count = [row[2] for row in nodes]
        trie._parent = [row[0] for row in nodes]
        trie._xorder = [row[3] for row in nodes]
        trie._expansions = max(trie._xorder, default=0)
        for v, row in enumerate(nodes):
            if row[3]:
                trie._children[v] = [-1] * k
        for v, row in enumerate(nodes):
            parent, sym = row[0], row[1]
            if parent >= 0:
                trie._children[parent][sym] = v
        return trie


class PpmTrie:
    """Substring-count trie of depth ``depth``+1.

    The counter on the path s.sigma equals the number of occurrences of the
    substring s.sigma in the training data (per training call; boundaries
    between calls are never crossed).  Scoring follows the escape recursion
    with method-C escape mass and optional exclusion.
    """

    BASE_UNIFORM = 0
    BASE_TRAIN_FREQ = 1

    __slots__ = ("k", "depth", "_children", "_count", "_trained")

    def __init__(self, k: int, depth: int):
        self.k = k
        self.depth = depth
        self._children: list[dict[int, int]] = [{}]
        self._count: list[int] = [0]
        self._trained = 0  # total symbols seen, for the frequency base

    def fit_sequence(self, seq: list[int]) -> None:
        children = self._children
        count = self._count
        dmax_cap = self.depth + 1
        prev: list[int] = [0]
        for i, sym in enumerate(seq):
            dmax = min(dmax_cap, i + 1)
            cur = [0]
            for d in range(1, dmax + 1):
                parent = prev[d - 1]
                node = children[parent].get(sym)
                if node is None:
                    node = len(count)
                    children[parent][sym] = node
                    children.append({})
                    count.append(0)
                count[node] += 1
                cur.append(node)
            prev = cur
        self._trained += len(seq)

    def _walk(self, ctx: list[int]) -> int:
        node = 0
        for sym in ctx:
            node = self._children[node].get(sym, -1)
            if node < 0:
                return -1
        return node

    def conditional(self, context: list[int], sym: int, exclusion: bool, base_mode: int) -> float:
        ctx = context[-self.depth :] if self.depth else []
        excluded: set[int] = set()
        mult = 1.0
        for start in range(len(ctx) + 1):
            node = self._walk(ctx[start:])
            if node < 0:
                continue  # unseen context escapes with probability 1
            kids = self._children[node]
            if not kids:
                continue
            count = self._count
            total = 0
            covered = len(excluded)
            for s2, c2 in kids.items():
                if s2 not in excluded:
                    total += count[c2]
                    covered += 1
            denom = len(kids) + total
            if exclusion and covered == self.k and total > 0:
                # every symbol is excluded or seen here, so no recursion can
                # continue past this level: the escape term vanishes and the
                # seen mass carries the whole level
                denom = total
            child = kids.get(sym)
            if child is not None and sym not in excluded:
                return mult * count[child] / denom
            if denom == total:
                return 0.0
            mult *= len(kids) / denom
            if exclusion:
                excluded.update(kids.keys())
        remaining = self.k - len(excluded)
        if remaining <= 0:  # pragma: no cover - unreachable for queried symbols
            return 0.0
        if base_mode == self.BASE_TRAIN_FREQ:
            root_kids = self._children[0]
            count = self._count
            tot = 0
            for s2, c2 in root_kids.items():
                if s2 not in excluded:
                    tot += count[c2]
            if tot > 0:
                c = root_kids.get(sym)
                freq = count[c] if (c is not None and sym not in excluded) else 0
                return mult * freq / tot
        return mult / remaining

    def distribution(self, context: list[int], exclusion: bool, base_mode: int) -> list[float]:
        return [self.conditional(context, s, exclusion, base_mode) for s in range(self.k)]

    def unigram_counts(self) -> list[int]:
        out = [0] * self.k
        for sym, node in self._children[0].items():
            out[sym] = self._count[node]
        return out

    def node_count(self) -> int:
        return len(self._count)

    def path_count(self, path: list[int]) -> int:
        node = self._walk(path)
        return 0 if node < 0 else self._count[node]

    def export_nodes(self) -> list[list[int]]:
        """[parent, symbol, count] per node in creation order (root first)."""
        rows = [[-1, -1, self._count[0]] for _ in range(1)]
        rows += [[0, 0, 0] for _ in range(len(self._count) - 1)]
        for v, kids in enumerate(self._children):
            for sym, c in kids.items():
                rows[c] = [v, sym, self._count[c]]
        return rows

    def export_meta(self) -> int:
        return self._trained

    @classmethod
    def from_nodes(cls, k: int, depth: int, nodes: list[list[int]], trained: int) -> "PpmTrie":
        trie = cls(k, depth)
        trie._children = [{} for _ in nodes]
        trie._count = [row[2] for row in nodes]
        trie._trained = trained
        for v, row in enumerate(nodes):
            if row[0] >= 0:
                trie._children[row[0]][row[1]] = v
        return trie


class ContextTreeModel:
    """Binary-output context-tree mixture over an m-ary context alphabet.

    Tree nodes are context suffixes: the child of node s along edge e is
    the context e.s (one symbol older).  Each node holds binary counts of
    the outcome bit ``side[event]`` observed after that context.  Training
    on a stream skips its first ``depth`` positions, which only seed
    context.  Scoring mixes, at every node above the maximum depth, the
    node's own smoothed estimate with the product of its children, each
    with weight 1/2; counters stay frozen during scoring unless a session
    is opened in adaptive mode.
    """

    __slots__ = ("arity", "depth", "alpha", "side", "_children", "_n0", "_n1", "_lp")

    def __init__(self, arity: int, depth: int, alpha: float, side: list[int]):
        if arity < 1:
            raise ValueError("context arity must be >= 1")
        if len(side) != arity or any(b not in (0, 1) for b in side):
            raise ValueError("side must map every context symbol to a bit")
        if not (alpha > 0.0):
            raise ValueError("alpha must be positive")
        self.arity = arity
        self.depth = depth
        self.alpha = alpha
        self.side = list(side)
        self._children: list[dict[int, int]] = [{}]
        self._n0: list[int] = [0]
        self._n1: list[int] = [0]
        self._lp: list[tuple[float, float]] | None = None

    def fit_stream(self, stream: list[int]) -> None:
        self._lp = None
        children = self._children
        n0, n1 = self._n0, self._n1
        side = self.side
        depth = self.depth
        for i in range(depth, len(stream)):
            b = side[stream[i]]
            node = 0
            for j in range(depth + 1):
                if b:
                    n1[node] += 1
                else:
                    n0[node] += 1
                if j == depth:
                    break
                sym = stream[i - j - 1]
                nxt = children[node].get(sym)
                if nxt is None:
                    nxt = len(n0)
                    children[node][sym] = nxt
                    children.append({})
                    n0.append(0)
                    n1.append(0)
                node = nxt

    def _freeze(self) -> list[tuple[float, float]]:
        lp = self._lp
        if lp is None:
            a = self.alpha
            lp = []
            for z, o in zip(self._n0, self._n1):
                denom = z + o + 2.0 * a
                lp.append((math.log2((z + a) / denom), math.log2((o + a) / denom)))
            self._lp = lp
        return lp

    def counters(self, path: tuple[int, ...] | list[int]) -> tuple[int, int]:
        """Counts at the node whose context string is ``path`` (chronological
        order, most recent symbol last); unmaterialized nodes count (0,0)."""
        node = 0
        for sym in reversed(path):
            node = self._children[node].get(sym, -1)
            if node < 0:
                return (0, 0)
        return (self._n0[node], self._n1[node])

    def node_count(self) -> int:
        return len(self._n0)

    def export_nodes(self) -> list[list[int]]:
        rows = [[-1, -1, self._n0[0], self._n1[0]]]
        rows += [[0, 0, 0, 0] for _ in range(len(self._n0) - 1)]
        for v, kids in enumerate(self._children):
            for sym, c in kids.items():
                rows[c] = [v, sym, self._n0[c], self._n1[c]]
        return rows

    @classmethod
    def from_nodes(
        cls, arity: int, depth: int, alpha: float, side: list[int], nodes: list[list[int]]
    ) -> "ContextTreeModel":
        model = cls(arity, depth, alpha, side)
        model._children = [{} for _ in nodes]
        model._n0 = [row[2] for row in nodes]
        model._n1 = [row[3] for row in nodes]
        for v, row in enumerate(nodes):
            if row[0] >= 0:
                model._children[row[0]][row[1]] = v
        return model


class ContextTreeSession:
    """Evaluation state over a frozen ContextTreeModel.

    Holds the rolling context window and, per tree node touched by the
    evaluation, the accumulated log2 of the node's own-estimate product and
    of its mixed value.  Contexts shorter than the depth are padded with
    context symbol 0 so every step sees a full-depth path and conditionals
    stay normalized.
    """

    __slots__ = (
        "model", "adaptive", "_ring",
        "_s_children", "_s_model", "_s_lb", "_s_lp", "_s_sum", "_s_dn0", "_s_dn1",
    )

    def __init__(self, model: ContextTreeModel, history: list[int], adaptive: bool = False):
        self.model = model
        self.adaptive = adaptive
        d = model.depth
        hist = list(history[-d:]) if d else []
        self._ring = [0] * (d - len(hist)) + hist
        # session trie parallel to (and extending past) the trained tree
        self._s_children: list[dict[int, int]] = [{}]
        self._s_model: list[int] = [0]
        self._s_lb: list[float] = [0.0]
        self._s_lp: list[float] = [0.0]
        self._s_sum: list[float] = [0.0]
        self._s_dn0: list[int] = [0]
        self._s_dn1: list[int] = [0]

    def _node_path(self) -> list[int]:
        """Session node ids along the current context path, depth 0..D."""
        path = [0]
        node = 0
        model = self.model
        mnode = 0
        ring = self._ring
        for j in range(model.depth):
            sym = ring[model.depth - 1 - j]
            nxt = self._s_children[node].get(sym)
            if nxt is None:
                if mnode >= 0:
                    mnode = model._children[mnode].get(sym, -1)
                nxt = len(self._s_model)
                self._s_children[node][sym] = nxt
                self._s_children.append({})
                self._s_model.append(mnode)
                self._s_lb.append(0.0)
                self._s_lp.append(0.0)
                self._s_sum.append(0.0)
                self._s_dn0.append(0)
                self._s_dn1.append(0)
            else:
                mnode = self._s_model[nxt]
            node = nxt
            path.append(node)
        return path

    def _log_pred(self, snode: int, bit: int) -> float:
        model = self.model
        if not self.adaptive:
            mnode = self._s_model[snode]
            if mnode < 0:
                return _LOG2_HALF
            return model._freeze()[mnode][bit]
        mnode = self._s_model[snode]
        if mnode >= 0:
            z = model._n0[mnode] + self._s_dn0[snode]
            o = model._n1[mnode] + self._s_dn1[snode]
        else:
            z = self._s_dn0[snode]
            o = self._s_dn1[snode]
        a = model.alpha
        return math.log2(((o if bit else z) + a) / (z + o + 2.0 * a))

    def _compute(self, path: list[int], bit: int) -> tuple[float, list[float], list[float]]:
        """New per-node (log beta', log P') along the path for one bit, and
        the resulting log2 conditional, without committing anything."""
        depth = self.model.depth
        lb_new = [0.0] * (depth + 1)
        lp_new = [0.0] * (depth + 1)
        for d in range(depth, -1, -1):
            node = path[d]
            lb_new[d] = self._s_lb[node] + self._log_pred(node, bit)
            if d == depth:
                lp_new[d] = lb_new[d]
            else:
                child = path[d + 1]
                s_new = self._s_sum[node] + lp_new[d + 1] - self._s_lp[child]
                lp_new[d] = _log2_add(_LOG2_HALF + lb_new[d], _LOG2_HALF + s_new)
        cond = 2.0 ** (lp_new[0] - self._s_lp[0])
        return cond, lb_new, lp_new

    def _commit(self, path: list[int], bit: int, lb_new: list[float], lp_new: list[float], event: int) -> None:
        depth = self.model.depth
        for d in range(depth + 1):
            node = path[d]
            if d < depth:
                child = path[d + 1]
                self._s_sum[node] += lp_new[d + 1] - self._s_lp[child]
            self._s_lb[node] = lb_new[d]
            self._s_lp[node] = lp_new[d]
            if self.adaptive:
                if bit:
                    self._s_dn1[node] += 1
                else:
                    self._s_dn0[node] += 1
        if depth:
            ring = self._ring
            ring.pop(0)
            ring.append(event)

    def advance(self, event: int) -> float:
        """Score and consume one event symbol; returns the conditional
        probability of its outcome bit."""
        bit = self.model.side[event]
        path = self._node_path()
        cond, lb_new, lp_new = self._compute(path, bit)
        self._commit(path, bit, lb_new, lp_new, event)
        return cond

    def probe_bit(self, bit: int) -> float:
        """Conditional probability of outcome ``bit`` without consuming."""
        path = self._node_path()
        cond, _, _ = self._compute(path, bit)
        return cond

    def probe_events(self, events: list[int]) -> float:
        """Joint probability of a run of events without consuming any.

        Mutations are rolled back through an undo journal.  Nodes that were
        materialized during the probe are left allocated with identity
        values, which is equivalent to never having created them.
        """
        ring0 = list(self._ring)
        journal: list[tuple[int, float, float, float, int, int]] = []
        p = 1.0
        for e in events:
            bit = self.model.side[e]
            path = self._node_path()
            cond, lb_new, lp_new = self._compute(path, bit)
            for node in path:
                journal.append((
                    node, self._s_lb[node], self._s_lp[node], self._s_sum[node],
                    self._s_dn0[node], self._s_dn1[node],
                ))
            self._commit(path, bit, lb_new, lp_new, e)
            p *= cond
        for node, lb, lp, sm, d0, d1 in reversed(journal):
            self._s_lb[node] = lb
            self._s_lp[node] = lp
            self._s_sum[node] = sm
            self._s_dn0[node] = d0
            self._s_dn1[node] = d1
        self._ring = ring0
        return p

    def log2_total(self) -> float:
        return self._s_lp[0]
