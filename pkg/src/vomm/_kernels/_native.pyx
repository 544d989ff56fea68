# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled kernels: the per-symbol counting and scoring loops.

A 1:1 mirror of ``vomm._kernels.pure`` (same classes, same methods, same
exported node tables), with typed storage and C arithmetic.  The pure
module is the reference; behavior differences are bugs here.
"""

from cython.operator cimport dereference as deref, preincrement as inc
from libc.math cimport log2, pow
from libcpp.map cimport map as cmap
from libcpp.vector cimport vector

BACKEND_NAME = "native"

cdef double _LOG2_HALF = -1.0


cdef inline double _log2_add(double a, double b) noexcept:
    # log2(2^a + 2^b), factored around the max to stay finite
    cdef double t
    if a < b:
        t = a
        a = b
        b = t
    return a + log2(1.0 + pow(2.0, b - a))


cdef class LzTrie:
    """Phrase trie with all-children expansion and structural counts.

    A node is "expanded" exactly when its phrase (the path from the root)
    is in the dictionary; expansion materializes all k children as leaves.
    A leaf counts 1; an expanded node counts the sum of its children, so
    expanding a leaf adds k-1 to every ancestor.  The empty dictionary is a
    bare unexpanded root.
    """

    cdef public int k
    cdef vector[long] _count
    cdef vector[int] _parent
    cdef vector[int] _xorder  # 1-based expansion ordinal, 0 = leaf
    cdef vector[int] _child_off  # offset into _flat, -1 = unexpanded
    cdef vector[int] _flat  # child ids, k per expanded node
    cdef int _expansions

    def __init__(self, int k):
        self.k = k
        self._count.push_back(1)
        self._parent.push_back(-1)
        self._xorder.push_back(0)
        self._child_off.push_back(-1)
        self._expansions = 0

    # -- construction -------------------------------------------------

    cdef void _expand(self, int v):
        cdef int k = self.k
        cdef int base = <int>self._count.size()
        cdef int j, p
        self._child_off[v] = <int>self._flat.size()
        for j in range(k):
            self._flat.push_back(base + j)
            self._count.push_back(1)
            self._parent.push_back(v)
            self._xorder.push_back(0)
            self._child_off.push_back(-1)
        self._expansions += 1
        self._xorder[v] = self._expansions
        self._count[v] = k
        p = self._parent[v]
        while p >= 0:
            self._count[p] += k - 1
            p = self._parent[p]

    def parse(self, seq, int back_shift):
        """One parsing pass over ``seq``; returns (start, end) phrase spans.

        Each phrase is the shortest string not yet in the dictionary; after
        a phrase of length L ending at e, parsing resumes at
        e - min(back_shift, L).  A trailing partial phrase is discarded.
        """
        cdef vector[int] s
        for x in seq:
            s.push_back(x)
        cdef list phrases = []
        cdef int n = <int>s.size()
        cdef int pos = 0, v, i, c, length, shift
        while pos < n:
            v = 0
            i = pos
            while True:
                if i >= n:
                    return phrases  # trailing partial phrase: discard
                if self._child_off[v] < 0:
                    # only the bare root before the first phrase
                    self._expand(v)
                c = self._flat[self._child_off[v] + s[i]]
                if self._child_off[c] < 0:
                    self._expand(c)
                    phrases.append((pos, i + 1))
                    length = i + 1 - pos
                    shift = back_shift if back_shift < length else length
                    pos = i + 1 - shift
                    break
                v = c
                i += 1
        return phrases

    # -- prediction ----------------------------------------------------

    cdef int _trace_c(self, list recent):
        cdef int v = 0, c
        for sym in recent:
            if self._child_off[v] < 0:
                return 0
            c = self._flat[self._child_off[v] + <int>sym]
            if self._child_off[c] < 0:
                return 0
            v = c
        return v

    def advance_state(self, int state, int sym, recent):
        """Consume one context symbol.  ``recent`` is the trailing window of
        consumed symbols including ``sym`` (at most the back-shift length);
        it seeds the restart point when the walk steps onto a leaf."""
        if self._child_off[state] < 0:
            return state
        cdef int c = self._flat[self._child_off[state] + sym]
        if self._child_off[c] >= 0:
            return c
        return self._trace_c(list(recent))

    def reset_state(self, context, int trace_len):
        cdef list ctx = list(context)
        cdef int state = 0
        cdef int i, lo, n = len(ctx)
        for i in range(n):
            lo = i + 1 - trace_len if trace_len else i + 1
            if lo < 0:
                lo = 0
            state = self.advance_state(state, ctx[i], ctx[lo : i + 1])
        return state

    def conditional(self, int state, int sym):
        if self._child_off[state] < 0:
            return 1.0 / self.k
        cdef int c = self._flat[self._child_off[state] + sym]
        return (<double>self._count[c]) / (<double>self._count[state])

    def distribution(self, int state):
        cdef int s
        if self._child_off[state] < 0:
            return [1.0 / self.k] * self.k
        cdef double total = <double>self._count[state]
        cdef int off = self._child_off[state]
        return [self._count[self._flat[off + s]] / total for s in range(self.k)]

    # -- introspection / state -----------------------------------------

    def node_count(self):
        return <int>self._count.size()

    def is_expanded(self, int v):
        return self._child_off[v] >= 0

    def count_of(self, int v):
        return self._count[v]

    def child(self, int v, int sym):
        if self._child_off[v] < 0:
            return -1
        return self._flat[self._child_off[v] + sym]

    def expanded_paths(self):
        """Phrase paths of expanded nodes (root excluded), ordered by when
        each phrase entered the dictionary, which is parse order."""
        cdef int n = <int>self._count.size()
        cdef vector[int] syms = vector[int](n, -1)
        cdef int v, s, u, off
        for v in range(n):
            off = self._child_off[v]
            if off >= 0:
                for s in range(self.k):
                    syms[self._flat[off + s]] = s
        cdef list out = []
        cdef list path
        for v in range(1, n):
            if self._child_off[v] >= 0:
                path = []
                u = v
                while u != 0:
                    path.append(syms[u])
                    u = self._parent[u]
                path.reverse()
                out.append((self._xorder[v], path))
        out.sort()
        return [p for _, p in out]

    def export_nodes(self):
        """[parent, symbol-from-parent, count, expansion ordinal] per node,
        indexed by node id (root first with parent/symbol -1; ordinal 0
        marks a leaf)."""
        cdef int n = <int>self._count.size()
        cdef vector[int] syms = vector[int](n, -1)
        cdef int v, s, off
        for v in range(n):
            off = self._child_off[v]
            if off >= 0:
                for s in range(self.k):
                    syms[self._flat[off + s]] = s
        return [
            [self._parent[v], syms[v], self._count[v], self._xorder[v]]
            for v in range(n)
        ]

    @classmethod
    def from_nodes(cls, int k, nodes):
        cdef LzTrie trie = cls.__new__(cls)
        trie.k = k
        cdef int n = len(nodes)
        cdef int v, parent, sym, exp = 0
        trie._count.resize(n)
        trie._parent.resize(n)
        trie._xorder.resize(n)
        trie._child_off = vector[int](n, -1)
        for v in range(n):
            row = nodes[v]
            trie._parent[v] = row[0]
            trie._count[v] = row[2]
            trie._xorder[v] = row[3]
            if row[3]:
                exp += 1
        trie._expansions = 0
        for v in range(n):
            if trie._xorder[v] > trie._expansions:
                trie._expansions = trie._xorder[v]
        trie._flat = vector[int](exp * k, -1)
        exp = 0
        for v in range(n):
            if trie._xorder[v]:
                trie._child_off[v] = exp * k
                exp += 1
        for v in range(n):
            row = nodes[v]
            parent = row[0]
            sym = row[1]
            if parent >= 0:
                if trie._child_off[parent] < 0:
                    raise ValueError("node table lists a child of an unexpanded node")
                trie._flat[trie._child_off[parent] + sym] = v
        return trie


cdef class PpmTrie:
    """Substring-count trie of depth ``depth``+1.

    The counter on the path s.sigma equals the number of occurrences of the
    substring s.sigma in the training data (per training call; boundaries
    between calls are never crossed).  Scoring follows the escape recursion
    with method-C escape mass and optional exclusion.
    """

    BASE_UNIFORM = 0
    BASE_TRAIN_FREQ = 1

    cdef public int k
    cdef public int depth
    cdef vector[cmap[int, int]] _children
    cdef vector[long] _count
    cdef long _trained  # total symbols seen, for the frequency base

    def __init__(self, int k, int depth):
        cdef cmap[int, int] root
        self.k = k
        self.depth = depth
        self._children.push_back(root)
        self._count.push_back(0)
        self._trained = 0

    def fit_sequence(self, seq):
        cdef vector[int] s
        for x in seq:
            s.push_back(x)
        cdef int dmax_cap = self.depth + 1
        cdef vector[int] prev, cur
        cdef cmap[int, int] fresh
        cdef cmap[int, int].iterator it
        cdef int i, d, sym, parent, node, dmax
        cdef int n = <int>s.size()
        prev.push_back(0)
        for i in range(n):
            sym = s[i]
            dmax = dmax_cap if dmax_cap < i + 1 else i + 1
            cur.clear()
            cur.push_back(0)
            for d in range(1, dmax + 1):
                parent = prev[d - 1]
                it = self._children[parent].find(sym)
                if it == self._children[parent].end():
                    node = <int>self._count.size()
                    self._children[parent][sym] = node
                    self._children.push_back(fresh)
                    self._count.push_back(0)
                else:
                    node = deref(it).second
                self._count[node] += 1
                cur.push_back(node)
            prev = cur
        self._trained += n

    cdef int _walk_from(self, vector[int]& ctx, int start):
        cdef int node = 0
        cdef int i
        cdef cmap[int, int].iterator it
        for i in range(start, <int>ctx.size()):
            it = self._children[node].find(ctx[i])
            if it == self._children[node].end():
                return -1
            node = deref(it).second
        return node

    def conditional(self, context, int sym, bint exclusion, int base_mode):
        cdef vector[int] ctx
        cdef list clist = list(context)
        cdef int n = len(clist)
        cdef int i0 = n - self.depth if (self.depth and n > self.depth) else 0
        cdef int i
        if self.depth:
            for i in range(i0, n):
                ctx.push_back(clist[i])
        cdef vector[char] excl = vector[char](self.k, 0)
        cdef int n_excl = 0
        cdef double mult = 1.0
        cdef int start, node, s2, nkids
        cdef long total, denom, freq
        cdef int covered
        cdef cmap[int, int].iterator it, end
        for start in range(<int>ctx.size() + 1):
            node = self._walk_from(ctx, start)
            if node < 0:
                continue  # unseen context escapes with probability 1
            if self._children[node].empty():
                continue
            total = 0
            covered = n_excl
            nkids = 0
            it = self._children[node].begin()
            end = self._children[node].end()
            while it != end:
                s2 = deref(it).first
                nkids += 1
                if not excl[s2]:
                    total += self._count[deref(it).second]
                    covered += 1
                inc(it)
            denom = nkids + total
            if exclusion and covered == self.k and total > 0:
                # every symbol is excluded or seen here, so no recursion can
                # continue past this level: the escape term vanishes and the
                # seen mass carries the whole level
                denom = total
            it = self._children[node].find(sym)
            if it != self._children[node].end() and not excl[sym]:
                return mult * self._count[deref(it).second] / denom
            if denom == total:
                return 0.0
            mult *= (<double>nkids) / denom
            if exclusion:
                it = self._children[node].begin()
                while it != end:
                    s2 = deref(it).first
                    if not excl[s2]:
                        excl[s2] = 1
                        n_excl += 1
                    inc(it)
        cdef int remaining = self.k - n_excl
        if remaining <= 0:  # unreachable for queried symbols
            return 0.0
        if base_mode == 1:  # BASE_TRAIN_FREQ
            total = 0
            it = self._children[0].begin()
            end = self._children[0].end()
            while it != end:
                if not excl[deref(it).first]:
                    total += self._count[deref(it).second]
                inc(it)
            if total > 0:
                freq = 0
                it = self._children[0].find(sym)
                if it != self._children[0].end() and not excl[sym]:
                    freq = self._count[deref(it).second]
                return mult * freq / total
        return mult / remaining

    def distribution(self, context, bint exclusion, int base_mode):
        cdef int s
        return [self.conditional(context, s, exclusion, base_mode) for s in range(self.k)]

    def unigram_counts(self):
        cdef list out = [0] * self.k
        cdef cmap[int, int].iterator it = self._children[0].begin()
        cdef cmap[int, int].iterator end = self._children[0].end()
        while it != end:
            out[deref(it).first] = self._count[deref(it).second]
            inc(it)
        return out

    def node_count(self):
        return <int>self._count.size()

    def path_count(self, path):
        cdef vector[int] p
        for x in path:
            p.push_back(x)
        cdef int node = self._walk_from(p, 0)
        return 0 if node < 0 else self._count[node]

    def export_nodes(self):
        """[parent, symbol, count] per node in creation order (root first)."""
        cdef int n = <int>self._count.size()
        cdef list rows = [[0, 0, 0] for _ in range(n)]
        rows[0] = [-1, -1, self._count[0]]
        cdef int v
        cdef cmap[int, int].iterator it, end
        for v in range(n):
            it = self._children[v].begin()
            end = self._children[v].end()
            while it != end:
                rows[deref(it).second] = [v, deref(it).first, self._count[deref(it).second]]
                inc(it)
        return rows

    def export_meta(self):
        return self._trained

    @classmethod
    def from_nodes(cls, int k, int depth, nodes, long trained):
        cdef PpmTrie trie = cls.__new__(cls)
        cdef cmap[int, int] fresh
        trie.k = k
        trie.depth = depth
        trie._trained = trained
        cdef int n = len(nodes)
        cdef int v
        trie._count.resize(n)
        trie._children.resize(n)
        for v in range(n):
            row = nodes[v]
            trie._count[v] = row[2]
            if row[0] >= 0:
                trie._children[<int>row[0]][<int>row[1]] = v
        return trie


cdef class ContextTreeModel:
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

    cdef public int arity
    cdef public int depth
    cdef public double alpha
    cdef vector[int] _side
    cdef vector[cmap[int, int]] _children
    cdef vector[long] _n0
    cdef vector[long] _n1
    cdef vector[double] _lp0
    cdef vector[double] _lp1
    cdef bint _frozen

    def __init__(self, int arity, int depth, double alpha, side):
        cdef cmap[int, int] root
        if arity < 1:
            raise ValueError("context arity must be >= 1")
        side_list = list(side)
        if len(side_list) != arity or any(b not in (0, 1) for b in side_list):
            raise ValueError("side must map every context symbol to a bit")
        if not (alpha > 0.0):
            raise ValueError("alpha must be positive")
        self.arity = arity
        self.depth = depth
        self.alpha = alpha
        for b in side_list:
            self._side.push_back(b)
        self._children.push_back(root)
        self._n0.push_back(0)
        self._n1.push_back(0)
        self._frozen = False

    @property
    def side(self):
        return [self._side[i] for i in range(<int>self._side.size())]

    def fit_stream(self, stream):
        cdef vector[int] s
        for x in stream:
            s.push_back(x)
        self._frozen = False
        cdef cmap[int, int] fresh
        cdef cmap[int, int].iterator it
        cdef int depth = self.depth
        cdef int i, j, b, sym, node, nxt
        cdef int n = <int>s.size()
        for i in range(depth, n):
            b = self._side[s[i]]
            node = 0
            for j in range(depth + 1):
                if b:
                    self._n1[node] += 1
                else:
                    self._n0[node] += 1
                if j == depth:
                    break
                sym = s[i - j - 1]
                it = self._children[node].find(sym)
                if it == self._children[node].end():
                    nxt = <int>self._n0.size()
                    self._children[node][sym] = nxt
                    self._children.push_back(fresh)
                    self._n0.push_back(0)
                    self._n1.push_back(0)
                else:
                    nxt = deref(it).second
                node = nxt

    cdef void _ensure_frozen(self):
        if self._frozen:
            return
        cdef int n = <int>self._n0.size()
        cdef int v
        cdef double a = self.alpha, z, o, denom
        self._lp0.resize(n)
        self._lp1.resize(n)
        for v in range(n):
            z = <double>self._n0[v]
            o = <double>self._n1[v]
            denom = z + o + 2.0 * a
            self._lp0[v] = log2((z + a) / denom)
            self._lp1[v] = log2((o + a) / denom)
        self._frozen = True

    def counters(self, path):
        """Counts at the node whose context string is ``path`` (chronological
        order, most recent symbol last); unmaterialized nodes count (0,0)."""
        cdef int node = 0
        cdef cmap[int, int].iterator it
        for sym in reversed(list(path)):
            it = self._children[node].find(<int>sym)
            if it == self._children[node].end():
                return (0, 0)
            node = deref(it).second
        return (self._n0[node], self._n1[node])

    def node_count(self):
        return <int>self._n0.size()

    def export_nodes(self):
        cdef int n = <int>self._n0.size()
        cdef list rows = [[0, 0, 0, 0] for _ in range(n)]
        rows[0] = [-1, -1, self._n0[0], self._n1[0]]
        cdef int v
        cdef cmap[int, int].iterator it, end
        for v in range(n):
            it = self._children[v].begin()
            end = self._children[v].end()
            while it != end:
                rows[deref(it).second] = [v, deref(it).first, self._n0[deref(it).second], self._n1[deref(it).second]]
                inc(it)
        return rows

    @classmethod
    def from_nodes(cls, int arity, int depth, double alpha, side, nodes):
        cdef ContextTreeModel model = cls(arity, depth, alpha, side)
        cdef int n = len(nodes)
        cdef int v
        model._children.resize(n)
        model._n0.resize(n)
        model._n1.resize(n)
        for v in range(n):
            row = nodes[v]
            model._n0[v] = row[2]
            model._n1[v] = row[3]
            if row[0] >= 0:
                model._children[<int>row[0]][<int>row[1]] = v
        return model


cdef class ContextTreeSession:
    """Evaluation state over a frozen ContextTreeModel.

    Holds the rolling context window and, per tree node touched by the
    evaluation, the accumulated log2 of the node's own-estimate product and
    of its mixed value.  Contexts shorter than the depth are padded with
    context symbol 0 so every step sees a full-depth path and conditionals
    stay normalized.
    """

    cdef public ContextTreeModel model
    cdef public bint adaptive
    cdef vector[int] _ring
    # session trie parallel to (and extending past) the trained tree
    cdef vector[cmap[int, int]] _s_children
    cdef vector[int] _s_model
    cdef vector[double] _s_lb
    cdef vector[double] _s_lp
    cdef vector[double] _s_sum
    cdef vector[long] _s_dn0
    cdef vector[long] _s_dn1
    cdef vector[int] _path  # scratch: node ids along the current context
    cdef vector[double] _lb_new
    cdef vector[double] _lp_new

    def __init__(self, ContextTreeModel model, history, adaptive=False):
        cdef cmap[int, int] root
        self.model = model
        self.adaptive = bool(adaptive)
        cdef int d = model.depth
        cdef list hist = list(history)[-d:] if d else []
        cdef int i
        for i in range(d - len(hist)):
            self._ring.push_back(0)
        for x in hist:
            self._ring.push_back(x)
        self._s_children.push_back(root)
        self._s_model.push_back(0)
        self._s_lb.push_back(0.0)
        self._s_lp.push_back(0.0)
        self._s_sum.push_back(0.0)
        self._s_dn0.push_back(0)
        self._s_dn1.push_back(0)
        self._path.resize(d + 1)
        self._lb_new.resize(d + 1)
        self._lp_new.resize(d + 1)

    cdef void _node_path(self):
        """Session node ids along the current context path, depth 0..D."""
        cdef int node = 0, mnode = 0, nxt, j, sym
        cdef int depth = self.model.depth
        cdef cmap[int, int] fresh
        cdef cmap[int, int].iterator it
        self._path[0] = 0
        for j in range(depth):
            sym = self._ring[depth - 1 - j]
            it = self._s_children[node].find(sym)
            if it == self._s_children[node].end():
                if mnode >= 0:
                    it = self.model._children[mnode].find(sym)
                    if it == self.model._children[mnode].end():
                        mnode = -1
                    else:
                        mnode = deref(it).second
                nxt = <int>self._s_model.size()
                self._s_children[node][sym] = nxt
                self._s_children.push_back(fresh)
                self._s_model.push_back(mnode)
                self._s_lb.push_back(0.0)
                self._s_lp.push_back(0.0)
                self._s_sum.push_back(0.0)
                self._s_dn0.push_back(0)
                self._s_dn1.push_back(0)
            else:
                nxt = deref(it).second
                mnode = self._s_model[nxt]
            node = nxt
            self._path[j + 1] = node

    cdef double _log_pred(self, int snode, int bit):
        cdef ContextTreeModel model = self.model
        cdef int mnode = self._s_model[snode]
        cdef long z, o
        cdef double a
        if not self.adaptive:
            if mnode < 0:
                return _LOG2_HALF
            model._ensure_frozen()
            return model._lp1[mnode] if bit else model._lp0[mnode]
        if mnode >= 0:
            z = model._n0[mnode] + self._s_dn0[snode]
            o = model._n1[mnode] + self._s_dn1[snode]
        else:
            z = self._s_dn0[snode]
            o = self._s_dn1[snode]
        a = model.alpha
        return log2(((o if bit else z) + a) / (z + o + 2.0 * a))

    cdef double _compute(self, int bit):
        """New per-node (log beta', log P') along the current path for one
        bit, written to scratch, and the log2 conditional; commits nothing."""
        cdef int depth = self.model.depth
        cdef int d, node, child
        cdef double s_new
        for d in range(depth, -1, -1):
            node = self._path[d]
            self._lb_new[d] = self._s_lb[node] + self._log_pred(node, bit)
            if d == depth:
                self._lp_new[d] = self._lb_new[d]
            else:
                child = self._path[d + 1]
                s_new = self._s_sum[node] + self._lp_new[d + 1] - self._s_lp[child]
                self._lp_new[d] = _log2_add(_LOG2_HALF + self._lb_new[d], _LOG2_HALF + s_new)
        return pow(2.0, self._lp_new[0] - self._s_lp[0])

    cdef void _commit(self, int bit, int event):
        cdef int depth = self.model.depth
        cdef int d, node, child
        for d in range(depth + 1):
            node = self._path[d]
            if d < depth:
                child = self._path[d + 1]
                self._s_sum[node] += self._lp_new[d + 1] - self._s_lp[child]
            self._s_lb[node] = self._lb_new[d]
            self._s_lp[node] = self._lp_new[d]
            if self.adaptive:
                if bit:
                    self._s_dn1[node] += 1
                else:
                    self._s_dn0[node] += 1
        if depth:
            self._ring.erase(self._ring.begin())
            self._ring.push_back(event)

    def advance(self, int event):
        """Score and consume one event symbol; returns the conditional
        probability of its outcome bit."""
        cdef int bit = self.model._side[event]
        self._node_path()
        cdef double cond = self._compute(bit)
        self._commit(bit, event)
        return cond

    def probe_bit(self, int bit):
        """Conditional probability of outcome ``bit`` without consuming."""
        self._node_path()
        return self._compute(bit)

    def probe_events(self, events):
        """Joint probability of a run of events without consuming any.

        Mutations are rolled back through an undo journal.  Nodes that were
        materialized during the probe are left allocated with identity
        values, which is equivalent to never having created them.
        """
        cdef vector[int] ring0 = self._ring
        cdef vector[int] jnode
        cdef vector[double] jlb, jlp, jsum
        cdef vector[long] jd0, jd1
        cdef double p = 1.0
        cdef int e, bit, d, node
        cdef int depth = self.model.depth
        cdef Py_ssize_t i
        for x in events:
            e = x
            bit = self.model._side[e]
            self._node_path()
            for d in range(depth + 1):
                node = self._path[d]
                jnode.push_back(node)
                jlb.push_back(self._s_lb[node])
                jlp.push_back(self._s_lp[node])
                jsum.push_back(self._s_sum[node])
                jd0.push_back(self._s_dn0[node])
                jd1.push_back(self._s_dn1[node])
            p *= self._compute(bit)
            self._commit(bit, e)
        for i in range(<Py_ssize_t>jnode.size() - 1, -1, -1):
            node = jnode[i]
            self._s_lb[node] = jlb[i]
            self._s_lp[node] = jlp[i]
            self._s_sum[node] = jsum[i]
            self._s_dn0[node] = jd0[i]
            self._s_dn1[node] = jd1[i]
        self._ring = ring0
        return p

    def log2_total(self):
        return self._s_lp[0]
