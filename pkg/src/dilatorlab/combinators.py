"""Dilator-forming operations.

Tree-shaped combinators (arrow, join, bigjoin) use the Kleene-Brouwer order:
a proper extension is smaller, and otherwise the first differing entry
decides.  Terms are structural tuples whose argument slots are positions in
``range(arity)``; an instance supplies the actual elements.
"""

from __future__ import annotations

from functools import cmp_to_key
from itertools import count
from typing import Callable, Optional, Sequence

from ._coding import flat, placements, shortlex
from .diagram import ArityDiagram, diag_from_tuples
from .dilator import ConstDilator, IdDilator, Semidilator, DilEmbedding
from .errors import DescentExhausted, InvariantError, NotInField
from .linorder import (
    Applied,
    Finite,
    Inst,
    Order,
    Sum,
    and3,
    embedding_map,
    lo_restrict,
    or3,
    order_embeds,
)


def _icmp(a, b):
    return (a > b) - (a < b)


def _ind(P, Q) -> ArityDiagram:
    """Diagram induced by two increasing position tuples."""
    return diag_from_tuples(_icmp, P, Q)


def _sub(e: Sequence[int], P: Sequence[int]) -> tuple:
    return tuple(e[p] for p in P)


def _lex(a: Sequence, b: Sequence) -> int:
    for x, y in zip(a, b):
        if x != y:
            return -1 if x < y else 1
    return _icmp(len(a), len(b))


def _shortlex_cmp(a: tuple, b: tuple) -> int:
    return _lex(shortlex(a), shortlex(b)) if a != b else 0


def _interleave(*seqs):
    """Round-robin over several LazySeqs, tagging items with the source index."""
    for r in count():
        alive = False
        for k, s in enumerate(seqs):
            if s.has(r):
                alive = True
                yield k, s.get(r)
        if not alive:
            return


# ---------------------------------------------------------------------------
# Ordered sum


class SumDilator(Semidilator):
    def __init__(self, D0: Semidilator, D1: Semidilator):
        super().__init__()
        self.parts = (D0, D1)
        self.name = f"({D0.name} ^ {D1.name})"
        self.finite = D0.finite and D1.finite

    def _terms(self, bound):
        return ((k, t) for k, t in _interleave(*(D.term_seq(bound) for D in self.parts)))

    def arity(self, t):
        return self.parts[t[0]].arity(t[1])

    def has_term(self, t):
        return (
            isinstance(t, tuple) and len(t) == 2 and t[0] in (0, 1)
            and self.parts[t[0]].has_term(t[1])
        )

    def code(self, t):
        return flat((t[0],), self.parts[t[0]].code(t[1]))

    def _less(self, s, t, d):
        if s[0] != t[0]:
            return s[0] < t[0]
        return self.parts[s[0]].less(s[1], t[1], d)

    def finite_upto(self, n):
        return all(D.finite_upto(n) for D in self.parts)

    def monotone_status(self):
        return and3(*(D.monotone_status() for D in self.parts))

    def dilator_status(self):
        return and3(*(D.dilator_status() for D in self.parts))

    def wf_at(self, X):
        return and3(*(D.wf_at(X) for D in self.parts))

    def descent_at(self, X, length):
        for k, D in enumerate(self.parts):
            if D.wf_at(X) is True:
                continue
            ds = D.descent_at(X, length)
            if ds is not None:
                return [Inst((k, x.term), x.args) for x in ds]
        return None

    def to_json(self):
        return {"op": "sum", "args": [D.to_json() for D in self.parts]}


def c_sum(D0: Semidilator, D1: Semidilator) -> SumDilator:
    return SumDilator(D0, D1)


def sum_injection(D0: Semidilator, D1: Semidilator, k: int = 0) -> DilEmbedding:
    S = SumDilator(D0, D1)
    return DilEmbedding((D0, D1)[k], S, lambda t: (k, t))


# ---------------------------------------------------------------------------
# Staged enumeration of finitely branching term trees
#
# A node's level bounds everything needed to produce it (depth, component term
# indices, support size).  Stage k walks all nodes of level <= k and emits
# those of level exactly k, so every node appears once, at a finite stage.
# Enumeration ends at the first stage that cut nothing off.


def _staged(root, children):
    """``children(node, k)`` returns (list of (child, level), pruned flag)."""
    yield root
    for k in count(1):
        pruned = False
        stack = [root]
        while stack:
            node = stack.pop()
            kids, cut = children(node, k)
            pruned = pruned or cut
            for child, level in reversed(kids):
                if level == k:
                    yield child
                stack.append(child)
        if not pruned:
            return


def _remap(P, image):
    return tuple(image[p] for p in P)


def _support(term_positions) -> int:
    s = set()
    for P in term_positions:
        s.update(P)
    return len(s)


def _kb_less(u, v, entry_cmp) -> bool:
    for i in range(min(len(u), len(v))):
        c = entry_cmp(i, u[i], v[i])
        if c:
            return c < 0
    return len(u) > len(v)


def _pack(entries_args: Sequence[Sequence[Sequence]], X: Order):
    """Turn rows of actual argument tuples into (support, position tuples)."""
    elems = {}
    for row in entries_args:
        for a in row:
            for x in a:
                elems[x] = None
    support = tuple(X.sort(list(elems)))
    pos = {x: i for i, x in enumerate(support)}
    return support, [[tuple(pos[x] for x in a) for a in row] for row in entries_args]


# ---------------------------------------------------------------------------
# Arrow


class ArrowDilator(Semidilator):
    """``(alpha -> beta)``: a search tree for an embedding of alpha plus a descent in beta.

    Finite alpha = n: a node of depth ``m <= n`` fixes the images of the first
    ``m`` elements of alpha.  Deeper nodes extend a full embedding by a strictly
    descending sequence of beta labels, and siblings there compare in beta.
    Terms are ``(k, labels)`` with arity ``k = min(depth, n)``.

    Infinite alpha: entry ``i`` pairs the image of the i-th enumerated alpha
    element with a beta label; siblings compare by image, then by label code.
    Terms are ``(depth, labels)`` with arity ``depth``.
    """

    def __init__(self, alpha: Order, beta: Order):
        super().__init__()
        self.alpha, self.beta = alpha, beta
        self.n = alpha.size()
        self.name = f"({alpha} -> {beta})"

    def _label_sets(self, max_size):
        """Non-empty finite subsets of beta, as beta-descending tuples."""
        B = self.beta
        seq = B.seq
        if max_size is not None and max_size < 1:
            return
        for s in count(1):
            if not seq.has(s - 1):
                return
            newest = seq.get(s - 1)
            older = [seq.get(i) for i in range(s - 1)]
            cap = len(older) if max_size is None else min(len(older), max_size - 1)
            for r in range(cap + 1):
                for rest in _combos(older, r):
                    yield tuple(sorted(rest + (newest,), key=cmp_to_key(B.cmp), reverse=True))

    def _terms(self, bound):
        n = self.n
        if n is not None:
            for k in range(n + 1):
                if bound is None or k <= bound:
                    yield (k, ())
            if bound is None or bound >= n:
                for labels in self._label_sets(None):
                    yield (n, labels)
        else:
            yield (0, ())
            for labels in self._label_sets(bound):
                yield (len(labels), labels)

    def arity(self, t):
        return t[0]

    def has_term(self, t):
        if not (isinstance(t, tuple) and len(t) == 2 and isinstance(t[0], int) and isinstance(t[1], tuple)):
            return False
        k, labels = t
        B = self.beta
        if not all(B.contains(b) for b in labels):
            return False
        if not all(B.cmp(a, b) > 0 for a, b in zip(labels, labels[1:])):
            return False
        if self.n is not None:
            return 0 <= k <= self.n and (not labels or k == self.n)
        return k == len(labels)

    def code(self, t):
        return flat((t[0],), *(self.beta.code(b) for b in t[1]))

    def _ranks(self, m):
        key = ("ranks", m)
        r = self._cache.get(key)
        if r is None:
            xs = self.alpha.prefix(m)
            srt = self.alpha.sort(xs)
            r = tuple(srt.index(x) for x in xs)
            self._cache[key] = r
        return r

    def _less(self, s, t, d):
        (k0, L0), (k1, L1) = s, t
        n = self.n
        if n is not None:
            d0, d1 = k0 + len(L0), k1 + len(L1)
            for i in range(min(d0, d1)):
                if i < n:
                    a, b = d.e0[i], d.e1[i]
                    if a != b:
                        return a < b
                else:
                    c = self.beta.cmp(L0[i - n], L1[i - n])
                    if c:
                        return c < 0
            return d0 > d1
        r0, r1 = self._ranks(k0), self._ranks(k1)
        for i in range(min(k0, k1)):
            a, b = d.e0[r0[i]], d.e1[r1[i]]
            if a != b:
                return a < b
            c = _shortlex_cmp(self.beta.code(L0[i]), self.beta.code(L1[i]))
            if c:
                return c < 0
        return k0 > k1

    def finite_upto(self, n):
        if self.n is not None and n < self.n:
            return True
        return self.beta.size() is not None

    def dilator_status(self):
        bw = self.beta.is_wellfounded()
        if bw is True:
            return True
        aw = self.alpha.is_wellfounded()
        if aw is False:
            return True
        if aw is True and bw is False:
            return False
        return None

    def wf_at(self, X):
        if X.size() is not None and self.finite_upto(X.size()):
            return True
        if X.is_wellfounded() is not True:
            return None
        if self.beta.is_wellfounded() is True:
            return True
        if self.n is None and self.alpha.is_wellfounded() is False:
            return True
        emb = order_embeds(self.alpha, X)
        if emb is False:
            return True
        if emb is True and self.beta.is_wellfounded() is False:
            return False
        return None

    def descent_at(self, X, length):
        bs = self.beta.descent(length)
        if bs is None:
            return None
        if self.n is not None:
            xs = X.prefix(self.n)
            if len(xs) < self.n:
                return None
            args = tuple(X.sort(xs))
            return [Inst((self.n, (b,)), args) for b in bs]
        f = embedding_map(self.alpha, X)
        if f is None:
            return None
        out = []
        for m in range(1, length + 1):
            imgs = [f(a) for a in self.alpha.prefix(m)]
            if any(y is None for y in imgs):
                return None
            out.append(Inst((m, tuple(bs[:m])), tuple(X.sort(imgs))))
        return out

    def to_json(self):
        return {"op": "arrow", "args": [self.alpha.to_json(), self.beta.to_json()]}


def _combos(items, r):
    from itertools import combinations

    return (tuple(c) for c in combinations(items, r))


def c_arrow(alpha: Order, beta: Order) -> ArrowDilator:
    return ArrowDilator(alpha, beta)


def arrow_beta_embedding(A: ArrowDilator, b) -> Inst:
    """The image of ``b`` under the embedding of beta into ``A(alpha)`` (finite alpha)."""
    if A.n is None:
        raise NotImplementedError("beta embedding is provided for finite alpha only")
    if not A.beta.contains(b):
        raise NotInField(b, A.beta)
    return Inst((A.n, (b,)), tuple(A.alpha.elements()))


# ---------------------------------------------------------------------------
# Join


class JoinDilator(Semidilator):
    """``D0 v D1``: finite sequences of pairs descending in both components.

    A term is a tuple of entries ``(s, P, t, Q)`` where ``s`` is a D0 term with
    argument positions ``P`` and ``t`` a D1 term with positions ``Q``, all
    positions inside ``range(arity)``.  The empty tuple is the root.
    """

    def __init__(self, D0: Semidilator, D1: Semidilator):
        super().__init__()
        self.D0, self.D1 = D0, D1
        self.name = f"({D0.name} v {D1.name})"

    def _terms(self, bound):
        D0, D1 = self.D0, self.D1
        s0, s1 = D0.term_seq(bound), D1.term_seq(bound)

        def children(node, k):
            entries, m, depth = node
            if depth + 1 > k:
                return [], True
            pruned = s0.has(k) or s1.has(k)
            cap = k if bound is None else min(k, bound)
            kids = []
            for i0 in range(k):
                if not s0.has(i0):
                    break
                s = s0.get(i0)
                a0 = D0.arity(s)
                for i1 in range(k):
                    if not s1.has(i1):
                        break
                    t = s1.get(i1)
                    a1 = D1.arity(t)
                    if m + a0 + a1 > cap and (bound is None or bound > k):
                        pruned = True
                    for m2, image, (P, Q) in placements(m, (a0, a1), cap):
                        if entries:
                            ls, lP, lt, lQ = entries[-1]
                            lP, lQ = _remap(lP, image), _remap(lQ, image)
                            if not D0.less(s, ls, _ind(P, lP)) or not D1.less(t, lt, _ind(Q, lQ)):
                                continue
                        new = tuple((es, _remap(eP, image), et, _remap(eQ, image)) for es, eP, et, eQ in entries)
                        level = max(depth + 1, i0 + 1, i1 + 1, m2)
                        kids.append(((new + ((s, P, t, Q),), m2, depth + 1), level))
            return kids, pruned

        for node in _staged(((), 0, 0), children):
            yield node[0]

    def arity(self, t):
        return _support(p for e in t for p in (e[1], e[3]))

    def has_term(self, u):
        if not isinstance(u, tuple):
            return False
        D0, D1 = self.D0, self.D1
        try:
            for e in u:
                s, P, t, Q = e
                if not (D0.has_term(s) and D1.has_term(t)):
                    return False
                if len(P) != D0.arity(s) or len(Q) != D1.arity(t):
                    return False
                for R in (P, Q):
                    if not all(isinstance(p, int) and p >= 0 for p in R) or list(R) != sorted(set(R)):
                        return False
        except (TypeError, ValueError):
            return False
        used = set()
        for e in u:
            used.update(e[1])
            used.update(e[3])
        if used != set(range(len(used))):
            return False
        for (s, P, t, Q), (s2, P2, t2, Q2) in zip(u, u[1:]):
            if not D0.less(s2, s, _ind(P2, P)) or not D1.less(t2, t, _ind(Q2, Q)):
                return False
        return True

    def code(self, u):
        return flat(*(flat(self.D0.code(s), P, self.D1.code(t), Q) for s, P, t, Q in u))

    def _entry_cmp(self, d):
        D0, D1 = self.D0, self.D1

        def cmp(i, x, y):
            s, P, t, Q = x
            s2, P2, t2, Q2 = y
            if s != s2:
                c = _shortlex_cmp(D0.code(s), D0.code(s2))
                if c:
                    return c
            if t != t2:
                c = _shortlex_cmp(D1.code(t), D1.code(t2))
                if c:
                    return c
            c = _lex(_sub(d.e0, P), _sub(d.e1, P2))
            if c:
                return c
            return _lex(_sub(d.e0, Q), _sub(d.e1, Q2))

        return cmp

    def _less(self, u, v, d):
        return _kb_less(u, v, self._entry_cmp(d))

    def finite_upto(self, n):
        return self.D0.finite_upto(n) and self.D1.finite_upto(n)

    def dilator_status(self):
        return or3(self.D0.dilator_status(), self.D1.dilator_status())

    def wf_at(self, X):
        if X.size() is not None and self.finite_upto(X.size()):
            return True
        w0, w1 = self.D0.wf_at(X), self.D1.wf_at(X)
        if w0 is False and w1 is False:
            return False
        if X.is_wellfounded() is True and (w0 is True or w1 is True):
            return True
        return None

    def descent_at(self, X, length):
        xs = self.D0.descent_at(X, length)
        ys = self.D1.descent_at(X, length)
        if xs is None or ys is None:
            return None
        return [self.pack(list(zip(xs[:k + 1], ys[:k + 1])), X) for k in range(length)]

    def pack(self, pairs: Sequence[tuple[Inst, Inst]], X: Order) -> Inst:
        """The instance for a node given by actual pairs of instances."""
        support, rows = _pack([(x.args, y.args) for x, y in pairs], X)
        term = tuple((x.term, P, y.term, Q) for (x, y), (P, Q) in zip(pairs, rows))
        return Inst(term, support)

    def to_json(self):
        return {"op": "join", "args": [self.D0.to_json(), self.D1.to_json()]}


def c_join(D0: Semidilator, D1: Semidilator) -> JoinDilator:
    return JoinDilator(D0, D1)


def join_domain(D0: Semidilator, alpha: Order, size: int, window: int | None = None) -> list:
    """``size`` elements of ``D0(alpha)`` listed in sibling-key order (term code, then arguments)."""
    X = Applied(D0, alpha)
    pool = X.prefix(window or size)
    if len(pool) < size:
        raise DescentExhausted(f"D0({alpha}) has fewer than {size} enumerated elements")

    def key_cmp(x, y):
        c = _shortlex_cmp(D0.code(x.term), D0.code(y.term)) if x.term != y.term else 0
        if c:
            return c
        for a, b in zip(x.args, y.args):
            c = alpha.cmp(a, b)
            if c:
                return c
        return 0

    return sorted(pool, key=cmp_to_key(key_cmp))[:size]


def c_join_embedding(D0: Semidilator, D1: Semidilator, alpha: Order, b: Sequence, size: int = 10) -> dict:
    """The embedding ``e^b`` of ``D0(alpha)`` into ``(D0 v D1)(alpha)`` on a finite domain.

    ``b`` is a verified descent in ``D1(alpha)``.  Domain elements are processed
    in sibling-key order.  A new maximum maps to the singleton ``<(x, b_0)>``;
    otherwise the image extends the image of the least earlier element above
    ``x`` by ``(x, b_l)``.  Returns a dict from domain elements to instances.
    """
    J = JoinDilator(D0, D1)
    X0 = Applied(D0, alpha)
    b = list(getattr(b, "elements", b))
    domain = join_domain(D0, alpha, size)
    images: dict = {}
    paths: dict = {}
    seen: list = []
    for x in domain:
        above = [y for y in seen if X0.cmp(x, y) < 0]
        if not above:
            path = [(x, b[0])] if b else None
        else:
            mu = min(above, key=cmp_to_key(X0.cmp))
            path = paths[mu] + [(x, b[len(paths[mu])] if len(paths[mu]) < len(b) else None)]
        if path is None or path[-1][1] is None:
            raise DescentExhausted(f"the descent b has length {len(b)}; need more")
        paths[x] = path
        images[x] = J.pack(path, alpha)
        seen.append(x)
    return images


# ---------------------------------------------------------------------------
# Countable join


class BigJoinDilator(Semidilator):
    """``V_n D_n``: triangular arrays whose row i descends in ``D_i``.

    A term is a tuple of columns; column ``c`` is a tuple of ``(s, P)`` for
    rows ``0..c``.  Siblings compare by the shortlex code of the column's
    terms, then by the concatenated argument images.
    """

    PROBE_ROWS = 16

    def __init__(self, stream):
        super().__init__()
        if callable(stream):
            self._fn, self._list = stream, None
        else:
            self._list = list(stream)
            if not self._list:
                raise ValueError("bigjoin needs at least one row")
            self._fn = None
        self._rows: dict = {}
        self.name = "bigjoin(" + ", ".join(D.name for D in (self._list or [])) + ("..." if self._fn else "") + ")"

    def row(self, i: int) -> Semidilator:
        if i not in self._rows:
            if self._list is not None:
                self._rows[i] = self._list[min(i, len(self._list) - 1)]
            else:
                self._rows[i] = self._fn(i)
        return self._rows[i]

    def _terms(self, bound):
        seqs = {}

        def seq(j):
            if j not in seqs:
                seqs[j] = self.row(j).term_seq(bound)
            return seqs[j]

        def children(node, k):
            cols, m = node
            c = len(cols)
            if c + 1 > k:
                return [], True
            pruned = any(seq(j).has(k) for j in range(c + 1))
            cap = k if bound is None else min(k, bound)
            pools = []
            for j in range(c + 1):
                pool = [(i, seq(j).get(i)) for i in range(k) if seq(j).has(i)]
                if not pool:
                    return [], pruned
                pools.append(pool)
            kids = []
            for choice in _choices(pools):
                terms = [t for _, t in choice]
                ars = [self.row(j).arity(t) for j, t in enumerate(terms)]
                if m + sum(ars) > cap and (bound is None or bound > k):
                    pruned = True
                top_idx = max(i for i, _ in choice)
                for m2, image, placed in placements(m, ars, cap):
                    ok = True
                    if cols:
                        last = cols[-1]
                        for j in range(c):
                            ls, lP = last[j]
                            if not self.row(j).less(terms[j], ls, _ind(placed[j], _remap(lP, image))):
                                ok = False
                                break
                    if not ok:
                        continue
                    new = tuple(tuple((s, _remap(P, image)) for s, P in col) for col in cols)
                    col = tuple(zip(terms, placed))
                    level = max(c + 1, top_idx + 1, m2)
                    kids.append(((new + (col,), m2), level))
            return kids, pruned

        for node in _staged(((), 0), children):
            yield node[0]

    def arity(self, u):
        return _support(P for col in u for _, P in col)

    def has_term(self, u):
        if not isinstance(u, tuple):
            return False
        try:
            for c, col in enumerate(u):
                if len(col) != c + 1:
                    return False
                for j, (s, P) in enumerate(col):
                    D = self.row(j)
                    if not D.has_term(s) or len(P) != D.arity(s) or list(P) != sorted(set(P)):
                        return False
        except (TypeError, ValueError):
            return False
        used = set()
        for col in u:
            for _, P in col:
                used.update(P)
        if used != set(range(len(used))):
            return False
        for c in range(1, len(u)):
            for j in range(c):
                s, P = u[c][j]
                ls, lP = u[c - 1][j]
                if not self.row(j).less(s, ls, _ind(P, lP)):
                    return False
        return True

    def code(self, u):
        return flat(*(flat(*(flat(self.row(j).code(s), P) for j, (s, P) in enumerate(col))) for col in u))

    def _less(self, u, v, d):
        def cmp(i, x, y):
            if x != y:
                cx = flat(*(self.row(j).code(s) for j, (s, _) in enumerate(x)))
                cy = flat(*(self.row(j).code(s) for j, (s, _) in enumerate(y)))
                c = _shortlex_cmp(cx, cy)
                if c:
                    return c
            ix = tuple(d.e0[p] for _, P in x for p in P)
            iy = tuple(d.e1[p] for _, P in y for p in P)
            return _lex(ix, iy)

        return _kb_less(u, v, cmp)

    def finite_upto(self, n):
        D0 = self.row(0)
        if not D0.finite_upto(n):
            return False
        depth = sum(1 for _ in D0.terms_upto(n)) * (2 ** n)  # bound on |D0(n)|, hence on columns
        return all(self.row(j).finite_upto(n) for j in range(min(depth, self.PROBE_ROWS)))

    def _rows_probed(self):
        return len(self._list) if self._list is not None else self.PROBE_ROWS

    def dilator_status(self):
        vals = [self.row(j).dilator_status() for j in range(self._rows_probed())]
        if any(v is True for v in vals):
            return True
        if self._list is not None and all(v is False for v in vals):
            return False
        return None

    def wf_at(self, X):
        if X.size() is not None and self.finite_upto(X.size()):
            return True
        vals = [self.row(j).wf_at(X) for j in range(self._rows_probed())]
        if X.is_wellfounded() is True and any(v is True for v in vals):
            return True
        if self._list is not None and all(v is False for v in vals):
            return False
        return None

    def descent_at(self, X, length):
        rows = []
        for i in range(length):
            w = self.row(i).descent_at(X, length - i)
            if w is None:
                return None
            rows.append(w)
        out = []
        for c in range(length):
            cols = [[rows[j][cc - j] for j in range(cc + 1)] for cc in range(c + 1)]
            out.append(self.pack(cols, X))
        return out

    def pack(self, cols: Sequence[Sequence[Inst]], X: Order) -> Inst:
        support, pos = _pack([[x.args for x in col] for col in cols], X)
        term = tuple(tuple((x.term, P) for x, P in zip(col, pcol)) for col, pcol in zip(cols, pos))
        return Inst(term, support)

    def to_json(self):
        if self._list is None:
            raise NotImplementedError("stream given by a function has no JSON form")
        return {"op": "bigjoin", "args": [D.to_json() for D in self._list]}


def _choices(pools):
    if not pools:
        yield ()
        return
    for head in pools[0]:
        for rest in _choices(pools[1:]):
            yield (head,) + rest


def c_bigjoin(stream) -> BigJoinDilator:
    """``stream`` is a non-empty list (padded by repeating its last entry) or a function ``i -> D_i``."""
    return BigJoinDilator(stream)


# ---------------------------------------------------------------------------
# Integral


class IntegralDilator(Semidilator):
    """``int D``: terms ``("int", t)`` with one extra, top, argument.

    The last argument is compared first; on a tie ``D`` decides on the rest.
    So ``int D (X)`` is the sum of ``D(X restricted to i)`` over ``i`` in X.
    """

    SCAN = 64

    def __init__(self, D: Semidilator):
        super().__init__()
        self.D = D
        self.name = f"int({D.name})"
        self.finite = D.finite

    def _terms(self, bound):
        if bound is not None and bound < 1:
            return iter(())
        return (("int", t) for t in self.D.term_seq(None if bound is None else bound - 1).seq_iter())

    def arity(self, t):
        return self.D.arity(t[1]) + 1

    def has_term(self, t):
        return isinstance(t, tuple) and len(t) == 2 and t[0] == "int" and self.D.has_term(t[1])

    def code(self, t):
        return self.D.code(t[1])

    def _less(self, s, t, d):
        a, b = d.e0[-1], d.e1[-1]
        if a != b:
            return a < b
        e0, e1 = d.e0[:-1], d.e1[:-1]
        return self.D.less(s[1], t[1], diag_from_tuples(_icmp, e0, e1) if (e0 or e1) else ArityDiagram((), (), 0))

    def finite_upto(self, n):
        return n == 0 or self.D.finite_upto(n - 1)

    def monotone_status(self):
        return self.D.monotone_status()

    def dilator_status(self):
        return self.D.dilator_status()

    def _points(self, X):
        n = X.size()
        return X.elements() if n is not None else X.prefix(self.SCAN)

    def wf_at(self, X):
        if X.size() is not None and self.finite_upto(X.size()):
            return True
        if X.is_wellfounded() is not True:
            return super().wf_at(X)
        if self.D.dilator_status() is True:
            return True
        vals = []
        for i in self._points(X):
            v = self.D.wf_at(lo_restrict(X, i))
            if v is False:
                return False
            vals.append(v)
        if X.size() is not None and all(v is True for v in vals):
            return True
        return None

    def descent_at(self, X, length):
        for i in self._points(X):
            R = lo_restrict(X, i)
            if self.D.wf_at(R) is True:
                continue
            ds = self.D.descent_at(R, length)
            if ds is not None:
                return [Inst(("int", x.term), x.args + (i,)) for x in ds]
        return super().descent_at(X, length)

    def to_json(self):
        return {"op": "integral", "args": [self.D.to_json()]}


def c_integral(D: Semidilator) -> IntegralDilator:
    return IntegralDilator(D)


def integral_host(X: Order) -> Order:
    """``X + 1``; elements of X become ``(0, x)`` and the top is ``(1, 0)``."""
    return Sum((X, Finite(1)))


def integral_embedding(D: Semidilator, inst: Inst) -> Inst:
    """``t(a) -> t^int(a, top)`` from ``D(X)`` into ``int D (X + 1)``."""
    return Inst(("int", inst.term), tuple((0, a) for a in inst.args) + ((1, 0),))


# ---------------------------------------------------------------------------
# Tagging


class TaggedDilator(Semidilator):
    """``D`` with every term ``t`` replaced by ``(pi, t)``."""

    def __init__(self, D: Semidilator, pi: int):
        super().__init__()
        self.D, self.pi = D, pi
        self.name = f"{D.name}#{pi}"
        self.finite = D.finite

    def _terms(self, bound):
        return ((self.pi, t) for t in self.D.term_seq(bound).seq_iter())

    def arity(self, t):
        return self.D.arity(t[1])

    def has_term(self, t):
        return isinstance(t, tuple) and len(t) == 2 and t[0] == self.pi and self.D.has_term(t[1])

    def code(self, t):
        return flat((self.pi,), self.D.code(t[1]))

    def _less(self, s, t, d):
        return self.D.less(s[1], t[1], d)

    def finite_upto(self, n):
        return self.D.finite_upto(n)

    def monotone_status(self):
        return self.D.monotone_status()

    def dilator_status(self):
        return self.D.dilator_status()

    def wf_at(self, X):
        return self.D.wf_at(X)

    def descent_at(self, X, length):
        ds = self.D.descent_at(X, length)
        return None if ds is None else [Inst((self.pi, x.term), x.args) for x in ds]

    def to_json(self):
        return {"op": "tag", "pi": self.pi, "args": [self.D.to_json()]}


# ---------------------------------------------------------------------------
# Named pseudodilator fixtures


def reverse_pseudo() -> ConstDilator:
    """``Const(omega*)``: a predilator that is ill-founded everywhere (climax 0)."""
    from .linorder import OmegaStar

    return ConstDilator(OmegaStar())


def reverse_pseudo_b() -> ArrowDilator:
    """``(1 -> omega*)``: climax 1."""
    from .linorder import OmegaStar

    return ArrowDilator(Finite(1), OmegaStar())
