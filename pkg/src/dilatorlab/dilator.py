"""Semidilators as denotation systems.

A semidilator has a set of terms, each with an arity, and an oracle
``less(s, t, d)`` deciding ``s <_d t`` for an arity diagram ``d`` from
``arity(s)`` and ``arity(t)``.  Applying it to an order ``X`` gives the order
``D(X)`` of term instances (see :class:`dilatorlab.linorder.Applied`).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations, count
from typing import Any, Callable, Iterable, Optional, Sequence

import numpy as np

from ._coding import LazySeq
from .cnf import OMEGA, Ordinal
from .diagram import (
    ArityDiagram,
    diag_decompose_monotone,
    diag_enumerate,
    diag_from_tuples,
    diag_is_monotone,
    iu_from_subsets,
    moving_coordinate,
    trivial,
)
from .errors import InvariantError, MonotoneHolds, NotIncreasing
from .linorder import (
    Applied,
    DescentWitness,
    Finite,
    Inst,
    Omega,
    Order,
    Sum,
    and3,
    term_to_json,
    verify_descent,
)

_LESS_MEMO_LIMIT = 500_000


def _int_cmp(a, b):
    return (a > b) - (a < b)


class Semidilator:
    """Base class.  Subclasses implement ``_terms``, ``arity``, ``_less`` and ``has_term``."""

    name = "semidilator"
    finite = False  # finitely many terms in total

    def __init__(self):
        self._cache: dict = {}
        self._memo: dict = {}

    # -- terms -------------------------------------------------------------
    def _terms(self, bound: Optional[int]) -> Iterable:
        """Terms of arity at most ``bound`` (all terms when ``bound`` is None)."""
        raise NotImplementedError

    def terms(self) -> Iterable:
        return self.term_seq(None).seq_iter()

    def terms_upto(self, n: Optional[int]) -> Iterable:
        return self.term_seq(n).seq_iter()

    def term_seq(self, bound: Optional[int] = None) -> "TermSeq":
        key = ("terms", bound)
        if key not in self._cache:
            self._cache[key] = TermSeq(self._terms(bound))
        return self._cache[key]

    def arity(self, t) -> int:
        raise NotImplementedError

    def has_term(self, t) -> bool:
        raise NotImplementedError

    def code(self, t) -> tuple[int, ...]:
        raise NotImplementedError

    def finite_upto(self, n: int) -> bool:
        """Whether only finitely many terms have arity at most ``n``."""
        return self.finite

    # -- comparison --------------------------------------------------------
    def _less(self, s, t, d: ArityDiagram) -> bool:
        raise NotImplementedError

    def less(self, s, t, d: ArityDiagram) -> bool:
        key = (s, t, d)
        memo = self._memo
        r = memo.get(key)
        if r is None:
            r = self._less(s, t, d)
            if len(memo) > _LESS_MEMO_LIMIT:
                memo.clear()
            memo[key] = r
        return r

    # -- structural knowledge ---------------------------------------------
    def monotone_status(self) -> Optional[bool]:
        """True when the predilator condition holds by construction."""
        return True

    def dilator_status(self) -> Optional[bool]:
        return None

    def wf_at(self, X: Order) -> Optional[bool]:
        s = self.dilator_status()
        xw = X.is_wellfounded()
        if s is True and xw is True:
            return True
        if xw is False and self.monotone_status() is True and self._positive_term() is not None:
            return False
        return None

    def descent_at(self, X: Order, length: int) -> Optional[list]:
        return self._pull_descent(X, length)

    def _positive_term(self, window: int = 50):
        seq = self.term_seq(None)
        for i in range(window):
            if not seq.has(i):
                return None
            t = seq.get(i)
            if self.arity(t) > 0:
                return t
        return None

    def _pull_descent(self, X: Order, length: int) -> Optional[list]:
        """Push a descent of ``X`` through a positive-arity term (predilators only)."""
        if self.monotone_status() is not True:
            return None
        t = self._positive_term()
        if t is None:
            return None
        a = self.arity(t)
        xs = X.descent(length + a - 1)
        if xs is None:
            return None
        return [Inst(t, tuple(reversed(xs[i:i + a]))) for i in range(length)]

    # -- identity ----------------------------------------------------------
    def to_json(self):
        raise NotImplementedError

    def _key(self):
        try:
            return json.dumps(self.to_json(), sort_keys=True)
        except (NotImplementedError, TypeError):
            return ("id", id(self))

    def __eq__(self, other):
        return isinstance(other, Semidilator) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


class TermSeq(LazySeq):
    def seq_iter(self):
        for i in count():
            if not self.has(i):
                return
            yield self.get(i)


def term_index(D: Semidilator, t, bound: Optional[int] = None, limit: int = 100_000) -> int:
    seq = D.term_seq(bound)
    for i in range(limit):
        if not seq.has(i):
            break
        if seq.get(i) == t:
            return i
    raise KeyError(t)


# ---------------------------------------------------------------------------
# Basic semidilators


class IdDilator(Semidilator):
    name = "id"
    finite = True

    def _terms(self, bound):
        if bound is None or bound >= 1:
            yield "id"

    def arity(self, t):
        return 1

    def has_term(self, t):
        return t == "id"

    def code(self, t):
        return (0,)

    def _less(self, s, t, d):
        return d.e0[0] < d.e1[0]

    def dilator_status(self):
        return True

    def wf_at(self, X):
        return X.is_wellfounded()

    def descent_at(self, X, length):
        xs = X.descent(length)
        return None if xs is None else [Inst("id", (x,)) for x in xs]

    def to_json(self):
        return "id"


class ConstDilator(Semidilator):
    """Arity-0 terms ordered like ``B``; ``D(X)`` is ``B`` for every ``X``."""

    def __init__(self, B: Order):
        super().__init__()
        self.B = B
        self.finite = B.size() is not None
        self.name = f"const({B})"

    def _terms(self, bound):
        return self.B.seq_iter()

    def arity(self, t):
        return 0

    def has_term(self, t):
        return self.B.contains(t)

    def code(self, t):
        return self.B.code(t)

    def _less(self, s, t, d):
        return self.B.cmp(s, t) < 0

    def dilator_status(self):
        return self.B.is_wellfounded()

    def wf_at(self, X):
        return self.B.is_wellfounded()

    def descent_at(self, X, length):
        xs = self.B.descent(length)
        return None if xs is None else [Inst(x, ()) for x in xs]

    def to_json(self):
        return {"op": "const", "args": [self.B.to_json()]}


class FiniteSemidilator(Semidilator):
    """Finitely many terms with an explicit table of true comparisons.

    ``table`` holds tuples ``(s, t, e0, e1)`` meaning ``s <_d t`` for the
    diagram ``d = (e0, e1)``; every other comparison is false.
    """

    finite = True

    def __init__(self, name: str, arities: dict, table: Iterable, source=None):
        super().__init__()
        self.name = name
        self.arities = dict(arities)
        self.order = list(self.arities)
        self.table = frozenset((s, t, tuple(e0), tuple(e1)) for s, t, e0, e1 in table)
        self._source = source  # fixture name or None

    def _terms(self, bound):
        return (t for t in self.order if bound is None or self.arities[t] <= bound)

    def arity(self, t):
        return self.arities[t]

    def has_term(self, t):
        try:
            return t in self.arities
        except TypeError:
            return False

    def code(self, t):
        return (self.order.index(t),)

    def _less(self, s, t, d):
        return (s, t, d.e0, d.e1) in self.table

    # exhaustive checks are cheap for finite systems
    def _report(self, which):
        c = self._cache
        if which not in c:
            cap = max(self.arities.values(), default=0)
            if which == "axioms":
                c[which] = dil_check_axioms(self, len(self.order), cap)
            else:
                c[which] = dil_check_monotone(self, len(self.order), cap)
        return c[which]

    def monotone_status(self):
        if not self._report("axioms").ok:
            return None
        return self._report("monotone").ok

    def dilator_status(self):
        # finite predilators are dilators; non-monotone semidilators are not
        return self.monotone_status()

    def _counterexample_host(self):
        rep = self._report("monotone")
        if rep.ok or not self._report("axioms").ok:
            return None
        t, d = rep.counterexample["term"], rep.counterexample["diagram"]
        n = self.arity(t)
        step = next(s for s in diag_decompose_monotone(d) if not self.less(t, t, s))
        return t, d, n, moving_coordinate(step)

    def wf_at(self, X):
        if X.size() is not None:
            return True
        st = self.dilator_status()
        xw = X.is_wellfounded()
        if st is True:
            return xw
        host = self._counterexample_host()
        if host is not None:
            _, _, n, k = host
            tx = X.order_type()
            need = OMEGA + Ordinal.of(n - k - 1)
            if tx is not None and not tx < need:
                return False
        return super().wf_at(X)

    def descent_at(self, X, length):
        host = self._counterexample_host()
        if host is not None and X.size() is None:
            t, d, n, k = host
            tx = X.order_type()
            if tx is not None and not tx < OMEGA + Ordinal.of(n - k - 1):
                w = dil_monotone_counterexample_descent(self, t, d, length)
                # move the witness from omega+(n-k) into X along ordinals
                out = []
                for inst in w.elements:
                    args = []
                    for tag, v in inst.args:
                        o = Ordinal.of(v) if tag == 0 else OMEGA + Ordinal.of(v)
                        x = X.element_at(o)
                        if x is None:
                            return None
                        args.append(x)
                    out.append(Inst(inst.term, tuple(args)))
                return out
        if self.monotone_status() is True:
            return self._pull_descent(X, length)
        return None

    def to_json(self):
        if self._source is not None:
            return self._source
        return {
            "op": "finite",
            "name": self.name,
            "terms": [[term_to_json(t), self.arities[t]] for t in self.order],
            "less": [
                [term_to_json(s), term_to_json(t), list(e0), list(e1)]
                for s, t, e0, e1 in sorted(self.table, key=repr)
            ],
        }


def finite_semidilator(name: str, arities: dict, less_fn: Callable, source=None) -> FiniteSemidilator:
    """Materialize ``less_fn(s, t, d)`` over every diagram into an explicit table."""
    table = []
    for s, a in arities.items():
        for t, b in arities.items():
            for d in diag_enumerate(a, b):
                if less_fn(s, t, d):
                    table.append((s, t, d.e0, d.e1))
    return FiniteSemidilator(name, arities, table, source)


def keyed_semidilator(name: str, keys: dict, source=None) -> FiniteSemidilator:
    """Terms ordered by (declaration index, key of argument positions).

    ``keys`` maps each term to ``(arity, key_fn)`` where ``key_fn`` takes the
    tuple of positions in the union object and returns a comparable key.
    """
    order = list(keys)
    arities = {t: keys[t][0] for t in order}

    def less(s, t, d):
        return (order.index(s), keys[s][1](d.e0)) < (order.index(t), keys[t][1](d.e1))

    return finite_semidilator(name, arities, less, source)


# ---------------------------------------------------------------------------
# Fixtures


def reverse_dilator() -> FiniteSemidilator:
    """One unary term ``r`` with ``r <_d r`` iff ``e0(0) > e1(0)``; not monotone."""
    return keyed_semidilator("reverse", {"r": (1, lambda e: -e[0])}, source="reverse")


def colex_pair() -> FiniteSemidilator:
    """One binary term compared colexicographically; a finite predilator."""
    return keyed_semidilator("colexpair", {"p": (2, lambda e: (e[1], e[0]))}, source="colexpair")


def lex_pair() -> FiniteSemidilator:
    return keyed_semidilator("lexpair", {"q": (2, lambda e: (e[0], e[1]))}, source="lexpair")


def violator(i: int) -> FiniteSemidilator:
    """Synthetic monotonicity violators used to exercise the counterexample descent."""
    if i == 1:
        keys = {"v": (2, lambda e: (e[0], -e[1]))}  # fails moving coordinate 1
    elif i == 2:
        keys = {"v": (2, lambda e: (-e[0], e[1]))}  # fails moving coordinate 0
    elif i == 3:
        keys = {"u": (1, lambda e: e[0]), "v": (3, lambda e: (e[2], -e[1], e[0]))}
    else:
        raise ValueError(f"no violator {i}")
    return keyed_semidilator(f"violator{i}", keys, source=f"violator{i}")


# ---------------------------------------------------------------------------
# Application and functor action


def dil_apply(D: Semidilator, X: Order) -> Applied:
    return Applied(D, X)


def _as_map(f) -> Callable:
    if callable(f):
        return f
    return lambda x: f[x]


def dil_map(D: Semidilator, f, inst: Inst, Y: Optional[Order] = None) -> Inst:
    """``D(f)(t(a)) = t(f[a])``; ``f`` is a callable or a sequence over Finite(n)."""
    g = _as_map(f)
    args = tuple(g(a) for a in inst.args)
    if Y is not None:
        if not all(Y.cmp(a, b) < 0 for a, b in zip(args, args[1:])):
            raise NotIncreasing(f"map is not increasing on {inst.args}")
    else:
        try:
            if not all(a < b for a, b in zip(args, args[1:])):
                raise NotIncreasing(f"map is not increasing on {inst.args}")
        except TypeError:
            pass
    return Inst(inst.term, args)


def increasing_maps(n: int, m: int) -> list[tuple[int, ...]]:
    """All strictly increasing maps Finite(n) -> Finite(m), as value tuples."""
    return list(combinations(range(m), n))


# ---------------------------------------------------------------------------
# Axiom checks


@dataclass
class AxiomReport:
    ok: bool
    check: str
    counterexample: Optional[dict] = None
    stats: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "pass" if self.ok else "fail"

    def to_json(self):
        def enc(v):
            if isinstance(v, ArityDiagram):
                return v.to_json()
            if isinstance(v, (list, tuple)):
                return [enc(x) for x in v]
            if isinstance(v, dict):
                return {k: enc(x) for k, x in v.items()}
            if isinstance(v, (int, str, float, bool)) or v is None:
                return v
            return repr(v)

        return {"check": self.check, "verdict": self.verdict, "counterexample": enc(self.counterexample), "stats": self.stats}


def _window(D: Semidilator, term_window: int, arity_cap: int) -> list:
    return D.term_seq(arity_cap).prefix(term_window)


def dil_check_axioms(D: Semidilator, term_window: int = 50, arity_cap: int = 3) -> AxiomReport:
    """Irreflexivity, exactly-one linearity, and transitivity over all IU configurations."""
    terms = _window(D, term_window, arity_cap)
    ar = [D.arity(t) for t in terms]
    for t, a in zip(terms, ar):
        if D.less(t, t, trivial(a)):
            return AxiomReport(False, "irreflexivity", {"term": t, "diagram": trivial(a)})

    # pair table over every diagram with arities <= the largest arity in the window
    top = max(ar, default=0)
    diags = {}
    for a in range(top + 1):
        for b in range(top + 1):
            for d in diag_enumerate(a, b):
                diags[d] = len(diags)
    T = len(terms)
    table = np.zeros((T, T, max(len(diags), 1)), dtype=bool)
    for i, (s, a) in enumerate(zip(terms, ar)):
        for j, (t, b) in enumerate(zip(terms, ar)):
            for d in diag_enumerate(a, b):
                table[i, j, diags[d]] = D.less(s, t, d)
    for i, (s, a) in enumerate(zip(terms, ar)):
        for j in range(i, T):
            t, b = terms[j], ar[j]
            for d in diag_enumerate(a, b):
                if i == j and d.is_trivial:
                    continue
                fwd = table[i, j, diags[d]]
                back = table[j, i, diags[ArityDiagram(d.e1, d.e0, d.n)]]
                if fwd == back:
                    return AxiomReport(
                        False, "linearity",
                        {"terms": [s, t], "diagram": d, "both" if fwd else "neither": True},
                    )

    # Transitivity: every IU configuration of three argument sets of size <= top
    # is realized inside Finite(3 * top), so check that D(Finite(3 * top))
    # restricted to the window is a transitive tournament.
    width = 3 * top
    subsets_by_size = {a: list(combinations(range(width), a)) for a in set(ar)}
    all_subsets = [s for a in sorted(subsets_by_size) for s in subsets_by_size[a]]
    sub_index = {s: k for k, s in enumerate(all_subsets)}
    S = len(all_subsets)
    sd = np.zeros((S, S), dtype=np.int64)
    for p, x in enumerate(all_subsets):
        for q, y in enumerate(all_subsets):
            sd[p, q] = diags[diag_from_tuples(_int_cmp, x, y)]
    inst_term, inst_sub = [], []
    for i, a in enumerate(ar):
        for s in subsets_by_size[a]:
            inst_term.append(i)
            inst_sub.append(sub_index[s])
    ti = np.array(inst_term, dtype=np.int64)
    si = np.array(inst_sub, dtype=np.int64)
    N = len(ti)

    def rows(lo, hi):
        return table[ti[lo:hi, None], ti[None, :], sd[si[lo:hi, None], si[None, :]]]

    block = max(1, 2_000_000 // max(N, 1))
    scores = np.concatenate([rows(lo, min(N, lo + block)).sum(axis=1) for lo in range(0, N, block)]) if N else np.zeros(0)
    stats = {"terms": T, "instances": int(N), "diagrams": len(diags)}
    if N and not np.array_equal(np.sort(scores), np.arange(N)):
        cyc = _find_three_cycle(rows, N)
        if cyc is None:
            raise InvariantError("non-transitive tournament without a 3-cycle")
        gens = [all_subsets[si[c]] for c in cyc]
        iu = iu_from_subsets(Finite(width), gens)
        return AxiomReport(
            False, "transitivity",
            {"terms": [terms[ti[c]] for c in cyc], "subsets": gens, "iu": iu.to_json()},
            stats,
        )
    return AxiomReport(True, "axioms", None, stats)


def _find_three_cycle(rows, N):
    for i in range(N):
        r = rows(i, i + 1)[0]
        above = np.flatnonzero(r)
        below = np.flatnonzero(~r)
        below = below[below != i]
        if not len(above) or not len(below):
            continue
        for j in above:
            rj = rows(j, j + 1)[0]
            hit = below[rj[below]]
            if len(hit):
                return (i, int(j), int(hit[0]))
    return None


def dil_check_monotone(D: Semidilator, term_window: int = 50, arity_cap: int = 3) -> AxiomReport:
    terms = _window(D, term_window, arity_cap)
    checked = 0
    for t in terms:
        a = D.arity(t)
        for d in diag_enumerate(a, a):
            if d.is_trivial or not diag_is_monotone(d):
                continue
            checked += 1
            if not D.less(t, t, d):
                return AxiomReport(False, "monotone", {"term": t, "diagram": d}, {"checked": checked})
    return AxiomReport(True, "monotone", None, {"checked": checked, "terms": len(terms)})


# ---------------------------------------------------------------------------
# Counterexample descent for non-monotone semidilators


def counterexample_host(n: int, k: int) -> Order:
    """The order omega + (n - k)."""
    return Sum((Omega(), Finite(n - k)))


def dil_monotone_counterexample_descent(D: Semidilator, t, d: ArityDiagram, length: int = 8) -> DescentWitness:
    """A verified descent ``t(a_0) > t(a_1) > ...`` from a failing monotone diagram.

    The diagram is split into single-step monotone diagrams; one of them fails,
    with moving coordinate ``k``.  Then ``a_i`` is ``{0, ..., k-1, k+i}`` plus
    the ``n-k-1`` least elements of the top block, inside ``omega + (n-k)``.
    """
    if not diag_is_monotone(d) or d.is_trivial:
        raise MonotoneHolds(f"{d} is not a non-trivial monotone diagram")
    if D.less(t, t, d):
        raise MonotoneHolds(f"{t!r} <_d {t!r} holds for {d}")
    step = next(s for s in diag_decompose_monotone(d) if not D.less(t, t, s))
    k = moving_coordinate(step)
    n = D.arity(t)
    host = counterexample_host(n, k)
    X = Applied(D, host)
    seq = []
    for i in range(length):
        args = tuple((0, m) for m in range(k)) + ((0, k + i),) + tuple((1, j) for j in range(n - k - 1))
        seq.append(Inst(t, args))
    if not verify_descent(X, seq):
        raise InvariantError(f"counterexample descent for {D.name} failed verification")
    return DescentWitness(tuple(seq), X, "structural")


# ---------------------------------------------------------------------------
# Embeddings


@dataclass
class DilEmbedding:
    source: Semidilator
    target: Semidilator
    map: Callable

    def __call__(self, t):
        return self.map(t)


def emb_check(iota: DilEmbedding, term_window: int = 50, arity_cap: int = 3) -> AxiomReport:
    S, T = iota.source, iota.target
    terms = _window(S, term_window, arity_cap)
    images = [iota(t) for t in terms]
    for t, u in zip(terms, images):
        if not T.has_term(u):
            return AxiomReport(False, "embedding", {"term": t, "image": u, "reason": "image not a term"})
        if T.arity(u) != S.arity(t):
            return AxiomReport(False, "embedding", {"term": t, "image": u, "reason": "arity changed"})
    for s, u in zip(terms, images):
        for t, v in zip(terms, images):
            for d in diag_enumerate(S.arity(s), S.arity(t)):
                if S.less(s, t, d) != T.less(u, v, d):
                    return AxiomReport(False, "embedding", {"terms": [s, t], "diagram": d, "reason": "comparison changed"})
    return AxiomReport(True, "embedding", None, {"terms": len(terms)})


def emb_apply(iota: DilEmbedding, inst: Inst) -> Inst:
    return Inst(iota(inst.term), inst.args)


def identity_embedding(D: Semidilator) -> DilEmbedding:
    return DilEmbedding(D, D, lambda t: t)


# ---------------------------------------------------------------------------
# Trace round trip through the functor view


def dil_trace_roundtrip(D: Semidilator, arity_cap: int = 3) -> AxiomReport:
    """Materialize ``D`` as a functor on finite orders with supports, rebuild a
    denotation system from its trace, and check it is isomorphic to ``D``."""
    top = 2 * arity_cap
    for n in range(top + 1):
        if not D.finite_upto(n):
            return AxiomReport(False, "trace", {"reason": f"D(Finite({n})) is infinite"})
    # F(n) as a sorted list of opaque points with supports
    F, pos, supp = {}, {}, {}
    for n in range(top + 1):
        X = Applied(D, Finite(n))
        pts = X.elements()
        F[n] = pts
        pos[n] = {p: i for i, p in enumerate(pts)}
        supp[n] = [frozenset(p.args) for p in pts]

    def act(f, n, m):
        """F(f) for increasing f: n -> m, as an index array."""
        return [pos[m][Inst(p.term, tuple(f[a] for a in p.args))] for p in F[n]]

    maps_checked = 0
    for n in range(arity_cap + 1):
        for m in range(n, arity_cap + 1):
            for f in increasing_maps(n, m):
                img = act(f, n, m)
                maps_checked += 1
                rng = set(f)
                for i, j in enumerate(img):
                    if supp[m][j] != frozenset(f[a] for a in supp[n][i]):
                        return AxiomReport(False, "trace", {"reason": "support not natural", "map": f})
                hit = set(img)
                for j in range(len(F[m])):
                    if supp[m][j] <= rng and j not in hit:
                        return AxiomReport(False, "trace", {"reason": "support condition", "map": f})
    trace = [(n, i) for n in range(arity_cap + 1) for i in range(len(F[n])) if supp[n][i] == frozenset(range(n))]

    def rebuilt_less(u, v, d):
        (n0, i0), (n1, i1) = u, v
        a = act(d.e0, n0, d.n)[i0]
        b = act(d.e1, n1, d.n)[i1]
        return a < b

    terms = list(D.terms_upto(arity_cap))
    phi = {}
    for t in terms:
        a = D.arity(t)
        phi[t] = (a, pos[a][Inst(t, tuple(range(a)))])
    if sorted(phi.values()) != sorted(trace) or len(set(phi.values())) != len(terms):
        return AxiomReport(False, "trace", {"reason": "terms and trace are not in bijection"})
    compared = 0
    for s in terms:
        for t in terms:
            for d in diag_enumerate(D.arity(s), D.arity(t)):
                compared += 1
                if D.less(s, t, d) != rebuilt_less(phi[s], phi[t], d):
                    return AxiomReport(False, "trace", {"terms": [s, t], "diagram": d, "reason": "comparison changed"})
    return AxiomReport(
        True, "trace", None,
        {"trace": [[n, F[n][i].term] for n, i in trace], "maps": maps_checked, "comparisons": compared},
    )
