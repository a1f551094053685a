"""Countable linear orders with decidable comparison.

Every order exposes ``cmp`` on element codes, a membership test, a canonical
enumeration of its field (order type at most omega), and three kinds of
well-foundedness information:

* ``is_wellfounded()`` returns True/False when a structural reason is known
  and None otherwise;
* ``descent(L)`` returns the first ``L`` terms of a constructed infinite
  descending sequence, or None;
* ``lo_descend_search`` combines both with an exhaustive window search.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from functools import cmp_to_key
from itertools import count
from math import comb
from typing import Any, Iterator, NamedTuple, Optional, Sequence

from ._coding import LazySeq, colex_unrank, flat
from .cnf import Ordinal, ZERO, ordinals_below, CnfError
from .diagram import diag_from_tuples
from .errors import InvariantError, NotInField


class Cmp(IntEnum):
    Less = -1
    Equal = 0
    Greater = 1


def and3(*vals):
    """Three-valued conjunction (None means unknown)."""
    if any(v is False for v in vals):
        return False
    if all(v is True for v in vals):
        return True
    return None


def or3(*vals):
    if any(v is True for v in vals):
        return True
    if all(v is False for v in vals):
        return False
    return None


class Inst(NamedTuple):
    """A term instance ``t(a)``: a term plus an increasing tuple of arguments."""

    term: Any
    args: tuple


# Orders compare structurally on their defining data; caches are excluded.
def _cache():
    return field(default_factory=dict, compare=False, hash=False, repr=False)


class Order:
    kind = "abstract"

    # -- core protocol ---------------------------------------------------
    def cmp(self, x, y) -> int:
        raise NotImplementedError

    def contains(self, x) -> bool:
        raise NotImplementedError

    def enumerate(self) -> Iterator:
        raise NotImplementedError

    def size(self) -> Optional[int]:
        return None

    def order_type(self) -> Optional[Ordinal]:
        return None

    def ordinal_of(self, x) -> Optional[Ordinal]:
        return None

    def element_at(self, o: Ordinal):
        return None

    def is_wellfounded(self) -> Optional[bool]:
        return None

    def descent(self, length: int) -> Optional[list]:
        return None

    def code(self, x) -> tuple[int, ...]:
        raise NotImplementedError

    def to_json(self):
        raise NotImplementedError

    def elem_to_json(self, x):
        return x

    def elem_from_json(self, obj):
        return obj

    # -- derived -----------------------------------------------------------
    @property
    def seq(self) -> LazySeq:
        c = self._cache
        if "seq" not in c:
            c["seq"] = LazySeq(self.enumerate())
        return c["seq"]

    def prefix(self, n: int) -> list:
        return self.seq.prefix(n)

    def seq_iter(self) -> Iterator:
        """Iterate the cached enumeration from the start."""
        s = self.seq
        for i in count():
            if not s.has(i):
                return
            yield s.get(i)

    def sort(self, xs) -> list:
        return sorted(xs, key=cmp_to_key(self.cmp))

    def elements(self) -> list:
        """The whole field, sorted (finite orders only)."""
        n = self.size()
        if n is None:
            raise ValueError(f"{self} is infinite")
        c = self._cache
        if "sorted" not in c:
            c["sorted"] = self.sort(self.prefix(n))
        return c["sorted"]

    def __str__(self):
        return describe(self)


def _nat(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool) and x >= 0


@dataclass(frozen=True)
class Finite(Order):
    n: int
    _cache: dict = _cache()
    kind = "finite"

    def cmp(self, x, y):
        return (x > y) - (x < y)

    def contains(self, x):
        return _nat(x) and x < self.n

    def enumerate(self):
        return iter(range(self.n))

    def size(self):
        return self.n

    def order_type(self):
        return Ordinal.of(self.n)

    def ordinal_of(self, x):
        return Ordinal.of(x)

    def element_at(self, o):
        return o.to_int() if o.is_finite and o.to_int() < self.n else None

    def is_wellfounded(self):
        return True

    def code(self, x):
        return (x,)

    def to_json(self):
        return {"kind": "finite", "n": self.n}


@dataclass(frozen=True)
class Omega(Order):
    _cache: dict = _cache()
    kind = "omega"

    def cmp(self, x, y):
        return (x > y) - (x < y)

    def contains(self, x):
        return _nat(x)

    def enumerate(self):
        return count()

    def order_type(self):
        return Ordinal.omega_pow(1)

    def ordinal_of(self, x):
        return Ordinal.of(x)

    def element_at(self, o):
        return o.to_int() if o.is_finite else None

    def is_wellfounded(self):
        return True

    def code(self, x):
        return (x,)

    def to_json(self):
        return {"kind": "omega"}


@dataclass(frozen=True)
class OmegaStar(Order):
    _cache: dict = _cache()
    kind = "omegastar"

    def cmp(self, x, y):
        return (x < y) - (x > y)

    def contains(self, x):
        return _nat(x)

    def enumerate(self):
        return count()

    def is_wellfounded(self):
        return False

    def descent(self, length):
        return list(range(length))

    def code(self, x):
        return (x,)

    def to_json(self):
        return {"kind": "omegastar"}


@dataclass(frozen=True)
class Cnf(Order):
    """The ordinals below ``bound`` (bound in Cantor normal form, below epsilon_0)."""

    bound: Ordinal
    _cache: dict = _cache()
    kind = "cnf"

    def cmp(self, x, y):
        return x._cmp(y)

    def contains(self, x):
        return isinstance(x, Ordinal) and x < self.bound

    def enumerate(self):
        return ordinals_below(self.bound)

    def size(self):
        return self.bound.to_int() if self.bound.is_finite else None

    def order_type(self):
        return self.bound

    def ordinal_of(self, x):
        return x

    def element_at(self, o):
        return o if o < self.bound else None

    def is_wellfounded(self):
        return True

    def code(self, x):
        return x.code()

    def to_json(self):
        return {"kind": "cnf", "term": [[e.to_json(), c] for e, c in self.bound.terms]}

    def elem_to_json(self, x):
        return x.to_json()

    def elem_from_json(self, obj):
        try:
            return Ordinal.from_json(obj)
        except CnfError as exc:
            raise NotInField(obj, self) from exc


@dataclass(frozen=True)
class Sum(Order):
    parts: tuple
    _cache: dict = _cache()
    kind = "sum"

    def cmp(self, x, y):
        if x[0] != y[0]:
            return -1 if x[0] < y[0] else 1
        return self.parts[x[0]].cmp(x[1], y[1])

    def contains(self, x):
        return (
            isinstance(x, tuple) and len(x) == 2 and _nat(x[0]) and x[0] < len(self.parts)
            and self.parts[x[0]].contains(x[1])
        )

    def enumerate(self):
        seqs = [p.seq for p in self.parts]
        for r in count():
            alive = False
            for i, s in enumerate(seqs):
                x = s.get(r)
                if x is not None or s.has(r):
                    alive = True
                    yield (i, x)
            if not alive:
                return

    def size(self):
        sizes = [p.size() for p in self.parts]
        return None if None in sizes else sum(sizes)

    def order_type(self):
        total = ZERO
        for p in self.parts:
            t = p.order_type()
            if t is None:
                return None
            total = total + t
        return total

    def ordinal_of(self, x):
        i, y = x
        before = Sum(self.parts[:i]).order_type()
        inner = self.parts[i].ordinal_of(y)
        if before is None or inner is None:
            return None
        return before + inner

    def element_at(self, o):
        start = ZERO
        for i, p in enumerate(self.parts):
            t = p.order_type()
            if t is None:
                return None
            end = start + t
            if o < end:
                # o = start + rest; find rest by scanning the part's ordinals
                y = p.element_at(_ordinal_minus(o, start))
                return None if y is None else (i, y)
            start = end
        return None

    def is_wellfounded(self):
        return and3(*(p.is_wellfounded() for p in self.parts))

    def descent(self, length):
        for i, p in enumerate(self.parts):
            d = p.descent(length)
            if d is not None:
                return [(i, x) for x in d]
        return None

    def code(self, x):
        return flat((x[0],), self.parts[x[0]].code(x[1]))

    def to_json(self):
        return {"kind": "sum", "parts": [p.to_json() for p in self.parts]}

    def elem_to_json(self, x):
        return [x[0], self.parts[x[0]].elem_to_json(x[1])]

    def elem_from_json(self, obj):
        if not (isinstance(obj, list) and len(obj) == 2 and _nat(obj[0]) and obj[0] < len(self.parts)):
            raise NotInField(obj, self)
        return (obj[0], self.parts[obj[0]].elem_from_json(obj[1]))


def _ordinal_minus(o: Ordinal, start: Ordinal) -> Optional[Ordinal]:
    """The unique ``r`` with ``start + r == o``, or None when ``o < start``."""
    if o < start:
        return None
    st, ot = start.terms, o.terms
    i = 0
    while i < len(st) and st[i] == ot[i]:
        i += 1
    if i == len(st):
        return Ordinal(ot[i:])
    (es, cs), (eo, co) = st[i], ot[i]
    if eo == es:
        # same leading exponent: o has the larger coefficient here
        return Ordinal(((eo, co - cs),) + ot[i + 1:])
    return Ordinal(ot[i:])


# Restrict enumeration gives up after this many consecutive misses when the
# size of the restriction cannot be determined structurally.
RESTRICT_SCAN_LIMIT = 20000


@dataclass(frozen=True)
class Restrict(Order):
    base: Order
    at: Any
    _cache: dict = _cache()
    kind = "restrict"

    def cmp(self, x, y):
        return self.base.cmp(x, y)

    def contains(self, x):
        return self.base.contains(x) and self.base.cmp(x, self.at) < 0

    def _finite_count(self):
        o = self.base.ordinal_of(self.at)
        if o is not None and o.is_finite:
            return o.to_int()
        if self.base.size() is not None:
            return sum(1 for x in self.base.prefix(self.base.size()) if self.base.cmp(x, self.at) < 0)
        return None

    def enumerate(self):
        want = self._finite_count()
        found = misses = 0
        for x in self.base.seq_iter():
            if want is not None and found >= want:
                return
            if self.base.cmp(x, self.at) < 0:
                found += 1
                misses = 0
                yield x
            else:
                misses += 1
                if want is None and misses > RESTRICT_SCAN_LIMIT:
                    return

    def size(self):
        return self._finite_count()

    def order_type(self):
        return self.base.ordinal_of(self.at)

    def ordinal_of(self, x):
        return self.base.ordinal_of(x)

    def element_at(self, o):
        top = self.order_type()
        if top is None or not o < top:
            return None
        return self.base.element_at(o)

    def is_wellfounded(self):
        wf = self.base.is_wellfounded()
        if wf is True:
            return True
        if isinstance(self.base, OmegaStar):
            return False
        return None

    def descent(self, length):
        # keep the tail of a base descent that lies below the restriction point
        for extra in (0, 8, 64, 512):
            d = self.base.descent(length + extra)
            if d is None:
                return None
            tail = [x for x in d if self.base.cmp(x, self.at) < 0]
            if len(tail) >= length:
                return tail[:length]
        return None

    def code(self, x):
        return self.base.code(x)

    def to_json(self):
        return {"kind": "restrict", "base": self.base.to_json(), "at": self.base.elem_to_json(self.at)}

    def elem_to_json(self, x):
        return self.base.elem_to_json(x)

    def elem_from_json(self, obj):
        return self.base.elem_from_json(obj)


@dataclass(frozen=True)
class Applied(Order):
    """The order ``D(X)`` of term instances, compared through induced diagrams."""

    dilator: Any
    base: Order
    _cache: dict = _cache()
    kind = "applied"

    def cmp(self, x, y):
        if x == y:
            return 0
        d = diag_from_tuples(self.base.cmp, x.args, y.args)
        return -1 if self.dilator.less(x.term, y.term, d) else 1

    def contains(self, x):
        if not isinstance(x, Inst) or not isinstance(x.args, tuple):
            return False
        D, X = self.dilator, self.base
        if not D.has_term(x.term) or D.arity(x.term) != len(x.args):
            return False
        if not all(X.contains(a) for a in x.args):
            return False
        return all(X.cmp(a, b) < 0 for a, b in zip(x.args, x.args[1:]))

    def enumerate(self):
        # Dovetail over (term index i, argument-tuple index j) by i + j.
        D, X = self.dilator, self.base
        n = X.size()
        terms = D.term_seq(n)
        if n is not None:
            elems = X.elements()
        else:
            xs = X.seq
        for s in count():
            alive = False
            for i in range(s + 1):
                if not terms.has(i):
                    break
                t = terms.get(i)
                ar = D.arity(t)
                j = s - i
                if n is not None:
                    if j < comb(n, ar):
                        alive = True
                        yield Inst(t, tuple(elems[p] for p in colex_unrank(j, ar)))
                elif ar > 0 or j == 0:
                    alive = True
                    idx = colex_unrank(j, ar)
                    if ar and not xs.has(idx[-1]):
                        continue
                    yield Inst(t, tuple(X.sort([xs.get(p) for p in idx])))
            if not alive and not terms.has(s + 1):
                return

    def size(self):
        n = self.base.size()
        if n is None:
            return None
        c = self._cache
        if "size" not in c:
            ts = self.dilator.term_seq(n)
            if not self.dilator.finite_upto(n):
                c["size"] = None
            else:
                k = 0
                total = 0
                while ts.has(k):
                    total += comb(n, self.dilator.arity(ts.get(k)))
                    k += 1
                c["size"] = total
        return c["size"]

    def is_wellfounded(self):
        # a finite linear order is a well-order; avoid counting it
        n = self.base.size()
        if n is not None and self.dilator.finite_upto(n):
            return True
        return self.dilator.wf_at(self.base)

    def descent(self, length):
        return self.dilator.descent_at(self.base, length)

    def code(self, x):
        return flat(self.dilator.code(x.term), *(self.base.code(a) for a in x.args))

    def to_json(self):
        return {"kind": "applied", "dilator": self.dilator.to_json(), "base": self.base.to_json()}

    def elem_to_json(self, x):
        return {"term": term_to_json(x.term), "args": [self.base.elem_to_json(a) for a in x.args]}

    def elem_from_json(self, obj):
        if not isinstance(obj, dict) or "term" not in obj or "args" not in obj:
            raise NotInField(obj, self)
        return Inst(term_from_json(obj["term"]), tuple(self.base.elem_from_json(a) for a in obj["args"]))


def term_to_json(t):
    """Lossless JSON for term codes built from ints, strings, tuples and ordinals."""
    if isinstance(t, Ordinal):
        return {"ord": t.to_json()}
    if isinstance(t, Inst):
        return {"inst": [term_to_json(t.term), [term_to_json(a) for a in t.args]]}
    if isinstance(t, tuple):
        return [term_to_json(x) for x in t]
    return t


def term_from_json(obj):
    if isinstance(obj, dict):
        if "ord" in obj:
            return Ordinal.from_json(obj["ord"])
        if "inst" in obj:
            t, args = obj["inst"]
            return Inst(term_from_json(t), tuple(term_from_json(a) for a in args))
    if isinstance(obj, list):
        return tuple(term_from_json(x) for x in obj)
    return obj


# ---------------------------------------------------------------------------
# Operations


@dataclass(frozen=True)
class DescentWitness:
    elements: tuple
    order: Order
    basis: str = "window"  # "structural" or "window"

    def __len__(self):
        return len(self.elements)

    def to_json(self):
        return [self.order.elem_to_json(x) for x in self.elements]


def lo_cmp(order: Order, x, y) -> Cmp:
    for z in (x, y):
        if not order.contains(z):
            raise NotInField(z, order)
    return Cmp(order.cmp(x, y))


def lo_restrict(order: Order, i) -> Order:
    if not order.contains(i):
        raise NotInField(i, order)
    return Restrict(order, i)


def lo_sum(*parts) -> Order:
    if len(parts) == 1 and isinstance(parts[0], (list, tuple)):
        parts = tuple(parts[0])
    return Sum(tuple(parts))


def verify_descent(order: Order, xs: Sequence) -> bool:
    return all(order.contains(x) for x in xs) and all(order.cmp(a, b) > 0 for a, b in zip(xs, xs[1:]))


def _longest_from(order: Order, xs: list) -> list[int]:
    """``L[i]``: the longest strictly decreasing subsequence of ``xs`` starting at ``i``."""
    # Scan right to left: a decreasing run read backwards is increasing.
    tails: list = []
    out = [0] * len(xs)
    for i in range(len(xs) - 1, -1, -1):
        x = xs[i]
        lo, hi = 0, len(tails)
        while lo < hi:
            mid = (lo + hi) // 2
            if order.cmp(tails[mid], x) < 0:
                lo = mid + 1
            else:
                hi = mid
        if lo == len(tails):
            tails.append(x)
        else:
            tails[lo] = x
        out[i] = lo + 1
    return out


def window_descent(order: Order, depth: int, width: int) -> Optional[list]:
    """Lexicographically least (by index) descending chain of length ``depth`` in the window."""
    xs = order.prefix(width)
    L = _longest_from(order, xs)
    chain: list = []
    start = 0
    for step in range(depth):
        need = depth - step
        for i in range(start, len(xs)):
            if L[i] >= need and (not chain or order.cmp(xs[i], chain[-1]) < 0):
                chain.append(xs[i])
                start = i + 1
                break
        else:
            return None
    return chain


def lo_descend_probe(order: Order, depth: int, width: int) -> tuple[Optional[DescentWitness], str]:
    """Like ``lo_descend_search`` but also reports what decided the verdict.

    The basis is ``"certificate"`` (structurally well-founded), ``"structural"``
    (a constructed infinite descent), or ``"window"`` (exhaustive search of the
    first ``width`` enumerated elements).
    """
    if depth < 1 or width < 1:
        raise ValueError("depth and width must be at least 1")
    if order.is_wellfounded() is True:
        return None, "certificate"
    d = order.descent(depth)
    if d is not None:
        d = list(d)
        if len(d) != depth or not verify_descent(order, d):
            raise InvariantError(f"constructed descent in {describe(order)} failed verification")
        return DescentWitness(tuple(d), order, "structural"), "structural"
    w = window_descent(order, depth, width)
    if w is None:
        return None, "window"
    if not verify_descent(order, w):
        raise InvariantError("window descent failed verification")
    return DescentWitness(tuple(w), order, "window"), "window"


def lo_descend_search(order: Order, depth: int, width: int) -> Optional[DescentWitness]:
    return lo_descend_probe(order, depth, width)[0]


def order_embeds(alpha: Order, gamma: Order) -> Optional[bool]:
    """Whether ``alpha`` order-embeds into ``gamma``, when decidable structurally."""
    na, ng = alpha.size(), gamma.size()
    if na is not None:
        if ng is None:
            return True if gamma.is_wellfounded() is True or na == 0 else (True if gamma.seq.has(na - 1) else False)
        return na <= ng
    if ng is not None:
        return False
    ta, tg = alpha.order_type(), gamma.order_type()
    if ta is not None and tg is not None:
        return not tg < ta
    if ta is not None and gamma.is_wellfounded() is False and ta.is_finite:
        return True
    return None


def embedding_map(alpha: Order, gamma: Order):
    """An order embedding ``alpha -> gamma`` as a function, or None when not constructible."""
    na = alpha.size()
    if na is not None:
        src = alpha.elements()
        tgt = gamma.prefix(na)
        if len(tgt) < na:
            return None
        tgt = gamma.sort(tgt)
        table = dict(zip(src, tgt))
        return table.__getitem__
    ta, tg = alpha.order_type(), gamma.order_type()
    if ta is None or tg is None or tg < ta:
        return None
    return lambda x: gamma.element_at(alpha.ordinal_of(x))


def check_prefix_isomorphism(a: Order, b: Order, f, n: int) -> bool:
    """``f`` maps the first ``n`` elements of ``a`` into ``b`` preserving order pairwise."""
    xs = a.prefix(n)
    ys = [f(x) for x in xs]
    if not all(b.contains(y) for y in ys):
        return False
    for i in range(len(xs)):
        for j in range(len(xs)):
            if a.cmp(xs[i], xs[j]) != b.cmp(ys[i], ys[j]):
                return False
    return True


def describe(order: Order) -> str:
    k = order.kind
    if k == "finite":
        return f"Finite({order.n})"
    if k == "omega":
        return "Omega"
    if k == "omegastar":
        return "OmegaStar"
    if k == "cnf":
        return f"Cnf({order.bound})"
    if k == "sum":
        return "Sum(" + ", ".join(describe(p) for p in order.parts) + ")"
    if k == "restrict":
        return f"Restrict({describe(order.base)}, {order.at!r})"
    if k == "applied":
        return f"{getattr(order.dilator, 'name', order.dilator)}({describe(order.base)})"
    return repr(order)


def order_from_json(obj, path: str = "$", resolve_dilator=None) -> Order:
    """Parse an order; ``resolve_dilator`` turns the ``dilator`` field into a semidilator."""
    from .errors import BadSpec

    if not isinstance(obj, dict) or "kind" not in obj:
        raise BadSpec("expected an object with a 'kind' field", path)
    k = obj["kind"]
    if k == "finite":
        n = obj.get("n")
        if not _nat(n):
            raise BadSpec("'n' must be a natural number", path + ".n")
        return Finite(n)
    if k == "omega":
        return Omega()
    if k == "omegastar":
        return OmegaStar()
    if k == "cnf":
        try:
            return Cnf(Ordinal.from_json(obj.get("term"), path + ".term"))
        except CnfError as exc:
            raise BadSpec(str(exc), path + ".term") from None
    if k == "sum":
        parts = obj.get("parts")
        if not isinstance(parts, list):
            raise BadSpec("'parts' must be a list", path + ".parts")
        return Sum(tuple(order_from_json(p, f"{path}.parts[{i}]", resolve_dilator) for i, p in enumerate(parts)))
    if k == "restrict":
        base = order_from_json(obj.get("base"), path + ".base", resolve_dilator)
        try:
            at = base.elem_from_json(obj.get("at"))
        except NotInField:
            raise BadSpec("'at' is not an element of the base order", path + ".at") from None
        if not base.contains(at):
            raise BadSpec("'at' is not an element of the base order", path + ".at")
        return Restrict(base, at)
    if k == "applied":
        if resolve_dilator is None:
            raise BadSpec("applied orders need a dilator resolver", path)
        D = resolve_dilator(obj.get("dilator"), path + ".dilator")
        return Applied(D, order_from_json(obj.get("base"), path + ".base", resolve_dilator))
    raise BadSpec(f"unknown order kind {k!r}", path + ".kind")
