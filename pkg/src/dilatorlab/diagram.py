"""Arity diagrams and IU diagrams.

An arity diagram is stored canonically as a pair of strictly increasing maps
``e0: n0 -> n`` and ``e1: n1 -> n`` whose ranges cover ``range(n)``.  The
intersection object is implicit: it is the common part of the two ranges.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, cmp_to_key, lru_cache
from itertools import combinations
from typing import Callable, Iterable, Sequence

from .errors import CoverageGap, NotInField, NotIncreasing, NotMonotone, Trivial


@dataclass(frozen=True)
class ArityDiagram:
    e0: tuple[int, ...]
    e1: tuple[int, ...]
    n: int  # size of the union object

    @property
    def n0(self) -> int:
        return len(self.e0)

    @property
    def n1(self) -> int:
        return len(self.e1)

    @property
    def n_cap(self) -> int:
        return len(set(self.e0) & set(self.e1))

    @property
    def is_trivial(self) -> bool:
        return self.e0 == self.e1 and len(self.e0) == self.n

    def to_json(self) -> dict:
        return {"e0": list(self.e0), "e1": list(self.e1)}

    def __str__(self):
        return f"Diag({list(self.e0)} | {list(self.e1)} -> {self.n})"


def _check_increasing(e: Sequence[int], label: str):
    for x in e:
        if not isinstance(x, int) or isinstance(x, bool) or x < 0:
            raise NotIncreasing(f"{label} has a non-natural entry {x!r}")
    for a, b in zip(e, e[1:]):
        if not a < b:
            raise NotIncreasing(f"{label} is not strictly increasing: {list(e)}")


def diag_make(e0: Sequence[int], e1: Sequence[int]) -> ArityDiagram:
    """Validate two increasing maps and re-index their codomain to the union of ranges."""
    e0, e1 = tuple(e0), tuple(e1)
    _check_increasing(e0, "e0")
    _check_increasing(e1, "e1")
    union = sorted(set(e0) | set(e1))
    pos = {v: i for i, v in enumerate(union)}
    return ArityDiagram(tuple(pos[v] for v in e0), tuple(pos[v] for v in e1), len(union))


def diag_from_json(obj) -> ArityDiagram:
    """``{"e0": [...], "e1": [...]}``; the union must already cover ``1 + max`` entries."""
    e0, e1 = tuple(obj["e0"]), tuple(obj["e1"])
    _check_increasing(e0, "e0")
    _check_increasing(e1, "e1")
    n = 1 + max(e0 + e1) if (e0 or e1) else 0
    if set(e0) | set(e1) != set(range(n)):
        raise CoverageGap(f"ranges of e0 and e1 do not cover range({n})")
    return ArityDiagram(e0, e1, n)


def diag_negate(d: ArityDiagram) -> ArityDiagram:
    return ArityDiagram(d.e1, d.e0, d.n)


def trivial(n: int) -> ArityDiagram:
    r = tuple(range(n))
    return ArityDiagram(r, r, n)


def diag_from_tuples(cmp: Callable, a: Sequence, b: Sequence) -> ArityDiagram:
    """Induced diagram of two increasing tuples, merging them with ``cmp``."""
    e0, e1 = [], []
    i = j = n = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        c = cmp(a[i], b[j])
        if c < 0:
            e0.append(n)
            i += 1
        elif c > 0:
            e1.append(n)
            j += 1
        else:
            e0.append(n)
            e1.append(n)
            i += 1
            j += 1
        n += 1
    while i < la:
        e0.append(n)
        i += 1
        n += 1
    while j < lb:
        e1.append(n)
        j += 1
        n += 1
    return ArityDiagram(tuple(e0), tuple(e1), n)


def _sorted_subset(order, xs: Iterable) -> list:
    xs = list(dict.fromkeys(xs))
    for x in xs:
        if not order.contains(x):
            raise NotInField(x, order)
    return sorted(xs, key=cmp_to_key(order.cmp))


def diag_induced(order, a: Iterable, b: Iterable) -> ArityDiagram:
    """The canonical diagram isomorphic to the inclusion square of ``a`` and ``b``."""
    return diag_from_tuples(order.cmp, _sorted_subset(order, a), _sorted_subset(order, b))


@lru_cache(maxsize=None)
def _enumerate(n0: int, n1: int) -> tuple[ArityDiagram, ...]:
    out = []
    for s in range(max(n0, n1), n0 + n1 + 1):
        full = set(range(s))
        for a in combinations(range(s), n0):
            rest = full.difference(a)
            for b in combinations(range(s), n1):
                if rest <= set(b):
                    out.append(ArityDiagram(a, b, s))
    return tuple(out)


def diag_enumerate(n0: int, n1: int) -> list[ArityDiagram]:
    """All arity diagrams with left arity ``n0`` and right arity ``n1``."""
    return list(_enumerate(n0, n1))


def diag_is_monotone(d: ArityDiagram) -> bool:
    return d.n0 == d.n1 and all(x <= y for x, y in zip(d.e0, d.e1))


def monotone_interpolants(d: ArityDiagram) -> list[tuple[int, ...]]:
    """The maps ``f_0 = e0 <= f_1 <= ... <= f_N = e1``, each step moving one coordinate."""
    if not diag_is_monotone(d):
        raise NotMonotone(str(d))
    if d.is_trivial:
        raise Trivial(str(d))
    ks = [j for j in range(d.n0) if d.e0[j] < d.e1[j]]
    big_n = len(ks)
    fs = []
    for i in range(big_n + 1):
        cut = ks[big_n - 1 - i] if i < big_n else -1
        fs.append(tuple(d.e0[j] if j <= cut else d.e1[j] for j in range(d.n0)))
    return fs


def diag_decompose_monotone(d: ArityDiagram) -> list[ArityDiagram]:
    """Single-step monotone diagrams between consecutive interpolants."""
    fs = monotone_interpolants(d)
    return [diag_make(f, g) for f, g in zip(fs, fs[1:])]


def moving_coordinate(d: ArityDiagram) -> int:
    """The unique ``k`` with ``e0(k) < e1(k)`` in a single-step monotone diagram."""
    ks = [j for j in range(d.n0) if d.e0[j] < d.e1[j]]
    if not diag_is_monotone(d) or len(ks) != 1 or d.n != d.n0 + 1:
        raise NotMonotone(f"{d} is not a single-step monotone diagram")
    return ks[0]


# ---------------------------------------------------------------------------
# IU diagrams
#
# Elements of the free distributive lattice on m generators are kept in
# disjunctive normal form: an antichain of non-empty generator sets, read as
# a join of meets.


def _antichain(clauses) -> frozenset:
    cs = set(frozenset(c) for c in clauses)
    return frozenset(c for c in cs if not any(o < c for o in cs))


def lattice_leq(p: frozenset, q: frozenset) -> bool:
    return all(any(b <= a for b in q) for a in p)


def lattice_meet(p: frozenset, q: frozenset) -> frozenset:
    return _antichain(a | b for a in p for b in q)


def lattice_join(p: frozenset, q: frozenset) -> frozenset:
    return _antichain(list(p) + list(q))


@lru_cache(maxsize=None)
def free_lattice(m: int) -> tuple[frozenset, ...]:
    """All elements of the free distributive lattice (no top or bottom) on ``m`` generators."""
    gens = [frozenset([frozenset([i])]) for i in range(m)]
    elems = set(gens)
    frontier = list(elems)
    while frontier:
        new = []
        for p in frontier:
            for q in list(elems):
                for r in (lattice_meet(p, q), lattice_join(p, q)):
                    if r not in elems:
                        elems.add(r)
                        new.append(r)
        frontier = new
    return tuple(sorted(elems, key=lambda p: (len(p), sorted(sorted(c) for c in p))))


def term_str(p: frozenset) -> str:
    return " v ".join("^".join(str(i) for i in sorted(c)) for c in sorted(p, key=sorted))


class IUDiagram:
    """Lattice-indexed family of finite objects with coherent increasing maps.

    Built from generator subsets of an order.  Object sizes and maps are
    computed on demand and cached.
    """

    def __init__(self, order, generators: Sequence[Sequence]):
        self.order = order
        self.generators = [tuple(_sorted_subset(order, g)) for g in generators]
        self.arities = [len(g) for g in self.generators]
        self._key = cmp_to_key(order.cmp)

    @property
    def m(self) -> int:
        return len(self.generators)

    @cached_property
    def terms(self) -> tuple[frozenset, ...]:
        return free_lattice(self.m)

    def realize(self, p: frozenset) -> tuple:
        """The subset of the order that the lattice term ``p`` denotes."""
        out = set()
        for clause in p:
            sets = [set(self.generators[i]) for i in clause]
            out |= set.intersection(*sets)
        return tuple(sorted(out, key=self._key))

    @cached_property
    def objects(self) -> dict:
        return {p: len(self.realize(p)) for p in self.terms}

    def generator(self, i: int) -> frozenset:
        return frozenset([frozenset([i])])

    def map(self, p: frozenset, q: frozenset) -> tuple[int, ...]:
        """The increasing map ``f_pq`` for ``p <= q``."""
        if not lattice_leq(p, q):
            raise ValueError(f"{term_str(p)} is not below {term_str(q)}")
        small, big = self.realize(p), self.realize(q)
        pos = {x: i for i, x in enumerate(big)}
        return tuple(pos[x] for x in small)

    def square(self, p: frozenset, q: frozenset) -> ArityDiagram:
        """The arity diagram of the square ``(p ^ q, p, q, p v q)``."""
        top = lattice_join(p, q)
        f, g = self.map(p, top), self.map(q, top)
        return ArityDiagram(f, g, self.objects[top])

    def diagram(self, i: int, j: int) -> ArityDiagram:
        return self.square(self.generator(i), self.generator(j))

    def distinct_objects(self) -> list[tuple]:
        return sorted({self.realize(p) for p in self.terms}, key=lambda s: (len(s), [str(x) for x in s]))

    def to_json(self) -> dict:
        return {
            "arities": self.arities,
            "objects": {term_str(p): n for p, n in self.objects.items()},
        }


def iu_from_subsets(order, subsets: Sequence[Sequence]) -> IUDiagram:
    return IUDiagram(order, subsets)
