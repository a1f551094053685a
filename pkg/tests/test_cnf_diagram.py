from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from dilatorlab import (
    ArityDiagram,
    Finite,
    Omega,
    diag_decompose_monotone,
    diag_enumerate,
    diag_from_json,
    diag_induced,
    diag_is_monotone,
    diag_make,
    iu_from_subsets,
)
from dilatorlab.cnf import OMEGA, CnfError, Ordinal, ordinals_below
from dilatorlab.diagram import diag_negate, free_lattice, moving_coordinate, trivial
from dilatorlab.errors import CoverageGap, NotIncreasing, NotMonotone, Trivial


def ordinals(depth=2):
    small = st.integers(0, 4).map(Ordinal.of)
    if depth == 0:
        return small
    inner = ordinals(depth - 1)
    terms = st.lists(st.tuples(inner, st.integers(1, 3)), max_size=3)

    def build(ts):
        ts = sorted({e: c for e, c in ts}.items(), key=lambda p: p[0], reverse=True)
        return Ordinal(tuple(ts))

    return st.one_of(small, terms.map(build))


# -- ordinals -----------------------------------------------------------------


@given(ordinals(), ordinals(), ordinals())
def test_ordinal_addition_associative(a, b, c):
    assert (a + b) + c == a + (b + c)


@given(ordinals(), ordinals())
def test_ordinal_addition_monotone_right(a, b):
    assert not a + b < a
    if b != Ordinal.of(0):
        assert a < a + b


@given(ordinals())
def test_ordinal_json_round_trip(a):
    assert Ordinal.from_json(a.to_json()) == a


def test_ordinal_absorption():
    assert Ordinal.of(1) + OMEGA == OMEGA
    assert OMEGA + 1 != OMEGA
    assert str(OMEGA + OMEGA) == "w*2"


def test_ordinal_rejects_bad_terms():
    with pytest.raises(CnfError):
        Ordinal.from_json([[0, 1], [1, 1]])
    with pytest.raises(CnfError, match=r"\$\[0\]\[1\]"):
        Ordinal.from_json([[1, 0]])


def test_ordinals_below_increasing_within_finite_bound():
    assert list(ordinals_below(Ordinal.of(4))) == [Ordinal.of(i) for i in range(4)]
    first = [o for _, o in zip(range(30), ordinals_below(Ordinal.omega_pow(2)))]
    assert len(set(first)) == 30 and all(o < Ordinal.omega_pow(2) for o in first)


# -- arity diagrams -----------------------------------------------------------


def test_diagram_count_table():
    # independent count: choose the intersection size c, then interleave
    from math import factorial

    for a in range(4):
        for b in range(4):
            want = sum(
                factorial(a + b - c) // (factorial(c) * factorial(a - c) * factorial(b - c))
                for c in range(min(a, b) + 1)
            )
            assert len(diag_enumerate(a, b)) == want


def test_diagrams_are_canonical_and_distinct():
    for a in range(4):
        for b in range(4):
            ds = diag_enumerate(a, b)
            assert len(set(ds)) == len(ds)
            for d in ds:
                assert set(d.e0) | set(d.e1) == set(range(d.n))
                assert diag_make(d.e0, d.e1) == d


@given(st.lists(st.integers(0, 12), max_size=4, unique=True), st.lists(st.integers(0, 12), max_size=4, unique=True))
def test_induced_diagram_matches_subsets(a, b):
    d = diag_induced(Omega(), a, b)
    union = sorted(set(a) | set(b))
    assert d.n == len(union)
    assert [union[i] for i in d.e0] == sorted(a)
    assert [union[i] for i in d.e1] == sorted(b)


@given(st.sampled_from([d for a in range(4) for b in range(4) for d in diag_enumerate(a, b)]))
def test_negate_is_involution(d):
    assert diag_negate(diag_negate(d)) == d
    assert diag_negate(d).n0 == d.n1


def test_diag_make_normalizes_and_validates():
    assert diag_make((3, 7), (7,)) == ArityDiagram((0, 1), (1,), 2)
    with pytest.raises(NotIncreasing):
        diag_make((2, 1), ())
    with pytest.raises(CoverageGap):
        diag_from_json({"e0": [0, 2], "e1": [0]})


monotone_diagrams = [d for n in range(1, 4) for d in diag_enumerate(n, n) if diag_is_monotone(d) and not d.is_trivial]


@given(st.sampled_from(monotone_diagrams))
def test_monotone_decomposition_steps(d):
    steps = diag_decompose_monotone(d)
    moved = sum(1 for x, y in zip(d.e0, d.e1) if x < y)
    assert len(steps) == moved
    for s in steps:
        assert diag_is_monotone(s) and s.n == s.n0 + 1
        moving_coordinate(s)


def test_decompose_rejects_trivial_and_non_monotone():
    with pytest.raises(Trivial):
        diag_decompose_monotone(trivial(2))
    with pytest.raises(NotMonotone):
        diag_decompose_monotone(ArityDiagram((1,), (0,), 2))


def test_free_lattice_sizes():
    assert len(free_lattice(2)) == 4
    assert len(free_lattice(3)) == 18


def test_iu_diagram_objects_and_squares():
    iu = iu_from_subsets(Finite(6), [(0, 1, 2), (1, 2, 3), (2, 4)])
    objs = iu.distinct_objects()
    # realized sets are closed under the lattice operations
    for x, y in combinations(objs, 2):
        assert tuple(sorted(set(x) & set(y))) in objs or not set(x) & set(y)
        assert tuple(sorted(set(x) | set(y))) in objs
    d = iu.diagram(0, 1)
    assert d == diag_induced(Finite(6), (0, 1, 2), (1, 2, 3))
