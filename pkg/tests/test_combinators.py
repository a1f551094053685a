from functools import cmp_to_key

import pytest

from dilatorlab import ConstDilator, Finite, IdDilator, Omega, c_arrow, c_bigjoin, c_integral, c_join, c_sum, lo_sum
from dilatorlab.cnf import Ordinal
from dilatorlab.combinators import (
    arrow_beta_embedding,
    c_join_embedding,
    integral_embedding,
    integral_host,
    reverse_pseudo,
    reverse_pseudo_b,
    sum_injection,
)
from dilatorlab.dilator import colex_pair, dil_apply, dil_check_axioms, dil_check_monotone, emb_check, reverse_dilator
from dilatorlab.errors import DescentExhausted
from dilatorlab.linorder import Cnf, Inst, lo_descend_search, verify_descent

from _corpus import arrow, depth1


def sorted_prefix(X, n):
    return sorted(X.prefix(n), key=cmp_to_key(X.cmp))


def descends(D, X, depth=12, width=200):
    return lo_descend_search(dil_apply(D, X), depth, width) is not None


# -- sum -----------------------------------------------------------------------


def test_sum_of_identities_doubles_finite():
    X = dil_apply(c_sum(IdDilator(), IdDilator()), Finite(2))
    assert X.size() == 4
    assert [t for t, _ in sorted_prefix(X, 4)] == [(0, "id"), (0, "id"), (1, "id"), (1, "id")]


def test_one_plus_omega_is_omega():
    X = dil_apply(c_sum(ConstDilator(Finite(1)), IdDilator()), Omega())
    xs = sorted_prefix(X, 30)
    assert xs[0].term[0] == 0
    # after the single constant, the rest is the identity copy in order
    assert [x.args for x in xs[1:]] == [(i,) for i in range(len(xs) - 1)]


def test_sum_matches_sum_of_applications():
    D0, D1 = colex_pair(), IdDilator()
    X = dil_apply(c_sum(D0, D1), Finite(5))
    Y = lo_sum(dil_apply(D0, Finite(5)), dil_apply(D1, Finite(5)))
    assert X.size() == Y.size() == 15
    ys = sorted_prefix(Y, 15)
    # the isomorphism strips the sum tag into the block index
    assert [(x.term[0], Inst(x.term[1], x.args)) for x in sorted_prefix(X, 15)] == ys


def test_sum_with_non_dilator_is_not_a_dilator():
    D = c_sum(IdDilator(), arrow(2))
    assert descends(D, Omega()) and descends(D, Finite(2))
    assert not descends(D, Finite(1))


def test_sum_injections_are_embeddings():
    for k in (0, 1):
        assert emb_check(sum_injection(IdDilator(), colex_pair(), k)).ok


# -- arrow ---------------------------------------------------------------------


def test_arrow_climax_three():
    A = arrow(3)
    assert lo_descend_search(dil_apply(A, Finite(3)), 20, 400) is not None
    assert lo_descend_search(dil_apply(A, Finite(2)), 20, 400) is None


def test_arrow_into_wellorder_never_descends():
    for alpha in (Finite(2), Omega()):
        A = c_arrow(alpha, Finite(5))
        for g in (Finite(6), Omega(), Cnf(Ordinal.omega_pow(2))):
            assert not descends(A, g), (alpha, g)


def test_arrow_beta_embedding_preserves_order():
    A = c_arrow(Finite(2), Finite(4))
    X = dil_apply(A, Finite(2))
    imgs = [arrow_beta_embedding(A, b) for b in range(4)]
    for i in range(4):
        assert X.contains(imgs[i])
        for j in range(i + 1, 4):
            assert X.cmp(imgs[i], imgs[j]) < 0


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_arrow_descends_exactly_where_alpha_embeds(n):
    A = arrow(n)
    for g in range(7):
        assert descends(A, Finite(g)) == (g >= n), g
    assert descends(A, Omega())


# -- join ----------------------------------------------------------------------


def test_join_with_a_dilator_blocks():
    assert lo_descend_search(dil_apply(c_join(IdDilator(), reverse_pseudo()), Omega()), 20, 400) is None


def test_join_of_two_pseudodilators_descends():
    D = c_join(reverse_pseudo(), reverse_pseudo_b())
    w = D.descent_at(Omega(), 8)
    assert w is not None and verify_descent(dil_apply(D, Omega()), w)


def test_join_semantics_is_conjunction_of_descents():
    pool = [IdDilator(), reverse_pseudo(), arrow(2), arrow(3)]
    for D0 in pool:
        for D1 in pool:
            for g in (Finite(1), Finite(2), Finite(3), Omega()):
                assert descends(c_join(D0, D1), g) == (descends(D0, g) and descends(D1, g)), (D0, D1, g)


def test_join_embedding_is_order_preserving():
    b = reverse_pseudo().descent_at(Omega(), 12)
    emb = c_join_embedding(IdDilator(), reverse_pseudo(), Omega(), b, size=10)
    J = dil_apply(c_join(IdDilator(), reverse_pseudo()), Omega())
    src = dil_apply(IdDilator(), Omega())
    keys = list(emb)
    assert len(keys) == 10
    for x in keys:
        for y in keys:
            if src.cmp(x, y) < 0:
                assert J.cmp(emb[x], emb[y]) < 0


def test_join_embedding_needs_a_long_enough_descent():
    # colex pairs enumerate (1,2) below (0,4), which consumes b_1
    b = reverse_pseudo().descent_at(Omega(), 1)
    with pytest.raises(DescentExhausted):
        c_join_embedding(colex_pair(), reverse_pseudo(), Omega(), b, size=10)
    b = reverse_pseudo().descent_at(Omega(), 2)
    assert len(c_join_embedding(colex_pair(), reverse_pseudo(), Omega(), b, size=10)) == 10


# -- big join ------------------------------------------------------------------


def test_bigjoin_examples():
    assert descends(c_bigjoin([reverse_pseudo()]), Omega())
    assert not descends(c_bigjoin([IdDilator(), reverse_pseudo()]), Omega())
    stream = c_bigjoin(lambda i: arrow(i + 1))
    assert not descends(stream, Finite(3))
    assert stream.descent_at(Omega(), 6) is not None


# -- integral ------------------------------------------------------------------


def test_integral_of_identity_on_finite_three():
    X = dil_apply(c_integral(IdDilator()), Finite(3))
    assert X.size() == 3


@pytest.mark.parametrize("n", [0, 1, 2, 4])
def test_integral_size_is_sum_over_initial_segments(n):
    D = colex_pair()
    want = sum(dil_apply(D, Finite(i)).size() for i in range(n))
    assert dil_apply(c_integral(D), Finite(n)).size() == want


def test_integral_embedding_preserves_order():
    D = colex_pair()
    X = dil_apply(D, Finite(5))
    Y = dil_apply(c_integral(D), integral_host(Finite(5)))
    xs = X.elements()
    for x in xs:
        for y in xs:
            assert (X.cmp(x, y) < 0) == (Y.cmp(integral_embedding(D, x), integral_embedding(D, y)) < 0)


def test_integral_shifts_climax():
    D = c_integral(arrow(2))
    assert descends(D, Finite(3))
    assert not descends(D, Finite(2))


# -- every depth-1 expression is a predilator ----------------------------------


@pytest.mark.parametrize("D", depth1()[:12], ids=lambda D: D.name)
def test_depth1_axioms(D):
    assert dil_check_axioms(D, 30, 2).ok
    assert dil_check_monotone(D, 30, 2).ok


def test_non_monotone_sum_is_caught():
    assert not dil_check_monotone(c_sum(IdDilator(), reverse_dilator())).ok
