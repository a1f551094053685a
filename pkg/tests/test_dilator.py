import pytest
from hypothesis import given, strategies as st

from dilatorlab import ConstDilator, Finite, IdDilator, Omega, OmegaStar, c_join, c_sum
from dilatorlab.diagram import diag_enumerate, diag_is_monotone, trivial
from dilatorlab.dilator import (
    DilEmbedding,
    colex_pair,
    dil_apply,
    dil_check_axioms,
    dil_check_monotone,
    dil_map,
    dil_monotone_counterexample_descent,
    dil_trace_roundtrip,
    emb_apply,
    emb_check,
    finite_semidilator,
    identity_embedding,
    increasing_maps,
    lex_pair,
    reverse_dilator,
    violator,
)
from dilatorlab.errors import MonotoneHolds, NotIncreasing
from dilatorlab.linorder import Inst, verify_descent

from _corpus import finite_predilators


def test_identity_applied_is_isomorphic_to_base():
    X = dil_apply(IdDilator(), Omega())
    assert [x.args for x in X.prefix(4)] == [(0,), (1,), (2,), (3,)]
    assert X.cmp(Inst("id", (2,)), Inst("id", (5,))) < 0


def test_colex_pair_on_finite_three():
    X = dil_apply(colex_pair(), Finite(3))
    assert [x.args for x in X.elements()] == [(0, 1), (0, 2), (1, 2)]
    assert [x.args for x in dil_apply(lex_pair(), Finite(3)).elements()] == [(0, 1), (0, 2), (1, 2)]


# -- negative controls for the axiom checker ---------------------------------


def test_all_false_oracle_fails_linearity():
    D = finite_semidilator("mute", {"a": 0, "b": 0}, lambda s, t, d: False)
    rep = dil_check_axioms(D)
    assert not rep.ok and rep.check == "linearity" and rep.counterexample["neither"]


def test_reflexive_oracle_fails_irreflexivity():
    D = finite_semidilator("refl", {"a": 1}, lambda s, t, d: True)
    rep = dil_check_axioms(D)
    assert not rep.ok and rep.check == "irreflexivity"


def test_cyclic_oracle_fails_transitivity_with_iu_witness():
    beats = {("a", "b"), ("b", "c"), ("c", "a")}
    D = finite_semidilator("rps", {"a": 0, "b": 0, "c": 0}, lambda s, t, d: (s, t) in beats)
    rep = dil_check_axioms(D)
    assert not rep.ok and rep.check == "transitivity"
    assert sorted(rep.counterexample["terms"]) == ["a", "b", "c"]
    assert "iu" in rep.counterexample
    assert rep.to_json()["verdict"] == "fail"


def test_corpus_predilators_pass_axioms_and_monotonicity():
    for D in finite_predilators():
        assert dil_check_axioms(D).ok, D
        assert dil_check_monotone(D).ok, D


def test_non_monotone_fixtures_are_caught():
    for D in [reverse_dilator(), violator(1), violator(2), violator(3)]:
        assert dil_check_axioms(D).ok
        rep = dil_check_monotone(D)
        assert not rep.ok
        t, d = rep.counterexample["term"], rep.counterexample["diagram"]
        w = dil_monotone_counterexample_descent(D, t, d, length=6)
        assert len(w) == 6 and verify_descent(w.order, list(w.elements))


def test_counterexample_descent_refuses_monotone_cases():
    D = IdDilator()
    d = next(d for d in diag_enumerate(1, 1) if diag_is_monotone(d) and not d.is_trivial)
    with pytest.raises(MonotoneHolds):
        dil_monotone_counterexample_descent(D, "id", d)
    with pytest.raises(MonotoneHolds):
        dil_monotone_counterexample_descent(D, "id", trivial(1))


def test_reverse_is_wellfounded_nowhere_infinite():
    D = reverse_dilator()
    assert D.wf_at(Finite(5)) is True
    assert D.wf_at(Omega()) is False
    w = D.descent_at(Omega(), 5)
    assert verify_descent(dil_apply(D, Omega()), w)


# -- embeddings ----------------------------------------------------------------


def test_identity_embedding_passes():
    for D in finite_predilators()[:4]:
        assert emb_check(identity_embedding(D)).ok


def test_collapsing_embedding_fails():
    iota = DilEmbedding(ConstDilator(Finite(2)), ConstDilator(Finite(2)), lambda t: 0)
    rep = emb_check(iota)
    assert not rep.ok and rep.counterexample["reason"] == "comparison changed"


def test_embedding_must_keep_arity_and_land_on_terms():
    rep = emb_check(DilEmbedding(IdDilator(), ConstDilator(Finite(2)), lambda t: 0))
    assert rep.counterexample["reason"] == "arity changed"
    rep = emb_check(DilEmbedding(ConstDilator(Finite(2)), ConstDilator(Finite(1)), lambda t: t))
    assert rep.counterexample["reason"] == "image not a term"


def test_emb_apply_keeps_arguments():
    iota = identity_embedding(colex_pair())
    assert emb_apply(iota, Inst("p", (1, 4))) == Inst("p", (1, 4))


# -- functor action ------------------------------------------------------------


@given(st.integers(0, 3), st.data())
def test_functor_composition_on_colex(n_extra, data):
    D = colex_pair()
    n = 2 + n_extra
    m = n + data.draw(st.integers(0, 2))
    k = m + data.draw(st.integers(0, 2))
    f = data.draw(st.sampled_from(increasing_maps(n, m)))
    g = data.draw(st.sampled_from(increasing_maps(m, k)))
    for x in dil_apply(D, Finite(n)).elements():
        fx = dil_map(D, f, x)
        assert dil_map(D, g, fx) == dil_map(D, [g[f[i]] for i in range(n)], x)
        assert dil_map(D, range(n), x) == x


def test_dil_map_rejects_non_increasing():
    with pytest.raises(NotIncreasing):
        dil_map(colex_pair(), [1, 0], Inst("p", (0, 1)))
    with pytest.raises(NotIncreasing):
        dil_map(colex_pair(), lambda x: 7 - x, Inst("p", (0, 1)), Y=Omega())
    # the same map is increasing into the reversed naturals
    assert dil_map(colex_pair(), lambda x: 7 - x, Inst("p", (0, 1)), Y=OmegaStar()).args == (7, 6)


def test_increasing_map_counts():
    from math import comb

    for n in range(4):
        for m in range(6):
            assert len(increasing_maps(n, m)) == comb(m, n)


# -- trace round trip ----------------------------------------------------------


def test_trace_examples():
    rep = dil_trace_roundtrip(IdDilator())
    assert rep.ok and rep.stats["trace"] == [[1, "id"]]
    rep = dil_trace_roundtrip(ConstDilator(Finite(2)))
    assert rep.ok and [n for n, _ in rep.stats["trace"]] == [0, 0]
    rep = dil_trace_roundtrip(c_sum(IdDilator(), IdDilator()))
    assert rep.ok and [n for n, _ in rep.stats["trace"]] == [1, 1]
    J = c_join(IdDilator(), IdDilator())
    rep = dil_trace_roundtrip(J)
    assert rep.ok and len(rep.stats["trace"]) == len(list(J.terms_upto(3)))


def test_trace_roundtrip_over_finite_predilators():
    for D in finite_predilators():
        assert dil_trace_roundtrip(D, arity_cap=2).ok, D


def test_trace_refuses_infinite_fibres():
    rep = dil_trace_roundtrip(ConstDilator(Omega()))
    assert not rep.ok and "infinite" in rep.counterexample["reason"]
