import pytest
from hypothesis import given, settings, strategies as st

from dilatorlab import Applied, Cmp, Cnf, Finite, IdDilator, Omega, OmegaStar, Restrict, Sum, lo_cmp, lo_restrict, lo_sum
from dilatorlab.cnf import OMEGA, Ordinal
from dilatorlab.errors import BadSpec, InvariantError, NotInField
from dilatorlab.linorder import (
    Order,
    _longest_from,
    lo_descend_probe,
    lo_descend_search,
    order_embeds,
    order_from_json,
    verify_descent,
    window_descent,
)

W2 = Ordinal.omega_pow(2)

ORDERS = [
    Finite(7),
    Omega(),
    OmegaStar(),
    Cnf(W2),
    Cnf(OMEGA + 3),
    Sum((Finite(2), Omega())),
    Sum((Omega(), Finite(3))),
    Restrict(Omega(), 5),
    Restrict(Cnf(W2), OMEGA + 2),
]


@pytest.mark.parametrize("X", ORDERS, ids=str)
def test_total_order_on_prefix(X):
    xs = X.prefix(25)
    assert len(set(xs)) == len(xs)
    for a in xs:
        assert X.cmp(a, a) == 0
        for b in xs:
            assert X.cmp(a, b) == -X.cmp(b, a)
            for c in xs[:10]:
                if X.cmp(a, b) < 0 and X.cmp(b, c) < 0:
                    assert X.cmp(a, c) < 0


@pytest.mark.parametrize("X", ORDERS, ids=str)
def test_json_round_trip(X):
    assert order_from_json(X.to_json()) == X


def test_sum_and_restrict_shapes():
    S = lo_sum(Finite(2), Finite(3))
    assert S.size() == 5 and S.order_type() == Ordinal.of(5)
    assert lo_sum().size() == 0
    R = lo_restrict(Cnf(OMEGA + 3), OMEGA + 1)
    assert R.order_type() == OMEGA + 1
    assert R.size() is None
    assert lo_restrict(Omega(), 4).elements() == [0, 1, 2, 3]
    with pytest.raises(NotInField):
        lo_restrict(Finite(3), 5)


def test_ordinal_positions_in_sum():
    S = Sum((Omega(), Finite(2)))
    assert S.ordinal_of((1, 1)) == OMEGA + 1
    assert S.element_at(OMEGA + 1) == (1, 1)
    assert S.element_at(Ordinal.of(4)) == (0, 4)
    assert S.element_at(OMEGA + 2) is None


def test_lo_cmp_checks_membership():
    assert lo_cmp(OmegaStar(), 3, 5) == Cmp.Greater
    with pytest.raises(NotInField):
        lo_cmp(Finite(2), 0, 2)


def test_applied_identity_is_the_base():
    X = Applied(IdDilator(), Finite(3))
    assert [x.args for x in X.elements()] == [(0,), (1,), (2,)]


def _brute_longest(X, xs):
    out = [1] * len(xs)
    for i in range(len(xs) - 1, -1, -1):
        for j in range(i + 1, len(xs)):
            if X.cmp(xs[j], xs[i]) < 0:
                out[i] = max(out[i], out[j] + 1)
    return out


@given(st.lists(st.integers(0, 30), max_size=30, unique=True))
def test_longest_descent_table_matches_brute_force(vals):
    X = Omega()
    assert _longest_from(X, vals) == _brute_longest(X, vals)


class _Listed(Order):
    """A finite order given by an explicit enumeration of naturals."""

    kind = "listed"

    def __init__(self, vals):
        self.vals = list(vals)
        self._cache = {}

    def cmp(self, x, y):
        return (x > y) - (x < y)

    def contains(self, x):
        return x in self.vals

    def enumerate(self):
        return iter(self.vals)

    def size(self):
        return len(self.vals)


@given(st.lists(st.integers(0, 40), max_size=25, unique=True), st.integers(1, 6))
def test_window_descent_exists_iff_brute_force(vals, depth):
    X = _Listed(vals)
    w = window_descent(X, depth, len(vals))
    longest = max(_brute_longest(X, vals), default=0)
    assert (w is not None) == (longest >= depth)
    if w is not None:
        assert len(w) == depth and verify_descent(X, w)


def test_probe_bases():
    assert lo_descend_probe(Omega(), 5, 10) == (None, "certificate")
    w, basis = lo_descend_probe(OmegaStar(), 5, 10)
    assert basis == "structural" and list(w.elements) == [0, 1, 2, 3, 4]
    w, basis = lo_descend_probe(_Listed([5, 3, 9, 1]), 3, 10)
    assert basis == "window" and list(w.elements) == [5, 3, 1]


def test_bad_structural_descent_is_an_invariant_error():
    class Liar(_Listed):
        def descent(self, n):
            return list(range(n))  # increasing, not descending

    with pytest.raises(InvariantError):
        lo_descend_search(Liar([0, 1, 2, 3]), 3, 4)


def test_restrict_of_omegastar_keeps_a_descent():
    R = Restrict(OmegaStar(), 3)
    w = lo_descend_search(R, 6, 50)
    assert w is not None and all(x > 3 for x in w.elements)


def test_order_embeds():
    assert order_embeds(Finite(3), Finite(2)) is False
    assert order_embeds(Finite(3), Omega()) is True
    assert order_embeds(Cnf(OMEGA + 1), Omega()) is False
    assert order_embeds(Omega(), Cnf(W2)) is True


def test_order_json_errors_carry_paths():
    with pytest.raises(BadSpec, match=r"\$\.parts\[1\]\.term"):
        order_from_json({"kind": "sum", "parts": [{"kind": "omega"}, {"kind": "cnf", "term": [[1, 0]]}]})
    with pytest.raises(BadSpec, match="unknown order kind"):
        order_from_json({"kind": "reals"})


def test_window_scan_alone_misreads_long_wellorders():
    # a well-founded order of type about w^2 whose enumeration holds a finite descent
    # of length 20 inside the first 400 elements; only the certificate settles it
    from dilatorlab import c_arrow

    X = Applied(c_arrow(Finite(2), Finite(2)), Omega())
    w = window_descent(X, 20, 400)
    assert w is not None and verify_descent(X, w)
    assert X.is_wellfounded() is True
    assert lo_descend_probe(X, 20, 400) == (None, "certificate")
