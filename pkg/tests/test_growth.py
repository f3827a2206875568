"""Element equality, ball sizes, orders, the exponential-growth witness."""

from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mealy import (
    BudgetExceeded,
    NoWitness,
    NotBireversible,
    NotInvertible,
    NotStabilized,
    action_signature,
    aleshin,
    ball_size,
    elements_equal,
    exponential_witness,
    growth_lower_bound_from_witness,
    growth_table,
    identity_automaton,
    flip_automaton,
    order_of_state,
    parse_automaton,
)

A = aleshin()
AUG = A.augment()
X, Y, Z = (A.state_names.index(s) for s in "xyz")
ONE = AUG.size - 1

SLOW = parse_automaton(
    "alphabet: 0 1\nstates: a b\n"
    "a 0 -> a 1\na 1 -> b 0\nb 0 -> b 1\nb 1 -> a 0\n"
)


def pair_walk_equal(aut, u, v):
    """Equality oracle: breadth-first search over reachable state-word pairs."""
    asz = aut.alphabet_size
    seen = {(u, v)}
    frontier = [(u, v)]
    while frontier:
        nxt = []
        for wu, wv in frontier:
            for i in range(asz):
                if aut.act(wu, (i,)) != aut.act(wv, (i,)):
                    return False
                step = (aut.advance((i,), wu), aut.advance((i,), wv))
                if step not in seen:
                    seen.add(step)
                    nxt.append(step)
        frontier = nxt
    return True


def oracle_equal(aut_aug, u, v):
    m = max(len(u), len(v))
    one = aut_aug.size - 1
    return pair_walk_equal(aut_aug, u + (one,) * (m - len(u)), v + (one,) * (m - len(v)))


def test_known_equalities():
    assert not elements_equal(A, (Z,), (Z, Z))
    assert elements_equal(A, (X, X + 3), ())
    assert elements_equal(A, (X + 3, X), ())
    assert elements_equal(A, (X,), (X, ONE))
    assert elements_equal(A, (), ())
    assert elements_equal(SLOW, (0, 0), ())


def test_equality_matches_pair_walk_on_short_words():
    words = [()]
    for length in (1, 2):
        words += list(product(range(AUG.size), repeat=length))
    for u in words:
        for v in words:
            assert elements_equal(A, u, v) == oracle_equal(AUG, u, v), (u, v)


@given(st.lists(st.integers(0, 6), max_size=3), st.lists(st.integers(0, 6), max_size=3))
@settings(max_examples=60, deadline=None)
def test_equality_matches_pair_walk_random(u, v):
    u, v = tuple(u), tuple(v)
    assert elements_equal(A, u, v) == oracle_equal(AUG, u, v)


def test_equality_requires_invertibility():
    aut = parse_automaton("alphabet: 0 1\nstates: a\na 0 -> a 0\na 1 -> a 0\n")
    with pytest.raises(NotInvertible):
        elements_equal(aut, (0,), (0, 0))


def test_action_signature_budget():
    with pytest.raises(BudgetExceeded):
        action_signature(A, (X,), budget=1)


def test_group_ball_sizes():
    assert [ball_size(A, n) for n in (1, 2, 3)] == [7, 37, 187]
    ident = identity_automaton()
    assert [ball_size(ident, n) for n in (1, 2, 3)] == [1, 1, 1]
    assert [ball_size(SLOW, n) for n in (1, 2, 3)] == [2, 2, 2]


def test_semigroup_ball_sizes():
    assert [ball_size(A, n, semigroup=True) for n in (1, 2, 3)] == [3, 12, 39]
    assert ball_size(SLOW, 3, semigroup=True) == 2
    assert ball_size(identity_automaton(), 2, semigroup=True) == 1


def test_ball_size_guards():
    with pytest.raises(ValueError):
        ball_size(A, 0)
    non_inv = parse_automaton("alphabet: 0 1\nstates: a\na 0 -> a 0\na 1 -> a 0\n")
    with pytest.raises(NotInvertible):
        ball_size(non_inv, 2)
    # every power sends every input to 0...0, so the semigroup is trivial
    assert ball_size(non_inv, 2, semigroup=True) == 1
    with pytest.raises(BudgetExceeded):
        ball_size(A, 5, budget=10)


def test_growth_table_shape():
    table = growth_table(A, 3)
    assert table.radius == 3
    assert table.gamma == (7, 37, 187)
    assert table.generating_set_size == 2 * A.size


def test_flip_has_order_two():
    r = order_of_state(flip_automaton(), 0, 8)
    assert r.finite
    assert (r.period, r.preperiod) == (2, 0)


def test_involution_square_detected():
    r = order_of_state(SLOW, 0, 8)
    assert (r.period, r.preperiod) == (2, 0)


def test_no_repetition_is_reported_not_certified():
    r = order_of_state(A, X, 8)
    assert not r.finite
    assert r.period is None and r.preperiod is None
    assert r.horizon == 8


def test_order_requires_bireversible():
    aut = parse_automaton(
        "alphabet: 0 1\nstates: a b\na 0 -> a 0\na 1 -> b 1\nb 0 -> b 1\nb 1 -> a 0\n"
    )
    with pytest.raises(NotBireversible):
        order_of_state(aut, 0, 4)


def test_witness_on_aleshin():
    w = exponential_witness(A, X, 6)
    assert w.q == (X,)
    assert w.k == 3
    assert w.state_count == 3
    assert w.cc_sizes == (3, 9, 27, 81, 243, 729)
    assert w.mz_sizes == (3, 9, 27, 81, 243, 729)
    assert w.nq_sizes == (1, 1, 1, 1, 1, 1)
    assert w.ell_estimate == 1
    assert w.alpha == 2
    assert w.K == 9
    assert w.distinct_sizes_ok
    assert w.c_estimate == Fraction(1, 3)
    assert w.sandwich_ok
    assert w.strict_from == 1


def test_witness_sandwich_recomputed_exactly():
    w = exponential_witness(A, X, 6)
    for n in range(1, len(w.cc_sizes) + 1):
        lo = Fraction(w.k ** (n - 1), w.nq_sizes[n - 1])
        assert w.sandwich_lo[n - 1] == lo
        assert w.sandwich_hi[n - 1] == lo * w.state_count
        assert lo <= w.mz_sizes[n - 1] <= lo * w.state_count
    # the witness chain: K^(n-1) distinct elements of length <= alpha*n
    assert (Fraction(w.k) / w.ell_estimate) ** w.alpha > w.state_count


def test_witness_growth_bound():
    assert growth_lower_bound_from_witness(exponential_witness(A, X, 6)) == 3.0
    bases = [growth_lower_bound_from_witness(exponential_witness(A, X, h)) for h in (4, 5, 6)]
    assert bases == sorted(bases)
    assert bases[-1] == 3.0


def test_witness_without_exponential_signal():
    w = exponential_witness(identity_automaton(), 0, 4)
    assert w.k == 1
    assert w.alpha is None and w.K is None
    assert not w.distinct_sizes_ok
    assert w.sandwich_ok
    with pytest.raises(NoWitness):
        growth_lower_bound_from_witness(w)


def test_witness_rebases_late_stabilizer():
    with pytest.raises(NotStabilized):
        exponential_witness(SLOW, 0, 2)
    w = exponential_witness(SLOW, 0, 6)
    assert w.q == (0, 0)
    assert w.k == 1
    assert w.state_count == 4
    assert w.cc_sizes == (4, 4, 4)
    assert w.mz_sizes == (1, 1, 1)
    assert w.sandwich_ok


def test_witness_horizon_guard():
    with pytest.raises(ValueError):
        exponential_witness(A, X, 1)
