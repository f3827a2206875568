"""Nerode partitions, minimization, restricted classes."""

import random
from itertools import product

import pytest

from mealy import (
    LengthTooShort,
    NotAMember,
    NotBireversible,
    aleshin,
    component_of,
    component_partition,
    isomorphic,
    last_letter_histogram,
    minimize,
    minimize_component,
    nerode_partition,
    parse_automaton,
    penultimate_letters,
    q_restricted_class,
    restricted_class,
)
from mealy.automaton import MealyAutomaton

A = aleshin()
X = A.state_names.index("x")

TWIN = parse_automaton(
    "alphabet: 0 1\nstates: x y z X Y Z\n"
    "x 0 -> z 1\nx 1 -> y 0\ny 0 -> y 1\ny 1 -> z 0\nz 0 -> x 0\nz 1 -> x 1\n"
    "X 0 -> Z 1\nX 1 -> Y 0\nY 0 -> Y 1\nY 1 -> Z 0\nZ 0 -> X 0\nZ 1 -> X 1\n"
)

SLOW = parse_automaton(
    "alphabet: 0 1\nstates: a b\n"
    "a 0 -> a 1\na 1 -> b 0\nb 0 -> b 1\nb 1 -> a 0\n"
)


def words_up_to(asz, depth):
    for m in range(depth + 1):
        yield from product(range(asz), repeat=m)


def equivalent_by_exhaustion(aut, p, q, depth):
    """Ground truth: compare the two state actions on every word up to depth."""
    return all(aut.act((p,), w) == aut.act((q,), w) for w in words_up_to(aut.alphabet_size, depth))


def equivalent_by_product_walk(aut, p, q, depth):
    """Same predicate via a breadth-first walk of reachable state pairs.

    Outputs depend only on the current pair, so a mismatch on some word of
    length <= depth is a mismatch at a pair reachable in < depth steps.
    """
    asz = aut.alphabet_size
    frontier = {(p, q)}
    seen = set(frontier)
    for _ in range(depth):
        nxt = set()
        for a, b in frontier:
            for i in range(asz):
                sa, oa = aut.step(a, i)
                sb, ob = aut.step(b, i)
                if oa != ob:
                    return False
                if (sa, sb) not in seen:
                    seen.add((sa, sb))
                    nxt.add((sa, sb))
        frontier = nxt
    return True


def test_aleshin_states_are_pairwise_distinct():
    part = nerode_partition(A)
    assert part.classes == ((0,), (1,), (2,))
    assert part.rounds == 2


def test_twin_collapses_to_three_classes():
    part = nerode_partition(TWIN)
    assert part.classes == ((0, 3), (1, 4), (2, 5))
    depth = TWIN.size * (part.rounds + 1)
    for p in range(TWIN.size):
        for q in range(TWIN.size):
            same = part.class_of[p] == part.class_of[q]
            assert same == equivalent_by_product_walk(TWIN, p, q, depth)


def test_refinement_agrees_with_bounded_exhaustion():
    """On |Q| <= 4, |alphabet| = 2 the fixpoint equals word-by-word equality up
    to depth |Q| * (rounds + 1)."""
    rng = random.Random(11)
    small = []
    for m in (1, 2):
        for delta in product(range(m), repeat=2 * m):
            for rho in product(range(2), repeat=2 * m):
                small.append((m, delta, rho))
    for m, delta, rho in small:
        aut = MealyAutomaton(("0", "1"), tuple("ab"[:m]), delta, rho)
        part = nerode_partition(aut)
        depth = m * (part.rounds + 1)
        for p in range(m):
            for q in range(p + 1, m):
                same = part.class_of[p] == part.class_of[q]
                assert same == equivalent_by_exhaustion(aut, p, q, depth), (delta, rho, p, q)
    # the word sweep is exponential in depth, so larger samples use the
    # pair-walk formulation of the same bounded predicate
    for _ in range(60):
        m = rng.choice((3, 4))
        delta = tuple(rng.randrange(m) for _ in range(2 * m))
        rho = tuple(rng.randrange(2) for _ in range(2 * m))
        aut = MealyAutomaton(("0", "1"), tuple("abcd"[:m]), delta, rho)
        part = nerode_partition(aut)
        depth = m * (part.rounds + 1)
        for p in range(m):
            for q in range(p + 1, m):
                same = part.class_of[p] == part.class_of[q]
                assert same == equivalent_by_product_walk(aut, p, q, depth), (delta, rho, p, q)


def test_minimize_quotients_the_twin():
    m = minimize(TWIN)
    assert m.size == 3
    assert isomorphic(m, A) is not None
    # representatives are the least member of each class
    assert m.state_names == ("x", "y", "z")


def test_minimize_is_identity_on_minimal():
    m = minimize(A)
    assert m.delta == A.delta and m.rho == A.rho
    assert m.state_names == A.state_names


def test_component_partition_is_cached():
    comp = component_of(A, (X, X))
    assert component_partition(comp) is component_partition(comp)


def test_restricted_classes_inside_components():
    comp = component_of(A, (X, X))
    assert component_partition(comp).classes == tuple((t,) for t in range(9))
    rc = restricted_class(comp, (X, X))
    assert rc.members == ((X, X),)
    with pytest.raises(NotAMember):
        restricted_class(comp, (X, X, X))

    collapsed = component_of(SLOW, (0, 0))
    assert component_partition(collapsed).classes == ((0, 1, 2, 3),)
    assert restricted_class(collapsed, (0, 0)).members == ((0, 0), (0, 1), (1, 0), (1, 1))


def test_minimize_component_collapses_slow_square():
    m = minimize_component(component_of(SLOW, (0, 0)))
    assert m.size == 1


def test_q_restricted_class_keeps_last_letter():
    for n in range(1, 5):
        nq = q_restricted_class(A, X, n)
        assert nq.members == ((X,) * n,)
    nq = q_restricted_class(SLOW, 0, 2)
    assert nq.members == ((0, 0), (1, 0))
    assert all(w[-1] == 0 for w in nq.members)


def test_q_restricted_class_requires_bireversible():
    aut = parse_automaton(
        "alphabet: 0 1\nstates: a b\na 0 -> a 0\na 1 -> b 1\nb 0 -> b 1\nb 1 -> a 0\n"
    )
    with pytest.raises(NotBireversible):
        q_restricted_class(aut, 0, 2)


def test_last_letter_histogram():
    assert last_letter_histogram([(0, 1), (1, 1), (0, 0)]) == {0: 1, 1: 2}
    with pytest.raises(LengthTooShort):
        last_letter_histogram([(0, 1), ()])


def test_penultimate_letters():
    nq = q_restricted_class(SLOW, 0, 2)
    assert penultimate_letters(nq) == (0, 1)
    assert penultimate_letters(q_restricted_class(A, X, 3)) == (X,)
    with pytest.raises(LengthTooShort):
        penultimate_letters(q_restricted_class(A, X, 1))
