"""Acceptance gate: one test per criterion, run with `pytest tests/test_acceptance.py -v`.

Each test is self-contained and uses independent oracles (word sweeps,
pair walks, depth-stable action tables) rather than the library's own
machinery wherever a value is cross-checked.  All comparisons are exact;
no floating-point tolerances are involved anywhere except the final
witness base estimate, which is checked against an exact expected value.
"""

import time
from fractions import Fraction
from itertools import product

import pytest

from mealy import (
    ComponentCache,
    EnumerationSpec,
    aleshin,
    ball_size,
    default_corpus,
    elements_equal,
    enumerate_automata,
    exponential_witness,
    flip_automaton,
    identity_automaton,
    nerode_partition,
    order_of_state,
    parse_automaton,
    ratio_sequence,
    run_suite,
)
from mealy.automaton import MealyAutomaton
from mealy.cli import main

A = aleshin()
AUG = A.augment()

INVOLUTION_TEXT = (
    "alphabet: 0 1\nstates: a b\n"
    "a 0 -> a 1\na 1 -> b 0\nb 0 -> b 1\nb 1 -> a 0\n"
)


def test_criterion_1_predicates():
    """Aleshin satisfies all four predicates; broken mutants are flagged."""
    t0 = time.perf_counter()
    assert A.is_invertible()
    assert A.is_reversible()
    assert A.is_coreversible()
    assert A.is_bireversible()
    # overwriting x's outputs with the identity letter map keeps every
    # letter map a permutation, so invertibility survives; what breaks is
    # coreversibility (letter 0 is now output twice into state x's column)
    mutant = parse_automaton(
        "alphabet: 0 1\nstates: x y z\nx 0 -> z 0\nx 1 -> y 1\n"
        "y 0 -> y 1\ny 1 -> z 0\nz 0 -> x 0\nz 1 -> x 1\n"
    )
    assert mutant.is_invertible()
    assert not mutant.is_coreversible()
    assert not mutant.is_bireversible()
    # collapsing x's outputs to a constant does destroy invertibility
    squashed = parse_automaton(
        "alphabet: 0 1\nstates: x y z\nx 0 -> z 0\nx 1 -> y 0\n"
        "y 0 -> y 1\ny 1 -> z 0\nz 0 -> x 0\nz 1 -> x 1\n"
    )
    assert not squashed.is_invertible()
    assert time.perf_counter() - t0 < 1.0


def test_criterion_2_lemma_suite_zero_failures():
    """All fourteen properties pass or validly skip on the curated corpus and
    on every bireversible automaton with at most two states, horizon 4."""
    reports = run_suite(default_corpus(), horizon=4)
    enumerated = []
    for m in (1, 2):
        for idx, aut in enumerate(enumerate_automata(EnumerationSpec(m, 2, "bireversible"))):
            enumerated.append((f"bi-{m}state-{idx:02d}", aut))
    assert len(enumerated) == 14
    reports += run_suite(enumerated, horizon=4)
    fails = [r for r in reports if r.verdict == "fail"]
    assert fails == [], [(r.property_id, r.automaton_id) for r in fails]
    assert sum(r.verdict == "pass" for r in reports) > 150


def _depth_signatures(aut, depth):
    """Interned depth-bounded action signatures: states agree on every input
    word of length <= depth exactly when their signatures coincide."""
    asz = aut.alphabet_size
    sigs = [0] * aut.size
    for _ in range(depth):
        table = {}
        nxt = []
        for q in range(aut.size):
            key = tuple(
                (aut.rho[q * asz + i], sigs[aut.delta[q * asz + i]])
                for i in range(asz)
            )
            nxt.append(table.setdefault(key, len(table)))
        sigs = nxt
    return sigs


def test_criterion_3_nerode_matches_depth6_tables():
    """Partition refinement equals action-table equality at depth 6 for every
    automaton with |Q| <= 3 over two letters (46916 machines)."""
    mismatches = 0
    total = 0
    for m in (1, 2, 3):
        names = tuple("abc"[:m])
        for delta in product(range(m), repeat=2 * m):
            for rho in product(range(2), repeat=2 * m):
                aut = MealyAutomaton(("0", "1"), names, delta, rho)
                part = nerode_partition(aut)
                sigs = _depth_signatures(aut, 6)
                total += 1
                for p in range(m):
                    for q in range(p + 1, m):
                        if (part.class_of[p] == part.class_of[q]) != (sigs[p] == sigs[q]):
                            mismatches += 1
    assert total == 4 + 256 + 46656
    assert mismatches == 0


def test_criterion_4_ratio_integrality_and_monotonicity():
    for _, aut in default_corpus():
        cache = ComponentCache(aut)
        for q in range(aut.size):
            seq = ratio_sequence(aut, q, 5, cache=cache)
            for n in range(5):
                assert seq.sizes[n + 1] == seq.sizes[n] * seq.ratios[n], (q, n)
            assert all(
                seq.ratios[n + 1] <= seq.ratios[n] for n in range(4)
            ), (aut.state_names[q], seq.ratios)


def _pair_walk_equal(aut, u, v):
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


def _exact_action_partition(words, depth0=6):
    """Group the words by action, exactly.

    Distinct depth-d action tables witness inequality outright.  Equal
    tables are only a hint: the tables are deepened until the grouping
    stabilizes, then every surviving group is proven with a pair walk,
    which decides equality of eventually periodic behaviour exactly.
    """
    depth = depth0
    groups = None
    while True:
        inputs = list(product(range(AUG.alphabet_size), repeat=depth))
        table = {}
        for w in words:
            table.setdefault(tuple(AUG.act(w, inp) for inp in inputs), []).append(w)
        fresh = sorted(sorted(g) for g in table.values())
        if fresh == groups:
            break
        groups = fresh
        depth += 1
    for group in groups:
        rep = group[0]
        for other in group[1:]:
            assert _pair_walk_equal(AUG, rep, other), (rep, other)
    return groups


def test_criterion_5_element_equality_oracle():
    """elements_equal agrees with exact brute-force action comparison on all
    word pairs of length <= 3 over the augmented Aleshin automaton."""
    words = [()]
    for length in (1, 2, 3):
        words += list(product(range(AUG.size), repeat=length))
    groups = _exact_action_partition(words)
    group_of = {}
    for t, group in enumerate(groups):
        for w in group:
            group_of[w] = t
    mismatches = [
        (u, v)
        for u in words
        for v in words
        if elements_equal(A, u, v) != (group_of[u] == group_of[v])
    ]
    assert mismatches == []
    # length-6 input tables alone are too shallow here: exactly 12 ordered
    # pairs of inequivalent words first separate on a length-7 input
    sig6 = {}
    inputs6 = list(product(range(2), repeat=6))
    for w in words:
        sig6.setdefault(tuple(AUG.act(w, inp) for inp in inputs6), []).append(w)
    false_equal = sum(
        1
        for bucket in sig6.values()
        for u in bucket
        for v in bucket
        if u != v and group_of[u] != group_of[v]
    )
    assert false_equal == 12


def test_criterion_6_growth_sanity():
    ident = identity_automaton()
    for n in range(1, 7):
        assert ball_size(ident, n) == 1
    # brute force: count exact action groups among the 7^n generator words
    words = [()]
    for length in (1, 2, 3):
        words += list(product(range(AUG.size), repeat=length))
    groups = _exact_action_partition(words)
    gammas = []
    for n in (1, 2, 3):
        exact_n = [g for g in groups if any(len(w) == n for w in g)]
        gammas.append(len(exact_n))
    assert gammas == [7, 37, 187]
    assert [ball_size(A, n) for n in (1, 2, 3)] == gammas
    assert gammas[0] < gammas[1] < gammas[2]


def test_criterion_7_witness_integrity():
    t0 = time.perf_counter()
    w = exponential_witness(A, A.state_names.index("x"), 6)
    assert w.sandwich_ok
    for n in range(1, len(w.cc_sizes) + 1):
        lo = Fraction(w.k ** (n - 1), w.nq_sizes[n - 1])
        hi = w.state_count * lo
        assert w.sandwich_lo[n - 1] == lo
        assert w.sandwich_hi[n - 1] == hi
        assert lo <= w.mz_sizes[n - 1] <= hi
    assert w.distinct_sizes_ok
    picked = [w.mz_sizes[w.alpha * n - 1] for n in range(1, len(w.mz_sizes) // w.alpha + 1)]
    assert len(picked) >= 2
    assert len(set(picked)) == len(picked)
    assert time.perf_counter() - t0 < 300.0


def test_criterion_8_order_detection():
    involution = parse_automaton(INVOLUTION_TEXT)
    r = order_of_state(involution, 0, 8)
    assert r.finite and (r.period, r.preperiod) == (2, 0)
    # oracle: a^2 acts as the identity on every input word up to length 6,
    # while a itself does not
    for depth in range(1, 7):
        for inp in product(range(2), repeat=depth):
            assert involution.act((0, 0), inp) == inp
    assert involution.act((0,), (0,)) != (0,)
    flip = flip_automaton()
    rf = order_of_state(flip, 0, 8)
    assert rf.finite and (rf.period, rf.preperiod) == (2, 0)
    rx = order_of_state(A, A.state_names.index("x"), 8)
    assert not rx.finite
    assert rx.horizon == 8


def test_criterion_9_cli_determinism(tmp_path, capsys):
    target = tmp_path / "aleshin.mealy"
    target.write_text(A.to_text())
    battery = [
        ["check", str(target)],
        ["check", str(target), "--format", "csv"],
        ["invert", str(target)],
        ["augment", str(target)],
        ["power", str(target), "-n", "2"],
        ["component", str(target), "--word", "x.y"],
        ["ratios", str(target), "-q", "x", "--horizon", "3", "--format", "csv"],
        ["minimize", str(target)],
        ["nq", str(target), "-q", "x", "--horizon", "3", "--format", "csv"],
        ["equal", str(target), "x", "x.x.x"],
        ["growth", str(target), "--radius", "2", "--format", "csv"],
        ["order", str(target), "-q", "x", "--horizon", "4"],
        ["witness", str(target), "-q", "x", "--horizon", "4", "--format", "csv"],
        ["props", "--horizon", "3", "--format", "csv"],
        ["props", "--horizon", "3", "--format", "csv", "--jobs", "2"],
        ["export-dot", str(target)],
    ]
    outputs = []
    for argv in battery:
        code = main(list(argv))
        first = capsys.readouterr().out
        assert code == 0, argv
        code = main(list(argv))
        second = capsys.readouterr().out
        assert code == 0, argv
        assert first.encode() == second.encode(), argv
        outputs.append(first)
    # the worker pool must not change the assembled report
    assert outputs[-3] == outputs[-2]
