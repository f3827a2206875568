"""Nerode equivalence, minimization and restricted classes.

Two states are Nerode-equivalent when they induce the same action on all
input words.  The partition is computed by refinement: seed with equality of
the single-letter output rows, then split by successor classes until stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .automaton import MealyAutomaton
from .errors import LengthTooShort, NotAMember, NotBireversible
from .power import Component, ComponentCache, component_of


def _refine(size: int, asz: int, delta: Sequence[int], rho: Sequence[int]) -> tuple[list[int], int]:
    """Partition refinement core; returns (class_of, rounds to fixpoint).

    Classes are numbered by first occurrence in state order, which makes the
    numbering canonical for a given partition.
    """
    seen: dict = {}
    cls = []
    for q in range(size):
        sig = tuple(rho[q * asz:(q + 1) * asz])
        cls.append(seen.setdefault(sig, len(seen)))
    rounds = 0
    while True:
        rounds += 1
        seen = {}
        new = []
        for q in range(size):
            sig = (cls[q],) + tuple(cls[delta[q * asz + i]] for i in range(asz))
            new.append(seen.setdefault(sig, len(seen)))
        if new == cls:
            return cls, rounds
        cls = new


def _classes_from(cls: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    buckets: dict[int, list[int]] = {}
    for q, c in enumerate(cls):
        buckets.setdefault(c, []).append(q)
    return tuple(tuple(buckets[c]) for c in sorted(buckets))


@dataclass(frozen=True)
class NerodePartition:
    """class_of maps a state (or component member position) to its class index."""

    automaton: MealyAutomaton | None
    class_of: tuple[int, ...]
    classes: tuple[tuple[int, ...], ...]
    rounds: int


def nerode_partition(aut: MealyAutomaton) -> NerodePartition:
    cls, rounds = _refine(aut.size, aut.alphabet_size, aut.delta, aut.rho)
    return NerodePartition(aut, tuple(cls), _classes_from(cls), rounds)


def component_partition(comp: Component) -> NerodePartition:
    """Nerode partition of the component viewed as an automaton.

    Members of one class induce the same action as transducer words; class
    indices refer to member positions.  Cached on the component.
    """
    if comp._partition is None:
        cls, rounds = _refine(len(comp), comp.base.alphabet_size, comp.succ, comp.out)
        comp._partition = NerodePartition(None, tuple(cls), _classes_from(cls), rounds)
    return comp._partition


def minimize(aut: MealyAutomaton) -> MealyAutomaton:
    """Quotient by the Nerode partition; one state per class, named after its least member."""
    part = nerode_partition(aut)
    asz = aut.alphabet_size
    reps = [members[0] for members in part.classes]
    delta = []
    rho = []
    for rep in reps:
        for i in range(asz):
            k = rep * asz + i
            delta.append(part.class_of[aut.delta[k]])
            rho.append(aut.rho[k])
    for q in range(aut.size):
        c = part.class_of[q]
        for i in range(asz):
            k = q * asz + i
            assert part.class_of[aut.delta[k]] == delta[c * asz + i], "quotient not well defined"
            assert aut.rho[k] == rho[c * asz + i], "quotient not well defined"
    names = tuple(aut.state_names[rep] for rep in reps)
    flags = tuple(aut.inverse_flags[rep] for rep in reps)
    return MealyAutomaton(aut.letter_names, names, tuple(delta), tuple(rho), flags)


def minimize_component(comp: Component) -> MealyAutomaton:
    """Minimization of the component as a standalone automaton."""
    return minimize(comp.as_automaton())


@dataclass(frozen=True)
class RestrictedClass:
    """A Nerode class restricted to (equivalently, computed within) one component."""

    component: Component
    members: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class QRestrictedClass:
    """Members of the restricted class of q^n whose last letter is q."""

    q: int
    n: int
    members: tuple[tuple[int, ...], ...]


def restricted_class(comp: Component, word: Sequence[int]) -> RestrictedClass:
    """All members of the component inducing the same action as the given word."""
    w = tuple(word)
    if w not in comp.index:
        raise NotAMember("word is not a member of the component")
    part = component_partition(comp)
    c = part.class_of[comp.position(w)]
    members = tuple(comp.members[t] for t in part.classes[c])
    return RestrictedClass(comp, members)


def q_restricted_class(aut: MealyAutomaton, q: int, n: int,
                       budget: int | None = None,
                       cache: ComponentCache | None = None) -> QRestrictedClass:
    if not aut.is_bireversible():
        raise NotBireversible("q-restricted classes are defined for bireversible automata")
    word = (q,) * n
    comp = cache.component(word, budget) if cache else component_of(aut, word, budget)
    rc = restricted_class(comp, word)
    members = tuple(w for w in rc.members if w[-1] == q)
    return QRestrictedClass(q, n, members)


def last_letter_histogram(words: Sequence[Sequence[int]]) -> dict[int, int]:
    """Counts of the final state over a set of state words, keyed by state index."""
    counts: dict[int, int] = {}
    for w in words:
        if not w:
            raise LengthTooShort("empty word has no last letter")
        counts[w[-1]] = counts.get(w[-1], 0) + 1
    return dict(sorted(counts.items()))


def penultimate_letters(nq: QRestrictedClass) -> tuple[int, ...]:
    """The set of states in position -2 across the class members, sorted."""
    if nq.n < 2:
        raise LengthTooShort("penultimate letters need words of length at least 2")
    return tuple(sorted({w[-2] for w in nq.members}))
