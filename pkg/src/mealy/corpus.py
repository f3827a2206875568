"""Built-in example automata used by the tests and the property suite."""

from __future__ import annotations

from .automaton import MealyAutomaton, parse_automaton

ALESHIN_TEXT = """\
alphabet: 0 1
states: x y z
x 0 -> z 1
x 1 -> y 0
y 0 -> y 1
y 1 -> z 0
z 0 -> x 0
z 1 -> x 1
"""

IDENTITY_TEXT = """\
alphabet: 0 1
states: e
e 0 -> e 0
e 1 -> e 1
"""

# Single state swapping the two letters; its square acts as the identity.
FLIP_TEXT = """\
alphabet: 0 1
states: a
a 0 -> a 1
a 1 -> a 0
"""


def aleshin() -> MealyAutomaton:
    return parse_automaton(ALESHIN_TEXT)


def identity_automaton() -> MealyAutomaton:
    return parse_automaton(IDENTITY_TEXT)


def flip_automaton() -> MealyAutomaton:
    return parse_automaton(FLIP_TEXT)


def aleshin_squared() -> MealyAutomaton:
    from .power import power

    return power(aleshin(), 2)


def default_corpus() -> list[tuple[str, MealyAutomaton]]:
    """The curated corpus: identity, Aleshin, its square, its augmentation."""
    a = aleshin()
    return [
        ("identity", identity_automaton()),
        ("aleshin", a),
        ("aleshin^2", aleshin_squared()),
        ("aleshin-augmented", a.augment()),
    ]
