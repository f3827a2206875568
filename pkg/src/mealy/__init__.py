"""Mealy automata toolkit: reversibility, powers, Nerode classes, growth."""

from .automaton import MealyAutomaton, isomorphic, parse_automaton
from .corpus import aleshin, aleshin_squared, default_corpus, flip_automaton, identity_automaton
from .errors import (
    BudgetExceeded,
    DuplicateTransition,
    FormatError,
    LengthMismatch,
    LengthTooShort,
    MealyError,
    MissingTransition,
    NoWitness,
    NotAMember,
    NotBireversible,
    NotInvertible,
    NotReversible,
    NotStabilized,
    UnknownSymbol,
)
from .growth import (
    GrowthTable,
    OrderResult,
    WitnessReport,
    action_signature,
    ball_size,
    elements_equal,
    exponential_witness,
    growth_lower_bound_from_witness,
    growth_table,
    order_of_state,
)
from .nerode import (
    NerodePartition,
    QRestrictedClass,
    RestrictedClass,
    component_partition,
    last_letter_histogram,
    minimize,
    minimize_component,
    nerode_partition,
    penultimate_letters,
    q_restricted_class,
    restricted_class,
)
from .power import (
    COMPONENT_BUDGET,
    POWER_BUDGET,
    Component,
    ComponentCache,
    RatioSequence,
    Rebase,
    component_of,
    components_at,
    constant_ratio_rebase,
    follow_set,
    power,
    precede_set,
    ratio_sequence,
)
from .props import (
    PROPERTY_IDS,
    EnumerationSpec,
    PropertyReport,
    check_property,
    enumerate_automata,
    run_suite,
)

__version__ = "0.1.0"

__all__ = [
    "MealyAutomaton",
    "isomorphic",
    "parse_automaton",
    "aleshin",
    "aleshin_squared",
    "default_corpus",
    "flip_automaton",
    "identity_automaton",
    "MealyError",
    "FormatError",
    "DuplicateTransition",
    "MissingTransition",
    "UnknownSymbol",
    "NotInvertible",
    "NotReversible",
    "NotBireversible",
    "NotStabilized",
    "BudgetExceeded",
    "LengthMismatch",
    "NotAMember",
    "LengthTooShort",
    "NoWitness",
    "GrowthTable",
    "OrderResult",
    "WitnessReport",
    "action_signature",
    "ball_size",
    "elements_equal",
    "exponential_witness",
    "growth_lower_bound_from_witness",
    "growth_table",
    "order_of_state",
    "NerodePartition",
    "QRestrictedClass",
    "RestrictedClass",
    "component_partition",
    "last_letter_histogram",
    "minimize",
    "minimize_component",
    "nerode_partition",
    "penultimate_letters",
    "q_restricted_class",
    "restricted_class",
    "COMPONENT_BUDGET",
    "POWER_BUDGET",
    "Component",
    "ComponentCache",
    "RatioSequence",
    "Rebase",
    "component_of",
    "components_at",
    "constant_ratio_rebase",
    "follow_set",
    "power",
    "precede_set",
    "ratio_sequence",
    "PROPERTY_IDS",
    "EnumerationSpec",
    "PropertyReport",
    "check_property",
    "enumerate_automata",
    "run_suite",
]
