"""Exception types shared across the package."""


class MealyError(Exception):
    """Base class for all package-specific errors."""


class FormatError(MealyError):
    """Malformed automaton text."""


class DuplicateTransition(FormatError):
    """The same (state, input letter) pair is declared twice."""


class MissingTransition(FormatError):
    """The transition table is incomplete."""


class UnknownSymbol(FormatError):
    """A letter or state token was not declared."""


class NotInvertible(MealyError):
    """Some state's letter map is not a permutation of the alphabet."""


class NotReversible(MealyError):
    """Some input letter's state map is not a permutation of the states."""


class NotBireversible(MealyError):
    """The automaton is not both reversible and coreversible."""


class NotStabilized(MealyError):
    """The ratio sequence showed no stabilization within the horizon."""


class BudgetExceeded(MealyError):
    """A configured node budget was exceeded."""


class LengthMismatch(MealyError):
    """A word argument has an incompatible length."""


class NotAMember(MealyError):
    """The word is not a member of the component."""


class LengthTooShort(MealyError):
    """The word is too short for the requested position."""


class NoWitness(MealyError):
    """The witness report does not support a growth bound."""
