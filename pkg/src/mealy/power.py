"""Powers of an automaton, connected components of state words, ratio sequences.

The n-th power has state set Q^n; an input letter drives a state word through
the cascade and a state word acts on letters by the composite map.  Components
are computed lazily as delta-closures, never by materializing Q^n.
"""

from __future__ import annotations

from array import array
from itertools import product
from typing import Iterable, NamedTuple, Sequence

from .automaton import MealyAutomaton
from .errors import BudgetExceeded, LengthMismatch, NotBireversible, NotReversible, NotStabilized

COMPONENT_BUDGET = 10**6
POWER_BUDGET = 10**7


class Component:
    """The delta-closure of one state word of the base automaton.

    Members are stored in lexicographic order (by state index).  succ/out are
    flat transition tables over member positions, so the component can act as
    an automaton in its own right.
    """

    def __init__(self, base: MealyAutomaton, members: list[tuple[int, ...]],
                 succ: array, out: array):
        self.base = base
        self.n = len(members[0])
        self.members = tuple(members)
        self.index = {w: t for t, w in enumerate(members)}
        self.succ = succ
        self.out = out
        self._prefix_maps: dict[int, dict] = {}
        self._suffix_maps: dict[int, dict] = {}
        self._partition = None

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, word: Sequence[int]) -> bool:
        return tuple(word) in self.index

    def position(self, word: Sequence[int]) -> int:
        return self.index[tuple(word)]

    def prefix_extensions(self, length: int) -> dict[tuple[int, ...], tuple[int, ...]]:
        """Map from each length-`length` prefix of a member to its follow states."""
        cached = self._prefix_maps.get(length)
        if cached is None:
            acc: dict[tuple[int, ...], set[int]] = {}
            for w in self.members:
                acc.setdefault(w[:length], set()).add(w[length])
            cached = {u: tuple(sorted(s)) for u, s in acc.items()}
            self._prefix_maps[length] = cached
        return cached

    def suffix_extensions(self, length: int) -> dict[tuple[int, ...], tuple[int, ...]]:
        """Map from each length-`length` suffix of a member to its precede states."""
        cached = self._suffix_maps.get(length)
        if cached is None:
            cut = self.n - length
            acc: dict[tuple[int, ...], set[int]] = {}
            for w in self.members:
                acc.setdefault(w[cut:], set()).add(w[cut - 1])
            cached = {u: tuple(sorted(s)) for u, s in acc.items()}
            self._suffix_maps[length] = cached
        return cached

    def as_automaton(self) -> MealyAutomaton:
        """The component viewed as an automaton; state names are dot-joined words."""
        base = self.base
        names = tuple(
            ".".join(base.state_names[q] for q in w) for w in self.members
        )
        return MealyAutomaton(
            base.letter_names, names, tuple(self.succ), tuple(self.out)
        )


def component_of(aut: MealyAutomaton, word: Sequence[int],
                 budget: int | None = None) -> Component:
    """Delta-closure of the given state word (reversible automata only)."""
    if not aut.is_reversible():
        raise NotReversible("components are defined for reversible automata")
    seed = tuple(word)
    if not seed:
        raise LengthMismatch("state word must be non-empty")
    if not all(0 <= q < aut.size for q in seed):
        raise ValueError("state index out of range")
    cap = COMPONENT_BUDGET if budget is None else budget
    asz = aut.alphabet_size
    delta, rho = aut.delta, aut.rho

    index = {seed: 0}
    members = [seed]
    succ: list[int] = []
    out: list[int] = []
    pos = 0
    while pos < len(members):
        w = members[pos]
        for i in range(asz):
            j = i
            nxt = []
            for q in w:
                k = q * asz + j
                nxt.append(delta[k])
                j = rho[k]
            t = tuple(nxt)
            target = index.get(t)
            if target is None:
                if len(members) >= cap:
                    raise BudgetExceeded(f"component exceeds {cap} members")
                target = len(members)
                index[t] = target
                members.append(t)
            succ.append(target)
            out.append(j)
        pos += 1

    order = sorted(range(len(members)), key=members.__getitem__)
    rank = [0] * len(members)
    for new, old in enumerate(order):
        rank[old] = new
    sorted_members = [members[old] for old in order]
    succ_arr = array("l", (0 for _ in succ))
    out_arr = array("b", (0 for _ in out)) if asz <= 127 else array("l", (0 for _ in out))
    for new, old in enumerate(order):
        for i in range(asz):
            succ_arr[new * asz + i] = rank[succ[old * asz + i]]
            out_arr[new * asz + i] = out[old * asz + i]
    return Component(aut, sorted_members, succ_arr, out_arr)


class ComponentCache:
    """Memoizes components of one automaton per word length, deduplicating by membership."""

    def __init__(self, aut: MealyAutomaton):
        self.aut = aut
        self._levels: dict[int, list[Component]] = {}

    def component(self, word: Sequence[int], budget: int | None = None) -> Component:
        w = tuple(word)
        comps = self._levels.setdefault(len(w), [])
        for c in comps:
            if w in c.index:
                return c
        c = component_of(self.aut, w, budget)
        comps.append(c)
        return c


def components_at(aut: MealyAutomaton, n: int, budget: int | None = None,
                  cache: ComponentCache | None = None) -> list[Component]:
    """All components of the n-th power, ordered by least member.

    Sweeps the |Q|^n seed words, so the usual power budget applies.
    """
    cap = POWER_BUDGET if budget is None else budget
    if aut.size ** n > cap:
        raise BudgetExceeded(f"sweep of {aut.size}^{n} words exceeds budget {cap}")
    local = cache or ComponentCache(aut)
    seen: set[tuple[int, ...]] = set()
    found = []
    for word in product(range(aut.size), repeat=n):
        if word in seen:
            continue
        c = local.component(word, budget)
        seen.update(c.members)
        found.append(c)
    return found


def follow_set(comp: Component, word: Sequence[int]) -> tuple[int, ...]:
    """States p with word.p a prefix of some member; empty if word is not a proper prefix."""
    u = tuple(word)
    if not 0 < len(u) < comp.n:
        raise LengthMismatch(f"need 0 < |word| < {comp.n}, got {len(u)}")
    return comp.prefix_extensions(len(u)).get(u, ())


def precede_set(comp: Component, word: Sequence[int]) -> tuple[int, ...]:
    """States p with p.word a suffix of some member; empty if word is not a proper suffix."""
    u = tuple(word)
    if not 0 < len(u) < comp.n:
        raise LengthMismatch(f"need 0 < |word| < {comp.n}, got {len(u)}")
    return comp.suffix_extensions(len(u)).get(u, ())


def _power_tables(aut: MealyAutomaton, n: int, cap: int) -> tuple[list[int], list[int]]:
    """Flat delta/rho tables of the n-th power; words are ranked lexicographically."""
    m = aut.size
    if m ** n > cap:
        raise BudgetExceeded(f"power has {m}^{n} states, budget is {cap}")
    asz = aut.alphabet_size
    delta, rho = aut.delta, aut.rho
    pdelta: list[int] = []
    prho: list[int] = []
    for word in product(range(m), repeat=n):
        for i in range(asz):
            j = i
            idx = 0
            for q in word:
                k = q * asz + j
                idx = idx * m + delta[k]
                j = rho[k]
            pdelta.append(idx)
            prho.append(j)
    return pdelta, prho


def power(aut: MealyAutomaton, n: int, budget: int | None = None) -> MealyAutomaton:
    """The n-th power: state words of length n under the cascade transition."""
    if n < 1:
        raise ValueError("power exponent must be positive")
    cap = POWER_BUDGET if budget is None else budget
    pdelta, prho = _power_tables(aut, n, cap)
    names = tuple(
        ".".join(aut.state_names[q] for q in word)
        for word in product(range(aut.size), repeat=n)
    )
    return MealyAutomaton(aut.letter_names, names, tuple(pdelta), tuple(prho))


class RatioSequence(NamedTuple):
    """Component sizes of q^n and their successive ratios."""

    state: int
    sizes: tuple[int, ...]          # |cc(q^n)| for n = 1..h+1
    ratios: tuple[int, ...]         # |follow(q^n, cc(q^{n+1}))| for n = 1..h
    precede_cards: tuple[int, ...]  # |precede(q^n, cc(q^{n+1}))| for n = 1..h
    stabilized_at: int | None

    @property
    def constant(self) -> bool:
        return self.stabilized_at == 1

    @property
    def ratio(self) -> int:
        if not self.constant:
            raise NotStabilized("ratio sequence is not constant from the start")
        return self.ratios[0]


def ratio_sequence(aut: MealyAutomaton, q: int, horizon: int,
                   budget: int | None = None,
                   cache: ComponentCache | None = None) -> RatioSequence:
    """Sizes |cc(q^n)| for n <= horizon+1 and the follow-set ratios between levels.

    The ratios are follow-set cardinalities; for bireversible automata they
    must equal the size quotients (the property suite checks this).
    stabilized_at is the start of the maximal constant tail of the observed
    ratios, or None when that tail is a single disagreeing observation —
    stabilization is observational, never a proof.
    """
    if not aut.is_bireversible():
        raise NotBireversible("ratio sequences are defined for bireversible automata")
    if not 0 <= q < aut.size:
        raise ValueError("state index out of range")
    if horizon < 1:
        raise ValueError("horizon must be positive")
    local = cache or ComponentCache(aut)
    comps = [local.component((q,) * n, budget) for n in range(1, horizon + 2)]
    sizes = tuple(len(c) for c in comps)
    ratios = []
    precede_cards = []
    for n in range(1, horizon + 1):
        word = (q,) * n
        ratios.append(len(follow_set(comps[n], word)))
        precede_cards.append(len(precede_set(comps[n], word)))
    j = horizon
    while j > 1 and ratios[j - 2] == ratios[j - 1]:
        j -= 1
    tail = horizon - j + 1
    stabilized_at = j if (j == 1 or tail >= 2) else None
    return RatioSequence(q, sizes, tuple(ratios), tuple(precede_cards), stabilized_at)


class Rebase(NamedTuple):
    """A component of q^level packaged as a standalone automaton."""

    automaton: MealyAutomaton
    state: int      # index of q^level in the rebased automaton
    level: int


def constant_ratio_rebase(aut: MealyAutomaton, q: int, horizon: int,
                          budget: int | None = None,
                          cache: ComponentCache | None = None) -> Rebase:
    """Package cc(q^j) as an automaton, j the observed stabilization index.

    The word q^j, as a state of the result, has observationally constant
    ratio r_j^j.  Raises NotStabilized when no stabilization was observed
    within the horizon.
    """
    seq = ratio_sequence(aut, q, horizon, budget, cache)
    if seq.stabilized_at is None:
        raise NotStabilized(
            f"no stabilization within horizon {horizon}; raise the horizon"
        )
    j = seq.stabilized_at
    local = cache or ComponentCache(aut)
    comp = local.component((q,) * j, budget)
    return Rebase(comp.as_automaton(), comp.position((q,) * j), j)
