"""Empirical checks of the structural properties, plus exhaustive enumeration.

Each property is a falsifiable statement about components of powers, follow
and precede sets, Nerode classes or ratio sequences.  Hypotheses (being
bireversible, having an observationally constant ratio) are checked first;
when they fail the verdict is "skip", never a vacuous pass.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

from .automaton import MealyAutomaton, isomorphic
from .errors import BudgetExceeded
from .nerode import component_partition, penultimate_letters, q_restricted_class
from .power import POWER_BUDGET, ComponentCache, components_at, ratio_sequence

PROPERTY_IDS = (
    "L1", "L2", "L3", "L4", "RATIO-MONO", "L5", "L6", "L7",
    "L8", "L9", "L10", "P11", "P12", "EQ2",
)


@dataclass(frozen=True)
class PropertyReport:
    property_id: str
    automaton_id: str
    params: str
    verdict: str                      # "pass" | "fail" | "skip"
    counterexample: str | None = None


@dataclass(frozen=True)
class EnumerationSpec:
    num_states: int
    alphabet_size: int
    filter: str = "all"               # all | invertible | reversible | bireversible


_FILTERS = {
    "all": lambda a: True,
    "invertible": MealyAutomaton.is_invertible,
    "reversible": MealyAutomaton.is_reversible,
    "bireversible": MealyAutomaton.is_bireversible,
}

_STATE_ALPHABET = "abcdefghij"


def enumerate_automata(spec: EnumerationSpec, budget: int | None = None,
                       dedup: bool = False) -> Iterator[MealyAutomaton]:
    """All transition tables over the given sizes, filtered, in table order.

    The raw count is (|Q|*|Sigma|)^(|Q|*|Sigma|); duplicates only arise up to
    isomorphism, which dedup removes at quadratic cost (tiny sweeps only).
    """
    if spec.filter not in _FILTERS:
        raise ValueError(f"unknown filter {spec.filter!r}")
    m, asz = spec.num_states, spec.alphabet_size
    if m < 1 or asz < 1:
        raise ValueError("need at least one state and one letter")
    if m > len(_STATE_ALPHABET):
        raise ValueError(f"enumeration supports at most {len(_STATE_ALPHABET)} states")
    cap = POWER_BUDGET if budget is None else budget
    cells = m * asz
    if cells ** cells > cap:
        raise BudgetExceeded(f"enumeration of {cells}^{cells} tables exceeds budget {cap}")
    keep = _FILTERS[spec.filter]
    letters = tuple(str(i) for i in range(asz))
    states = tuple(_STATE_ALPHABET[:m])
    kept: list[MealyAutomaton] = []
    for combo in product(range(cells), repeat=cells):
        delta = tuple(v // asz for v in combo)
        rho = tuple(v % asz for v in combo)
        aut = MealyAutomaton(letters, states, delta, rho)
        if not keep(aut):
            continue
        if dedup:
            if any(isomorphic(aut, other) is not None for other in kept):
                continue
            kept.append(aut)
        yield aut


def _word_name(aut: MealyAutomaton, word: Sequence[int]) -> str:
    return ".".join(aut.state_names[q] for q in word)


class _Context:
    """Shared per-automaton state for one suite run: component and ratio memos."""

    def __init__(self, aut: MealyAutomaton, horizon: int, budget: int | None):
        self.aut = aut
        self.horizon = horizon
        self.budget = budget
        self.cache = ComponentCache(aut)
        self.bireversible = aut.is_bireversible()
        self.reversible = aut.is_reversible()
        self._ratios: dict[int, object] = {}
        self._levels: dict[int, list] = {}

    def cc(self, word: Sequence[int]):
        return self.cache.component(word, self.budget)

    def ratio(self, q: int):
        seq = self._ratios.get(q)
        if seq is None:
            seq = ratio_sequence(self.aut, q, self.horizon, self.budget, self.cache)
            self._ratios[q] = seq
        return seq

    def constant_states(self) -> list[int]:
        return [q for q in range(self.aut.size) if self.ratio(q).stabilized_at == 1]

    def components_at(self, n: int):
        comps = self._levels.get(n)
        if comps is None:
            comps = components_at(self.aut, n, self.budget, self.cache)
            self._levels[n] = comps
        return comps

    def connected(self) -> bool:
        return len(self.components_at(1)) == 1


def _fail(ctx: _Context, note: str) -> tuple[str, str]:
    return "fail", ctx.aut.to_text() + "# " + note


def _check_L1(ctx: _Context):
    for n in range(2, ctx.horizon + 1):
        for comp in ctx.components_at(n):
            for length in range(1, n):
                ext = comp.prefix_extensions(length)
                cards = {}
                for u, states in ext.items():
                    cards.setdefault(len(states), u)
                if len(cards) > 1:
                    (c1, u1), (c2, u2) = sorted(cards.items())[:2]
                    return _fail(ctx, f"n={n} follow cards differ: "
                                      f"|follow({_word_name(ctx.aut, u1)})|={c1} "
                                      f"|follow({_word_name(ctx.aut, u2)})|={c2}")
    return "pass", None


def _check_L2(ctx: _Context):
    for n in range(2, ctx.horizon + 1):
        for comp in ctx.components_at(n):
            for length in range(1, n):
                ext = comp.suffix_extensions(length)
                cards = {}
                for u, states in ext.items():
                    cards.setdefault(len(states), u)
                if len(cards) > 1:
                    (c1, u1), (c2, u2) = sorted(cards.items())[:2]
                    return _fail(ctx, f"n={n} precede cards differ: "
                                      f"|precede({_word_name(ctx.aut, u1)})|={c1} "
                                      f"|precede({_word_name(ctx.aut, u2)})|={c2}")
    return "pass", None


def _split_check(ctx: _Context, q: int, equality: bool):
    """Core of L3 (inclusion) and L5 (equality) over all splits uv of members."""
    for m in range(2, ctx.horizon + 1):
        comp = ctx.cc((q,) * m)
        above = ctx.cc((q,) * (m + 1))
        follow_m = above.prefix_extensions(m)
        for w in comp.members:
            fw = follow_m.get(w, ())
            for cut in range(1, m):
                v = w[cut:]
                sub = ctx.cc((q,) * len(v))
                if v not in sub:
                    return _fail(ctx, f"q={ctx.aut.state_names[q]} m={m} "
                                      f"suffix {_word_name(ctx.aut, v)} not in cc(q^{len(v)})")
                fv = ctx.cc((q,) * (len(v) + 1)).prefix_extensions(len(v)).get(v, ())
                if equality:
                    if fw != fv:
                        return _fail(ctx, f"q={ctx.aut.state_names[q]} m={m} "
                                          f"follow({_word_name(ctx.aut, w)}) != "
                                          f"follow({_word_name(ctx.aut, v)})")
                elif not set(fw) <= set(fv):
                    return _fail(ctx, f"q={ctx.aut.state_names[q]} m={m} "
                                      f"follow({_word_name(ctx.aut, w)}) not within "
                                      f"follow({_word_name(ctx.aut, v)})")
    return "pass", None


def _check_L3(ctx: _Context):
    for q in range(ctx.aut.size):
        verdict, ce = _split_check(ctx, q, equality=False)
        if verdict == "fail":
            return verdict, ce
    return "pass", None


def _check_L4(ctx: _Context):
    for q in range(ctx.aut.size):
        for m in range(2, ctx.horizon + 1):
            comp = ctx.cc((q,) * m)
            above = ctx.cc((q,) * (m + 1))
            precede_m = above.suffix_extensions(m)
            for w in comp.members:
                pw = precede_m.get(w, ())
                for cut in range(1, m):
                    u = w[:cut]
                    sub = ctx.cc((q,) * cut)
                    if u not in sub:
                        return _fail(ctx, f"q={ctx.aut.state_names[q]} m={m} "
                                          f"prefix {_word_name(ctx.aut, u)} not in cc(q^{cut})")
                    pu = ctx.cc((q,) * (cut + 1)).suffix_extensions(cut).get(u, ())
                    if not set(pw) <= set(pu):
                        return _fail(ctx, f"q={ctx.aut.state_names[q]} m={m} "
                                          f"precede({_word_name(ctx.aut, w)}) not within "
                                          f"precede({_word_name(ctx.aut, u)})")
    return "pass", None


def _check_ratio_mono(ctx: _Context):
    for q in range(ctx.aut.size):
        seq = ctx.ratio(q)
        name = ctx.aut.state_names[q]
        for n in range(ctx.horizon):
            if seq.sizes[n] * seq.ratios[n] != seq.sizes[n + 1]:
                return _fail(ctx, f"q={name} n={n + 1} size {seq.sizes[n + 1]} != "
                                  f"{seq.sizes[n]} * ratio {seq.ratios[n]}")
        for n in range(ctx.horizon - 1):
            if seq.ratios[n + 1] > seq.ratios[n]:
                return _fail(ctx, f"q={name} ratios increase at n={n + 1}: {seq.ratios}")
    return "pass", None


def _check_L5(ctx: _Context, eligible: list[int]):
    for q in eligible:
        verdict, ce = _split_check(ctx, q, equality=True)
        if verdict == "fail":
            return verdict, ce
    return "pass", None


def _check_L6(ctx: _Context, eligible: list[int]):
    # The precede set of a suffix depends only on its first letter, across
    # all suffix lengths within one component.
    for q in eligible:
        for n in range(2, ctx.horizon + 1):
            comp = ctx.cc((q,) * n)
            by_first: dict[int, tuple] = {}
            for length in range(1, n):
                for u, states in comp.suffix_extensions(length).items():
                    prev = by_first.setdefault(u[0], (states, u))
                    if prev[0] != states:
                        return _fail(ctx, f"q={ctx.aut.state_names[q]} n={n} "
                                          f"precede({_word_name(ctx.aut, prev[1])}) != "
                                          f"precede({_word_name(ctx.aut, u)}) "
                                          f"yet both start with {ctx.aut.state_names[u[0]]}")
    return "pass", None


def _check_L7(ctx: _Context, eligible: list[int]):
    for q in eligible:
        k = ctx.ratio(q).ratios[0]
        for n in range(2, ctx.horizon + 1):
            comp = ctx.cc((q,) * n)
            for u, states in comp.prefix_extensions(1).items():
                if len(states) != k:
                    return _fail(ctx, f"q={ctx.aut.state_names[q]} n={n} "
                                      f"|follow({_word_name(ctx.aut, u)})|={len(states)} != k={k}")
            for u, states in comp.suffix_extensions(1).items():
                if len(states) != k:
                    return _fail(ctx, f"q={ctx.aut.state_names[q]} n={n} "
                                      f"|precede({_word_name(ctx.aut, u)})|={len(states)} != k={k}")
    return "pass", None


def _check_L8(ctx: _Context):
    for n in range(1, ctx.horizon + 1):
        for comp in ctx.components_at(n):
            part = component_partition(comp)
            for members in part.classes:
                counts: dict[int, int] = {}
                for t in members:
                    last = comp.members[t][-1]
                    counts[last] = counts.get(last, 0) + 1
                if len(set(counts.values())) > 1:
                    anchor = comp.members[members[0]]
                    return _fail(ctx, f"n={n} class of {_word_name(ctx.aut, anchor)} "
                                      f"has uneven last-letter counts {sorted(counts.values())}")
    return "pass", None


def _check_L9(ctx: _Context):
    for n in range(1, ctx.horizon + 1):
        for comp in ctx.components_at(n):
            part = component_partition(comp)
            sizes = {len(members) for members in part.classes}
            if len(sizes) > 1:
                return _fail(ctx, f"n={n} restricted class sizes differ: {sorted(sizes)}")
    return "pass", None


def _check_L10(ctx: _Context, eligible: list[int]):
    for q in eligible:
        for n in range(1, ctx.horizon):
            nq = q_restricted_class(ctx.aut, q, n, ctx.budget, ctx.cache)
            above = ctx.cc((q,) * (n + 1))
            part = component_partition(above)
            target = part.class_of[above.position((q,) * (n + 1))]
            for u in nq.members:
                w = u + (q,)
                if w not in above or part.class_of[above.position(w)] != target:
                    return _fail(ctx, f"q={ctx.aut.state_names[q]} n={n} "
                                      f"{_word_name(ctx.aut, w)} not in N_q({n + 1})")
    return "pass", None


def _check_P11(ctx: _Context, eligible: list[int]):
    for q in eligible:
        k = ctx.ratio(q).ratios[0]
        sizes = [
            len(q_restricted_class(ctx.aut, q, n, ctx.budget, ctx.cache).members)
            for n in range(1, ctx.horizon + 1)
        ]
        for n in range(2, ctx.horizon + 1):
            nq = q_restricted_class(ctx.aut, q, n, ctx.budget, ctx.cache)
            prev, cur = sizes[n - 2], sizes[n - 1]
            if cur % prev != 0:
                return _fail(ctx, f"q={ctx.aut.state_names[q]} |N({n})|={cur} "
                                  f"not a multiple of |N({n - 1})|={prev}")
            ratio = cur // prev
            pen = len(penultimate_letters(nq))
            if ratio != pen:
                return _fail(ctx, f"q={ctx.aut.state_names[q]} n={n} ratio {ratio} != "
                                  f"{pen} penultimate letters")
            if ratio > k:
                return _fail(ctx, f"q={ctx.aut.state_names[q]} n={n} ratio {ratio} > k={k}")
    return "pass", None


def _check_P12(ctx: _Context, eligible: list[int]):
    checked = False
    for q in eligible:
        classes = [
            q_restricted_class(ctx.aut, q, n, ctx.budget, ctx.cache).members
            for n in range(1, ctx.horizon + 1)
        ]
        firsts = [tuple(sorted({w[0] for w in members})) for members in classes]
        start = ctx.horizon - 1
        while start > 0 and firsts[start - 1] == firsts[-1]:
            start -= 1
        # need the first-letter sets stable over at least two levels
        if start >= ctx.horizon - 1:
            continue
        checked = True
        ratios = [
            Fraction(len(classes[n + 1]), len(classes[n]))
            for n in range(start, ctx.horizon - 1)
        ]
        for a, b in zip(ratios, ratios[1:]):
            if b < a:
                return _fail(ctx, f"q={ctx.aut.state_names[q]} N-ratios decrease "
                                  f"after first-letter stabilization: {ratios}")
    if not checked:
        return "skip", "first-letter sets never stabilized within the horizon"
    return "pass", None


def _check_EQ2(ctx: _Context, eligible: list[int]):
    for q in eligible:
        k = ctx.ratio(q).ratios[0]
        size = ctx.aut.size
        for n in range(1, ctx.horizon + 1):
            comp = ctx.cc((q,) * n)
            part = component_partition(comp)
            mz = len(part.classes)
            nq = len(q_restricted_class(ctx.aut, q, n, ctx.budget, ctx.cache).members)
            lo = Fraction(k ** (n - 1), nq)
            hi = lo * size
            if not lo <= mz <= hi:
                return _fail(ctx, f"q={ctx.aut.state_names[q]} n={n} sandwich broken: "
                                  f"{lo} <= {mz} <= {hi} is false")
    return "pass", None


def _check_one(ctx: _Context, property_id: str, automaton_id: str) -> PropertyReport:
    params = f"horizon={ctx.horizon}"
    if property_id == "L9":
        if not ctx.reversible:
            return PropertyReport(property_id, automaton_id, params, "skip",
                                  "not reversible")
        verdict, ce = _check_L9(ctx)
        return PropertyReport(property_id, automaton_id, params, verdict, ce)
    if not ctx.bireversible:
        return PropertyReport(property_id, automaton_id, params, "skip",
                              "not bireversible")
    if property_id == "L8" and not ctx.connected():
        return PropertyReport(property_id, automaton_id, params, "skip",
                              "not connected")
    plain = {
        "L1": _check_L1,
        "L2": _check_L2,
        "L3": _check_L3,
        "L4": _check_L4,
        "RATIO-MONO": _check_ratio_mono,
        "L8": _check_L8,
    }
    if property_id in plain:
        verdict, ce = plain[property_id](ctx)
        return PropertyReport(property_id, automaton_id, params, verdict, ce)
    gated = {
        "L5": _check_L5,
        "L6": _check_L6,
        "L7": _check_L7,
        "L10": _check_L10,
        "P11": _check_P11,
        "P12": _check_P12,
        "EQ2": _check_EQ2,
    }
    if property_id not in gated:
        raise ValueError(f"unknown property id {property_id!r}")
    eligible = ctx.constant_states()
    census = " ".join(ctx.aut.state_names[q] for q in eligible) or "-"
    params = f"horizon={ctx.horizon} constant_ratio_states={census}"
    if not eligible:
        return PropertyReport(property_id, automaton_id, params, "skip",
                              "no state with observed constant ratio")
    verdict, ce = gated[property_id](ctx, eligible)
    return PropertyReport(property_id, automaton_id, params, verdict, ce)


def check_property(property_id: str, aut: MealyAutomaton, horizon: int = 4,
                   budget: int | None = None,
                   automaton_id: str = "automaton") -> PropertyReport:
    """Check one property on one automaton; hypotheses failing means skip."""
    ctx = _Context(aut, horizon, budget)
    return _check_one(ctx, property_id, automaton_id)


def _suite_batch(args) -> list[PropertyReport]:
    automaton_id, aut, horizon, budget, ids = args
    ctx = _Context(aut, horizon, budget)
    return [_check_one(ctx, pid, automaton_id) for pid in ids]


def run_suite(automata: Sequence[tuple[str, MealyAutomaton]], horizon: int = 4,
              budget: int | None = None, only: Sequence[str] | None = None,
              jobs: int = 1) -> list[PropertyReport]:
    """Run the property suite over labelled automata, in deterministic order.

    Reports are grouped per automaton, properties in canonical id order.
    With jobs > 1 the per-automaton batches run in a process pool; the merge
    order is unchanged.
    """
    if only is None:
        ids: tuple[str, ...] = PROPERTY_IDS
    else:
        unknown = sorted(set(only) - set(PROPERTY_IDS))
        if unknown:
            raise ValueError(f"unknown property ids: {', '.join(unknown)}")
        ids = tuple(pid for pid in PROPERTY_IDS if pid in set(only))
    batches = [(aid, aut, horizon, budget, ids) for aid, aut in automata]
    reports: list[PropertyReport] = []
    if jobs > 1 and len(batches) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for batch in pool.map(_suite_batch, batches):
                reports.extend(batch)
    else:
        for args in batches:
            reports.extend(_suite_batch(args))
    return reports
