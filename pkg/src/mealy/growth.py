"""Element equality, growth-ball sizes, state orders and the exponential witness.

Words over the states generate a semigroup (or a group, via the augmented
automaton with formal inverses and an identity state).  Equality of the
generated elements is decided exactly: two words are equal iff the minimal
transducers of their actions, anchored at the word, are identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .automaton import MealyAutomaton
from .errors import BudgetExceeded, NoWitness, NotBireversible, NotInvertible, NotStabilized
from .nerode import _refine, component_partition, q_restricted_class, restricted_class
from .power import (
    COMPONENT_BUDGET,
    POWER_BUDGET,
    ComponentCache,
    _power_tables,
    constant_ratio_rebase,
    ratio_sequence,
)


@lru_cache(maxsize=64)
def _augmented(aut: MealyAutomaton) -> MealyAutomaton:
    return aut.augment()


def _closure_tables(aut: MealyAutomaton, word: tuple[int, ...],
                    cap: int) -> tuple[list[int], list[int], int]:
    """Delta-closure of one word, in BFS order; the seed is position 0.

    Unlike components this needs no reversibility: forward closure is finite
    and determines the word's action completely.
    """
    asz = aut.alphabet_size
    delta, rho = aut.delta, aut.rho
    index = {word: 0}
    members = [word]
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
                    raise BudgetExceeded(f"closure exceeds {cap} words")
                target = len(members)
                index[t] = target
                members.append(t)
            succ.append(target)
            out.append(j)
        pos += 1
    return succ, out, len(members)


def _signature(aut: MealyAutomaton, word: tuple[int, ...], cap: int):
    """Canonical minimal anchored transducer of the word's action.

    Two words over the same automaton get equal signatures iff they induce
    the same action on all input words.
    """
    asz = aut.alphabet_size
    if not word:
        # minimal machine of the identity action: one state, letters unchanged
        return (asz, (tuple((i, 0) for i in range(asz)),))
    succ, out, size = _closure_tables(aut, word, cap)
    cls, _ = _refine(size, asz, succ, out)
    reps: dict[int, int] = {}
    for pos, c in enumerate(cls):
        reps.setdefault(c, pos)
    ids = {cls[0]: 0}
    order = [cls[0]]
    rows = []
    for c in order:
        rep = reps[c]
        row = []
        for i in range(asz):
            k = rep * asz + i
            sc = cls[succ[k]]
            if sc not in ids:
                ids[sc] = len(ids)
                order.append(sc)
            row.append((out[k], ids[sc]))
        rows.append(tuple(row))
    return (asz, tuple(rows))


@lru_cache(maxsize=8192)
def _signature_cached(aut: MealyAutomaton, word: tuple[int, ...]):
    return _signature(aut, word, COMPONENT_BUDGET)


def action_signature(aut: MealyAutomaton, word: Sequence[int],
                     budget: int | None = None):
    """Hashable canonical form of the action of a state word."""
    w = tuple(word)
    if not all(0 <= q < aut.size for q in w):
        raise ValueError("state index out of range")
    if budget is None:
        return _signature_cached(aut, w)
    return _signature(aut, w, budget)


def elements_equal(aut: MealyAutomaton, u: Sequence[int], v: Sequence[int],
                   budget: int | None = None) -> bool:
    """True iff the two words induce the same action on all input words.

    Words are read over the states of augment(aut): indices < |Q| are the
    original states, the next |Q| their formal inverses, index 2|Q| the
    identity.  The shorter word is padded with the identity state, so words
    of different lengths compare correctly; the empty word is the identity
    element.
    """
    if not aut.is_invertible():
        raise NotInvertible("element equality needs an invertible automaton")
    aug = _augmented(aut)
    pu, pv = tuple(u), tuple(v)
    if not all(0 <= q < aug.size for q in pu + pv):
        raise ValueError("state index out of range for the augmented automaton")
    m = max(len(pu), len(pv))
    if m == 0:
        return True
    one = aug.size - 1
    pu += (one,) * (m - len(pu))
    pv += (one,) * (m - len(pv))
    return action_signature(aug, pu, budget) == action_signature(aug, pv, budget)


@dataclass(frozen=True)
class GrowthTable:
    """Ball sizes gamma(1..radius) of the generated group."""

    radius: int
    gamma: tuple[int, ...]
    generating_set_size: int


def ball_size(aut: MealyAutomaton, n: int, budget: int | None = None,
              semigroup: bool = False) -> int:
    """Number of distinct elements representable by words of length <= n.

    Group mode (default) counts elements over the symmetric generating set
    Q and its inverses, identity included: the Nerode classes of the n-th
    power of the augmented automaton.  Semigroup mode counts distinct actions
    of non-empty words over Q only.
    """
    if n < 1:
        raise ValueError("radius must be positive")
    cap = POWER_BUDGET if budget is None else budget
    if semigroup:
        sigs = set()
        for length in range(1, n + 1):
            delta, rho = _power_tables(aut, length, cap)
            cls, _ = _refine(aut.size ** length, aut.alphabet_size, delta, rho)
            reps: dict[int, int] = {}
            for pos, c in enumerate(cls):
                reps.setdefault(c, pos)
            for pos in reps.values():
                sigs.add(action_signature(aut, _unrank(pos, aut.size, length), budget))
        return len(sigs)
    if not aut.is_invertible():
        raise NotInvertible("group balls need an invertible automaton")
    aug = _augmented(aut)
    delta, rho = _power_tables(aug, n, cap)
    cls, _ = _refine(aug.size ** n, aug.alphabet_size, delta, rho)
    return max(cls) + 1


def _unrank(pos: int, base: int, length: int) -> tuple[int, ...]:
    word = []
    for _ in range(length):
        pos, digit = divmod(pos, base)
        word.append(digit)
    return tuple(reversed(word))


def growth_table(aut: MealyAutomaton, radius: int, budget: int | None = None,
                 semigroup: bool = False) -> GrowthTable:
    gamma = tuple(ball_size(aut, n, budget, semigroup) for n in range(1, radius + 1))
    return GrowthTable(radius, gamma, 2 * aut.size)


@dataclass(frozen=True)
class OrderResult:
    """Outcome of the power-repetition search for one state.

    period/preperiod are set when q^preperiod equals q^(preperiod+period);
    both None means no repetition was found up to the horizon.  Infinite
    order is never certified.
    """

    period: int | None
    preperiod: int | None
    horizon: int

    @property
    def finite(self) -> bool:
        return self.period is not None


def order_of_state(aut: MealyAutomaton, q: int, horizon: int,
                   budget: int | None = None) -> OrderResult:
    """Search for the smallest r+p with q^r = q^(r+p), totals ascending."""
    if not aut.is_bireversible():
        raise NotBireversible("order detection is defined for bireversible automata")
    if not 0 <= q < aut.size:
        raise ValueError("state index out of range")
    for total in range(1, horizon + 1):
        for r in range(total):
            if elements_equal(aut, (q,) * r, (q,) * total, budget):
                return OrderResult(total - r, r, horizon)
    return OrderResult(None, None, horizon)


@dataclass(frozen=True)
class WitnessReport:
    """Observed data behind the exponential-growth witness for one state.

    All level-indexed tuples run over n = 1..len(cc_sizes); sandwich bounds
    are exact rationals k^(n-1)/|N(n)| and |Q'|*k^(n-1)/|N(n)| where Q' is
    the (possibly rebased) state set.
    """

    q: tuple[int, ...]              # q^level in the original automaton
    k: int                          # observed constant ratio
    state_count: int                # |Q'| of the working automaton
    cc_sizes: tuple[int, ...]
    mz_sizes: tuple[int, ...]
    nq_sizes: tuple[int, ...]
    nq_ratios: tuple[Fraction, ...]
    ell_estimate: Fraction
    alpha: int | None
    K: Fraction | None
    distinct_sizes_ok: bool
    c_estimate: Fraction | None
    sandwich_lo: tuple[Fraction, ...]
    sandwich_hi: tuple[Fraction, ...]
    sandwich_ok: bool
    strict_from: int | None


def exponential_witness(aut: MealyAutomaton, q: int, horizon: int,
                        budget: int | None = None) -> WitnessReport:
    """Check the minimization-size sandwich along the powers of q.

    Rebases to the component of q^j when the ratio sequence stabilizes at
    j > 1; on the working automaton the ratio is constant, and
    k^(n-1)/|N(n)| <= #mz(cc(q^n)) <= |Q'|*k^(n-1)/|N(n)| is verified at
    every inspected level with exact arithmetic.
    """
    if horizon < 2:
        raise ValueError("witness horizon must be at least 2")
    seq = ratio_sequence(aut, q, horizon, budget)
    if seq.stabilized_at is None:
        raise NotStabilized(
            f"no stabilization within horizon {horizon}; raise the horizon"
        )
    work, wq, level = constant_ratio_rebase(aut, q, horizon, budget)
    k = seq.ratios[level - 1] ** level
    levels = max(2, horizon // level)

    cache = ComponentCache(work)
    cc_sizes = []
    mz_sizes = []
    nq_sizes = []
    for n in range(1, levels + 1):
        comp = cache.component((wq,) * n, budget)
        if len(comp) != work.size * k ** (n - 1):
            raise NotStabilized(
                "rebased component sizes break the constant ratio; "
                "the observed stabilization was spurious"
            )
        part = component_partition(comp)
        cc_sizes.append(len(comp))
        mz_sizes.append(len(part.classes))
        nq_sizes.append(len(q_restricted_class(work, wq, n, budget, cache).members))

    nq_ratios = tuple(
        Fraction(nq_sizes[n], nq_sizes[n - 1]) for n in range(1, levels)
    )
    ell = nq_ratios[-1] if nq_ratios else Fraction(1)
    lo = tuple(Fraction(k ** (n - 1), nq_sizes[n - 1]) for n in range(1, levels + 1))
    hi = tuple(b * work.size for b in lo)
    sandwich_ok = all(
        lo[n] <= mz_sizes[n] <= hi[n] for n in range(levels)
    )
    strict_from = None
    for s in range(levels - 1, 0, -1):
        if nq_sizes[s] < k * nq_sizes[s - 1]:
            strict_from = s
        else:
            break

    growth_ratio = Fraction(k) / ell if ell else None
    alpha = None
    K = None
    distinct_ok = False
    if growth_ratio is not None and growth_ratio > 1:
        alpha = 1
        while growth_ratio ** alpha <= work.size:
            alpha += 1
        K = growth_ratio ** alpha
        picked = [mz_sizes[alpha * n - 1] for n in range(1, levels // alpha + 1)]
        distinct_ok = len(picked) >= 2 and len(set(picked)) == len(picked)
    c_estimate = None
    if nq_ratios:
        c_estimate = ell ** levels / (k * nq_sizes[-1])

    return WitnessReport(
        q=(q,) * level,
        k=k,
        state_count=work.size,
        cc_sizes=tuple(cc_sizes),
        mz_sizes=tuple(mz_sizes),
        nq_sizes=tuple(nq_sizes),
        nq_ratios=nq_ratios,
        ell_estimate=ell,
        alpha=alpha,
        K=K,
        distinct_sizes_ok=distinct_ok,
        c_estimate=c_estimate,
        sandwich_lo=lo,
        sandwich_hi=hi,
        sandwich_ok=sandwich_ok,
        strict_from=strict_from,
    )


def growth_lower_bound_from_witness(report: WitnessReport) -> float:
    """Per-generator growth-base estimate from the witness sizes.

    Every element counted by mz_sizes[alpha*n - 1] is represented by a word
    of length alpha*n*|q| in the generators, so the base is the largest
    observed mz^(1/(alpha*n*|q|)).  An observational lower bound, not a
    proof.
    """
    if not report.distinct_sizes_ok:
        raise NoWitness("report carries no usable distinct-size range")
    alpha = report.alpha
    gen_len = len(report.q)
    best = 0.0
    for n in range(1, len(report.mz_sizes) // alpha + 1):
        size = report.mz_sizes[alpha * n - 1]
        best = max(best, size ** (1.0 / (alpha * n * gen_len)))
    return best
