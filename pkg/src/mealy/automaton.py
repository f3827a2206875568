"""Mealy automata: parsing, letter/state actions, reversibility predicates.

A Mealy automaton is a complete deterministic letter-to-letter transducer
(Q, Sigma, delta, rho).  Every state q induces a length- and prefix-preserving
map on words over the alphabet; a state word u = q1...qn acts by the
composite of the state maps, q1 applied first.  Dually, an input word drives
a state word through the cascade: the letter enters the first state, the
output of each state enters the next.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import (
    DuplicateTransition,
    FormatError,
    MissingTransition,
    NotInvertible,
    NotReversible,
    UnknownSymbol,
)


def _is_permutation(values: Sequence[int], n: int) -> bool:
    seen = [False] * n
    for v in values:
        if v < 0 or v >= n or seen[v]:
            return False
        seen[v] = True
    return len(values) == n


@dataclass(frozen=True)
class MealyAutomaton:
    """Immutable automaton over dense integer states and letters.

    delta and rho are flat tables indexed by state * alphabet_size + letter;
    delta holds the successor state, rho the output letter.  inverse_flags
    marks formal inverse states in automata built by inverse() or augment();
    it is all-False for parsed automata.
    """

    letter_names: tuple[str, ...]
    state_names: tuple[str, ...]
    delta: tuple[int, ...]
    rho: tuple[int, ...]
    inverse_flags: tuple[bool, ...] = ()

    def __post_init__(self) -> None:
        m = len(self.state_names)
        asz = len(self.letter_names)
        if m == 0 or asz == 0:
            raise ValueError("need at least one state and one letter")
        if len(set(self.state_names)) != m:
            raise ValueError("state names must be pairwise distinct")
        if len(set(self.letter_names)) != asz:
            raise ValueError("letter names must be pairwise distinct")
        if len(self.delta) != m * asz or len(self.rho) != m * asz:
            raise ValueError("delta/rho must have exactly |Q|*|Sigma| entries")
        if not all(0 <= q < m for q in self.delta):
            raise ValueError("delta entry out of range")
        if not all(0 <= i < asz for i in self.rho):
            raise ValueError("rho entry out of range")
        if not self.inverse_flags:
            object.__setattr__(self, "inverse_flags", (False,) * m)
        elif len(self.inverse_flags) != m:
            raise ValueError("inverse_flags must have one entry per state")

    @property
    def size(self) -> int:
        return len(self.state_names)

    @property
    def alphabet_size(self) -> int:
        return len(self.letter_names)

    def step(self, state: int, letter: int) -> tuple[int, int]:
        """One transition: (successor state, output letter)."""
        k = state * self.alphabet_size + letter
        return self.delta[k], self.rho[k]

    def _run(self, states: Sequence[int], letters: Sequence[int]) -> tuple[list[int], list[int]]:
        cur = list(states)
        out = []
        asz = self.alphabet_size
        delta, rho = self.delta, self.rho
        for i in letters:
            j = i
            for t, q in enumerate(cur):
                k = q * asz + j
                cur[t] = delta[k]
                j = rho[k]
            out.append(j)
        return out, cur

    def act(self, states: Sequence[int], letters: Sequence[int]) -> tuple[int, ...]:
        """Output word of the state word acting on the input word.

        The first state of the word is applied first.  An empty state word
        acts as the identity.
        """
        out, _ = self._run(states, letters)
        return tuple(out)

    def advance(self, letters: Sequence[int], states: Sequence[int]) -> tuple[int, ...]:
        """Successor state word after feeding the input word through the cascade."""
        _, cur = self._run(states, letters)
        return tuple(cur)

    def backtrack(self, state: int, letters: Sequence[int]) -> tuple[int, ...]:
        """Output word along the unique path with the given input label ending at state.

        Defined for reversible automata: each input letter permutes the
        states, so the path is unique.
        """
        preds = self._delta_inverse()
        asz = self.alphabet_size
        out = []
        cur = state
        for i in reversed(letters):
            p = preds[i][cur]
            out.append(self.rho[p * asz + i])
            cur = p
        out.reverse()
        return tuple(out)

    def _delta_inverse(self) -> list[list[int]]:
        if not self.is_reversible():
            raise NotReversible("backtracking needs every letter to permute the states")
        asz = self.alphabet_size
        preds = [[0] * self.size for _ in range(asz)]
        for q in range(self.size):
            for i in range(asz):
                preds[i][self.delta[q * asz + i]] = q
        return preds

    def is_invertible(self) -> bool:
        """True when every state's letter map is a permutation of the alphabet."""
        asz = self.alphabet_size
        return all(
            _is_permutation(self.rho[q * asz:(q + 1) * asz], asz)
            for q in range(self.size)
        )

    def is_reversible(self) -> bool:
        """True when every input letter's state map is a permutation of the states."""
        asz = self.alphabet_size
        return all(
            _is_permutation([self.delta[q * asz + i] for q in range(self.size)], self.size)
            for i in range(asz)
        )

    def is_coreversible(self) -> bool:
        """True when every output letter induces a permutation of the states.

        Requires every state to carry exactly one transition with each output
        letter (so the induced relation is a function) and that function to be
        a bijection.
        """
        asz = self.alphabet_size
        for j in range(asz):
            image = []
            for q in range(self.size):
                targets = [
                    self.delta[q * asz + i]
                    for i in range(asz)
                    if self.rho[q * asz + i] == j
                ]
                if len(targets) != 1:
                    return False
                image.append(targets[0])
            if not _is_permutation(image, self.size):
                return False
        return True

    def is_bireversible(self) -> bool:
        return self.is_reversible() and self.is_coreversible()

    def inverse(self) -> MealyAutomaton:
        """The inverse automaton on the formal inverse states.

        p' reads j and outputs i going to q' exactly when p reads i and
        outputs j going to q.  Requires invertibility so that each state has
        one transition per output letter.
        """
        if not self.is_invertible():
            raise NotInvertible("inverse needs every state's letter map to be a permutation")
        asz = self.alphabet_size
        n = self.size * asz
        delta = [0] * n
        rho = [0] * n
        for q in range(self.size):
            for i in range(asz):
                k = q * asz + i
                kk = q * asz + self.rho[k]
                delta[kk] = self.delta[k]
                rho[kk] = i
        names = tuple(
            _flip_name(nm, fl) for nm, fl in zip(self.state_names, self.inverse_flags)
        )
        flags = tuple(not f for f in self.inverse_flags)
        return MealyAutomaton(self.letter_names, names, tuple(delta), tuple(rho), flags)

    def augment(self) -> MealyAutomaton:
        """Disjoint union of the automaton, its inverse and a one-state identity.

        State layout: 0..|Q|-1 copy the original, |Q|..2|Q|-1 copy the
        inverse, index 2|Q| is the identity state (reads and writes each
        letter unchanged).  The identity state is named "1"; it and any
        inverse-block name clashing with an earlier state get prefixed with
        underscores until unique (parsed files drop inverse flags, so an
        already augmented automaton would otherwise repeat primed names).
        """
        if not self.is_invertible():
            raise NotInvertible("augmenting needs an invertible automaton")
        inv = self.inverse()
        m, asz = self.size, self.alphabet_size
        delta = list(self.delta)
        rho = list(self.rho)
        for q in range(m):
            for i in range(asz):
                k = q * asz + i
                delta.append(inv.delta[k] + m)
                rho.append(inv.rho[k])
        one = 2 * m
        for i in range(asz):
            delta.append(one)
            rho.append(i)
        used = set(self.state_names)
        inv_names = []
        for nm in inv.state_names:
            while nm in used:
                nm = "_" + nm
            inv_names.append(nm)
            used.add(nm)
        one_name = "1"
        while one_name in used:
            one_name = "_" + one_name
        names = self.state_names + tuple(inv_names) + (one_name,)
        flags = self.inverse_flags + inv.inverse_flags + (False,)
        return MealyAutomaton(self.letter_names, names, tuple(delta), tuple(rho), flags)

    def to_text(self) -> str:
        """Render in the line-oriented text format (inverse flags are not encoded)."""
        lines = [
            "alphabet: " + " ".join(self.letter_names),
            "states: " + " ".join(self.state_names),
        ]
        asz = self.alphabet_size
        for q in range(self.size):
            for i in range(asz):
                k = q * asz + i
                lines.append(
                    f"{self.state_names[q]} {self.letter_names[i]} -> "
                    f"{self.state_names[self.delta[k]]} {self.letter_names[self.rho[k]]}"
                )
        return "\n".join(lines) + "\n"

    def to_dot(self) -> str:
        """GraphViz rendering; parallel transitions are merged into one edge."""
        lines = ["digraph mealy {"]
        for name in self.state_names:
            lines.append(f'  "{name}";')
        asz = self.alphabet_size
        for q in range(self.size):
            grouped: dict[int, list[str]] = {}
            for i in range(asz):
                k = q * asz + i
                grouped.setdefault(self.delta[k], []).append(
                    f"{self.letter_names[i]}|{self.letter_names[self.rho[k]]}"
                )
            for dst in sorted(grouped):
                label = ", ".join(grouped[dst])
                lines.append(
                    f'  "{self.state_names[q]}" -> "{self.state_names[dst]}" [label="{label}"];'
                )
        lines.append("}")
        return "\n".join(lines) + "\n"


def _flip_name(name: str, flagged: bool) -> str:
    if flagged and name.endswith("'"):
        return name[:-1]
    return name + "'"


def _meaningful_lines(text: str) -> Iterator[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_automaton(text: str) -> MealyAutomaton:
    """Parse the line-oriented automaton format.

    ::

        alphabet: 0 1
        states: x y z
        x 0 -> z 1        # one line per (state, letter) pair

    '#' starts a comment.  Exactly |Q|*|Sigma| transition lines are required.
    """
    lines = _meaningful_lines(text)
    try:
        _, alpha_line = next(lines)
    except StopIteration:
        raise FormatError("empty input") from None
    if not alpha_line.startswith("alphabet:"):
        raise FormatError("first line must declare 'alphabet:'")
    letter_names = tuple(alpha_line[len("alphabet:"):].split())
    if not letter_names:
        raise FormatError("alphabet declaration is empty")
    if len(set(letter_names)) != len(letter_names):
        raise FormatError("duplicate letter name in alphabet declaration")
    try:
        _, states_line = next(lines)
    except StopIteration:
        raise MissingTransition("missing 'states:' line") from None
    if not states_line.startswith("states:"):
        raise FormatError("second line must declare 'states:'")
    state_names = tuple(states_line[len("states:"):].split())
    if not state_names:
        raise FormatError("states declaration is empty")
    if len(set(state_names)) != len(state_names):
        raise FormatError("duplicate state name in states declaration")

    letter_index = {nm: i for i, nm in enumerate(letter_names)}
    state_index = {nm: q for q, nm in enumerate(state_names)}
    asz = len(letter_names)
    total = len(state_names) * asz
    delta: list[int | None] = [None] * total
    rho: list[int | None] = [None] * total

    for lineno, line in lines:
        tokens = line.split()
        if len(tokens) != 5 or tokens[2] != "->":
            raise FormatError(f"line {lineno}: expected 'STATE LETTER -> STATE LETTER'")
        src, lin, _, dst, lout = tokens
        for tok, table, kind in ((src, state_index, "state"), (dst, state_index, "state"),
                                 (lin, letter_index, "letter"), (lout, letter_index, "letter")):
            if tok not in table:
                raise UnknownSymbol(f"line {lineno}: undeclared {kind} {tok!r}")
        k = state_index[src] * asz + letter_index[lin]
        if delta[k] is not None:
            raise DuplicateTransition(f"line {lineno}: transition for {src!r} reading {lin!r} declared twice")
        delta[k] = state_index[dst]
        rho[k] = letter_index[lout]

    missing = [k for k in range(total) if delta[k] is None]
    if missing:
        q, i = divmod(missing[0], asz)
        raise MissingTransition(
            f"no transition for state {state_names[q]!r} reading {letter_names[i]!r}"
            f" ({len(missing)} missing in total)"
        )
    return MealyAutomaton(letter_names, state_names, tuple(delta), tuple(rho))  # type: ignore[arg-type]


def isomorphic(a: MealyAutomaton, b: MealyAutomaton) -> tuple[int, ...] | None:
    """A state bijection carrying a's transitions to b's, or None.

    The mapping is returned as a tuple t with t[q] the b-state matching
    a-state q.  Letters are matched by position, not permuted.
    """
    if a.size != b.size or a.alphabet_size != b.alphabet_size:
        return None
    asz = a.alphabet_size
    rows_a = [a.rho[q * asz:(q + 1) * asz] for q in range(a.size)]
    rows_b = [b.rho[q * asz:(q + 1) * asz] for q in range(b.size)]
    candidates = [
        [t for t in range(b.size) if rows_b[t] == rows_a[q]]
        for q in range(a.size)
    ]
    mapping = [-1] * a.size
    used = [False] * b.size

    def consistent(q: int, t: int) -> bool:
        for i in range(asz):
            sa = a.delta[q * asz + i]
            if mapping[sa] != -1 and mapping[sa] != b.delta[t * asz + i]:
                return False
        for p in range(q):
            for i in range(asz):
                if a.delta[p * asz + i] == q and b.delta[mapping[p] * asz + i] != t:
                    return False
        return True

    def extend(q: int) -> bool:
        if q == a.size:
            return True
        for t in candidates[q]:
            if used[t]:
                continue
            mapping[q] = t
            if consistent(q, t):
                used[t] = True
                if extend(q + 1):
                    return True
                used[t] = False
            mapping[q] = -1
        return False

    if not extend(0):
        return None
    for q in range(a.size):
        for i in range(asz):
            k = q * asz + i
            if mapping[a.delta[k]] != b.delta[mapping[q] * asz + i]:
                return None
            if a.rho[k] != b.rho[mapping[q] * asz + i]:
                return None
    return tuple(mapping)
