"""Command-line interface.

One binary, subcommand style.  Data goes to stdout, diagnostics to stderr.
Exit codes: 0 success, 1 property failure, 2 usage or parse error, 3 budget
exceeded.  Identical invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import corpus
from .automaton import MealyAutomaton, parse_automaton
from .errors import (
    BudgetExceeded,
    MealyError,
    NoWitness,
    NotStabilized,
    UnknownSymbol,
)
from .growth import (
    exponential_witness,
    growth_lower_bound_from_witness,
    growth_table,
    elements_equal,
    order_of_state,
)
from .nerode import (
    minimize,
    nerode_partition,
    penultimate_letters,
    q_restricted_class,
)
from .power import component_of, power, ratio_sequence
from .props import PROPERTY_IDS, EnumerationSpec, enumerate_automata, run_suite


def _load(path: str) -> MealyAutomaton:
    return parse_automaton(Path(path).read_text())


def _state_index(aut: MealyAutomaton, name: str) -> int:
    try:
        return aut.state_names.index(name)
    except ValueError:
        raise UnknownSymbol(f"no state named {name!r}") from None


def _segment_word(names: dict[str, int], designator: str) -> tuple[int, ...] | None:
    """Split a dot-separated designator into state indices.

    State names may themselves contain dots (power automata), so segments
    are matched longest-first across the dot positions.
    """
    tokens = designator.split(".")
    n = len(tokens)
    memo: dict[int, tuple[int, ...] | None] = {n: ()}

    def solve(i: int) -> tuple[int, ...] | None:
        if i in memo:
            return memo[i]
        found = None
        for j in range(n, i, -1):
            idx = names.get(".".join(tokens[i:j]))
            if idx is not None:
                rest = solve(j)
                if rest is not None:
                    found = (idx,) + rest
                    break
        memo[i] = found
        return found

    return solve(0)


def _word_indices(aut: MealyAutomaton, designator: str) -> tuple[int, ...]:
    if designator == "-":
        return ()
    names = {name: q for q, name in enumerate(aut.state_names)}
    word = _segment_word(names, designator)
    if word is None:
        raise UnknownSymbol(f"cannot read {designator!r} as a word over the states")
    return word


def _word_name(aut: MealyAutomaton, word) -> str:
    return ".".join(aut.state_names[q] for q in word)


def _csv_writer():
    return csv.writer(sys.stdout, lineterminator="\n")


def _cmd_check(args) -> int:
    aut = _load(args.file)
    rows = [
        ("invertible", aut.is_invertible()),
        ("reversible", aut.is_reversible()),
        ("coreversible", aut.is_coreversible()),
        ("bireversible", aut.is_bireversible()),
    ]
    if args.format == "csv":
        w = _csv_writer()
        w.writerow(["predicate", "value"])
        for name, value in rows:
            w.writerow([name, "yes" if value else "no"])
    else:
        for name, value in rows:
            print(f"{name}: {'yes' if value else 'no'}")
    return 0


def _cmd_invert(args) -> int:
    print(_load(args.file).inverse().to_text(), end="")
    return 0


def _cmd_augment(args) -> int:
    print(_load(args.file).augment().to_text(), end="")
    return 0


def _cmd_power(args) -> int:
    aut = _load(args.file)
    print(power(aut, args.n, args.budget).to_text(), end="")
    return 0


def _cmd_component(args) -> int:
    aut = _load(args.file)
    word = _word_indices(aut, args.word)
    comp = component_of(aut, word, args.budget)
    if args.format == "csv":
        w = _csv_writer()
        w.writerow(["index", "member"])
        for t, member in enumerate(comp.members):
            w.writerow([t, _word_name(aut, member)])
    else:
        for member in comp.members:
            print(_word_name(aut, member))
    return 0


def _cmd_ratios(args) -> int:
    aut = _load(args.file)
    q = _state_index(aut, args.state)
    seq = ratio_sequence(aut, q, args.horizon, args.budget)
    rows = [
        (n + 1, seq.sizes[n], Fraction(seq.sizes[n + 1], seq.sizes[n]),
         seq.ratios[n], seq.precede_cards[n])
        for n in range(args.horizon)
    ]
    if args.format == "csv":
        w = _csv_writer()
        w.writerow(["n", "size_cc", "ratio", "follow_card", "precede_card"])
        for row in rows:
            w.writerow(row)
    else:
        print(f"state {args.state}: sizes |cc(q^n)| for n=1..{args.horizon + 1}: "
              + " ".join(str(s) for s in seq.sizes))
        for n, size, ratio, fc, pc in rows:
            print(f"n={n} size={size} ratio={ratio} follow={fc} precede={pc}")
        stab = seq.stabilized_at
        print(f"stabilized_at: {stab if stab is not None else 'not observed'}")
    if args.plot:
        from . import figures

        figures.save_ratio_plot(args.state, seq.sizes, seq.ratios, args.plot)
    return 0


def _cmd_minimize(args) -> int:
    aut = _load(args.file)
    part = nerode_partition(aut)
    print(minimize(aut).to_text(), end="")
    print("# class map:")
    for q, name in enumerate(aut.state_names):
        print(f"# {name} -> {part.class_of[q]}")
    return 0


def _cmd_nq(args) -> int:
    aut = _load(args.file)
    q = _state_index(aut, args.state)
    rows = []
    prev_size = None
    for n in range(1, args.horizon + 1):
        nq = q_restricted_class(aut, q, n, args.budget)
        size = len(nq.members)
        ratio = "" if prev_size is None else str(Fraction(size, prev_size))
        pen = "" if n < 2 else str(len(penultimate_letters(nq)))
        firsts = " ".join(sorted({aut.state_names[w[0]] for w in nq.members}))
        rows.append((n, size, ratio, pen, firsts))
        prev_size = size
    if args.format == "csv":
        w = _csv_writer()
        w.writerow(["n", "size_Nq", "ratio", "penultimate_count", "first_letter_set"])
        for row in rows:
            w.writerow(row)
    else:
        for n, size, ratio, pen, firsts in rows:
            print(f"n={n} |N_q|={size} ratio={ratio or '-'} "
                  f"penultimate={pen or '-'} first_letters={{{firsts}}}")
    if args.plot:
        from . import figures

        figures.save_nq_plot(args.state, [r[1] for r in rows], args.plot)
    return 0


def _cmd_equal(args) -> int:
    aut = _load(args.file)
    aug = aut.augment()
    u = _word_indices(aug, args.word1)
    v = _word_indices(aug, args.word2)
    same = elements_equal(aut, u, v, args.budget)
    print(f"equal: {'yes' if same else 'no'}")
    return 0


def _cmd_growth(args) -> int:
    aut = _load(args.file)
    table = growth_table(aut, args.radius, args.budget, args.semigroup)
    if args.format == "csv":
        w = _csv_writer()
        w.writerow(["n", "gamma", "log2_gamma"])
        for n, g in enumerate(table.gamma, start=1):
            w.writerow([n, g, f"{math.log2(g):.6f}"])
    else:
        for n, g in enumerate(table.gamma, start=1):
            print(f"n={n} gamma={g} log2={math.log2(g):.6f}")
    if args.plot:
        from . import figures

        figures.save_growth_plot(table.gamma, args.semigroup, args.plot)
    return 0


def _cmd_order(args) -> int:
    aut = _load(args.file)
    q = _state_index(aut, args.state)
    result = order_of_state(aut, q, args.horizon, args.budget)
    if result.finite:
        print(f"order: finite period={result.period} preperiod={result.preperiod}")
    else:
        print(f"order: no repetition up to {result.horizon}")
    return 0


def _cmd_witness(args) -> int:
    aut = _load(args.file)
    q = _state_index(aut, args.state)
    report = exponential_witness(aut, q, args.horizon, args.budget)
    levels = len(report.cc_sizes)
    rows = []
    for n in range(1, levels + 1):
        ratio = "" if n == 1 else str(report.nq_ratios[n - 2])
        rows.append((n, report.cc_sizes[n - 1], report.mz_sizes[n - 1],
                     report.nq_sizes[n - 1], ratio,
                     str(report.sandwich_lo[n - 1]), str(report.sandwich_hi[n - 1])))
    summary = [
        ("k", report.k),
        ("ell", report.ell_estimate),
        ("alpha", report.alpha if report.alpha is not None else "-"),
        ("K", report.K if report.K is not None else "-"),
        ("distinct_sizes_ok", "true" if report.distinct_sizes_ok else "false"),
        ("sandwich_ok", "true" if report.sandwich_ok else "false"),
    ]
    if report.distinct_sizes_ok:
        summary.append(("base_estimate", f"{growth_lower_bound_from_witness(report):.6f}"))
    if args.format == "csv":
        w = _csv_writer()
        w.writerow(["n", "size_cc", "mz_size", "nq_size", "nq_ratio",
                    "sandwich_lo", "sandwich_hi"])
        for row in rows:
            w.writerow(row)
        for key, value in summary:
            print(f"# {key}={value}")
    else:
        print(f"witness for {_word_name(aut, report.q)} "
              f"(working states: {report.state_count})")
        for n, cc, mz, nq, ratio, lo, hi in rows:
            print(f"n={n} |cc|={cc} #mz={mz} |N_q|={nq} ratio={ratio or '-'} "
                  f"bounds=[{lo}, {hi}]")
        for key, value in summary:
            print(f"{key}: {value}")
    if args.plot:
        from . import figures

        figures.save_witness_plot(args.state, report.mz_sizes,
                                  report.sandwich_lo, report.sandwich_hi, args.plot)
    return 0 if report.sandwich_ok else 1


def _props_automata(args) -> list[tuple[str, MealyAutomaton]]:
    if args.corpus:
        found = sorted(Path(args.corpus).glob("*.mealy"))
        if not found:
            raise MealyError(f"no *.mealy files in {args.corpus!r}")
        return [(path.stem, parse_automaton(path.read_text())) for path in found]
    if args.enumerate:
        try:
            m, asz = (int(tok) for tok in args.enumerate.split(","))
        except ValueError:
            raise MealyError("--enumerate expects STATES,LETTERS") from None
        spec = EnumerationSpec(m, asz, "bireversible")
        automata = list(enumerate_automata(spec, args.budget))
        width = len(str(len(automata)))
        return [
            (f"enum-{m}x{asz}-{idx:0{width}d}", aut)
            for idx, aut in enumerate(automata)
        ]
    return corpus.default_corpus()


def _cmd_props(args) -> int:
    only = args.only.split(",") if args.only else None
    automata = _props_automata(args)
    reports = run_suite(automata, args.horizon, args.budget, only, args.jobs)
    fails = [r for r in reports if r.verdict == "fail"]
    if args.format == "csv":
        w = _csv_writer()
        w.writerow(["property_id", "automaton", "verdict"])
        for r in reports:
            w.writerow([r.property_id, r.automaton_id, r.verdict])
    else:
        wide_id = max((len(r.property_id) for r in reports), default=2)
        wide_aut = max((len(r.automaton_id) for r in reports), default=2)
        for r in reports:
            line = (f"{r.property_id:<{wide_id}}  {r.automaton_id:<{wide_aut}}  "
                    f"{r.verdict:<4}  {r.params}")
            if r.verdict == "skip" and r.counterexample:
                line += f" ({r.counterexample})"
            print(line)
        counts = {"pass": 0, "skip": 0, "fail": 0}
        for r in reports:
            counts[r.verdict] += 1
        print(f"passes={counts['pass']} skips={counts['skip']} fails={counts['fail']}")
        for r in fails:
            print(f"--- counterexample {r.property_id} on {r.automaton_id} ---")
            print(r.counterexample, end="" if r.counterexample.endswith("\n") else "\n")
    return 1 if fails else 0


def _cmd_export_dot(args) -> int:
    print(_load(args.file).to_dot(), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mealy",
        description="Mealy automata: reversibility predicates, powers and their "
                    "components, Nerode minimization, growth reports and an "
                    "empirical property suite.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")

    def add(name, func, help_text, **kwargs):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.set_defaults(func=func)
        p.add_argument("--budget", type=int, default=None,
                       help="node cap for expensive operations")
        return p

    p = add("check", _cmd_check, "report the four reversibility predicates")
    p.add_argument("file")
    p.add_argument("--format", choices=["text", "csv"], default="text")

    p = add("invert", _cmd_invert, "print the inverse automaton")
    p.add_argument("file")

    p = add("augment", _cmd_augment, "print the automaton joined with its inverse and an identity state")
    p.add_argument("file")

    p = add("power", _cmd_power, "print the n-th power automaton")
    p.add_argument("file")
    p.add_argument("-n", type=int, required=True, help="exponent (positive)")

    p = add("component", _cmd_component, "list the members of the component of a state word")
    p.add_argument("file")
    p.add_argument("--word", required=True, help="dot-separated state names")
    p.add_argument("--format", choices=["text", "csv"], default="text")

    p = add("ratios", _cmd_ratios, "component sizes of q^n and their successive ratios")
    p.add_argument("file")
    p.add_argument("--state", "-q", required=True, help="state name")
    p.add_argument("--horizon", type=int, default=5)
    p.add_argument("--format", choices=["text", "csv"], default="text")
    p.add_argument("--plot", help="write a PNG figure to this path")

    p = add("minimize", _cmd_minimize, "print the Nerode quotient and the class map")
    p.add_argument("file")

    p = add("nq", _cmd_nq, "sizes and shape of the restricted classes N_q(n)")
    p.add_argument("file")
    p.add_argument("--state", "-q", required=True, help="state name")
    p.add_argument("--horizon", type=int, default=5)
    p.add_argument("--format", choices=["text", "csv"], default="text")
    p.add_argument("--plot", help="write a PNG figure to this path")

    p = add("equal", _cmd_equal, "decide whether two state words induce the same action")
    p.add_argument("file")
    p.add_argument("word1", help="dot-separated state names ('-' for the empty word)")
    p.add_argument("word2", help="dot-separated state names ('-' for the empty word)")

    p = add("growth", _cmd_growth, "ball sizes of the generated group (or semigroup)")
    p.add_argument("file")
    p.add_argument("--radius", type=int, default=3)
    p.add_argument("--semigroup", action="store_true",
                   help="count positive words only instead of group elements")
    p.add_argument("--format", choices=["text", "csv"], default="text")
    p.add_argument("--plot", help="write a PNG figure to this path")

    p = add("order", _cmd_order, "search for a repetition among the powers of a state")
    p.add_argument("file")
    p.add_argument("--state", "-q", required=True, help="state name")
    p.add_argument("--horizon", type=int, default=8)

    p = add("witness", _cmd_witness, "minimization-size sandwich along the powers of a state")
    p.add_argument("file")
    p.add_argument("--state", "-q", required=True, help="state name")
    p.add_argument("--horizon", type=int, default=6)
    p.add_argument("--format", choices=["text", "csv"], default="text")
    p.add_argument("--plot", help="write a PNG figure to this path")

    p = add("props", _cmd_props, "run the empirical property suite")
    p.add_argument("--corpus", help="directory of *.mealy files (default: built-in corpus)")
    p.add_argument("--enumerate", help="STATES,LETTERS: sweep all bireversible tables")
    p.add_argument("--horizon", type=int, default=4)
    p.add_argument("--only", help=f"comma-separated ids among {','.join(PROPERTY_IDS)}")
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p.add_argument("--format", choices=["text", "csv"], default="text")

    p = add("export-dot", _cmd_export_dot, "print the automaton in DOT format")
    p.add_argument("file")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (NotStabilized, NoWitness) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except MealyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
