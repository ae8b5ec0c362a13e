"""Command-line front end.

Subcommands: ``learn-tree`` runs a full learning session against a target
acceptor; ``mq``/``eq``/``usq``/``acc`` evaluate single queries; ``family``
emits the hard-to-determinize safety family; ``determinize`` applies the
subset construction to a safety acceptor; ``gen`` produces seeded random
weak targets.  Exit codes: 0 for yes/equal, 1 for no, 2 for errors.
"""

from __future__ import annotations

import argparse
import random
import string
import sys
import time
from dataclasses import dataclass

from . import serialize
from .automata import (
    Alphabet,
    BuchiAcceptor,
    BudgetExhaustedError,
    ParseError,
    ProtocolError,
    TreeAutomaton,
    mq_lasso,
)
from .constructions import determinize_safety, hard_safety_family
from .subsetq import SearchBudget, usq_omega
from .teacher import Teacher
from .treelearn import learn_trees, tree_acceptance
from .wordlearn import enum_learner, is_weak, weak_learner


@dataclass
class SessionReport:
    """Summary of one learning session; counts mirror the teacher's log."""

    result: str
    mq: int
    tmq: int
    eq: int
    rsq: int
    max_counterexample: int
    wall_time: float

    def lines(self) -> list[str]:
        return [
            f"result: {self.result}",
            f"mq: {self.mq}",
            f"tmq: {self.tmq}",
            f"eq: {self.eq}",
            f"rsq: {self.rsq}",
            f"max-counterexample: {self.max_counterexample}",
            f"wall-time-s: {self.wall_time:.3f}",
        ]


def generate_weak_target(n_states: int, n_symbols: int, seed: int) -> BuchiAcceptor:
    """Seeded random weak complete DBW: a random chain of strongly
    connected blocks with uniform acceptance per block and all remaining
    transitions pointing into the same or a later block."""
    if n_states < 1 or n_symbols < 1:
        raise ValueError("need at least one state and one symbol")
    rng = random.Random(seed)
    symbols = tuple(string.ascii_lowercase[i] if i < 26 else f"s{i}" for i in range(n_symbols))
    alphabet = Alphabet(symbols)
    n_blocks = rng.randint(1, n_states)
    cuts = sorted(rng.sample(range(1, n_states), n_blocks - 1)) if n_states > 1 else []
    bounds = [0] + cuts + [n_states]
    blocks = [range(bounds[i], bounds[i + 1]) for i in range(n_blocks)]
    block_of = {}
    for b, block in enumerate(blocks):
        for q in block:
            block_of[q] = b
    assigned: dict[tuple[int, int], int] = {}
    for block in blocks:
        states = list(block)
        for idx, q in enumerate(states):
            target = states[(idx + 1) % len(states)]
            assigned[(q, rng.randrange(n_symbols))] = target
    for q in range(n_states):
        later = [s for b in range(block_of[q], n_blocks) for s in blocks[b]]
        for sym in range(n_symbols):
            if (q, sym) not in assigned:
                assigned[(q, sym)] = rng.choice(later)
    accepting = set()
    for b, block in enumerate(blocks):
        if rng.random() < 0.5:
            accepting.update(block)
    out = BuchiAcceptor(
        alphabet,
        n_states,
        0,
        frozenset(accepting),
        tuple((q, sym, dst) for (q, sym), dst in assigned.items()),
    )
    assert out.deterministic and out.complete and is_weak(out)
    return out


def _read_automaton(path: str):
    if path == "-":
        return serialize.load(sys.stdin.read())
    with open(path, "r", encoding="utf-8") as handle:
        return serialize.load(handle.read())


def _need_dbw(obj, what: str) -> BuchiAcceptor:
    if not isinstance(obj, BuchiAcceptor) or not obj.deterministic:
        raise ValueError(f"{what} must be a dbw file")
    return obj


def _need_tree(obj, what: str) -> TreeAutomaton:
    if not isinstance(obj, TreeAutomaton):
        raise ValueError(f"{what} must be a tree file")
    return obj


def cmd_learn_tree(args) -> int:
    target = _need_dbw(_read_automaton(args.target), "--target")
    teacher = Teacher(
        target,
        arity=args.arity,
        strategy=args.strategy,
        eq_order=args.eq_order,
        keep_trace=args.trace is not None,
    )
    learner = weak_learner() if args.learner == "weak" else enum_learner()
    started = time.perf_counter()
    result_tag = "equal"
    outcome = None
    try:
        outcome = learn_trees(teacher, learner, SearchBudget(args.budget))
    except BudgetExhaustedError as exc:
        result_tag = "budget-exhausted"
        print(f"error: {exc}", file=sys.stderr)
    elapsed = time.perf_counter() - started
    log = teacher.query_log
    report = SessionReport(
        result=result_tag,
        mq=outcome.learner_mq if outcome else 0,
        tmq=log.count("tmq"),
        eq=log.count("teq"),
        rsq=outcome.rsq_simulations if outcome else 0,
        max_counterexample=outcome.max_counterexample if outcome else 0,
        wall_time=elapsed,
    )
    if outcome is not None:
        with open(f"{args.out}.dbw", "w", encoding="utf-8") as handle:
            handle.write(serialize.dump(outcome.acceptor.base))
    with open(f"{args.out}.report", "w", encoding="utf-8") as handle:
        handle.write("\n".join(report.lines()) + "\n")
    if args.trace is not None:
        with open(args.trace, "w", encoding="utf-8") as handle:
            handle.write("\n".join(log.lines) + ("\n" if log.lines else ""))
    print(
        f"result: {result_tag} queries: MQ={report.mq} TMQ={report.tmq} EQ={report.eq}"
    )
    return 0 if result_tag == "equal" else 2


def cmd_mq(args) -> int:
    target = _need_dbw(_read_automaton(args.target), "--target")
    teacher = Teacher(target, arity=1)
    word = serialize.parse_counterexample(args.word, teacher.alphabet)
    answer = teacher.word_mq(word)
    print("yes" if answer else "no")
    return 0 if answer else 1


def cmd_eq(args) -> int:
    target = _need_dbw(_read_automaton(args.target), "--target")
    hypothesis = _need_dbw(_read_automaton(args.hypothesis), "--hypothesis")
    teacher = Teacher(target, arity=1, eq_order=args.eq_order)
    answer = teacher.word_eq(hypothesis)
    if answer.equal:
        print("yes")
        return 0
    print(f"no {answer.polarity}")
    print(serialize.format_counterexample(answer.witness, teacher.alphabet))
    return 1


def cmd_usq(args) -> int:
    target = _need_dbw(_read_automaton(args.target), "--target")
    hypothesis = _read_automaton(args.hypothesis)
    if not isinstance(hypothesis, BuchiAcceptor):
        raise ValueError("--hypothesis must be a dbw or nbw file")
    teacher = Teacher(target, arity=1)
    queries = {"n": 0}

    def oracle(probe):
        queries["n"] += 1
        return teacher.rsq(probe)

    contained, witness = usq_omega(hypothesis, oracle, SearchBudget(args.budget))
    if contained:
        print("yes")
    else:
        print("no")
        print(serialize.format_counterexample(witness, teacher.alphabet))
    print(f"queries: {queries['n']}")
    return 0 if contained else 1


def cmd_acc(args) -> int:
    tree = _need_tree(_read_automaton(args.tree), "--tree")
    acceptor = _need_dbw(_read_automaton(args.dbw), "--dbw")
    accepted, witness = tree_acceptance(tree, acceptor)
    if accepted:
        print("yes")
        return 0
    print("no")
    print(serialize.format_counterexample(witness, acceptor.alphabet))
    return 1


def cmd_family(args) -> int:
    print(serialize.dump(hard_safety_family(args.ln)), end="")
    return 0


def cmd_determinize(args) -> int:
    acceptor = _read_automaton(args.file)
    if not isinstance(acceptor, BuchiAcceptor):
        raise ValueError("determinize expects a Buchi acceptor file")
    print(serialize.dump(determinize_safety(acceptor)), end="")
    return 0


def cmd_gen(args) -> int:
    if args.cls != "dwpw":
        raise ValueError(f"unknown target class {args.cls!r}")
    target = generate_weak_target(args.states, args.alphabet, args.seed)
    text = serialize.dump(target)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        print(text, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="omegalearn",
        description="Learn derived omega-tree languages and query omega-automata.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("learn-tree", help="run a learning session against a target dbw")
    p.add_argument("--target", required=True)
    p.add_argument("--arity", type=int, default=2)
    p.add_argument("--learner", choices=("weak", "enum"), default="weak")
    p.add_argument("--strategy", choices=("uniform", "mixed"), default="uniform")
    p.add_argument("--eq-order", choices=("neg-first", "pos-first"), default="neg-first")
    p.add_argument("--budget", type=int, default=10**6)
    p.add_argument("--out", default="learned")
    p.add_argument("--trace")
    p.set_defaults(fn=cmd_learn_tree)

    p = sub.add_parser("mq", help="membership of an ultimately periodic word")
    p.add_argument("--target", required=True)
    p.add_argument("--word", required=True, help="counterexample syntax: 'u ; v'")
    p.set_defaults(fn=cmd_mq)

    p = sub.add_parser("eq", help="equivalence of two dbw files")
    p.add_argument("--target", required=True)
    p.add_argument("--hypothesis", required=True)
    p.add_argument("--eq-order", choices=("neg-first", "pos-first"), default="neg-first")
    p.set_defaults(fn=cmd_eq)

    p = sub.add_parser("usq", help="subset query with counterexample extraction")
    p.add_argument("--target", required=True)
    p.add_argument("--hypothesis", required=True)
    p.add_argument("--budget", type=int, default=10**6)
    p.set_defaults(fn=cmd_usq)

    p = sub.add_parser("acc", help="does the branchwise dbw accept the tree?")
    p.add_argument("--tree", required=True)
    p.add_argument("--dbw", required=True)
    p.set_defaults(fn=cmd_acc)

    p = sub.add_parser("family", help="emit the exponential-blowup safety family")
    p.add_argument("--ln", type=int, required=True)
    p.set_defaults(fn=cmd_family)

    p = sub.add_parser("determinize", help="subset construction for a safety acceptor")
    p.add_argument("file", nargs="?", default="-")
    p.set_defaults(fn=cmd_determinize)

    p = sub.add_parser("gen", help="generate a seeded random weak target")
    p.add_argument("--class", dest="cls", default="dwpw")
    p.add_argument("--states", type=int, required=True)
    p.add_argument("--alphabet", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_gen)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, ValueError, OSError, ProtocolError, BudgetExhaustedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
