"""Word-level learners driven by membership and equivalence queries.

Two implementations of the learner interface consumed by the tree-side
driver:

* an enumeration learner that walks all complete deterministic Buchi
  acceptors in increasing (state count, canonical encoding) order, asking
  an equivalence query for every candidate that is consistent with the
  counterexamples seen so far (guaranteed correct, membership-query free);

* an observation-table learner for weak regular omega-word languages:
  rows are finite prefixes, experiments are ultimately periodic suffix
  tests, and state acceptance is colored per strongly connected component
  of the hypothesis by one membership query on an access word and an
  internal cycle word.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterator, Optional, Protocol

from .automata import (
    Alphabet,
    BuchiAcceptor,
    ProtocolError,
    UPWord,
    Word,
    bfs_cycle,
    plain_adjacency,
    sccs,
)

MqFn = Callable[[UPWord], bool]
EqFn = Callable[[BuchiAcceptor], Optional[UPWord]]


class WordLearner(Protocol):
    """A learner asks membership and equivalence queries through the two
    callbacks and returns its final (deterministic) hypothesis, which must
    equal the hypothesis of its last, successful equivalence query."""

    def learn(self, alphabet: Alphabet, mq: MqFn, eq: EqFn) -> BuchiAcceptor:
        ...


def is_weak(m: BuchiAcceptor) -> bool:
    """Structural weakness: within every strongly connected component all
    states agree on acceptance."""
    adj = plain_adjacency(m.labeled_adjacency())
    for comp, _recurrent in sccs(adj):
        flags = {q in m.accepting for q in comp}
        if len(flags) > 1:
            return False
    return True


def canonical_transition_tables(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """All complete transition tables on states 0..n-1 over k symbols whose
    state ids follow discovery order (row-major scan), one per isomorphism
    class of reachable complete automata."""
    entries = [0] * (n * k)

    def emit(pos: int, max_seen: int) -> Iterator[tuple[int, ...]]:
        if pos == n * k:
            if max_seen == n - 1:
                yield tuple(entries)
            return
        row = pos // k
        if pos % k == 0 and row > max_seen:
            return
        if max_seen + (n * k - pos) < n - 1:
            return
        for value in range(min(max_seen + 1, n - 1) + 1):
            entries[pos] = value
            yield from emit(pos + 1, max(max_seen, value))

    yield from emit(0, 0)


def _table_lasso(table: tuple[int, ...], k: int, mask: int, w: UPWord) -> bool:
    """Lasso membership on a flat transition table with a bitmask of
    accepting states; avoids building an acceptor while screening."""
    state = 0
    for sym in w.u:
        state = table[state * k + sym]
    seen = {state: 0}
    order = [state]
    while True:
        for sym in w.v:
            state = table[state * k + sym]
        if state in seen:
            start = seen[state]
            break
        seen[state] = len(order)
        order.append(state)
    cur = order[start]
    for _ in range(len(order) - start):
        for sym in w.v:
            cur = table[cur * k + sym]
            if mask >> cur & 1:
                return True
    return False


def _table_acceptor(alphabet: Alphabet, n: int, k: int, table: tuple[int, ...], mask: int) -> BuchiAcceptor:
    transitions = tuple(
        (q, sym, table[q * k + sym]) for q in range(n) for sym in range(k)
    )
    accepting = frozenset(q for q in range(n) if mask >> q & 1)
    return BuchiAcceptor(alphabet, n, 0, accepting, transitions)


class EnumerationLearner:
    """Equivalence-query-only learner: enumerate candidate acceptors,
    skipping any that misclassify a counterexample already received."""

    def learn(self, alphabet: Alphabet, mq: MqFn, eq: EqFn) -> BuchiAcceptor:
        k = len(alphabet)
        observed: list[tuple[UPWord, bool]] = []
        for n in itertools.count(1):
            for table in canonical_transition_tables(n, k):
                for mask in range(1 << n):
                    if any(
                        _table_lasso(table, k, mask, w) != label
                        for w, label in observed
                    ):
                        continue
                    candidate = _table_acceptor(alphabet, n, k, table, mask)
                    ce = eq(candidate)
                    if ce is None:
                        return candidate
                    observed.append((ce, not _table_lasso(table, k, mask, ce)))
        raise AssertionError("unreachable")


def enum_learner() -> EnumerationLearner:
    return EnumerationLearner()


class ObservationTable:
    """Prefix rows against ultimately periodic experiments.

    ``prefixes`` is prefix-closed; an experiment (x, y) maps a row word s
    to membership of (s·x)(y)^omega.  The table is closed when every
    one-symbol extension row already occurs among the prefix rows, and
    consistent when equal rows stay equal under every extension.
    """

    def __init__(self, alphabet: Alphabet, mq: MqFn):
        self.alphabet = alphabet
        self.mq = mq
        self.prefixes: list[Word] = [()]
        self.experiments: list[tuple[Word, Word]] = []

    def entry(self, s: Word, experiment: tuple[Word, Word]) -> bool:
        x, y = experiment
        return self.mq(UPWord(s + x, y))

    def row(self, s: Word) -> tuple[bool, ...]:
        return tuple(self.entry(s, e) for e in self.experiments)

    def add_prefix_chain(self, word: Word) -> bool:
        added = False
        known = set(self.prefixes)
        for end in range(1, len(word) + 1):
            p = word[:end]
            if p not in known:
                self.prefixes.append(p)
                known.add(p)
                added = True
        return added

    def add_experiment(self, x: Word, y: Word) -> bool:
        if (x, y) in self.experiments:
            return False
        self.experiments.append((x, y))
        return True

    def find_unclosed(self) -> Optional[Word]:
        rows = {self.row(s) for s in self.prefixes}
        for s in self.prefixes:
            for sym in range(len(self.alphabet)):
                ext = s + (sym,)
                if self.row(ext) not in rows:
                    return ext
        return None

    def find_inconsistent(self) -> Optional[tuple[Word, Word]]:
        """An experiment (sym·x, y) separating two currently-equal rows."""
        by_row: dict[tuple[bool, ...], list[Word]] = {}
        for s in self.prefixes:
            by_row.setdefault(self.row(s), []).append(s)
        for group in by_row.values():
            if len(group) < 2:
                continue
            lead = group[0]
            for other in group[1:]:
                for sym in range(len(self.alphabet)):
                    for exp in self.experiments:
                        if self.entry(lead + (sym,), exp) != self.entry(other + (sym,), exp):
                            x, y = exp
                            return ((sym,) + x, y)
        return None

    def hypothesis(self) -> tuple[BuchiAcceptor, list[Word]]:
        """Transition skeleton on distinct rows plus per-component coloring
        by one membership query each; returns the acceptor and the state
        representatives (shortest access words)."""
        ordered = sorted(self.prefixes, key=lambda w: (len(w), w))
        row_to_state: dict[tuple[bool, ...], int] = {}
        reps: list[Word] = []
        for s in ordered:
            r = self.row(s)
            if r not in row_to_state:
                row_to_state[r] = len(reps)
                reps.append(s)
        n = len(reps)
        k = len(self.alphabet)
        delta = []
        for q in range(n):
            row_targets = []
            for sym in range(k):
                target_row = self.row(reps[q] + (sym,))
                if target_row not in row_to_state:
                    raise ProtocolError("hypothesis built from an unclosed table")
                row_targets.append(row_to_state[target_row])
            delta.append(row_targets)
        adj = [sorted(set(targets)) for targets in delta]
        labeled = [
            [(sym, delta[q][sym]) for sym in range(k)] for q in range(n)
        ]
        accepting: set[int] = set()
        for comp, recurrent in sccs(adj):
            if not recurrent:
                continue
            anchor = comp[0]
            cycle = bfs_cycle(labeled, anchor, set(comp))
            assert cycle is not None
            if self.mq(UPWord(reps[anchor], cycle)):
                accepting.update(comp)
        transitions = tuple(
            (q, sym, delta[q][sym]) for q in range(n) for sym in range(k)
        )
        acceptor = BuchiAcceptor(self.alphabet, n, 0, frozenset(accepting), transitions)
        return acceptor, reps


class WeakTableLearner:
    """Observation-table learner for weak regular omega-word languages."""

    max_rounds = 10_000

    def __init__(self):
        self.table: Optional[ObservationTable] = None

    def learn(self, alphabet: Alphabet, mq: MqFn, eq: EqFn) -> BuchiAcceptor:
        cache: dict[tuple[Word, Word], bool] = {}

        def cached_mq(w: UPWord) -> bool:
            key = (w.u, w.v)
            if key not in cache:
                cache[key] = mq(w)
            return cache[key]

        table = ObservationTable(alphabet, cached_mq)
        self.table = table
        previous: Optional[tuple[BuchiAcceptor, UPWord]] = None
        stuck_rounds = 0
        for _ in range(self.max_rounds):
            self._stabilize(table)
            hyp, _reps = table.hypothesis()
            ce = eq(hyp)
            if ce is None:
                return hyp
            if previous == (hyp, ce):
                stuck_rounds += 1
            else:
                stuck_rounds = 0
            previous = (hyp, ce)
            z = ce.u + ce.v * (hyp.n_states + 1)
            grew = table.add_prefix_chain(z)
            grew |= table.add_experiment((), ce.v)
            if stuck_rounds >= 1:
                # the counterexample no longer adds rows; split on its tails
                for j in range(1, len(z) + 1):
                    grew |= table.add_experiment(z[j:], ce.v)
            if not grew and stuck_rounds >= 2:
                raise ProtocolError(
                    "counterexample produced no table growth; target appears "
                    "outside the weak class"
                )
        raise ProtocolError("table learner exceeded its round budget")

    @staticmethod
    def _stabilize(table: ObservationTable) -> None:
        while True:
            unclosed = table.find_unclosed()
            if unclosed is not None:
                table.add_prefix_chain(unclosed)
                continue
            experiment = table.find_inconsistent()
            if experiment is not None:
                table.add_experiment(*experiment)
                continue
            return


def weak_learner() -> WeakTableLearner:
    return WeakTableLearner()


def learn_words(teacher, learner: WordLearner) -> tuple[BuchiAcceptor, dict]:
    """Drive a learner directly against the word-level oracles of a
    teacher; the word analogue of the tree-learning session, used for
    differential testing at arity 1."""
    counts = {"mq": 0, "eq": 0, "max_ce": 0}
    done = {"flag": False}

    def ask_mq(w: UPWord) -> bool:
        if done["flag"]:
            raise ProtocolError("learner asked a query after equivalence succeeded")
        counts["mq"] += 1
        return teacher.word_mq(w)

    def ask_eq(hypothesis: BuchiAcceptor) -> Optional[UPWord]:
        if done["flag"]:
            raise ProtocolError("learner asked a query after equivalence succeeded")
        counts["eq"] += 1
        answer = teacher.word_eq(hypothesis)
        if answer.equal:
            done["flag"] = True
            return None
        counts["max_ce"] = max(counts["max_ce"], len(answer.witness))
        return answer.witness

    result = learner.learn(teacher.alphabet, ask_mq, ask_eq)
    if not done["flag"]:
        raise ProtocolError("learner halted without a successful equivalence query")
    return result, counts
