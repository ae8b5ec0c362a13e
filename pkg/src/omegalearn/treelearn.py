"""Tree-side learning machinery: the acceptance test for regular trees
against branchwise word acceptors (with path counterexample extraction),
subset queries simulated through tree membership queries, and the main
driver that lets a word-language learner learn a derived tree language.

The driver answers the learner's membership queries with uniform-path
trees, turns tree equivalence counterexamples into word counterexamples
(directly for positive ones, through a dovetailed period/prefix search
for negative ones), and hands every counterexample to the learner in
canonical shortest-prefix form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .automata import (
    Alphabet,
    BuchiAcceptor,
    DerivedTreeAcceptor,
    ProtocolError,
    TreeAutomaton,
    UPWord,
    bfs_cycle,
    bfs_word,
    canonical_upword,
    complete,
    omega_empty,
    plain_adjacency,
    reachable_states,
    sccs,
    trim_safety,
)
from .constructions import (
    acceptor_of_tree,
    derived_tree_acceptor,
    remap_tree_alphabet,
    tree_of_safety,
    tree_of_upword,
)
from .subsetq import Search, SearchBudget, find_counterexample_steps
from .teacher import Teacher


@dataclass(frozen=True)
class PathProductAcceptor:
    """Deterministic product of a regular tree and a completed DBW over the
    direction alphabet: state (tree state, word state), accepting iff the
    word component is accepting, and each direction step feeds the tree's
    edge label to the word acceptor."""

    buchi: BuchiAcceptor
    tree: TreeAutomaton
    word: BuchiAcceptor


def path_product(tree: TreeAutomaton, m: BuchiAcceptor) -> PathProductAcceptor:
    if not (m.deterministic and m.complete):
        raise ValueError("path products need a deterministic complete word acceptor")
    directions = Alphabet(tuple(str(i) for i in range(1, tree.arity + 1)))
    nm = m.n_states
    transitions = []
    for q1 in range(tree.n_states):
        for q2 in range(nm):
            src = q1 * nm + q2
            for i in range(tree.arity):
                dst = tree.next[q1][i] * nm + m.step(q2, tree.label[q1][i])
                transitions.append((src, i, dst))
    accepting = frozenset(
        q1 * nm + q2 for q1 in range(tree.n_states) for q2 in m.accepting
    )
    buchi = BuchiAcceptor(
        directions,
        tree.n_states * nm,
        tree.initial * nm + m.initial,
        accepting,
        tuple(transitions),
    )
    return PathProductAcceptor(buchi, tree, m)


def tree_acceptance(
    tree: TreeAutomaton, m: BuchiAcceptor
) -> tuple[bool, Optional[UPWord]]:
    """Does the branchwise extension of m accept the tree?

    If not, returns a pair (u, v) with u(v)^omega a path label of the tree
    rejected by m: the product is universal over direction words iff after
    dropping accepting states no reachable cycle remains, and any surviving
    cycle yields the witness.
    """
    if not m.deterministic:
        raise ValueError("tree acceptance is defined against deterministic acceptors")
    fitted = remap_tree_alphabet(tree, m.alphabet)
    mc = complete(m)
    product = path_product(fitted, mc).buchi
    adj = product.labeled_adjacency()
    reach = reachable_states(adj, product.initial)
    allowed = reach - product.accepting
    sub = [
        sorted({dst for _s, dst in row if dst in allowed}) if q in allowed else []
        for q, row in enumerate(adj)
    ]
    target = None
    for comp, recurrent in sccs(sub):
        if recurrent and comp[0] in allowed:
            best = comp[0]
            if target is None or best < target:
                target = best
    if target is None:
        return True, None
    access = bfs_word(adj, product.initial, {target})
    cycle = bfs_cycle(adj, target, allowed)
    assert access is not None and cycle is not None
    nm = mc.n_states
    u = _labels_along(fitted, product.initial // nm, access[0])
    v = _labels_along(fitted, target // nm, cycle)
    return False, UPWord(u, v)


def _labels_along(tree: TreeAutomaton, start: int, directions) -> tuple[int, ...]:
    state = start
    out = []
    for i in directions:
        out.append(tree.label[state][i])
        state = tree.next[state][i]
    return tuple(out)


def rsq_via_tree_mq(teacher: Teacher, n: BuchiAcceptor, arity: int) -> bool:
    """Simulate a restricted subset query by one tree membership query:
    the safety-shaped probe becomes a regular tree whose paths are its
    language.  Probes with empty language are answered without a query."""
    if not n.all_accepting:
        raise ValueError("tree-simulated subset queries need safety-shaped probes")
    trimmed = trim_safety(n)
    if not trimmed.transitions:
        return True
    assert trimmed.out_degree <= arity, "probe out-degree exceeds the tree arity"
    return teacher.tree_mq(tree_of_safety(trimmed, arity))


class DovetailPool:
    """Round-robin driver for several probe searches; each live search
    answers exactly one probe per round (locally when the probe is empty,
    through the oracle otherwise) and the first search to finish wins."""

    _MAX_STEPS = 10**7

    def __init__(self, searches: list[tuple[int, Search]], oracle: Callable, budget: SearchBudget):
        self.searches = searches
        self.oracle = oracle
        self.budget = budget
        self.step_log: list[tuple[int, bool]] = []

    def run(self) -> tuple[int, UPWord]:
        pending = [(ident, gen, next(gen)) for ident, gen in self.searches]
        while True:
            next_pending = []
            for ident, gen, probe in pending:
                if probe is None:
                    answer = True
                    used_oracle = False
                else:
                    self.budget.spend()
                    answer = self.oracle(probe)
                    used_oracle = True
                self.step_log.append((ident, used_oracle))
                if len(self.step_log) > self._MAX_STEPS:
                    raise ProtocolError("dovetailed searches made no progress")
                try:
                    next_pending.append((ident, gen, gen.send(answer)))
                except StopIteration as stop:
                    return ident, stop.value
            pending = next_pending


@dataclass
class LearnResult:
    """Outcome of one tree-learning session."""

    acceptor: DerivedTreeAcceptor
    learner_mq: int
    learner_eq: int
    rsq_simulations: int
    max_counterexample: int
    events: list = field(default_factory=list)


def learn_trees(
    teacher: Teacher, learner, budget: Optional[SearchBudget] = None
) -> LearnResult:
    """Drive a word-language learner against a tree teacher.

    Word membership queries become uniform-path tree membership queries.
    Word equivalence queries become tree equivalence queries on the
    branchwise extension of the hypothesis; a counterexample tree either
    yields a rejected path directly (positive case) or, when the
    hypothesis accepts the tree, a dovetailed search over the tree's path
    acceptor extracts a path outside the target (negative case), with its
    subset probes simulated by tree membership queries.
    """
    arity = teacher.arity
    alphabet = teacher.alphabet
    budget = budget or SearchBudget()
    state = {"final": None, "mq": 0, "eq": 0, "rsq": 0, "max_ce": 0, "done": False}
    events: list = []

    def ask_mq(w: UPWord) -> bool:
        if state["done"]:
            raise ProtocolError("learner asked a query after equivalence succeeded")
        state["mq"] += 1
        return teacher.tree_mq(tree_of_upword(alphabet, w, arity))

    def ask_eq(hypothesis: BuchiAcceptor) -> Optional[UPWord]:
        if state["done"]:
            raise ProtocolError("learner asked a query after equivalence succeeded")
        if not hypothesis.deterministic:
            raise ProtocolError("learner emitted a nondeterministic hypothesis")
        state["eq"] += 1
        completed = complete(hypothesis)
        derived = derived_tree_acceptor(completed, arity)
        answer = teacher.tree_eq(derived)
        if answer.equal:
            state["final"] = derived
            state["done"] = True
            return None
        tree = answer.witness
        accepted, path_witness = tree_acceptance(tree, completed)
        if not accepted:
            word = canonical_upword(path_witness)
            events.append(("counterexample", "positive", answer.polarity, word))
        else:
            word = _negative_counterexample(tree, events)
            events.append(("counterexample", "negative", answer.polarity, word))
        state["max_ce"] = max(state["max_ce"], len(word))
        return word

    def _negative_counterexample(tree: TreeAutomaton, events_out: list) -> UPWord:
        paths = trim_safety(acceptor_of_tree(remap_tree_alphabet(tree, alphabet)))
        if omega_empty(paths):
            raise ProtocolError("counterexample tree has no infinite paths")

        def oracle(probe: BuchiAcceptor) -> bool:
            state["rsq"] += 1
            return rsq_via_tree_mq(teacher, probe, arity)

        searches = [
            (q, find_counterexample_steps(paths, q)) for q in range(paths.n_states)
        ]
        pool = DovetailPool(searches, oracle, budget)
        winner, word = pool.run()
        events_out.append(("dovetail", winner, tuple(pool.step_log)))
        return canonical_upword(word)

    emitted = learner.learn(alphabet, ask_mq, ask_eq)
    if state["final"] is None:
        raise ProtocolError("learner halted without a successful equivalence query")
    final: DerivedTreeAcceptor = state["final"]
    if complete(emitted) != final.base:
        # the learner must output exactly its last accepted hypothesis
        raise ProtocolError("learner output differs from its accepted hypothesis")
    return LearnResult(
        acceptor=final,
        learner_mq=state["mq"],
        learner_eq=state["eq"],
        rsq_simulations=state["rsq"],
        max_counterexample=state["max_ce"],
        events=events,
    )
