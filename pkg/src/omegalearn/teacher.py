"""Oracle suite answering membership, equivalence and subset queries for
omega-words and omega-trees against a secret deterministic Buchi target.

Difference witnesses come from product constructions: to show
L(A) ⊄ L(B) for deterministic complete B, delete the product states whose
B component is accepting and look for a reachable recurrent component that
still contains an accepting A component.  Witness selection is
deterministic (lowest-numbered states, shortest access and cycle words via
BFS) so that counterexamples are short and reproducible.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Optional, Union

from . import serialize
from .automata import (
    BuchiAcceptor,
    DerivedTreeAcceptor,
    FinAcceptor,
    TreeAutomaton,
    UPWord,
    Word,
    bfs_cycle,
    bfs_word,
    canonical_upword,
    complete,
    mq_lasso,
    plain_adjacency,
    reachable_states,
    sccs,
)
from .constructions import acceptor_of_tree, remap_tree_alphabet, tree_of_upword


@dataclass
class QueryLog:
    """Counters and an optional line-per-query trace."""

    counts: dict[str, int] = field(default_factory=dict)
    lines: list[str] = field(default_factory=list)
    keep_lines: bool = False

    def record(self, kind: str, line: str) -> None:
        self.counts[kind] = self.counts.get(kind, 0) + 1
        if self.keep_lines:
            self.lines.append(line)

    def count(self, kind: str) -> int:
        return self.counts.get(kind, 0)


@dataclass(frozen=True)
class EqAnswer:
    """Equivalence-query answer; the witness is present iff not equal and
    lies on the side named by the polarity (positive: target only,
    negative: hypothesis only)."""

    equal: bool
    witness: Union[UPWord, TreeAutomaton, None] = None
    polarity: Optional[str] = None


def _product(left: BuchiAcceptor, right: BuchiAcceptor) -> list[list[tuple[int, int]]]:
    """Labeled adjacency of the product of an NBW with a deterministic
    complete acceptor; state (i, j) has id i*|right| + j."""
    nr = right.n_states
    adj: list[list[tuple[int, int]]] = []
    for i in range(left.n_states):
        for j in range(nr):
            row = []
            for sym in range(len(left.alphabet)):
                j2 = right.step(j, sym)
                for i2 in left.successors(i, sym):
                    row.append((sym, i2 * nr + j2))
            adj.append(row)
    return adj


def _bad_lasso(
    adj: list[list[tuple[int, int]]],
    initial: int,
    removed: set[int],
    flagged: set[int],
) -> Optional[tuple[Word, Word]]:
    """Reachable lasso avoiding ``removed`` on its cycle while the cycle
    passes through a ``flagged`` state; None if no such lasso exists."""
    reach = reachable_states(adj, initial)
    allowed = reach - removed
    sub = [
        sorted({dst for _s, dst in row if dst in allowed}) if q in allowed else []
        for q, row in enumerate(adj)
    ]
    candidates = []
    for comp, recurrent in sccs(sub):
        if not recurrent or comp[0] not in allowed:
            continue
        candidates.extend(q for q in comp if q in flagged)
    if not candidates:
        return None
    target = min(candidates)
    access = bfs_word(adj, initial, {target})
    assert access is not None
    cycle = bfs_cycle(adj, target, allowed)
    assert cycle is not None
    return access[0], cycle


def dbw_difference_witness(m1: BuchiAcceptor, m2: BuchiAcceptor) -> Optional[UPWord]:
    """Some u(v)^omega in L(m1) \\ L(m2), or None iff L(m1) ⊆ L(m2).
    Both acceptors must be deterministic and complete over one alphabet."""
    for m in (m1, m2):
        if not (m.deterministic and m.complete):
            raise ValueError("difference witnesses need deterministic complete acceptors")
    return nbw_subset_witness(m1, m2)


def nbw_subset_witness(n: BuchiAcceptor, t: BuchiAcceptor) -> Optional[UPWord]:
    """Some u(v)^omega in L(n) \\ L(t) for deterministic complete t, or
    None iff L(n) ⊆ L(t).  n may be nondeterministic."""
    if n.alphabet.symbols != t.alphabet.symbols:
        raise ValueError("alphabet mismatch")
    if not (t.deterministic and t.complete):
        raise ValueError("the superset side must be deterministic and complete")
    nr = t.n_states
    adj = _product(n, t)
    removed = {i * nr + j for i in range(n.n_states) for j in t.accepting}
    flagged = {i * nr + j for i in n.accepting for j in range(nr) if i * nr + j not in removed}
    found = _bad_lasso(adj, n.initial * nr + t.initial, removed, flagged)
    if found is None:
        return None
    return UPWord(found[0], found[1])


def dbw_intersection_witness(m1: BuchiAcceptor, m2: BuchiAcceptor) -> Optional[UPWord]:
    """Some u(v)^omega in L(m1) ∩ L(m2) for deterministic complete inputs,
    or None iff the intersection is empty."""
    for m in (m1, m2):
        if not (m.deterministic and m.complete):
            raise ValueError("intersection witnesses need deterministic complete acceptors")
    if m1.alphabet.symbols != m2.alphabet.symbols:
        raise ValueError("alphabet mismatch")
    nr = m2.n_states
    adj = _product(m1, m2)
    initial = m1.initial * nr + m2.initial
    reach = reachable_states(adj, initial)
    flag1 = {i * nr + j for i in m1.accepting for j in range(nr)}
    flag2 = {i * nr + j for i in range(m1.n_states) for j in m2.accepting}
    for comp, recurrent in sccs(plain_adjacency(adj)):
        if not recurrent or comp[0] not in reach:
            continue
        hits1 = sorted(q for q in comp if q in flag1)
        hits2 = sorted(q for q in comp if q in flag2)
        if not hits1 or not hits2:
            continue
        members = set(comp)
        s1, s2 = hits1[0], hits2[0]
        access = bfs_word(adj, initial, {s1})
        assert access is not None
        if s1 == s2:
            cycle = bfs_cycle(adj, s1, members)
        else:
            first = bfs_word(adj, s1, {s2}, members)
            back = bfs_word(adj, s2, {s1}, members)
            assert first is not None and back is not None
            cycle = first[0] + back[0]
        assert cycle
        return UPWord(access[0], cycle)
    return None


def fin_subset_witness(m: FinAcceptor, t: FinAcceptor) -> Optional[Word]:
    """Shortest word in L(m) \\ L(t) for deterministic complete t, or None
    iff L(m) ⊆ L(t)."""
    if m.alphabet.symbols != t.alphabet.symbols:
        raise ValueError("alphabet mismatch")
    if not (t.deterministic and t.complete):
        raise ValueError("the superset side must be deterministic and complete")
    nr = t.n_states
    adj = _product_fin(m, t)
    initial = m.initial * nr + t.initial
    bad = {
        i * nr + j
        for i in m.accepting
        for j in range(nr)
        if j not in t.accepting
    }
    if initial in bad:
        return ()
    found = bfs_word(adj, initial, bad)
    return None if found is None else found[0]


def _product_fin(m: FinAcceptor, t: FinAcceptor) -> list[list[tuple[int, int]]]:
    nr = t.n_states
    adj: list[list[tuple[int, int]]] = []
    for i in range(m.n_states):
        for j in range(nr):
            row = []
            for sym in range(len(m.alphabet)):
                j2 = t.step(j, sym)
                for i2 in m.successors(i, sym):
                    row.append((sym, i2 * nr + j2))
            adj.append(row)
    return adj


def _tree_hash(tree: TreeAutomaton) -> str:
    return hashlib.sha256(serialize.dump(tree).encode()).hexdigest()[:12]


class Teacher:
    """Query oracle for one secret target language, given by a
    deterministic Buchi acceptor (completed on construction).

    ``strategy`` controls counterexample trees for tree equivalence
    queries: ``uniform`` returns the tree all of whose paths carry the
    witness word; ``mixed`` grafts a second word from the intersection of
    hypothesis and target when one exists, so the tree has at least two
    distinct path labels.  ``eq_order`` picks which difference direction
    is probed first.
    """

    def __init__(
        self,
        target: BuchiAcceptor,
        arity: int = 2,
        strategy: str = "uniform",
        eq_order: str = "neg-first",
        keep_trace: bool = False,
    ):
        if not target.deterministic:
            raise ValueError("teacher targets must be deterministic")
        if arity < 1:
            raise ValueError("arity must be at least 1")
        if strategy not in ("uniform", "mixed"):
            raise ValueError(f"unknown strategy {strategy!r}")
        if eq_order not in ("neg-first", "pos-first"):
            raise ValueError(f"unknown eq order {eq_order!r}")
        self.target = complete(target)
        self.arity = arity
        self.strategy = strategy
        self.eq_order = eq_order
        self.query_log = QueryLog(keep_lines=keep_trace)

    @property
    def alphabet(self):
        return self.target.alphabet

    def _check_alphabet(self, other) -> None:
        if other.symbols != self.alphabet.symbols:
            raise ValueError("query alphabet does not match the target alphabet")

    def word_mq(self, w: UPWord) -> bool:
        answer = mq_lasso(self.target, w)
        self.query_log.record(
            "mq", f"MQ {w.format(self.alphabet)} -> {'yes' if answer else 'no'}"
        )
        return answer

    def _word_difference(self, hypothesis: BuchiAcceptor) -> Optional[tuple[UPWord, str]]:
        probes = [
            ("negative", hypothesis, self.target),
            ("positive", self.target, hypothesis),
        ]
        if self.eq_order == "pos-first":
            probes.reverse()
        for polarity, a, b in probes:
            witness = dbw_difference_witness(a, b)
            if witness is not None:
                return canonical_upword(witness), polarity
        return None

    def word_eq(self, hypothesis: BuchiAcceptor) -> EqAnswer:
        if not hypothesis.deterministic:
            raise ValueError("equivalence queries take deterministic hypotheses")
        self._check_alphabet(hypothesis.alphabet)
        found = self._word_difference(complete(hypothesis))
        if found is None:
            self.query_log.record("eq", "EQ -> yes")
            return EqAnswer(True)
        witness, polarity = found
        self.query_log.record("eq", f"EQ -> no {polarity}")
        return EqAnswer(False, witness, polarity)

    def rsq(self, n: BuchiAcceptor) -> bool:
        self._check_alphabet(n.alphabet)
        answer = nbw_subset_witness(n, self.target) is None
        self.query_log.record(
            "rsq", f"RSQ {_acceptor_hash(n)} -> {'yes' if answer else 'no'}"
        )
        return answer

    def usq(self, n: BuchiAcceptor) -> tuple[bool, Optional[UPWord]]:
        self._check_alphabet(n.alphabet)
        witness = nbw_subset_witness(n, self.target)
        verdict = "yes" if witness is None else "no"
        self.query_log.record("usq", f"USQ {_acceptor_hash(n)} -> {verdict}")
        return witness is None, witness

    def tree_mq(self, tree: TreeAutomaton) -> bool:
        if tree.arity != self.arity:
            raise ValueError(f"tree arity {tree.arity} does not match teacher arity {self.arity}")
        remapped = remap_tree_alphabet(tree, self.alphabet)
        answer = nbw_subset_witness(acceptor_of_tree(remapped), self.target) is None
        self.query_log.record(
            "tmq", f"TMQ {_tree_hash(remapped)} -> {'yes' if answer else 'no'}"
        )
        return answer

    def tree_eq(self, hypothesis: DerivedTreeAcceptor) -> EqAnswer:
        if hypothesis.arity != self.arity:
            raise ValueError(
                f"hypothesis arity {hypothesis.arity} does not match teacher arity {self.arity}"
            )
        self._check_alphabet(hypothesis.base.alphabet)
        found = self._word_difference(hypothesis.base)
        if found is None:
            self.query_log.record("teq", "EQ -> yes")
            return EqAnswer(True)
        witness, polarity = found
        tree = self._counterexample_tree(witness, hypothesis.base)
        self.query_log.record("teq", f"EQ -> no {polarity}")
        return EqAnswer(False, tree, polarity)

    def _counterexample_tree(self, witness: UPWord, base: BuchiAcceptor) -> TreeAutomaton:
        if self.strategy == "mixed" and self.arity > 1:
            second = dbw_intersection_witness(base, self.target)
            if second is not None:
                return _grafted_tree(
                    self.alphabet, witness, canonical_upword(second), self.arity
                )
        return tree_of_upword(self.alphabet, witness, self.arity)


def _acceptor_hash(n: BuchiAcceptor) -> str:
    return hashlib.sha256(serialize.dump(n).encode()).hexdigest()[:12]


def _grafted_tree(alphabet, first: UPWord, second: UPWord, arity: int) -> TreeAutomaton:
    """Tree whose direction-1 subtree carries ``first`` on every path and
    whose other root subtrees carry ``second``; exactly two path labels."""
    a = tree_of_upword(alphabet, first, arity)
    b = tree_of_upword(alphabet, second, arity)
    off_a = 1
    off_b = 1 + a.n_states
    next_rows = [
        tuple(
            off_a + a.next[a.initial][0] if i == 0 else off_b + b.next[b.initial][0]
            for i in range(arity)
        )
    ]
    label_rows = [
        tuple(
            a.label[a.initial][0] if i == 0 else b.label[b.initial][0]
            for i in range(arity)
        )
    ]
    for q in range(a.n_states):
        next_rows.append(tuple(off_a + dst for dst in a.next[q]))
        label_rows.append(a.label[q])
    for q in range(b.n_states):
        next_rows.append(tuple(off_b + dst for dst in b.next[q]))
        label_rows.append(b.label[q])
    return TreeAutomaton(
        alphabet, arity, 1 + a.n_states + b.n_states, 0, tuple(next_rows), tuple(label_rows)
    )
