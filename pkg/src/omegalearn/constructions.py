"""Acceptor-building operations: derived tree acceptors, conversions
between regular trees and safety acceptors, state-anchored sublanguages,
length/prefix restrictions, special-form concatenation and omega
repetition, and the family of safety languages whose determinization
blows up exponentially.

Every construction is deterministic: state ids come out in a fixed
discovery or ascending order, and the size/out-degree/determinism bounds
stated in the docstrings are checked on the results.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .automata import (
    Alphabet,
    BuchiAcceptor,
    DerivedTreeAcceptor,
    FinAcceptor,
    TreeAutomaton,
    UPWord,
    Word,
    trim_safety,
)


@dataclass(frozen=True)
class RestrictionSpec:
    """Length-and-prefix restriction S[n, u] = S ∩ Σ^n ∩ u·Σ*."""

    length: int
    prefix: Word = ()

    def apply(self, m: FinAcceptor) -> FinAcceptor:
        return restrict(m, self.length, self.prefix)


def derived_tree_acceptor(m: BuchiAcceptor, arity: int) -> DerivedTreeAcceptor:
    """Acceptor for the d-ary trees all of whose path labels m accepts.

    Only deterministic complete bases are allowed; for nondeterministic
    ones the branchwise product is a strict under-approximation.
    """
    if not m.deterministic:
        raise ValueError("derived tree acceptors require a deterministic base")
    if not m.complete:
        raise ValueError("derived tree acceptors require a complete base")
    return DerivedTreeAcceptor(m, arity)


def acceptor_of_tree(tree: TreeAutomaton) -> BuchiAcceptor:
    """Safety acceptor for the path labels of a regular tree: one state per
    tree state, all accepting, transitions grouped by edge label."""
    transitions = {
        (q, tree.label[q][i], tree.next[q][i])
        for q in range(tree.n_states)
        for i in range(tree.arity)
    }
    out = BuchiAcceptor(
        tree.alphabet,
        tree.n_states,
        tree.initial,
        frozenset(range(tree.n_states)),
        tuple(transitions),
    )
    assert out.out_degree <= tree.arity
    return out


def tree_of_safety(n: BuchiAcceptor, arity: int) -> TreeAutomaton:
    """Regular tree whose path labels are exactly the (nonempty) safety
    language of n; requires out-degree at most the arity.

    Direction i follows the i-th outgoing transition in (symbol, target)
    order, and directions beyond the out-degree repeat the last one.
    """
    trimmed = trim_safety(n)
    if not trimmed.transitions:
        raise ValueError("an empty safety language has no tree representation")
    next_rows = []
    label_rows = []
    for q in range(trimmed.n_states):
        outs = trimmed.out_transitions(q)
        if len(outs) > arity:
            raise ValueError(
                f"state {q} has out-degree {len(outs)} which exceeds arity {arity}"
            )
        next_row = []
        label_row = []
        for i in range(arity):
            sym, dst = outs[min(i, len(outs) - 1)]
            next_row.append(dst)
            label_row.append(sym)
        next_rows.append(tuple(next_row))
        label_rows.append(tuple(label_row))
    return TreeAutomaton(
        n.alphabet, arity, trimmed.n_states, trimmed.initial, tuple(next_rows), tuple(label_rows)
    )


def tree_of_upword(alphabet: Alphabet, w: UPWord, arity: int) -> TreeAutomaton:
    """The d-ary tree all of whose infinite paths are labeled u(v)^omega."""
    full = w.u + w.v
    total = len(full)
    loop_start = len(w.u)
    next_rows = []
    label_rows = []
    for q in range(total):
        nxt = q + 1 if q + 1 < total else loop_start
        next_rows.append((nxt,) * arity)
        label_rows.append((full[q],) * arity)
    return TreeAutomaton(alphabet, arity, total, 0, tuple(next_rows), tuple(label_rows))


def remap_tree_alphabet(tree: TreeAutomaton, alphabet: Alphabet) -> TreeAutomaton:
    """Re-express a tree's labels in another alphabet (matched by token)."""
    if tree.alphabet.symbols == alphabet.symbols:
        return tree
    mapping = {}
    for i, tok in enumerate(tree.alphabet.symbols):
        mapping[i] = alphabet.index(tok)
    label_rows = tuple(tuple(mapping[s] for s in row) for row in tree.label)
    return TreeAutomaton(alphabet, tree.arity, tree.n_states, tree.initial, tree.next, label_rows)


def upword_acceptor(alphabet: Alphabet, w: UPWord) -> BuchiAcceptor:
    """Deterministic safety acceptor for the singleton language u(v)^omega."""
    full = w.u + w.v
    total = len(full)
    loop_start = len(w.u)
    transitions = []
    for q in range(total):
        nxt = q + 1 if q + 1 < total else loop_start
        transitions.append((q, full[q], nxt))
    return BuchiAcceptor(alphabet, total, 0, frozenset(range(total)), tuple(transitions))


def word_acceptor(alphabet: Alphabet, word: Word) -> FinAcceptor:
    """Special-form chain acceptor for the singleton language {word}."""
    n = len(word)
    transitions = tuple((i, word[i], i + 1) for i in range(n))
    return FinAcceptor(alphabet, n + 1, 0, frozenset({n}), transitions)


_WordOrBuchi = Union[FinAcceptor, BuchiAcceptor]


def access_language(m: _WordOrBuchi, q: int) -> FinAcceptor:
    """Finite words that lead from the initial state to q."""
    if not 0 <= q < m.n_states:
        raise ValueError("state out of range")
    return FinAcceptor(m.alphabet, m.n_states, m.initial, frozenset({q}), m.transitions)


def loop_language(m: _WordOrBuchi, q: int) -> FinAcceptor:
    """Nonempty finite words that lead from q back to q.

    The empty word is excluded by starting in a fresh copy of q that
    shares its out-transitions but is not accepting.
    """
    if not 0 <= q < m.n_states:
        raise ValueError("state out of range")
    entry = m.n_states
    extra = tuple((entry, sym, dst) for sym, dst in m.out_transitions(q))
    return FinAcceptor(
        m.alphabet, m.n_states + 1, entry, frozenset({q}), m.transitions + extra
    )


def restrict(m: FinAcceptor, length: int, prefix: Word = ()) -> FinAcceptor:
    """Special-form acceptor for L(m) ∩ Σ^length ∩ prefix·Σ*.

    Built as the reachable product with the length/prefix counter; all
    accepting product states are merged into one, which has no
    out-transitions because the counter saturates.
    """
    if length < len(prefix):
        return FinAcceptor(m.alphabet, 1, 0, frozenset(), ())
    n_syms = len(m.alphabet)
    ids: dict[tuple[int, int], int] = {}
    final_id = -1
    transitions: list[tuple[int, int, int]] = []
    order: list[tuple[int, int]] = []

    def intern(state: tuple[int, int]) -> int:
        if state not in ids:
            ids[state] = len(ids)
            order.append(state)
        return ids[state]

    start = (m.initial, 0)
    if length == 0:
        if m.initial in m.accepting:
            return FinAcceptor(m.alphabet, 1, 0, frozenset({0}), ())
        return FinAcceptor(m.alphabet, 1, 0, frozenset(), ())
    intern(start)
    cursor = 0
    while cursor < len(order):
        q, lvl = order[cursor]
        cursor += 1
        if q == "final" or lvl >= length:
            continue
        syms = (prefix[lvl],) if lvl < len(prefix) else range(n_syms)
        for sym in syms:
            for dst in m.successors(q, sym):
                if lvl + 1 == length:
                    if dst not in m.accepting:
                        continue
                    if final_id < 0:
                        final_id = len(ids)
                        ids[("final", -1)] = final_id  # type: ignore[index]
                        order.append(("final", -1))  # type: ignore[arg-type]
                    transitions.append((ids[(q, lvl)], sym, final_id))
                else:
                    transitions.append((ids[(q, lvl)], sym, intern((dst, lvl + 1))))
    accepting = frozenset({final_id}) if final_id >= 0 else frozenset()
    out = FinAcceptor(m.alphabet, len(ids), 0, accepting, tuple(transitions))
    assert out.special_form
    assert out.out_degree <= max(m.out_degree, 1)
    assert not m.deterministic or out.deterministic
    assert out.n_states <= m.n_states * (length + 1) + 1
    return out


def concat_special(m1: FinAcceptor, m2: _WordOrBuchi) -> _WordOrBuchi:
    """Concatenation L(m1)·L(m2) for a special-form left factor, by
    redirecting the transitions into m1's accepting state to m2's initial
    state.  The result has at most |m1|+|m2| states and is of the same kind
    as m2."""
    if not m1.special_form:
        raise ValueError("left factor of the concatenation must be in special form")
    if m1.alphabet.symbols != m2.alphabet.symbols:
        raise ValueError("alphabet mismatch")
    kind = type(m2)
    if not m1.accepting:
        return kind(m2.alphabet, 1, 0, frozenset(), ())
    (final,) = tuple(m1.accepting)
    if final == m1.initial:
        return m2
    left_ids = {q: i for i, q in enumerate(x for x in range(m1.n_states) if x != final)}
    offset = len(left_ids)
    transitions = []
    for src, sym, dst in m1.transitions:
        target = offset + m2.initial if dst == final else left_ids[dst]
        transitions.append((left_ids[src], sym, target))
    for src, sym, dst in m2.transitions:
        transitions.append((offset + src, sym, offset + dst))
    out = kind(
        m2.alphabet,
        offset + m2.n_states,
        left_ids[m1.initial],
        frozenset(offset + q for q in m2.accepting),
        tuple(transitions),
    )
    assert out.n_states <= m1.n_states + m2.n_states
    assert out.out_degree <= max(m1.out_degree, m2.out_degree)
    assert not (m1.deterministic and m2.deterministic) or out.deterministic
    return out


def omega_repeat(m1: FinAcceptor) -> BuchiAcceptor:
    """Buchi acceptor for L(m1)^omega, for special-form m1: the accepting
    state is removed and its incoming transitions loop back to the initial
    state.  Empty and {epsilon} inputs give the empty omega-language."""
    if not m1.special_form:
        raise ValueError("omega repetition requires a special-form acceptor")
    if not m1.accepting or m1.accepting == frozenset({m1.initial}):
        return BuchiAcceptor(m1.alphabet, 1, 0, frozenset(), ())
    (final,) = tuple(m1.accepting)
    ids = {q: i for i, q in enumerate(x for x in range(m1.n_states) if x != final)}
    transitions = []
    for src, sym, dst in m1.transitions:
        target = ids[m1.initial] if dst == final else ids[dst]
        transitions.append((ids[src], sym, target))
    out = BuchiAcceptor(
        m1.alphabet,
        len(ids),
        ids[m1.initial],
        frozenset({ids[m1.initial]}),
        tuple(transitions),
    )
    assert out.n_states <= m1.n_states
    assert out.out_degree <= max(m1.out_degree, 1)
    assert not m1.deterministic or out.deterministic
    return out


def single_accepting(m: BuchiAcceptor, q: int) -> BuchiAcceptor:
    """The same automaton with the accepting set shrunk to {q}."""
    if q not in m.accepting:
        raise ValueError(f"state {q} is not accepting")
    return BuchiAcceptor(m.alphabet, m.n_states, m.initial, frozenset({q}), m.transitions)


def hard_safety_family(n: int) -> BuchiAcceptor:
    """The (n+2)-state safety acceptor over {a,b,c} for the language
    (a + b + a(a+b)^n c)^omega, whose smallest deterministic acceptor
    needs at least 2^n states."""
    if n < 1:
        raise ValueError("family index must be at least 1")
    alphabet = Alphabet(("a", "b", "c"))
    a, b, c = 0, 1, 2
    transitions = [(0, a, 0), (0, a, 1), (0, b, 0)]
    for i in range(1, n + 1):
        transitions.append((i, a, i + 1))
        transitions.append((i, b, i + 1))
    transitions.append((n + 1, c, 0))
    out = BuchiAcceptor(
        alphabet, n + 2, 0, frozenset(range(n + 2)), tuple(transitions)
    )
    assert out.out_degree == 3
    return out


def determinize_safety(n: BuchiAcceptor) -> BuchiAcceptor:
    """Reachable subset construction for a safety acceptor; every macro
    state is accepting and the language is preserved."""
    if not n.all_accepting:
        raise ValueError("subset determinization is only language-preserving for safety acceptors")
    n_syms = len(n.alphabet)
    ids: dict[frozenset[int], int] = {}
    order: list[frozenset[int]] = []

    def intern(macro: frozenset[int]) -> int:
        if macro not in ids:
            ids[macro] = len(ids)
            order.append(macro)
        return ids[macro]

    intern(frozenset({n.initial}))
    transitions = []
    cursor = 0
    while cursor < len(order):
        macro = order[cursor]
        cursor += 1
        for sym in range(n_syms):
            target = frozenset(dst for q in macro for dst in n.successors(q, sym))
            if not target:
                continue
            transitions.append((ids[macro], sym, intern(target)))
    out = BuchiAcceptor(
        n.alphabet, len(ids), 0, frozenset(range(len(ids))), tuple(transitions)
    )
    assert out.deterministic
    return out
