"""Core automata types and the graph routines everything else builds on.

State ids are dense integers starting at 0.  Symbols are represented by
their index into the alphabet and finite words by tuples of symbol ids;
the empty tuple is the empty word.  All iteration orders are fixed
(states ascending, symbols in alphabet order, tree directions 1..d) so
that every algorithm in the package is deterministic and reproducible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional

Word = tuple[int, ...]

EPSILON: Word = ()


class ParseError(ValueError):
    """Malformed automaton or counterexample text."""


class BudgetExhaustedError(RuntimeError):
    """An oracle-call budget ran out before a search finished."""


class ProtocolError(RuntimeError):
    """A learner, teacher or oracle violated its query contract."""


@dataclass(frozen=True)
class Alphabet:
    """Ordered list of distinct symbol tokens.

    The order is fixed and defines enumeration order everywhere: symbol id
    i refers to ``symbols[i]``.
    """

    symbols: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if not self.symbols:
            raise ValueError("alphabet must be nonempty")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("alphabet has duplicate symbols")
        for tok in self.symbols:
            if not tok or any(ch.isspace() for ch in tok):
                raise ValueError(f"bad symbol token {tok!r}")

    def __len__(self) -> int:
        return len(self.symbols)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {tok: i for i, tok in enumerate(self.symbols)}

    def index(self, token: str) -> int:
        try:
            return self._index[token]
        except KeyError:
            raise ValueError(f"symbol {token!r} not in alphabet") from None

    def word(self, text: str) -> Word:
        """Parse a whitespace-separated word; the empty string is epsilon."""
        return tuple(self.index(tok) for tok in text.split())

    def format_word(self, word: Word) -> str:
        return " ".join(self.symbols[s] for s in word)


@dataclass(frozen=True)
class UPWord:
    """Ultimately periodic word u(v)^omega given by the pair (u, v), v nonempty."""

    u: Word
    v: Word

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(self.u))
        object.__setattr__(self, "v", tuple(self.v))
        if not self.v:
            raise ValueError("period of an ultimately periodic word is nonempty")

    def format(self, alphabet: Alphabet) -> str:
        return f"{alphabet.format_word(self.u)} ; {alphabet.format_word(self.v)}".strip()

    def __len__(self) -> int:
        return len(self.u) + len(self.v)


def canonical_upword(w: UPWord) -> UPWord:
    """Unique shortest-prefix, primitive-period form of the same omega-word."""
    v = w.v
    for p in range(1, len(v) + 1):
        if len(v) % p == 0 and v == v[:p] * (len(v) // p):
            v = v[:p]
            break
    u = w.u
    while u and u[-1] == v[-1]:
        u = u[:-1]
        v = (v[-1],) + v[:-1]
    return UPWord(u, v)


def _validate_word_automaton(a) -> None:
    if a.n_states <= 0:
        raise ValueError("automaton needs at least one state")
    if not 0 <= a.initial < a.n_states:
        raise ValueError("initial state out of range")
    for q in a.accepting:
        if not 0 <= q < a.n_states:
            raise ValueError("accepting state out of range")
    n_syms = len(a.alphabet)
    for src, sym, dst in a.transitions:
        if not (0 <= src < a.n_states and 0 <= dst < a.n_states):
            raise ValueError(f"transition ({src},{sym},{dst}) has a state out of range")
        if not 0 <= sym < n_syms:
            raise ValueError(f"transition ({src},{sym},{dst}) has a symbol out of range")


class _AcceptorOps:
    """Derived structure shared by finite-word and Buchi acceptors."""

    @cached_property
    def _succ(self) -> dict[tuple[int, int], tuple[int, ...]]:
        table: dict[tuple[int, int], list[int]] = {}
        for src, sym, dst in self.transitions:
            table.setdefault((src, sym), []).append(dst)
        return {key: tuple(dsts) for key, dsts in table.items()}

    def successors(self, state: int, sym: int) -> tuple[int, ...]:
        return self._succ.get((state, sym), ())

    @cached_property
    def deterministic(self) -> bool:
        return all(len(dsts) <= 1 for dsts in self._succ.values())

    @cached_property
    def complete(self) -> bool:
        n_syms = len(self.alphabet)
        return all(
            (q, s) in self._succ for q in range(self.n_states) for s in range(n_syms)
        )

    @cached_property
    def out_degree(self) -> int:
        counts = [0] * self.n_states
        for src, _sym, _dst in self.transitions:
            counts[src] += 1
        return max(counts) if counts else 0

    def out_transitions(self, state: int) -> list[tuple[int, int]]:
        """Outgoing (symbol, dst) pairs in (symbol, dst) order."""
        return [(sym, dst) for src, sym, dst in self.transitions if src == state]

    def step(self, state: int, sym: int) -> int:
        """Deterministic single step; raises if no transition exists."""
        dsts = self._succ.get((state, sym), ())
        if len(dsts) != 1:
            raise ValueError(f"no unique transition from state {state} on symbol {sym}")
        return dsts[0]

    def run(self, word: Word, start: Optional[int] = None) -> Optional[int]:
        """Deterministic run; returns the final state or None if the run dies."""
        state = self.initial if start is None else start
        for sym in word:
            dsts = self._succ.get((state, sym), ())
            if len(dsts) != 1:
                return None
            state = dsts[0]
        return state

    def states_after(self, word: Word, starts: Optional[Iterable[int]] = None) -> frozenset[int]:
        """Set-simulation of all runs on a finite word."""
        cur = {self.initial} if starts is None else set(starts)
        for sym in word:
            cur = {dst for q in cur for dst in self._succ.get((q, sym), ())}
            if not cur:
                break
        return frozenset(cur)

    def labeled_adjacency(self) -> list[list[tuple[int, int]]]:
        """Per-state outgoing (symbol, dst) lists in (symbol, dst) order."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n_states)]
        for src, sym, dst in self.transitions:
            adj[src].append((sym, dst))
        return adj


def _normalize_transitions(transitions) -> tuple[tuple[int, int, int], ...]:
    return tuple(sorted(set((int(a), int(b), int(c)) for a, b, c in transitions)))


@dataclass(frozen=True)
class FinAcceptor(_AcceptorOps):
    """Finite-word acceptor; nondeterministic in general (NFW), a DFW when
    the transition relation happens to be a partial function."""

    alphabet: Alphabet
    n_states: int
    initial: int
    accepting: frozenset[int]
    transitions: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "transitions", _normalize_transitions(self.transitions))
        _validate_word_automaton(self)

    def accepts(self, word: Word) -> bool:
        return bool(self.states_after(word) & self.accepting)

    @cached_property
    def special_form(self) -> bool:
        """At most one accepting state, which has no out-transitions."""
        if len(self.accepting) > 1:
            return False
        return not any(src in self.accepting for src, _s, _d in self.transitions)


@dataclass(frozen=True)
class BuchiAcceptor(_AcceptorOps):
    """Buchi word acceptor (NBW; a DBW when deterministic).

    An acceptor with every state accepting is the standard representation
    of a safety language; ``all_accepting`` tests for that shape.
    """

    alphabet: Alphabet
    n_states: int
    initial: int
    accepting: frozenset[int]
    transitions: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "transitions", _normalize_transitions(self.transitions))
        _validate_word_automaton(self)

    @cached_property
    def all_accepting(self) -> bool:
        return len(self.accepting) == self.n_states


@dataclass(frozen=True)
class TreeAutomaton:
    """Regular d-ary omega-tree: a complete deterministic automaton over the
    direction alphabet 1..d whose transitions carry symbol labels.

    ``next[q][i-1]`` is the state entered in direction i and
    ``label[q][i-1]`` the symbol written on that edge.
    """

    alphabet: Alphabet
    arity: int
    n_states: int
    initial: int
    next: tuple[tuple[int, ...], ...]
    label: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "next", tuple(tuple(row) for row in self.next))
        object.__setattr__(self, "label", tuple(tuple(row) for row in self.label))
        if self.arity < 1:
            raise ValueError("tree arity must be at least 1")
        if self.n_states <= 0 or not 0 <= self.initial < self.n_states:
            raise ValueError("bad state count or initial state")
        for table, universe in ((self.next, self.n_states), (self.label, len(self.alphabet))):
            if len(table) != self.n_states:
                raise ValueError("transition tables must cover every state")
            for row in table:
                if len(row) != self.arity:
                    raise ValueError("transition tables must cover every direction")
                for entry in row:
                    if not 0 <= entry < universe:
                        raise ValueError("transition table entry out of range")

    def child(self, state: int, direction: int) -> int:
        return self.next[state][direction - 1]

    def edge_label(self, state: int, direction: int) -> int:
        return self.label[state][direction - 1]

    def path_word(self, directions: Iterable[int]) -> Word:
        """Labels along the path taken from the root by a direction sequence."""
        state = self.initial
        out = []
        for i in directions:
            out.append(self.edge_label(state, i))
            state = self.child(state, i)
        return tuple(out)


@dataclass(frozen=True)
class DerivedTreeAcceptor:
    """Tree acceptor that runs a deterministic complete Buchi word acceptor
    independently down every branch.  Its semantics is evaluated only via
    the tree-acceptance test, never by a direct run."""

    base: BuchiAcceptor
    arity: int

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError("tree arity must be at least 1")
        if not (self.base.deterministic and self.base.complete):
            raise ValueError("derived tree acceptors need a deterministic complete base")


def mq_lasso(m: BuchiAcceptor, w: UPWord) -> bool:
    """Decide u(v)^omega membership for a deterministic complete acceptor.

    Runs u from the initial state, then iterates v until a state repeats at
    period boundaries (at most |m| iterations) and reports whether the
    boundary cycle traverses an accepting state.
    """
    if not (m.deterministic and m.complete):
        raise ValueError("lasso membership needs a deterministic complete acceptor")
    n_syms = len(m.alphabet)
    for sym in w.u + w.v:
        if not 0 <= sym < n_syms:
            raise ValueError(f"symbol id {sym} outside alphabet")
    state = m.initial
    for sym in w.u:
        state = m.step(state, sym)
    seen = {state: 0}
    order = [state]
    while True:
        for sym in w.v:
            state = m.step(state, sym)
        if state in seen:
            start = seen[state]
            break
        seen[state] = len(order)
        order.append(state)
    cur = order[start]
    for _ in range(len(order) - start):
        for sym in w.v:
            cur = m.step(cur, sym)
            if cur in m.accepting:
                return True
    return False


def complete(m: BuchiAcceptor) -> BuchiAcceptor:
    """Make the transition relation total by adding one non-accepting sink
    if needed; the language is unchanged."""
    n_syms = len(m.alphabet)
    missing = [
        (q, s)
        for q in range(m.n_states)
        for s in range(n_syms)
        if not m.successors(q, s)
    ]
    if not missing:
        return m
    sink = m.n_states
    extra = [(q, s, sink) for q, s in missing]
    extra += [(sink, s, sink) for s in range(n_syms)]
    return BuchiAcceptor(
        m.alphabet, m.n_states + 1, m.initial, m.accepting, m.transitions + tuple(extra)
    )


def trim_safety(n: BuchiAcceptor) -> BuchiAcceptor:
    """Trim an all-accepting acceptor: drop unreachable states, then
    iteratively drop states with no out-transitions.

    The safety language is preserved.  If nothing survives, the canonical
    empty acceptor (one all-accepting state, no transitions) is returned.
    """
    if not n.all_accepting:
        raise ValueError("trim_safety expects an acceptor with all states accepting")
    adj = n.labeled_adjacency()
    alive = reachable_states(adj, n.initial)
    changed = True
    while changed:
        changed = False
        for q in sorted(alive):
            if not any(dst in alive for _s, dst in adj[q]):
                alive.discard(q)
                changed = True
    if n.initial not in alive:
        return BuchiAcceptor(n.alphabet, 1, 0, frozenset({0}), ())
    remap = {q: i for i, q in enumerate(sorted(alive))}
    trans = [
        (remap[src], sym, remap[dst])
        for src, sym, dst in n.transitions
        if src in alive and dst in alive
    ]
    return BuchiAcceptor(
        n.alphabet, len(remap), remap[n.initial], frozenset(remap.values()), tuple(trans)
    )


def sccs(adjacency: list[list[int]]) -> list[tuple[tuple[int, ...], bool]]:
    """Strongly connected components of a graph on 0..n-1, in topological
    order.  The flag marks recurrence: true unless the component is a
    singleton without a self-loop."""
    n = len(adjacency)
    index = [-1] * n
    lowlink = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    counter = 0
    components: list[tuple[int, ...]] = []

    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            node, edge_i = work[-1]
            if edge_i == 0:
                index[node] = lowlink[node] = counter
                counter += 1
                stack.append(node)
                on_stack[node] = True
            advanced = False
            for k in range(edge_i, len(adjacency[node])):
                succ = adjacency[node][k]
                if index[succ] == -1:
                    work[-1] = (node, k + 1)
                    work.append((succ, 0))
                    advanced = True
                    break
                if on_stack[succ]:
                    lowlink[node] = min(lowlink[node], index[succ])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[node])
            if lowlink[node] == index[node]:
                comp = []
                while True:
                    member = stack.pop()
                    on_stack[member] = False
                    comp.append(member)
                    if member == node:
                        break
                components.append(tuple(sorted(comp)))
    components.reverse()
    out = []
    for comp in components:
        recurrent = len(comp) > 1 or comp[0] in adjacency[comp[0]]
        out.append((comp, recurrent))
    return out


def reachable_states(labeled_adj: list[list[tuple[int, int]]], initial: int) -> set[int]:
    seen = {initial}
    queue = deque([initial])
    while queue:
        q = queue.popleft()
        for _sym, dst in labeled_adj[q]:
            if dst not in seen:
                seen.add(dst)
                queue.append(dst)
    return seen


def plain_adjacency(labeled_adj: list[list[tuple[int, int]]]) -> list[list[int]]:
    return [sorted({dst for _s, dst in row}) for row in labeled_adj]


def omega_empty(n: BuchiAcceptor) -> bool:
    """True iff the acceptor has no accepting lasso."""
    adj = n.labeled_adjacency()
    reach = reachable_states(adj, n.initial)
    for comp, recurrent in sccs(plain_adjacency(adj)):
        if not recurrent or comp[0] not in reach:
            continue
        if any(q in n.accepting for q in comp):
            return False
    return True


def fin_empty(m: FinAcceptor) -> bool:
    """True iff no accepting state is reachable."""
    reach = reachable_states(m.labeled_adjacency(), m.initial)
    return not (reach & m.accepting)


def bfs_word(
    labeled_adj: list[list[tuple[int, int]]],
    source: int,
    targets: set[int],
    allowed: Optional[set[int]] = None,
) -> Optional[tuple[Word, int]]:
    """Shortest word from source to any target state, exploring symbols in
    alphabet order so ties resolve to the lexicographically least word.
    When ``allowed`` is given, intermediate and final states must lie in it
    (the source itself is exempt)."""
    if source in targets:
        return (), source
    parent: dict[int, tuple[int, int]] = {}
    seen = {source}
    queue = deque([source])
    while queue:
        q = queue.popleft()
        for sym, dst in labeled_adj[q]:
            if dst in seen or (allowed is not None and dst not in allowed):
                continue
            parent[dst] = (q, sym)
            if dst in targets:
                word = []
                cur = dst
                while cur != source:
                    prev, s = parent[cur]
                    word.append(s)
                    cur = prev
                return tuple(reversed(word)), dst
            seen.add(dst)
            queue.append(dst)
    return None


def bfs_cycle(
    labeled_adj: list[list[tuple[int, int]]], node: int, allowed: set[int]
) -> Optional[Word]:
    """Shortest nonempty word labelling a cycle through ``node`` that stays
    inside ``allowed``."""
    best: Optional[tuple[Word, int]] = None
    for sym, dst in labeled_adj[node]:
        if dst not in allowed:
            continue
        if dst == node:
            return (sym,)
        rest = bfs_word(labeled_adj, dst, {node}, allowed)
        if rest is None:
            continue
        cand = (sym,) + rest[0]
        if best is None or len(cand) < len(best[0]):
            best = (cand, dst)
    return best[0] if best else None
