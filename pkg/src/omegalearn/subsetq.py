"""Reduction of counterexample-producing subset queries to plain ones.

``usq_finite`` handles finite-word acceptors: it first pins down the
shortest counterexample length by probing length restrictions, then
extends the prefix symbol by symbol.  ``usq_omega`` handles Buchi
acceptors: it locates an accepting state q that witnesses the violation
and then searches for a period looping on q and a prefix reaching q.

The period/prefix searches are written as generators that yield one probe
acceptor per oracle question and receive the boolean answer via
``send``; this lets a caller either drive one search to completion
(``run_search``) or dovetail several searches fairly.  A yielded ``None``
marks a probe whose language is empty, answered locally without
consulting the oracle.

All omega probes have the safety shape P·(S)^omega with P and S
fixed-length word sets, are marked all-accepting, keep the out-degree of
the input acceptor, and stay deterministic when the input is.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Generator, Optional

from .automata import (
    BuchiAcceptor,
    BudgetExhaustedError,
    FinAcceptor,
    ProtocolError,
    UPWord,
    Word,
    fin_empty,
)
from .constructions import (
    access_language,
    concat_special,
    loop_language,
    omega_repeat,
    restrict,
    single_accepting,
    word_acceptor,
)


class SearchBudget:
    """Cap on oracle calls per top-level operation; exhaustion raises a
    distinguishable error instead of looping forever."""

    def __init__(self, max_queries: int = 10**6):
        if max_queries < 1:
            raise ValueError("budget must allow at least one query")
        self.max_queries = max_queries
        self.spent = 0

    def spend(self) -> None:
        self.spent += 1
        if self.spent > self.max_queries:
            raise BudgetExhaustedError(
                f"oracle budget of {self.max_queries} queries exhausted"
            )


class RsqOracle:
    """Counting wrapper around a subset-query callback."""

    def __init__(self, fn: Callable):
        self.fn = fn
        self.queries = 0

    def __call__(self, probe) -> bool:
        self.queries += 1
        return bool(self.fn(probe))


@dataclass
class SearchStats:
    """Telemetry for the length parameters discovered by the searches."""

    prefix_k: list[int] = field(default_factory=list)
    nextword: list[tuple[int, int]] = field(default_factory=list)
    nextsymbol: list[tuple[int, int]] = field(default_factory=list)
    period_k: list[int] = field(default_factory=list)
    period_rounds: int = 0


Probe = Optional[BuchiAcceptor]
Search = Generator[Probe, bool, object]


def _as_safety(n: BuchiAcceptor) -> BuchiAcceptor:
    return BuchiAcceptor(
        n.alphabet, n.n_states, n.initial, frozenset(range(n.n_states)), n.transitions
    )


def _constrained_reach(m, sources: set[int], prefix: Word, length: int) -> set[int]:
    """States reachable in exactly ``length`` steps along words that start
    with ``prefix``."""
    cur = set(sources)
    for i in range(length):
        syms = (prefix[i],) if i < len(prefix) else range(len(m.alphabet))
        cur = {dst for q in cur for sym in syms for dst in m.successors(q, sym)}
        if not cur:
            return cur
    return cur


def _probe_step(m: BuchiAcceptor, q: int, k: int, prefix: Word, segments) -> Probe:
    """Build the probe for access[k, prefix]·(segments)^omega, or None when
    its language is structurally empty (answered 'yes' locally)."""
    if len(prefix) > k:
        return None
    if q not in _constrained_reach(m, {m.initial}, prefix, k):
        return None
    for seg in segments:
        if seg[0] == "loop":
            _tag, ell, vp = seg
            if ell < 1 or len(vp) > ell:
                return None
            if q not in _constrained_reach(m, {q}, vp, ell):
                return None
    return _probe_acceptor(m, q, k, prefix, segments)


def _probe_acceptor(m: BuchiAcceptor, q: int, k: int, prefix: Word, segments) -> BuchiAcceptor:
    head = restrict(access_language(m, q), k, prefix)
    body: Optional[FinAcceptor] = None
    for seg in segments:
        if seg[0] == "word":
            part = word_acceptor(m.alphabet, seg[1])
        else:
            _tag, ell, vp = seg
            part = restrict(loop_language(m, q), ell, vp)
        body = part if body is None else concat_special(body, part)
    assert body is not None
    probe = _as_safety(concat_special(head, omega_repeat(body)))
    assert probe.out_degree <= max(m.out_degree, 1)
    assert not m.deterministic or probe.deterministic
    return probe


def find_prefix_steps(
    m: BuchiAcceptor, q: int, v: Word, stats: Optional[SearchStats] = None
) -> Search:
    """Find u reaching q such that u(v)^omega is outside the oracle's
    language: first the least feasible length k, then u symbol by symbol."""
    k = 0
    while True:
        answer = yield _probe_step(m, q, k, (), (("word", v),))
        if not answer:
            break
        k += 1
    if stats is not None:
        stats.prefix_k.append(k)
    u: Word = ()
    n_syms = len(m.alphabet)
    while len(u) < k:
        for sym in range(n_syms):
            answer = yield _probe_step(m, q, k, u + (sym,), (("word", v),))
            if not answer:
                u = u + (sym,)
                break
        else:
            raise ProtocolError(
                "subset oracle inconsistent: no symbol extends the counterexample prefix"
            )
    return u


def _pairs_with_max(mx: int, min_second: int = 0) -> list[tuple[int, int]]:
    firsts = [(k, mx) for k in range(mx) if mx >= min_second]
    seconds = [(mx, s) for s in range(min_second, mx + 1)]
    return firsts + seconds


def next_symbol_steps(
    m: BuchiAcceptor,
    q: int,
    y: Word,
    ell: int,
    vprime: Word,
    stats: Optional[SearchStats] = None,
) -> Search:
    """Find a symbol extending the period prefix vprime: search lengths
    (k, m') by increasing maximum, k ascending, symbols in alphabet order."""
    n_syms = len(m.alphabet)
    for mx in itertools.count(1):
        for k, mm in _pairs_with_max(mx, min_second=1):
            for sym in range(n_syms):
                answer = yield _probe_step(
                    m,
                    q,
                    k,
                    (),
                    (("word", y), ("loop", ell, vprime + (sym,)), ("loop", mm, ())),
                )
                if not answer:
                    if stats is not None:
                        stats.nextsymbol.append((k, mm))
                    return sym


def next_word_steps(
    m: BuchiAcceptor, q: int, y: Word, stats: Optional[SearchStats] = None
) -> Search:
    """Find the next loop word to append to y: search (k, ell) diagonally,
    then build the word of length ell symbol by symbol."""
    found = None
    for mx in itertools.count(0):
        for k, ell in _pairs_with_max(mx):
            answer = yield _probe_step(
                m, q, k, (), (("word", y), ("loop", ell, ()))
            )
            if not answer:
                found = (k, ell)
                break
        if found is not None:
            break
    k, ell = found
    if stats is not None:
        stats.nextword.append((k, ell))
    v: Word = ()
    while len(v) < ell:
        sym = yield from next_symbol_steps(m, q, y, ell, v, stats)
        v = v + (sym,)
    return v


def find_period_steps(
    m: BuchiAcceptor, q: int, stats: Optional[SearchStats] = None
) -> Search:
    """Find a period v looping on q such that some access prefix followed
    by (v)^omega leaves the oracle's language.

    Round n appends one word from next_word_steps and then probes every
    contiguous block v_i..v_j with every access length k up to n·|m|.
    """
    words: list[Word] = []
    y: Word = ()
    n = 0
    while True:
        n += 1
        v_n = yield from next_word_steps(m, q, y, stats)
        words.append(v_n)
        y = y + v_n
        if stats is not None:
            stats.period_rounds = n
        for i in range(n):
            for j in range(i, n):
                candidate = sum(words[i : j + 1], ())
                for k in range(0, n * m.n_states + 1):
                    answer = yield _probe_step(m, q, k, (), (("word", candidate),))
                    if not answer:
                        if stats is not None:
                            stats.period_k.append(k)
                        return candidate


def find_counterexample_steps(
    m: BuchiAcceptor, q: int, stats: Optional[SearchStats] = None
) -> Search:
    """Period first, then prefix: yields probes until it can return a pair
    (u, v) with u reaching q, v looping on q and u(v)^omega outside the
    oracle's language.  May never finish if no counterexample loops on q;
    callers dovetail or pre-validate."""
    v = yield from find_period_steps(m, q, stats)
    u = yield from find_prefix_steps(m, q, v, stats)
    return UPWord(u, v)


def run_search(gen: Search, oracle: Callable, budget: SearchBudget):
    """Drive a probe generator to completion against an oracle; empty
    probes are answered locally and do not touch the budget."""
    try:
        probe = next(gen)
        while True:
            if probe is None:
                answer = True
            else:
                budget.spend()
                answer = oracle(probe)
            probe = gen.send(answer)
    except StopIteration as stop:
        return stop.value


def usq_finite(
    m: FinAcceptor,
    oracle: Callable,
    budget: Optional[SearchBudget] = None,
    stats: Optional[SearchStats] = None,
) -> tuple[bool, Optional[Word]]:
    """Answer the unrestricted subset query for a finite-word acceptor,
    returning a shortest counterexample when containment fails."""
    budget = budget or SearchBudget()
    if fin_empty(m):
        return True, None
    budget.spend()
    if oracle(m):
        return True, None
    length = 0
    empty_streak = 0
    while True:
        probe = restrict(m, length)
        if fin_empty(probe):
            empty_streak += 1
            if empty_streak > m.n_states:
                raise ProtocolError(
                    "subset oracle inconsistent: counterexample lengths exhausted"
                )
        else:
            empty_streak = 0
            budget.spend()
            if not oracle(probe):
                break
        length += 1
    if stats is not None:
        stats.prefix_k.append(length)
    u: Word = ()
    n_syms = len(m.alphabet)
    while len(u) < length:
        for sym in range(n_syms):
            probe = restrict(m, length, u + (sym,))
            if fin_empty(probe):
                continue
            budget.spend()
            if not oracle(probe):
                u = u + (sym,)
                break
        else:
            raise ProtocolError(
                "subset oracle inconsistent: no symbol extends the counterexample prefix"
            )
    return False, u


def usq_omega(
    m: BuchiAcceptor,
    oracle: Callable,
    budget: Optional[SearchBudget] = None,
    stats: Optional[SearchStats] = None,
) -> tuple[bool, Optional[UPWord]]:
    """Answer the unrestricted subset query for a Buchi acceptor: probe the
    acceptor, then each single-accepting-state variant in ascending state
    order, and extract a counterexample through the first state that fails."""
    from .automata import omega_empty

    budget = budget or SearchBudget()
    if omega_empty(m):
        return True, None
    budget.spend()
    if oracle(m):
        return True, None
    for q in sorted(m.accepting):
        probe = single_accepting(m, q)
        if omega_empty(probe):
            continue
        budget.spend()
        if not oracle(probe):
            witness = run_search(find_counterexample_steps(m, q, stats), oracle, budget)
            return False, witness
    raise ProtocolError(
        "subset oracle inconsistent: no accepting state isolates a counterexample"
    )
