"""Shared fixture automata and random generators.

The demo_* family is a hand-built set of small automata over {a,b,c}
(a 3-state target, two candidate hypotheses and two regular trees) whose
interesting memberships and products are known exactly; the pair_*
acceptors are two 3-state chains whose containment fails in documented
ways.  Both are used across the suite as ground truth.
"""

from __future__ import annotations

import random

import pytest

from omegalearn import Alphabet, BuchiAcceptor, FinAcceptor, TreeAutomaton

ABC = Alphabet(("a", "b", "c"))
A, B, C = 0, 1, 2


def demo_target() -> BuchiAcceptor:
    """Complete 3-state DBW over {a,b,c}; accepting state 0.

    State 0 loops on a, b moves 0->1, c falls into the rejecting sink 2;
    from 1, b loops and a or c return to 0.
    """
    transitions = (
        (0, A, 0), (0, B, 1), (0, C, 2),
        (1, A, 0), (1, B, 1), (1, C, 0),
        (2, A, 2), (2, B, 2), (2, C, 2),
    )
    return BuchiAcceptor(ABC, 3, 0, frozenset({0}), transitions)


def demo_hyp_broad() -> BuchiAcceptor:
    """Incomplete 2-state DBW for (a+b)(a+b+c)^omega; incomparable with
    the demo target's language."""
    transitions = (
        (0, A, 1), (0, B, 1),
        (1, A, 1), (1, B, 1), (1, C, 1),
    )
    return BuchiAcceptor(ABC, 2, 0, frozenset({1}), transitions)


def demo_hyp_narrow() -> BuchiAcceptor:
    """Complete 3-state DBW for (a+ba)^omega, a proper subset of the demo
    target's language."""
    transitions = (
        (0, A, 0), (0, B, 1), (0, C, 2),
        (1, A, 0), (1, B, 2), (1, C, 2),
        (2, A, 2), (2, B, 2), (2, C, 2),
    )
    return BuchiAcceptor(ABC, 3, 0, frozenset({0}), transitions)


def demo_tree_broadly_accepted() -> TreeAutomaton:
    """Binary tree accepted branchwise by demo_hyp_broad but with the path
    ab^omega outside the demo target."""
    # state 0: dir1 writes a into state 1, dir2 writes b into state 1
    # state 1: dir1 writes a back to 0, dir2 writes b and stays
    nxt = ((1, 1), (0, 1))
    lab = ((A, B), (A, B))
    return TreeAutomaton(ABC, 2, 2, 0, nxt, lab)


def demo_tree_in_target() -> TreeAutomaton:
    """Binary tree all of whose paths the demo target accepts, but with
    paths (such as bc(ba)^omega) outside demo_hyp_narrow."""
    nxt = ((1, 2), (2, 2), (0, 0))
    lab = ((A, B), (B, B), (A, C))
    return TreeAutomaton(ABC, 2, 3, 0, nxt, lab)


def pair_m1() -> BuchiAcceptor:
    """Incomplete DBW for a*b((a+c)(b+c))^omega."""
    transitions = (
        (0, A, 0), (0, B, 1),
        (1, A, 2), (1, C, 2),
        (2, B, 1), (2, C, 1),
    )
    return BuchiAcceptor(ABC, 3, 0, frozenset({1}), transitions)


def pair_m2() -> BuchiAcceptor:
    """Incomplete DBW for (a+c)*b((a+c)a*b)^omega; not contained in
    pair_m1's language (witnesses include cb(ab)^omega and b(aab)^omega)."""
    transitions = (
        (0, A, 0), (0, C, 0), (0, B, 1),
        (1, A, 2), (1, C, 2),
        (2, B, 1), (2, A, 2),
    )
    return BuchiAcceptor(ABC, 3, 0, frozenset({1}), transitions)


def random_dbw(rng: random.Random, n_states: int, n_symbols: int) -> BuchiAcceptor:
    """Random complete DBW with a random accepting set."""
    alphabet = Alphabet(tuple("abcdefgh"[:n_symbols]))
    transitions = tuple(
        (q, sym, rng.randrange(n_states))
        for q in range(n_states)
        for sym in range(n_symbols)
    )
    accepting = frozenset(q for q in range(n_states) if rng.random() < 0.5)
    return BuchiAcceptor(alphabet, n_states, 0, accepting, transitions)


def random_nbw(rng: random.Random, n_states: int, n_symbols: int) -> BuchiAcceptor:
    """Random NBW where every (state, symbol) has 0..2 successors."""
    alphabet = Alphabet(tuple("abcdefgh"[:n_symbols]))
    transitions = []
    for q in range(n_states):
        for sym in range(n_symbols):
            for dst in rng.sample(range(n_states), rng.randint(0, min(2, n_states))):
                transitions.append((q, sym, dst))
    accepting = frozenset(q for q in range(n_states) if rng.random() < 0.5)
    return BuchiAcceptor(alphabet, n_states, 0, accepting, tuple(transitions))


def random_fin(rng: random.Random, n_states: int, n_symbols: int, deterministic: bool) -> FinAcceptor:
    alphabet = Alphabet(tuple("abcdefgh"[:n_symbols]))
    transitions = []
    for q in range(n_states):
        for sym in range(n_symbols):
            if deterministic:
                if rng.random() < 0.9:
                    transitions.append((q, sym, rng.randrange(n_states)))
            else:
                for dst in rng.sample(range(n_states), rng.randint(0, min(2, n_states))):
                    transitions.append((q, sym, dst))
    accepting = frozenset(q for q in range(n_states) if rng.random() < 0.5)
    return FinAcceptor(alphabet, n_states, 0, accepting, tuple(transitions))


def random_complete_dfw(rng: random.Random, n_states: int, n_symbols: int) -> FinAcceptor:
    alphabet = Alphabet(tuple("abcdefgh"[:n_symbols]))
    transitions = tuple(
        (q, sym, rng.randrange(n_states))
        for q in range(n_states)
        for sym in range(n_symbols)
    )
    accepting = frozenset(q for q in range(n_states) if rng.random() < 0.5)
    return FinAcceptor(alphabet, n_states, 0, accepting, transitions)


def random_safety(rng: random.Random, n_states: int, n_symbols: int) -> BuchiAcceptor:
    """Random all-accepting NBW (safety shape), possibly with dead parts."""
    alphabet = Alphabet(tuple("abcdefgh"[:n_symbols]))
    transitions = []
    for q in range(n_states):
        for sym in range(n_symbols):
            for dst in rng.sample(range(n_states), rng.randint(0, min(2, n_states))):
                transitions.append((q, sym, dst))
    return BuchiAcceptor(
        alphabet, n_states, 0, frozenset(range(n_states)), tuple(transitions)
    )


@pytest.fixture
def abc() -> Alphabet:
    return ABC
