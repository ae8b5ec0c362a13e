import random

import pytest

from omegalearn import (
    BuchiAcceptor,
    FinAcceptor,
    UPWord,
    access_language,
    acceptor_of_tree,
    complete,
    concat_special,
    derived_tree_acceptor,
    determinize_safety,
    hard_safety_family,
    loop_language,
    mq_lasso,
    omega_empty,
    omega_repeat,
    restrict,
    single_accepting,
    tree_of_safety,
    tree_of_upword,
    trim_safety,
    upword_acceptor,
    word_acceptor,
)
from omegalearn.automata import Alphabet

import oracles
from conftest import (
    ABC,
    demo_hyp_broad,
    demo_target,
    demo_tree_broadly_accepted,
    pair_m2,
    random_dbw,
    random_fin,
    random_safety,
)


def up(u_text, v_text):
    return UPWord(ABC.word(u_text), ABC.word(v_text))


class TestDerivedTreeAcceptor:
    def test_wraps_deterministic_complete(self):
        d = derived_tree_acceptor(demo_target(), 2)
        assert d.arity == 2 and d.base == demo_target()

    def test_rejects_nondeterministic(self):
        n = BuchiAcceptor(ABC, 2, 0, frozenset({1}), ((0, 0, 0), (0, 0, 1)))
        with pytest.raises(ValueError):
            derived_tree_acceptor(n, 2)

    def test_rejects_incomplete(self):
        with pytest.raises(ValueError):
            derived_tree_acceptor(demo_hyp_broad(), 2)


class TestAcceptorOfTree:
    def test_documented_two_state_tree(self):
        paths = acceptor_of_tree(demo_tree_broadly_accepted())
        assert paths.n_states == 2
        assert paths.all_accepting
        assert set(paths.transitions) == {(0, 0, 1), (0, 1, 1), (1, 0, 0), (1, 1, 1)}
        assert paths.out_degree <= 2

    def test_unary_all_b_tree(self):
        tree = tree_of_upword(ABC, up("", "b"), 1)
        paths = acceptor_of_tree(tree)
        assert paths.n_states == 1
        assert oracles.nbw_accepts_upword(paths, up("", "b"))
        assert not oracles.nbw_accepts_upword(paths, up("", "a"))

    def test_round_trip_through_upword_tree(self):
        word = up("a", "b")
        paths = acceptor_of_tree(tree_of_upword(ABC, word, 2))
        direct = upword_acceptor(ABC, word)
        for w in oracles.bounded_lassos(3, 4, 4):
            assert oracles.nbw_accepts_upword(paths, w) == oracles.nbw_accepts_upword(direct, w)


class TestTreeOfSafety:
    def test_single_word_chain_duplicated_across_directions(self):
        tree = tree_of_safety(upword_acceptor(ABC, up("a", "b")), 2)
        assert tree.path_word((1, 2, 1, 2)) == ABC.word("a b b b")

    def test_family_member_round_trip(self):
        family = hard_safety_family(2)
        tree = tree_of_safety(family, 3)
        paths = acceptor_of_tree(tree)
        for w in oracles.bounded_lassos(3, 4, 5):
            assert oracles.nbw_accepts_upword(paths, w) == oracles.nbw_accepts_upword(family, w)

    def test_round_trip_equals_trim(self):
        rng = random.Random(23)
        done = 0
        while done < 20:
            n = random_safety(rng, rng.randint(1, 4), 2)
            if omega_empty(n):
                continue
            done += 1
            arity = max(n.out_degree, 1)
            paths = acceptor_of_tree(tree_of_safety(n, arity))
            trimmed = trim_safety(n)
            for w in oracles.bounded_lassos(2, 5, 5):
                assert oracles.nbw_accepts_upword(paths, w) == oracles.nbw_accepts_upword(trimmed, w)

    def test_empty_language_rejected(self):
        empty = BuchiAcceptor(ABC, 1, 0, frozenset({0}), ())
        with pytest.raises(ValueError, match="empty"):
            tree_of_safety(empty, 2)

    def test_arity_too_small_rejected(self):
        with pytest.raises(ValueError, match="arity"):
            tree_of_safety(hard_safety_family(1), 2)


class TestTreeOfUpword:
    def test_single_loop_state(self):
        tree = tree_of_upword(ABC, up("", "a"), 2)
        assert tree.n_states == 1
        assert tree.path_word((1, 2, 1)) == ABC.word("a a a")

    def test_size_bound(self):
        w = up("b c", "b a")
        tree = tree_of_upword(ABC, w, 3)
        assert tree.n_states <= len(w.u) + len(w.v)
        assert mq_lasso(demo_target(), w)

    def test_paths_follow_word(self):
        tree = tree_of_upword(ABC, up("a", "b"), 2)
        assert tree.path_word((2, 1, 2)) == ABC.word("a b b")


class TestStateAnchoredLanguages:
    def test_access_words_of_documented_chain(self):
        m2 = pair_m2()
        acc = access_language(m2, 1)
        assert oracles.fin_language(acc, 3) == {
            ABC.word("b"),
            ABC.word("a b"),
            ABC.word("c b"),
            ABC.word("a a b"),
            ABC.word("a c b"),
            ABC.word("c a b"),
            ABC.word("c c b"),
            ABC.word("b a b"),
            ABC.word("b c b"),
        }

    def test_loop_words_of_documented_chain(self):
        m2 = pair_m2()
        loop = loop_language(m2, 1)
        assert oracles.fin_language(loop, 3) == {
            ABC.word("a b"),
            ABC.word("c b"),
            ABC.word("a a b"),
            ABC.word("c a b"),
        }

    def test_initial_state_without_cycle(self):
        chain = word_acceptor(ABC, ABC.word("a"))
        acc = access_language(chain, 0)
        loop = loop_language(chain, 0)
        assert oracles.fin_language(acc, 3) == {()}
        assert oracles.fin_language(loop, 3) == set()


class TestRestrict:
    M2_RESTRICTIONS = [
        (1, {(1,)}),
        (2, {(0, 1), (2, 1)}),
        (3, {(0, 0, 1), (0, 2, 1), (2, 0, 1), (2, 2, 1), (1, 0, 1), (1, 2, 1)}),
    ]

    @pytest.mark.parametrize("length,expected", M2_RESTRICTIONS)
    def test_documented_access_restrictions(self, length, expected):
        acc = access_language(pair_m2(), 1)
        got = oracles.fin_language(restrict(acc, length), length)
        assert got == expected

    def test_documented_loop_restrictions(self):
        loop = loop_language(pair_m2(), 1)
        assert oracles.fin_language(restrict(loop, 1), 1) == set()
        assert oracles.fin_language(restrict(loop, 2), 2) == {(0, 1), (2, 1)}
        assert oracles.fin_language(restrict(loop, 3), 3) == {(0, 0, 1), (2, 0, 1)}

    def test_prefix_shorter_than_length_required(self):
        acc = access_language(pair_m2(), 1)
        out = restrict(acc, 1, ABC.word("a b"))
        assert out.n_states == 1 and not out.accepting

    def test_exhaustive_semantics(self):
        rng = random.Random(5)
        for _ in range(25):
            m = random_fin(rng, rng.randint(1, 4), 2, deterministic=rng.random() < 0.5)
            length = rng.randint(0, 5)
            prefix = tuple(rng.randrange(2) for _ in range(rng.randint(0, length)))
            out = restrict(m, length, prefix)
            assert out.special_form
            expected = {
                w
                for w in oracles.words_up_to(2, 6)
                if len(w) == length and w[: len(prefix)] == prefix and m.accepts(w)
            }
            assert oracles.fin_language(out, 6) == expected


class TestConcatAndOmega:
    def test_concat_empty_left(self):
        empty = FinAcceptor(ABC, 1, 0, frozenset(), ())
        out = concat_special(empty, word_acceptor(ABC, ABC.word("a")))
        assert oracles.fin_language(out, 4) == set()

    def test_concat_epsilon_left(self):
        eps = FinAcceptor(ABC, 1, 0, frozenset({0}), ())
        right = word_acceptor(ABC, ABC.word("a b"))
        assert concat_special(eps, right) == right

    def test_concat_word_with_omega(self):
        left = word_acceptor(ABC, ABC.word("b"))
        cycle = omega_repeat(word_acceptor(ABC, ABC.word("a b")))
        out = concat_special(left, cycle)
        direct = upword_acceptor(ABC, up("b", "a b"))
        for w in oracles.bounded_lassos(3, 4, 4):
            assert oracles.nbw_accepts_upword(out, w) == oracles.nbw_accepts_upword(direct, w)

    def test_omega_of_single_word(self):
        out = omega_repeat(word_acceptor(ABC, ABC.word("a b")))
        direct = upword_acceptor(ABC, up("", "a b"))
        for w in oracles.bounded_lassos(3, 3, 4):
            assert oracles.nbw_accepts_upword(out, w) == oracles.nbw_accepts_upword(direct, w)

    def test_omega_degenerate_cases(self):
        no_accept = FinAcceptor(ABC, 2, 0, frozenset(), ((0, 0, 1),))
        assert omega_empty(omega_repeat(no_accept))
        eps_only = FinAcceptor(ABC, 1, 0, frozenset({0}), ())
        assert omega_empty(omega_repeat(eps_only))

    def test_size_bounds(self):
        left = restrict(access_language(pair_m2(), 1), 2)
        cycle = omega_repeat(restrict(loop_language(pair_m2(), 1), 2))
        out = concat_special(left, cycle)
        assert out.n_states <= left.n_states + cycle.n_states
        assert out.out_degree <= max(left.out_degree, cycle.out_degree)


class TestSingleAccepting:
    def test_requires_accepting_state(self):
        with pytest.raises(ValueError):
            single_accepting(demo_target(), 2)

    def test_idempotent(self):
        m = trim_safety(acceptor_of_tree(demo_tree_broadly_accepted()))
        once = single_accepting(m, 1)
        assert single_accepting(once, 1) == once

    def test_union_over_accepting_states(self):
        rng = random.Random(9)
        for _ in range(20):
            m = random_dbw(rng, rng.randint(1, 4), 2)
            parts = [single_accepting(m, q) for q in sorted(m.accepting)]
            for w in oracles.bounded_lassos(2, 4, 4):
                whole = mq_lasso(m, w)
                split = any(mq_lasso(p, w) for p in parts)
                assert whole == split


class TestHardSafetyFamily:
    def test_shape(self):
        for n in (1, 2, 5):
            family = hard_safety_family(n)
            assert family.n_states == n + 2
            assert family.out_degree == 3
            assert family.all_accepting

    def test_membership_probes(self):
        f1 = hard_safety_family(1)
        assert oracles.nbw_accepts_upword(f1, up("", "b"))
        assert not oracles.nbw_accepts_upword(f1, up("", "c"))
        f2 = hard_safety_family(2)
        assert oracles.nbw_accepts_upword(f2, up("", "a a b c"))
        assert not oracles.nbw_accepts_upword(f2, up("", "a b c"))


class TestDeterminizeSafety:
    def test_deterministic_input_is_isomorphic(self):
        direct = upword_acceptor(ABC, up("a", "b"))
        out = determinize_safety(direct)
        assert out.n_states == direct.n_states

    def test_blowup_lower_bound(self):
        out = determinize_safety(hard_safety_family(3))
        assert out.n_states >= 2**3

    def test_language_preserved(self):
        rng = random.Random(31)
        for _ in range(15):
            n = random_safety(rng, rng.randint(1, 4), 2)
            out = determinize_safety(n)
            assert out.deterministic and out.all_accepting
            for w in oracles.bounded_lassos(2, 5, 5):
                assert oracles.nbw_accepts_upword(out, w) == oracles.nbw_accepts_upword(n, w)
