import random

import pytest

from omegalearn import (
    BuchiAcceptor,
    Teacher,
    UPWord,
    acceptor_of_tree,
    complete,
    dbw_difference_witness,
    dbw_intersection_witness,
    derived_tree_acceptor,
    fin_subset_witness,
    mq_lasso,
    nbw_subset_witness,
    tree_of_upword,
)

import oracles
from conftest import (
    ABC,
    demo_hyp_broad,
    demo_hyp_narrow,
    demo_target,
    demo_tree_broadly_accepted,
    demo_tree_in_target,
    pair_m1,
    pair_m2,
    random_complete_dfw,
    random_dbw,
    random_fin,
    random_nbw,
)


def up(u_text, v_text):
    return UPWord(ABC.word(u_text), ABC.word(v_text))


class TestWordMq:
    def test_documented_answers(self):
        t = Teacher(demo_target())
        assert t.word_mq(up("b c", "b a")) is True
        assert t.word_mq(up("a", "b")) is False
        assert t.word_mq(up("", "c")) is False
        assert t.query_log.count("mq") == 3

    def test_alphabet_guard(self):
        t = Teacher(demo_target())
        with pytest.raises(ValueError):
            t.word_mq(UPWord((), (5,)))


class TestDifferenceWitness:
    def test_target_not_contained_in_narrow(self):
        w = dbw_difference_witness(demo_target(), complete(demo_hyp_narrow()))
        assert w is not None
        assert mq_lasso(demo_target(), w)
        assert not mq_lasso(complete(demo_hyp_narrow()), w)

    def test_equal_acceptors_have_no_witness(self):
        assert dbw_difference_witness(demo_target(), demo_target()) is None

    def test_broad_not_contained_in_target(self):
        w = dbw_difference_witness(complete(demo_hyp_broad()), demo_target())
        assert w is not None
        assert mq_lasso(complete(demo_hyp_broad()), w)
        assert not mq_lasso(demo_target(), w)

    def test_requires_deterministic_complete(self):
        with pytest.raises(ValueError):
            dbw_difference_witness(demo_hyp_broad(), demo_target())


class TestWordEq:
    def test_equal(self):
        t = Teacher(demo_target())
        assert t.word_eq(demo_target()).equal

    def test_negative_witness_for_broad(self):
        t = Teacher(demo_target())
        answer = t.word_eq(demo_hyp_broad())
        assert not answer.equal and answer.polarity == "negative"
        assert mq_lasso(complete(demo_hyp_broad()), answer.witness)
        assert not mq_lasso(t.target, answer.witness)

    def test_positive_witness_for_narrow(self):
        t = Teacher(demo_target())
        answer = t.word_eq(demo_hyp_narrow())
        assert not answer.equal and answer.polarity == "positive"
        assert mq_lasso(t.target, answer.witness)
        assert not mq_lasso(complete(demo_hyp_narrow()), answer.witness)

    def test_pos_first_order_flips_polarity(self):
        # hypothesis: all words starting with c; incomparable with the
        # target language, so both difference directions are nonempty
        starts_with_c = BuchiAcceptor(
            ABC,
            3,
            0,
            frozenset({1}),
            (
                (0, 0, 2), (0, 1, 2), (0, 2, 1),
                (1, 0, 1), (1, 1, 1), (1, 2, 1),
                (2, 0, 2), (2, 1, 2), (2, 2, 2),
            ),
        )
        assert Teacher(demo_target()).word_eq(starts_with_c).polarity == "negative"
        flipped = Teacher(demo_target(), eq_order="pos-first")
        assert flipped.word_eq(starts_with_c).polarity == "positive"


class TestRsqAndUsq:
    def test_tree_paths_not_contained(self):
        t = Teacher(demo_target())
        paths = acceptor_of_tree(demo_tree_broadly_accepted())
        assert t.rsq(paths) is False

    def test_empty_language_contained(self):
        t = Teacher(demo_target())
        empty = BuchiAcceptor(ABC, 1, 0, frozenset(), ())
        assert t.rsq(empty) is True

    def test_reflexive_containment(self):
        t = Teacher(demo_target())
        assert t.rsq(t.target) is True

    def test_usq_on_documented_pair(self):
        t = Teacher(complete(pair_m1()))
        contained, witness = t.usq(pair_m2())
        assert not contained
        assert oracles.nbw_accepts_upword(pair_m2(), witness)
        assert not mq_lasso(t.target, witness)

    def test_usq_yes_on_target(self):
        t = Teacher(demo_target())
        contained, witness = t.usq(t.target)
        assert contained and witness is None

    def test_usq_witness_always_verifies(self):
        rng = random.Random(17)
        for _ in range(60):
            target = Teacher(random_dbw(rng, rng.randint(1, 4), 3))
            n = random_nbw(rng, rng.randint(1, 4), 3)
            contained, witness = target.usq(n)
            if contained:
                assert witness is None
            else:
                assert oracles.nbw_accepts_upword(n, witness)
                assert not mq_lasso(target.target, witness)

    def test_rsq_agrees_with_brute_force(self):
        rng = random.Random(29)
        for _ in range(80):
            target = Teacher(random_dbw(rng, rng.randint(1, 4), 2))
            n = random_nbw(rng, rng.randint(1, 4), 2)
            expected_violation = oracles.brute_subset_violation(n, target.target)
            assert target.rsq(n) == (not expected_violation)


class TestTreeQueries:
    def test_tree_in_target(self):
        t = Teacher(demo_target())
        assert t.tree_mq(demo_tree_in_target()) is True

    def test_tree_with_bad_path(self):
        t = Teacher(demo_target())
        assert t.tree_mq(demo_tree_broadly_accepted()) is False

    def test_uniform_tree_equals_word_query(self):
        t = Teacher(demo_target())
        w = up("b c", "b a")
        assert t.tree_mq(tree_of_upword(ABC, w, 2)) == t.word_mq(w)

    def test_arity_mismatch_rejected(self):
        t = Teacher(demo_target(), arity=2)
        with pytest.raises(ValueError):
            t.tree_mq(tree_of_upword(ABC, up("", "a"), 3))

    def test_tree_eq_equal(self):
        t = Teacher(demo_target())
        assert t.tree_eq(derived_tree_acceptor(demo_target(), 2)).equal

    def test_tree_eq_negative_counterexample(self):
        t = Teacher(demo_target())
        hyp = derived_tree_acceptor(complete(demo_hyp_broad()), 2)
        answer = t.tree_eq(hyp)
        assert not answer.equal and answer.polarity == "negative"
        # the returned tree is accepted branchwise by the hypothesis but
        # has a path outside the target
        assert t.tree_mq(answer.witness) is False
        paths = acceptor_of_tree(answer.witness)
        assert nbw_subset_witness(paths, hyp.base) is None

    def test_mixed_strategy_grafts_second_path(self):
        t = Teacher(demo_target(), strategy="mixed")
        hyp = derived_tree_acceptor(complete(demo_hyp_broad()), 2)
        answer = t.tree_eq(hyp)
        tree = answer.witness
        labels = {tree.path_word((1,) * 8), tree.path_word((2,) * 8)}
        assert len(labels) == 2

    def test_mixed_strategy_counterexample_still_valid(self):
        t = Teacher(demo_target(), strategy="mixed")
        hyp = derived_tree_acceptor(complete(demo_hyp_narrow()), 2)
        answer = t.tree_eq(hyp)
        assert answer.polarity == "positive"
        # positive: every path lies in the target, some path leaves the
        # hypothesis
        paths = acceptor_of_tree(answer.witness)
        assert nbw_subset_witness(paths, t.target) is None
        assert nbw_subset_witness(paths, hyp.base) is not None

    def test_tree_eq_matches_word_equality_on_randoms(self):
        rng = random.Random(41)
        for _ in range(40):
            teacher = Teacher(random_dbw(rng, rng.randint(1, 4), 2), arity=2)
            hyp = complete(random_dbw(rng, rng.randint(1, 4), 2))
            tree_answer = teacher.tree_eq(derived_tree_acceptor(hyp, 2))
            word_answer = teacher.word_eq(hyp)
            assert tree_answer.equal == word_answer.equal


class TestIntersectionWitness:
    def test_found_when_languages_overlap(self):
        w = dbw_intersection_witness(complete(demo_hyp_broad()), demo_target())
        assert w is not None
        assert mq_lasso(complete(demo_hyp_broad()), w)
        assert mq_lasso(demo_target(), w)

    def test_none_when_disjoint(self):
        none_acc = BuchiAcceptor(
            ABC, 1, 0, frozenset(), ((0, 0, 0), (0, 1, 0), (0, 2, 0))
        )
        assert dbw_intersection_witness(none_acc, demo_target()) is None

    def test_random_soundness(self):
        rng = random.Random(53)
        for _ in range(40):
            m1 = random_dbw(rng, rng.randint(1, 4), 2)
            m2 = random_dbw(rng, rng.randint(1, 4), 2)
            w = dbw_intersection_witness(m1, m2)
            if w is not None:
                assert mq_lasso(m1, w) and mq_lasso(m2, w)


class TestFinSubsetWitness:
    def test_documented_difference(self):
        # words of pair_m2 not accepted by pair_m1, finite-word reading
        m2 = pair_m2()
        m1_fin_complete = _fin_completion(pair_m1())
        w = fin_subset_witness(_as_fin(m2), m1_fin_complete)
        assert w is not None
        assert _as_fin(m2).accepts(w)
        assert not m1_fin_complete.accepts(w)

    def test_shortest_by_construction(self):
        rng = random.Random(61)
        for _ in range(50):
            m = random_fin(rng, rng.randint(1, 4), 2, deterministic=False)
            t = random_complete_dfw(rng, rng.randint(1, 4), 2)
            w = fin_subset_witness(m, t)
            expected = oracles.brute_shortest_fin_counterexample(m, t, 10)
            if expected is None:
                assert w is None
            else:
                assert w is not None and len(w) == len(expected)


def _as_fin(b: BuchiAcceptor):
    from omegalearn import FinAcceptor

    return FinAcceptor(b.alphabet, b.n_states, b.initial, b.accepting, b.transitions)


def _fin_completion(b: BuchiAcceptor):
    from omegalearn import FinAcceptor

    c = complete(b)
    return FinAcceptor(c.alphabet, c.n_states, c.initial, c.accepting, c.transitions)


class TestQueryLog:
    def test_counts_and_trace_lines(self):
        t = Teacher(demo_target(), keep_trace=True)
        t.word_mq(up("", "a"))
        t.word_eq(demo_hyp_broad())
        t.tree_mq(demo_tree_in_target())
        assert t.query_log.count("mq") == 1
        assert t.query_log.count("eq") == 1
        assert t.query_log.count("tmq") == 1
        assert t.query_log.lines[0] == "MQ ; a -> yes"
        assert t.query_log.lines[1] == "EQ -> no negative"
        assert t.query_log.lines[2].startswith("TMQ ")

    def test_trace_disabled_by_default(self):
        t = Teacher(demo_target())
        t.word_mq(up("", "a"))
        assert t.query_log.lines == []
