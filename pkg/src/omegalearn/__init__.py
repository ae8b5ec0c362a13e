"""Learning derived omega-tree languages through word-language learners.

The package provides word and tree automata with a text format, the
constructions connecting safety languages and regular trees, a teacher
answering membership/equivalence/subset queries for a secret
deterministic Buchi target, a reduction of counterexample-producing
subset queries to plain ones, and a driver that lets any word-language
learner learn the derived tree languages, with two learners included.
"""

from .automata import (
    Alphabet,
    BuchiAcceptor,
    BudgetExhaustedError,
    DerivedTreeAcceptor,
    FinAcceptor,
    ParseError,
    ProtocolError,
    TreeAutomaton,
    UPWord,
    canonical_upword,
    complete,
    fin_empty,
    mq_lasso,
    omega_empty,
    sccs,
    trim_safety,
)
from .constructions import (
    RestrictionSpec,
    access_language,
    acceptor_of_tree,
    concat_special,
    derived_tree_acceptor,
    determinize_safety,
    hard_safety_family,
    loop_language,
    omega_repeat,
    restrict,
    single_accepting,
    tree_of_safety,
    tree_of_upword,
    upword_acceptor,
    word_acceptor,
)
from .subsetq import RsqOracle, SearchBudget, SearchStats, usq_finite, usq_omega
from .teacher import (
    EqAnswer,
    QueryLog,
    Teacher,
    dbw_difference_witness,
    dbw_intersection_witness,
    fin_subset_witness,
    nbw_subset_witness,
)
from .treelearn import (
    DovetailPool,
    LearnResult,
    PathProductAcceptor,
    learn_trees,
    rsq_via_tree_mq,
    tree_acceptance,
)
from .wordlearn import (
    EnumerationLearner,
    ObservationTable,
    WeakTableLearner,
    WordLearner,
    enum_learner,
    is_weak,
    learn_words,
    weak_learner,
)

__all__ = [name for name in dir() if not name.startswith("_")]
