"""Exact-arithmetic workbench for stochastic automata and stochastic acceptors."""

from .acceptor import (
    GapEstimate,
    LanguageSample,
    StochasticAcceptor,
    accept_prob,
    determinize_zero,
    dfa_cutpoint_to_zero,
    distinguishability_classes,
    enumerate_language,
    in_language,
    is_deterministic_acceptor,
    isolation_gap,
    normalize_initial,
    padic,
    rescale_cutpoint,
    validate_acceptor,
)
from .automaton import (
    EMPTY,
    AutomatonError,
    ResultVector,
    StateDistribution,
    StochasticAutomaton,
    ValidationReport,
    WordPair,
    avc,
    bsc,
    direct_sum,
    dist_prob,
    eta,
    input_matrix,
    result_vector,
    symbol_matrix,
    validate,
    word_matrix,
)
from .hmatrix import (
    BudgetExceeded,
    CoverCertificate,
    HMatrix,
    automata_equivalent,
    build_h,
    covers,
    cross_equiv,
    dist_equiv,
    h_from_labels,
    h_image,
    k_equiv,
    s_equivalent,
    state_classes,
    states_equiv,
)
from .montecarlo import Estimate, SimConfig, estimate_accept, estimate_prob, sample_run
from .ratlin import FeasibilityProblem, RatMatrix, convex_membership, feasible_distribution, rank, rat
from .transform import (
    ClassificationReport,
    Partition,
    StateMapping,
    check_s_homomorphism,
    classify,
    is_determined,
    is_isomorphic,
    is_minimal,
    is_observable,
    is_output_determined,
    is_reduced,
    is_state_determined,
    is_strongly_reduced,
    mealy_factorization,
    minimize,
    moore_factorization,
    reduce,
    th4_check,
    to_moore,
)

__version__ = "0.1.0"
