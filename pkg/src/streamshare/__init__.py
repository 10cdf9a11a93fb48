"""Exact-arithmetic revenue sharing for streaming platforms.

The package divides subscription revenue among artists from a matrix of
stream counts.  It implements the two allocation schemes used in practice
(pro-rata and user-centric) plus a weighted family interpolating between
them, property checkers that probe any index for fairness defects with
concrete counterexamples, a cooperative-game view with two independent
stability oracles, and classic claims-rationing rules that reproduce both
standard schemes.  All computation is exact rational arithmetic.
"""
from .model import (
    Allocation,
    AllZeroMatrix,
    ArtistMismatch,
    DimensionMismatch,
    DuplicateIdentifier,
    EmptyUserColumn,
    FeeMismatch,
    IndexValues,
    InvalidPartition,
    ModelError,
    NonPositiveFee,
    OverlappingUsers,
    ParseError,
    StreamingProblem,
    UnknownArtist,
    UnknownUser,
    WouldBeEmpty,
    as_rational,
    decimal_display,
    merge_problems,
    new_problem,
    parse_problem,
    problem_from_dict,
    problem_to_dict,
    reorder_users,
    serialize_problem,
    split_problem,
)
from .indices import (
    BandedWeightParams,
    Index,
    NonPositiveWeight,
    WeightSystem,
    ZeroIndexSum,
    banded_index,
    banded_weight_system,
    equal_split_index,
    index_from_weights,
    padded_share_index,
    pro_rata_index,
    rewards,
    squared_streams_index,
    standard_indices,
    stream_share_index,
    table_weight_system,
    uniform_index,
    user_centric_index,
    weighted_index,
    PRO_RATA,
    USER_CENTRIC,
    UNIFORM,
    PADDED_SHARE,
    SQUARED_STREAMS,
    STREAM_SHARE,
    EQUAL_SPLIT,
    REFERENCE_INDICES,
)
from .game import (
    CoalitionalGame,
    CoreDecomposition,
    DirectCoreResult,
    DividendTable,
    FlowCoreResult,
    NotInCore,
    SupermodularityResult,
    TooManyPlayers,
    extract_decomposition,
    harsanyi_dividends,
    in_core_direct,
    in_core_flow,
    in_domain_pstar,
    is_supermodular,
    reconstruct_from_dividends,
    streaming_game,
)
from .claims import (
    BankruptcyProblem,
    CeaAwards,
    InvalidProblem,
    IssueWeightFunction,
    MultiIssueClaims,
    WeightContractViolated,
    cea_awards,
    cea_rule,
    equal_issue_weights,
    issue_size_weights,
    proportional_rule,
    streaming_to_bankruptcy,
    streaming_to_claims,
    two_stage_rule,
    weighted_proportional,
)
from .axioms import (
    AXIOM_NAMES,
    AxiomVerdict,
    PremiseViolated,
    ProblemGenerator,
    Status,
    axiom_matrix,
    check_additivity,
    check_click_fraud_proofness,
    check_core_selection,
    check_equal_global_impact,
    check_equal_individual_impact,
    check_homogeneity,
    check_reasonable_lower_bound,
    check_reasonable_lower_bound_all,
    evaluate_axiom,
    recheck_witness,
    reference_problems,
    search_witness,
)

__version__ = "0.1.0"
