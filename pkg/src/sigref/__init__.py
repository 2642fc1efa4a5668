"""Equilibrium enumeration, refinements and persuasiveness for finite signaling games."""

from .equilibria import (
    EquilibriumClass,
    GridRequired,
    SupportBoundExceeded,
    enumerate_mixed_equilibria,
    enumerate_pure_equilibria,
    find_deterrent,
    is_sequential_equilibrium,
    payoff_equivalent,
)
from .game import (
    Game,
    GameError,
    LinearCost,
    Message,
    Profile,
    RatioCost,
    best_responses,
    br_over_all_beliefs,
    conditional_prior,
    finite_game,
    make_profile,
    mean_game,
    posterior,
    pure_sender,
    sender_payoff,
    validate_game,
)
from .io import (
    NumericError,
    SchemaError,
    class_from_dict,
    class_to_dict,
    fixture_names,
    load_fixture,
    load_game,
    parse_game_spec,
)
from .persuasion import (
    MessageOffPathInChallenger,
    PersuasionCache,
    PersuasionDigraph,
    PersuasionWitness,
    more_persuasive,
    persuasion_digraph,
    preference_split,
    unraveling_exists,
)
from .refinements import (
    CriterionVerdict,
    comparison_table,
    d1_criterion,
    gp_criterion,
    intuitive_criterion,
    undefeated,
)
from .spence import (
    Outcome,
    SpenceSpec,
    canonical_grid,
    lex_dominates,
    lex_max_outcome,
    riley_outcome,
    spence_spec,
    truncated_game,
    verify_theorems,
)

__version__ = "0.1.0"
