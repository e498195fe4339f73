"""Hodge decomposition of cooperative games.

Splits a game on ``n`` players into one component game per player by least
squares on the hypercube graph.  Each component's grand-coalition entry is
the player's Shapley value; the full component tables satisfy an extended
set of allocation axioms and coincide with expected contributions along a
uniform random walk, both of which this package exposes as executable
checks.
"""

from .axioms import (
    AxiomReport,
    check_classical_shapley,
    check_efficiency,
    check_linearity,
    check_null_player,
    check_reflection,
    check_symmetry,
)
from .bitsets import as_mask, coalition_label, members
from .decompose import (
    Decomposition,
    bargaining_closed_form,
    bargaining_fractions,
    decompose,
    decompose_axiomatic,
)
from .errors import (
    GameConstraintError,
    GameFormatError,
    InconsistentRHS,
    NonConvergence,
    NotNullPlayer,
    SolveFailure,
    SolverError,
    StepCapExceeded,
)
from .games import (
    Game,
    ShapleyAllocation,
    additive_game,
    basis_game,
    edge_game,
    lift_game,
    make_game,
    pure_bargaining,
    restrict_game,
    shapley_by_permutations,
    shapley_direct,
    swap_coalition,
    swap_players,
    zero_game,
)
from .io import format_decomposition_machine, format_game, parse_decomposition, parse_game
from .operators import (
    EdgeField,
    SolverConfig,
    divergence,
    divergence_of_partial,
    edge_inner,
    gradient,
    laplacian_apply,
    partial_gradient,
    solve_least_squares,
    vertex_inner,
)
from .paths import (
    ChainConfig,
    PathEstimate,
    check_transition_formula,
    estimate_value,
    exact_value,
    exact_values,
    sample_path_contribution,
    sample_path_profile,
    sampling_backend,
    step_chain,
)

__version__ = "0.1.0"

__all__ = [
    "AxiomReport",
    "ChainConfig",
    "Decomposition",
    "EdgeField",
    "Game",
    "GameConstraintError",
    "GameFormatError",
    "InconsistentRHS",
    "NonConvergence",
    "NotNullPlayer",
    "PathEstimate",
    "ShapleyAllocation",
    "SolveFailure",
    "SolverConfig",
    "SolverError",
    "StepCapExceeded",
    "additive_game",
    "as_mask",
    "bargaining_closed_form",
    "bargaining_fractions",
    "basis_game",
    "check_classical_shapley",
    "check_efficiency",
    "check_linearity",
    "check_null_player",
    "check_reflection",
    "check_symmetry",
    "check_transition_formula",
    "coalition_label",
    "decompose",
    "decompose_axiomatic",
    "divergence",
    "divergence_of_partial",
    "edge_game",
    "edge_inner",
    "estimate_value",
    "exact_value",
    "exact_values",
    "format_decomposition_machine",
    "format_game",
    "gradient",
    "laplacian_apply",
    "lift_game",
    "make_game",
    "members",
    "parse_decomposition",
    "parse_game",
    "partial_gradient",
    "pure_bargaining",
    "restrict_game",
    "sample_path_contribution",
    "sample_path_profile",
    "sampling_backend",
    "shapley_by_permutations",
    "shapley_direct",
    "solve_least_squares",
    "step_chain",
    "swap_coalition",
    "swap_players",
    "vertex_inner",
    "zero_game",
]
