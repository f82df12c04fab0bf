"""Exact game-length distributions and Monte Carlo validation for
generalized (n,m)-Bingo, single cards and multiplayer card sets."""

from .errors import BingoError, CapacityError, ValidationError
from .model import (
    FOUR_CORNERS,
    STANDARD_LINES,
    Card,
    CardSpec,
    Line,
    LineSet,
    PatternFamily,
    canonical_card,
    custom_family,
    family_from_name,
    generate_card,
    generate_cards,
    lines_of,
    load_cards,
    save_cards,
    union_lines,
)
from .engine import (
    DEFAULT_ENUM_LIMIT,
    HARD_ENUM_CAP,
    CoverageProfile,
    coverage_profile,
    s_value,
    s_value_float,
)
from .distribution import (
    GameDistribution,
    ReliabilityPolynomial,
    cdf_at,
    cdf_at_float,
    eval_reliability,
    expectation_by_sum,
    expectation_closed_form,
    game_distribution,
    pmf_at,
    pmf_at_float,
    reliability_polynomial,
    sweep_expectation,
    write_distribution_csv,
    write_sweep_csv,
)
from .montecarlo import (
    SIM_STREAM_INDEX,
    SimConfig,
    TrialStats,
    estimate_reliability,
    game_length_counts,
    run_trials,
    simulate_game,
    stats_from_counts,
)
from .oracle import (
    exact_cdf_by_subsets,
    exact_expectation_by_enumeration,
    exact_reliability_by_grids,
)
from .rng import derive_seed, mix64

__version__ = "0.1.0"

__all__ = [
    "BingoError",
    "CapacityError",
    "ValidationError",
    "Card",
    "CardSpec",
    "Line",
    "LineSet",
    "PatternFamily",
    "STANDARD_LINES",
    "FOUR_CORNERS",
    "canonical_card",
    "custom_family",
    "family_from_name",
    "generate_card",
    "generate_cards",
    "lines_of",
    "load_cards",
    "save_cards",
    "union_lines",
    "CoverageProfile",
    "DEFAULT_ENUM_LIMIT",
    "HARD_ENUM_CAP",
    "coverage_profile",
    "s_value",
    "s_value_float",
    "GameDistribution",
    "ReliabilityPolynomial",
    "cdf_at",
    "cdf_at_float",
    "eval_reliability",
    "expectation_by_sum",
    "expectation_closed_form",
    "game_distribution",
    "pmf_at",
    "pmf_at_float",
    "reliability_polynomial",
    "sweep_expectation",
    "write_distribution_csv",
    "write_sweep_csv",
    "SIM_STREAM_INDEX",
    "SimConfig",
    "TrialStats",
    "estimate_reliability",
    "game_length_counts",
    "run_trials",
    "simulate_game",
    "stats_from_counts",
    "exact_cdf_by_subsets",
    "exact_expectation_by_enumeration",
    "exact_reliability_by_grids",
    "derive_seed",
    "mix64",
]
