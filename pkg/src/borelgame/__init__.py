"""Subgame-perfect equilibria of two-player games on finite graphs.

Exact rational solvers for the zero-sum values, the viability label
iteration and the threat-play equilibrium profile, with brute-force
verifiers alongside.
"""

from .alpha import (
    ViabilityError,
    ViabilityWitness,
    alpha_fixed_point,
    alpha_iterates,
    alpha_step,
    is_monotonic,
    is_viable,
    viable_min,
    viable_witness,
)
from .dot import export_dot
from .folk import FolkReport, ViablePlaySet, enumerate_viable, folk_crosscheck
from .game import (
    ConstantRule,
    GameError,
    GameFormatError,
    GameGraph,
    NotLSCError,
    Payoff,
    Player,
    TailTable,
    controller_at,
    load_game,
    opponent,
)
from .labels import AlphaLabels, ValueLabels
from .plays import Lasso, canonical, evaluate_payoff, format_lasso, parse_lasso
from .spe import Memory, StrategyProfile, ThreatTable, build_profile, induced_play, profile_step, threat_play
from .verify import VerificationReport, best_deviation, check_spe, finite_horizon_spe
from .zerosum import PositionalStrategy, alpha_one, optimal_strategies, value_labels

__version__ = "0.1.0"
