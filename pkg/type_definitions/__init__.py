"""
Type definitions for the bounded-rational decision toolkit.

This module provides the domain types shared across services and features:
distributions and transport objects, information costs and priors, games
and MDPs, agent configurations and results, and analysis reports.
"""

from .agent_types import (
    BestResponseResult,
    OpponentSpec,
    PenaltyConfig,
    RegularizedPolicy,
    SelfPlayTrajectory,
    SweepRow,
    TrajectoryRow,
)
from .analysis_types import (
    ChangeReport,
    ContributionPanel,
    MetricReport,
    MetricRow,
    SynthGenerator,
)
from .cost_types import InfoCostKind, OtConfig, PriorKind
from .distribution_types import (
    ActionDistribution,
    ActionSpace,
    CostMatrix,
    GroundDistance,
    OtSolution,
    TransportPlan,
)
from .game_types import (
    FiniteMdp,
    HistoryRow,
    PggConfig,
    PggHistory,
    PggObservation,
    PggState,
)

__all__ = [
    # Distribution types
    "ActionSpace",
    "ActionDistribution",
    "GroundDistance",
    "CostMatrix",
    "TransportPlan",
    "OtSolution",
    # Cost types
    "OtConfig",
    "InfoCostKind",
    "PriorKind",
    # Game types
    "PggConfig",
    "PggObservation",
    "PggState",
    "HistoryRow",
    "PggHistory",
    "FiniteMdp",
    # Agent types
    "PenaltyConfig",
    "BestResponseResult",
    "RegularizedPolicy",
    "TrajectoryRow",
    "SelfPlayTrajectory",
    "SweepRow",
    "OpponentSpec",
    # Analysis types
    "ContributionPanel",
    "SynthGenerator",
    "MetricRow",
    "MetricReport",
    "ChangeReport",
]
