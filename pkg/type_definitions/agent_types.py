"""
Type definitions for bounded-rational agents.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple, TypedDict

import numpy as np

from type_definitions.cost_types import InfoCostKind, PriorKind
from type_definitions.distribution_types import ActionDistribution
from utils.validators import ValidationError, validate_nonnegative

PRIOR_SCHEDULES = ("fixed", "previousPolicy", "realizedHistory")


@dataclass(frozen=True)
class PenaltyConfig:
    """Lagrange multiplier, information cost and prior for U - lambda * I."""

    lam: float
    cost_kind: InfoCostKind
    prior: PriorKind = field(default_factory=lambda: PriorKind("uniform"))
    schedule: str = "fixed"

    def __post_init__(self) -> None:
        object.__setattr__(self, "lam", validate_nonnegative(self.lam, "lambda"))
        if self.schedule not in PRIOR_SCHEDULES:
            raise ValidationError(
                f"Prior schedule must be one of {PRIOR_SCHEDULES}", field="schedule"
            )


@dataclass(frozen=True)
class BestResponseResult:
    """Regularized best response with its certificate values."""

    policy: ActionDistribution
    objective: float
    info_cost: float
    expected_utility: float
    support_restricted: bool = False


@dataclass(frozen=True)
class RegularizedPolicy:
    """Per-state policy returned by regularized policy iteration."""

    per_state: Tuple[ActionDistribution, ...]
    values: np.ndarray
    achieved_objective: float
    iterations: int
    converged: bool


class TrajectoryRow(TypedDict):
    """One (episode, round, player) step of repeated play."""

    episode: int
    round: int
    player: int
    mean_contribution: float
    sampled_contribution: int
    info_cost: float
    penalized_objective: float


@dataclass
class SelfPlayTrajectory:
    """Policies and statistics of repeated regularized play."""

    rows: List[TrajectoryRow] = field(default_factory=list)
    policies: List[List[ActionDistribution]] = field(default_factory=list)
    priors: List[List[ActionDistribution]] = field(default_factory=list)

    def mean_contributions(self, player: int = 0, episode: int = 0) -> np.ndarray:
        """Expected contribution per round for one player."""
        return np.array(
            [
                r["mean_contribution"]
                for r in self.rows
                if r["player"] == player and r["episode"] == episode
            ]
        )

    def policy_path(self, player: int = 0) -> List[ActionDistribution]:
        """Policies of one player in the first episode, round by round."""
        return [round_policies[player] for round_policies in self.policies]


class SweepRow(TypedDict):
    """One (lambda, seed, round) cell of a lambda sweep."""

    lam: float
    cost_kind: str
    prior: str
    seed: int
    round: int
    mean_contribution: float
    info_cost: float
    penalized_objective: float


@dataclass(frozen=True)
class OpponentSpec:
    """Fixed empirical opponent strategies, or None for self-play."""

    strategies: Optional[Tuple[ActionDistribution, ...]] = None

    @property
    def selfplay(self) -> bool:
        return self.strategies is None
