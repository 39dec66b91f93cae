"""
Type definitions for the repeated public goods game and finite MDPs.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, TypedDict, Union

import numpy as np

from type_definitions.distribution_types import ActionDistribution, ActionSpace
from utils.validators import (
    ValidationError,
    validate_mass,
    validate_nonnegative,
    validate_positive_int,
)

OBSERVATION_MODES = ("individual", "groupTotal")


@dataclass(frozen=True)
class PggConfig:
    """Repeated public goods game parameters (defaults: 40 tokens, x1.6, 4 players, 20 rounds)."""

    endowment: int = 40
    multiplier: float = 1.6
    group_size: int = 4
    rounds: int = 20
    contribution_granularity: int = 1
    observation_mode: str = "individual"

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "endowment", validate_positive_int(self.endowment, "endowment")
        )
        object.__setattr__(
            self, "multiplier", validate_nonnegative(self.multiplier, "multiplier")
        )
        object.__setattr__(
            self, "group_size", validate_positive_int(self.group_size, "group_size")
        )
        object.__setattr__(self, "rounds", validate_positive_int(self.rounds, "rounds"))
        granularity = validate_positive_int(
            self.contribution_granularity, "contribution_granularity"
        )
        if self.endowment % granularity != 0:
            raise ValidationError(
                f"Endowment {self.endowment} is not divisible by granularity "
                f"{granularity}",
                field="contribution_granularity",
            )
        object.__setattr__(self, "contribution_granularity", granularity)
        if self.observation_mode not in OBSERVATION_MODES:
            raise ValidationError(
                f"Observation mode must be one of {OBSERVATION_MODES}",
                field="observation_mode",
            )

    @property
    def mpcr(self) -> float:
        """Marginal per-capita return multiplier / group_size."""
        return self.multiplier / self.group_size

    @property
    def free_riding_dominant(self) -> bool:
        """True when contributing nothing is strictly dominant (MPCR < 1)."""
        return self.mpcr < 1.0

    @property
    def action_count(self) -> int:
        return self.endowment // self.contribution_granularity + 1

    @property
    def action_space(self) -> ActionSpace:
        return ActionSpace(self.action_count)

    def contribution(self, action: int) -> int:
        return action * self.contribution_granularity


@dataclass(frozen=True)
class PggObservation:
    """What a player sees before choosing (the state s of one round)."""

    round: int
    player: int
    last_contributions: Optional[Tuple[int, ...]]
    last_group_total: Optional[int]
    cumulative_payoff: float


@dataclass
class PggState:
    """Mutable state of one running episode."""

    round: int
    last_contributions: np.ndarray
    cumulative_payoffs: np.ndarray


class HistoryRow(TypedDict):
    """One (episode, round, player) record."""

    episode: int
    round: int
    player: int
    contribution: int
    payoff: float


@dataclass
class PggHistory:
    """Per-round contributions and payoffs of one or more episodes."""

    config: PggConfig
    rows: List[HistoryRow] = field(default_factory=list)

    def contributions(self, episode: int = 0) -> np.ndarray:
        """rounds x players matrix of contributions for one episode."""
        out = np.zeros((self.config.rounds, self.config.group_size), dtype=np.int64)
        for row in self.rows:
            if row["episode"] == episode:
                out[row["round"] - 1, row["player"]] = row["contribution"]
        return out

    def payoffs(self, episode: int = 0) -> np.ndarray:
        out = np.zeros((self.config.rounds, self.config.group_size))
        for row in self.rows:
            if row["episode"] == episode:
                out[row["round"] - 1, row["player"]] = row["payoff"]
        return out


@dataclass(frozen=True, eq=False)
class FiniteMdp:
    """
    Tabular MDP.

    transition has shape (S, A, S) with rows summing to 1; reward has shape
    (S, A); initial_distribution scalarizes per-state values.
    """

    transition: np.ndarray
    reward: np.ndarray
    discount: float
    initial_distribution: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        transition = np.array(self.transition, dtype=np.float64)
        reward = np.array(self.reward, dtype=np.float64)
        if transition.ndim != 3 or transition.shape[0] != transition.shape[2]:
            raise ValidationError("transition must have shape (S, A, S)", "transition")
        if reward.shape != transition.shape[:2]:
            raise ValidationError("reward must have shape (S, A)", field="reward")
        if np.any(transition < 0) or not np.allclose(transition.sum(axis=2), 1.0):
            raise ValidationError(
                "Every transition row must be a probability distribution",
                field="transition",
            )
        if not 0.0 <= self.discount < 1.0:
            raise ValidationError("discount must lie in [0, 1)", field="discount")
        init = (
            np.full(transition.shape[0], 1.0 / transition.shape[0])
            if self.initial_distribution is None
            else validate_mass(self.initial_distribution, transition.shape[0])
        )
        for name, arr in (
            ("transition", transition),
            ("reward", reward),
            ("initial_distribution", init),
        ):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def state_count(self) -> int:
        return int(self.transition.shape[0])

    @property
    def action_count(self) -> int:
        return int(self.transition.shape[1])

    @property
    def action_space(self) -> ActionSpace:
        return ActionSpace(self.action_count)

    def policy_matrix(self, policy: "PolicyInput") -> np.ndarray:
        """Normalize a per-state policy into an (S, A) row-stochastic array."""
        if isinstance(policy, np.ndarray):
            rows = [np.asarray(r) for r in policy]
        else:
            rows = [p.mass for p in policy]
        if len(rows) != self.state_count:
            raise ValidationError(
                f"Policy has {len(rows)} states, MDP has {self.state_count}",
                field="policy",
            )
        return np.vstack([validate_mass(r, self.action_count) for r in rows])


PolicyInput = Union[np.ndarray, Sequence[ActionDistribution]]
