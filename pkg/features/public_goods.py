"""
Repeated public goods game.

Players simultaneously contribute part of their endowment; the pool is
multiplied and shared equally. After each round every player observes either
all contributions or only the group total, depending on the configuration.
"""

import logging
from typing import Callable, List, Sequence, Union

import numpy as np

from type_definitions.distribution_types import ActionDistribution
from type_definitions.game_types import (
    HistoryRow,
    PggConfig,
    PggHistory,
    PggObservation,
    PggState,
)
from utils.random_streams import spawn_rngs
from utils.validators import ValidationError

logger = logging.getLogger("BoundedRational.PublicGoods")

Strategy = Union[ActionDistribution, Callable[[PggObservation], ActionDistribution]]


def pgg_payoff(contributions: Sequence[float], cfg: PggConfig) -> np.ndarray:
    """
    Per-player payoff of one round.

    payoff_i = (endowment - c_i) + (multiplier / group_size) * sum_j c_j

    Args:
        contributions: One contribution per player, in tokens
        cfg: Game parameters

    Returns:
        Array of payoffs

    Raises:
        ValidationError: If the profile size or any contribution is invalid
    """
    c = np.asarray(contributions, dtype=np.float64)
    if c.shape != (cfg.group_size,):
        raise ValidationError(
            f"Expected {cfg.group_size} contributions, got {c.size}",
            field="contributions",
        )
    out_of_range = np.flatnonzero((c < 0) | (c > cfg.endowment))
    if out_of_range.size:
        raise ValidationError(
            f"Contribution of player {int(out_of_range[0])} is "
            f"{c[out_of_range[0]]:g}, outside 0..{cfg.endowment}",
            field="contributions",
        )
    return (cfg.endowment - c) + cfg.mpcr * c.sum()


class PublicGoodsGame:
    """Single-writer environment for one episode at a time."""

    def __init__(self, cfg: PggConfig) -> None:
        self.cfg = cfg
        self.state = self._initial_state()

    def _initial_state(self) -> PggState:
        return PggState(
            round=0,
            last_contributions=np.zeros(self.cfg.group_size, dtype=np.int64),
            cumulative_payoffs=np.zeros(self.cfg.group_size),
        )

    def reset(self) -> PggState:
        self.state = self._initial_state()
        return self.state

    @property
    def done(self) -> bool:
        return self.state.round >= self.cfg.rounds

    def observe(self, player: int) -> PggObservation:
        """Observation of one player, shaped by the configured mode."""
        first = self.state.round == 0
        last = tuple(int(c) for c in self.state.last_contributions)
        return PggObservation(
            round=self.state.round + 1,
            player=player,
            last_contributions=(
                None if first or self.cfg.observation_mode != "individual" else last
            ),
            last_group_total=None if first else int(sum(last)),
            cumulative_payoff=float(self.state.cumulative_payoffs[player]),
        )

    def step(self, actions: Sequence[int]) -> np.ndarray:
        """Play one round with action indices; returns payoffs."""
        if self.done:
            raise ValidationError("Episode already finished", field="round")
        contributions = np.array(
            [self.cfg.contribution(int(a)) for a in actions], dtype=np.int64
        )
        payoffs = pgg_payoff(contributions, self.cfg)
        self.state.round += 1
        self.state.last_contributions = contributions
        self.state.cumulative_payoffs = self.state.cumulative_payoffs + payoffs
        return payoffs


def _resolve(strategy: Strategy, obs: PggObservation, cfg: PggConfig) -> ActionDistribution:
    policy = strategy if isinstance(strategy, ActionDistribution) else strategy(obs)
    if policy.size != cfg.action_count:
        raise ValidationError(
            f"Strategy of player {obs.player} covers {policy.size} actions, "
            f"game has {cfg.action_count}",
            field="policies",
        )
    return policy


def pgg_episode(
    policies: Sequence[Strategy],
    cfg: PggConfig,
    seed: int,
    episodes: int = 1,
) -> PggHistory:
    """
    Simulate repeated rounds with sampled simultaneous contributions.

    Args:
        policies: One strategy per player (fixed distribution or callable)
        cfg: Game parameters
        seed: Run seed; episode k uses the k-th spawned stream
        episodes: Number of independent episodes

    Returns:
        History with one row per (episode, round, player)
    """
    if len(policies) != cfg.group_size:
        raise ValidationError(
            f"Expected {cfg.group_size} policies, got {len(policies)}",
            field="policies",
        )
    history = PggHistory(cfg)
    game = PublicGoodsGame(cfg)
    actions_idx = np.arange(cfg.action_count)
    for episode, rng in enumerate(spawn_rngs(seed, episodes)):
        game.reset()
        while not game.done:
            round_no = game.state.round + 1
            actions: List[int] = []
            for player, strategy in enumerate(policies):
                policy = _resolve(strategy, game.observe(player), cfg)
                actions.append(int(rng.choice(actions_idx, p=policy.mass)))
            payoffs = game.step(actions)
            for player, action in enumerate(actions):
                row: HistoryRow = {
                    "episode": episode,
                    "round": round_no,
                    "player": player,
                    "contribution": cfg.contribution(action),
                    "payoff": float(payoffs[player]),
                }
                history.rows.append(row)
        logger.debug(f"Episode {episode} finished after {cfg.rounds} rounds")
    logger.info(f"Simulated {episodes} episode(s) of {cfg.rounds} rounds")
    return history
