"""
Repeated public goods play by regularized agents.

Each round every agent best-responds to the expected contributions of the
rest of the group with the penalized objective U - lambda * I(pi, q). The
prior q follows the agent's schedule:
- fixed: the configured prior, never updated
- previousPolicy: historical average of the agent's own past policies
- realizedHistory: empirical frequency of the agent's sampled actions
"""

import logging
from typing import List, Optional, Sequence

import numpy as np

from features.public_goods import PublicGoodsGame
from services.agent_service import best_response_report, charged_cost
from services.info_cost_service import make_prior
from type_definitions.agent_types import (
    BestResponseResult,
    OpponentSpec,
    PenaltyConfig,
    SelfPlayTrajectory,
    TrajectoryRow,
)
from type_definitions.distribution_types import ActionDistribution, ActionSpace
from type_definitions.game_types import PggConfig
from utils.random_streams import spawn_rngs
from utils.validators import ValidationError, validate_positive_int

logger = logging.getLogger("BoundedRational.SelfPlay")


def contribution_utilities(cfg: PggConfig, others_expected: float) -> np.ndarray:
    """Expected payoff of each own action given the others' expected total."""
    own = np.array([cfg.contribution(a) for a in range(cfg.action_count)], dtype=np.float64)
    return (cfg.endowment - own) + cfg.mpcr * (own + others_expected)


class RegularizedAgent:
    """Single-writer agent state: prior schedule and action history."""

    def __init__(
        self, space: ActionSpace, penalty: PenaltyConfig, initial_prior: ActionDistribution
    ) -> None:
        if initial_prior.size != space.size:
            raise ValidationError(
                f"Initial prior covers {initial_prior.size} actions, game has {space.size}",
                field="initial_prior",
            )
        self.space = space
        self.penalty = penalty
        self.initial_prior = initial_prior
        self._policy_sum = np.zeros(space.size)
        self._action_counts = np.zeros(space.size, dtype=np.int64)
        self._rounds = 0

    def prior(self) -> ActionDistribution:
        """Prior for the coming round."""
        if self._rounds == 0 or self.penalty.schedule == "fixed":
            return self.initial_prior
        if self.penalty.schedule == "previousPolicy":
            return ActionDistribution(self.space, self._policy_sum / self._rounds)
        return ActionDistribution.from_counts(self.space, self._action_counts)

    def act(self, utilities: np.ndarray) -> BestResponseResult:
        return best_response_report(utilities, self.prior(), self.penalty)

    def record(self, policy: ActionDistribution, action: int) -> None:
        self._policy_sum += policy.mass
        self._action_counts[action] += 1
        self._rounds += 1


def _initial_prior(
    penalty: PenaltyConfig, space: ActionSpace, initial_prior: Optional[ActionDistribution]
) -> ActionDistribution:
    if initial_prior is not None:
        return initial_prior
    if penalty.prior.tag in ("previous", "historical"):
        # No history exists before round 1.
        return ActionDistribution.uniform(space)
    return make_prior(penalty.prior, space)


def _effective_penalty(penalty: PenaltyConfig) -> PenaltyConfig:
    """A 'previous' prior under the fixed schedule means previousPolicy."""
    if penalty.schedule == "fixed" and penalty.prior.tag == "previous":
        return PenaltyConfig(penalty.lam, penalty.cost_kind, penalty.prior, "previousPolicy")
    if penalty.schedule == "fixed" and penalty.prior.tag == "historical":
        return PenaltyConfig(penalty.lam, penalty.cost_kind, penalty.prior, "realizedHistory")
    return penalty


def pgg_selfplay(
    cfg: PggConfig,
    penalty: PenaltyConfig,
    opponents: OpponentSpec = OpponentSpec(),
    episodes: int = 1,
    seed: int = 0,
    initial_prior: Optional[ActionDistribution] = None,
) -> SelfPlayTrajectory:
    """
    Play repeated rounds with regularized agents.

    In self-play every player is an agent. With fixed opponents player 0 is
    the only agent and the others sample from their empirical strategies.
    Each agent responds to the expected group total of the others: the mean
    of their past sampled contributions, or of their initial priors (fixed
    strategies) in round 1.

    Args:
        cfg: Game parameters
        penalty: Lambda, information cost, prior and prior schedule
        opponents: Self-play or fixed opponent strategies
        episodes: Independent episodes; episode k uses the k-th seed stream
        seed: Run seed
        initial_prior: Prior used before any history exists

    Returns:
        SelfPlayTrajectory with rows for every agent; policies and priors
        are recorded for the first episode
    """
    episodes = validate_positive_int(episodes, "episodes")
    penalty = _effective_penalty(penalty)
    space = cfg.action_space
    start_prior = _initial_prior(penalty, space, initial_prior)

    if opponents.selfplay:
        agent_count = cfg.group_size
        fixed: Sequence[ActionDistribution] = ()
    else:
        fixed = opponents.strategies or ()
        agent_count = 1
        if len(fixed) != cfg.group_size - 1:
            raise ValidationError(
                f"Expected {cfg.group_size - 1} opponent strategies, got {len(fixed)}",
                field="opponents",
            )
        for strategy in fixed:
            if strategy.size != space.size:
                raise ValidationError(
                    f"Opponent strategy covers {strategy.size} actions, "
                    f"game has {space.size}",
                    field="opponents",
                )

    unit = float(cfg.contribution_granularity)
    trajectory = SelfPlayTrajectory()
    actions_idx = np.arange(space.size)
    game = PublicGoodsGame(cfg)

    for episode, rng in enumerate(spawn_rngs(seed, episodes)):
        agents = [RegularizedAgent(space, penalty, start_prior) for _ in range(agent_count)]
        # Expected contribution of each player before any round is observed.
        expectation = [start_prior.mean() * unit] * agent_count + [
            s.mean() * unit for s in fixed
        ]
        contribution_sums = np.zeros(cfg.group_size)
        game.reset()

        while not game.done:
            round_no = game.state.round + 1
            priors = [agent.prior() for agent in agents]
            responses: List[BestResponseResult] = []
            for player, agent in enumerate(agents):
                others = sum(expectation) - expectation[player]
                responses.append(agent.act(contribution_utilities(cfg, others)))

            policies = [r.policy for r in responses] + list(fixed)
            actions = [int(rng.choice(actions_idx, p=p.mass)) for p in policies]
            game.step(actions)

            for player, (agent, response) in enumerate(zip(agents, responses)):
                agent.record(response.policy, actions[player])
                row: TrajectoryRow = {
                    "episode": episode,
                    "round": round_no,
                    "player": player,
                    "mean_contribution": response.policy.mean() * unit,
                    "sampled_contribution": cfg.contribution(actions[player]),
                    "info_cost": charged_cost(
                        penalty.cost_kind, response.policy, priors[player]
                    ),
                    "penalized_objective": response.objective,
                }
                trajectory.rows.append(row)
            if episode == 0:
                trajectory.policies.append([r.policy for r in responses])
                trajectory.priors.append(priors)

            contribution_sums += [cfg.contribution(a) for a in actions]
            expectation = list(contribution_sums / round_no)

        logger.debug(f"Self-play episode {episode} finished after {cfg.rounds} rounds")

    logger.info(
        f"Self-play: lambda={penalty.lam:g}, cost={penalty.cost_kind.label()}, "
        f"schedule={penalty.schedule}, {episodes} episode(s)"
    )
    return trajectory
