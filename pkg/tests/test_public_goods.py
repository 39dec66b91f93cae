import numpy as np
import pytest

from features.public_goods import PublicGoodsGame, pgg_episode, pgg_payoff
from type_definitions.distribution_types import ActionDistribution
from type_definitions.game_types import PggConfig
from utils.validators import ValidationError

CFG = PggConfig()


def test_default_constants():
    assert CFG.endowment == 40
    assert CFG.rounds == 20
    assert CFG.action_count == 41
    assert CFG.mpcr == pytest.approx(0.4)
    assert CFG.free_riding_dominant
    assert not PggConfig(multiplier=4.0).free_riding_dominant


@pytest.mark.parametrize(
    "contributions,expected",
    [
        ((0, 0, 0, 0), [40, 40, 40, 40]),
        ((40, 40, 40, 40), [64, 64, 64, 64]),
        ((40, 0, 0, 0), [16, 56, 56, 56]),
    ],
)
def test_payoff_examples(contributions, expected):
    assert pgg_payoff(contributions, CFG).tolist() == pytest.approx(expected, abs=1e-12)


def test_unilateral_decrease_gains_point_six(rng):
    for _ in range(1000):
        profile = rng.integers(0, 41, size=4)
        player = int(rng.integers(4))
        if profile[player] == 0:
            continue
        lowered = profile.copy()
        lowered[player] -= 1
        gain = pgg_payoff(lowered, CFG)[player] - pgg_payoff(profile, CFG)[player]
        assert gain == pytest.approx(0.6, abs=1e-12)


def test_budget_identity(rng):
    profiles = rng.integers(0, 41, size=(10_000, 4))
    for profile in profiles:
        total = pgg_payoff(profile, CFG).sum()
        expected = CFG.group_size * CFG.endowment + (CFG.multiplier - 1) * profile.sum()
        assert total == pytest.approx(expected, abs=1e-9)


def test_payoff_rejects_bad_profiles():
    with pytest.raises(ValidationError):
        pgg_payoff((41, 0, 0, 0), CFG)
    with pytest.raises(ValidationError):
        pgg_payoff((-1, 0, 0, 0), CFG)
    with pytest.raises(ValidationError):
        pgg_payoff((0, 0, 0), CFG)


def test_config_validation():
    with pytest.raises(ValidationError):
        PggConfig(endowment=40, contribution_granularity=3)
    with pytest.raises(ValidationError):
        PggConfig(observation_mode="whisper")
    coarse = PggConfig(contribution_granularity=10)
    assert coarse.action_count == 5
    assert coarse.contribution(4) == 40


@pytest.mark.parametrize("action,payoff", [(0, 40.0), (40, 64.0)])
def test_episode_with_pure_strategies(action, payoff):
    space = CFG.action_space
    policies = [ActionDistribution.dirac(space, action)] * 4
    history = pgg_episode(policies, CFG, seed=3)
    assert len(history.rows) == CFG.rounds * CFG.group_size
    assert np.all(history.payoffs() == payoff)
    assert np.all(history.contributions() == action)


def test_episode_is_deterministic_per_seed():
    space = CFG.action_space
    policies = [ActionDistribution.uniform(space)] * 4
    first = pgg_episode(policies, CFG, seed=11, episodes=2)
    again = pgg_episode(policies, CFG, seed=11, episodes=2)
    other = pgg_episode(policies, CFG, seed=12, episodes=2)
    assert first.rows == again.rows
    assert first.rows != other.rows
    # Episode streams are independent of how many episodes run.
    single = pgg_episode(policies, CFG, seed=11, episodes=1)
    assert single.rows == [r for r in first.rows if r["episode"] == 0]


def test_episode_rejects_mismatched_policies():
    space = CFG.action_space
    with pytest.raises(ValidationError):
        pgg_episode([ActionDistribution.uniform(space)] * 3, CFG, seed=0)
    wrong = PggConfig(endowment=10).action_space
    with pytest.raises(ValidationError):
        pgg_episode([ActionDistribution.uniform(wrong)] * 4, CFG, seed=0)


def test_observation_modes():
    individual = PublicGoodsGame(CFG)
    assert individual.observe(0).last_contributions is None
    individual.step([10, 0, 0, 20])
    seen = individual.observe(2)
    assert seen.round == 2
    assert seen.last_contributions == (10, 0, 0, 20)
    assert seen.last_group_total == 30

    totals_only = PublicGoodsGame(PggConfig(observation_mode="groupTotal"))
    totals_only.step([10, 0, 0, 20])
    assert totals_only.observe(1).last_contributions is None
    assert totals_only.observe(1).last_group_total == 30


def test_callable_strategies_see_observations():
    space = CFG.action_space
    seen_rounds = []

    def tit_for_tat(obs):
        seen_rounds.append(obs.round)
        if obs.last_group_total is None:
            return ActionDistribution.dirac(space, 40)
        return ActionDistribution.dirac(space, obs.last_group_total // 4)

    history = pgg_episode([tit_for_tat] * 4, CFG, seed=0)
    assert np.all(history.contributions() == 40)
    assert seen_rounds[:4] == [1, 1, 1, 1]


def test_step_after_last_round_fails():
    game = PublicGoodsGame(PggConfig(rounds=1))
    game.step([0, 0, 0, 0])
    assert game.done
    with pytest.raises(ValidationError):
        game.step([0, 0, 0, 0])
