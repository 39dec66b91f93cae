import itertools
import math

import numpy as np
import pytest

from features.finite_mdp import mdp_expected_return
from services.agent_service import (
    best_response_report,
    joint_transport_lp_best_response,
    penalized_objective,
    penalized_policy_value,
    regularized_best_response,
    regularized_policy_iteration,
)
from services.info_cost_service import info_cost
from services.transport_service import build_cost_matrix, wasserstein_exact
from type_definitions.agent_types import PenaltyConfig
from type_definitions.cost_types import InfoCostKind, OtConfig, PriorKind
from type_definitions.distribution_types import (
    ActionDistribution,
    ActionSpace,
    GroundDistance,
)
from type_definitions.game_types import FiniteMdp
from utils.validators import ValidationError

ABS = GroundDistance("absolute")
KINDS = [
    InfoCostKind("entropy"),
    InfoCostKind("kl"),
    InfoCostKind("klStar"),
    InfoCostKind("wasserstein"),
    InfoCostKind("wasserstein", ot_config=OtConfig(order=2)),
]
KIND_IDS = ["entropy", "kl", "klStar", "wasserstein1", "wasserstein2"]


def _positive_prior(rng, size):
    mass = 0.8 * rng.dirichlet(np.ones(size)) + 0.2 / size
    return ActionDistribution(ActionSpace(size), mass)


@pytest.mark.parametrize("kind", KINDS, ids=KIND_IDS)
def test_zero_lambda_is_dirac_at_argmax(kind, rng):
    u = rng.normal(size=41)
    prior = _positive_prior(rng, 41)
    policy = regularized_best_response(u, prior, PenaltyConfig(0.0, kind))
    assert policy == ActionDistribution.dirac(prior.space, int(np.argmax(u)))


def test_zero_lambda_breaks_ties_to_lowest_index():
    space = ActionSpace(5)
    u = np.array([0.0, 2.0, 1.0, 2.0, 2.0])
    policy = regularized_best_response(
        u, ActionDistribution.uniform(space), PenaltyConfig(0.0, InfoCostKind("kl"))
    )
    assert policy.mass.tolist() == [0.0, 1.0, 0.0, 0.0, 0.0]


def test_wasserstein_five_action_example():
    space = ActionSpace(5)
    u = np.array([0.0, 0.0, 0.0, 0.0, 1.0])
    prior = ActionDistribution.uniform(space)
    cfg = PenaltyConfig(0.5, InfoCostKind("wasserstein"))
    result = best_response_report(u, prior, cfg)
    assert result.policy.mass.tolist() == pytest.approx([0.2, 0.2, 0.2, 0.0, 0.4], abs=1e-12)
    assert result.objective == pytest.approx(0.3, abs=1e-12)

    # Brute force over a 0.1 grid of the policy simplex with exact W.
    cost = build_cost_matrix(space, ABS, 1)
    best = -math.inf
    for parts in itertools.product(range(11), repeat=4):
        if sum(parts) > 10:
            continue
        mass = np.array(list(parts) + [10 - sum(parts)]) / 10.0
        candidate = ActionDistribution(space, mass)
        value = float(u @ mass) - 0.5 * wasserstein_exact(candidate, prior, cost).distance
        best = max(best, value)
    assert result.objective >= best - 1e-12
    assert best == pytest.approx(0.3, abs=1e-12)

    lp = joint_transport_lp_best_response(u, prior, cost, 0.5)
    assert lp.objective == pytest.approx(0.3, abs=1e-9)


def test_entropy_softmax_example(rng):
    space = ActionSpace(2)
    u = np.array([1.0, 0.0])
    prior = ActionDistribution.uniform(space)
    cfg = PenaltyConfig(1.0, InfoCostKind("entropy"))
    policy = regularized_best_response(u, prior, cfg)
    assert policy.mass.tolist() == pytest.approx(
        [math.e / (math.e + 1), 1 / (math.e + 1)], abs=1e-12
    )
    assert policy.mass.tolist() == pytest.approx([0.7311, 0.2689], abs=1e-4)

    achieved = penalized_objective(u, policy, prior, cfg)
    for _ in range(1000):
        x = rng.random()
        other = ActionDistribution(space, np.array([x, 1 - x]))
        assert achieved >= penalized_objective(u, other, prior, cfg) - 1e-12


@pytest.mark.slow
def test_greedy_transport_matches_joint_lp(rng):
    for k in range(200):
        size = int(rng.integers(2, 12))
        order = 1 + k % 2
        space = ActionSpace(size)
        prior = ActionDistribution(space, rng.dirichlet(np.ones(size)))
        u = rng.normal(scale=3.0, size=size)
        lam = float(rng.uniform(0.05, 3.0))
        kind = InfoCostKind("wasserstein", ot_config=OtConfig(order=order))
        greedy = best_response_report(u, prior, PenaltyConfig(lam, kind))
        lp = joint_transport_lp_best_response(
            u, prior, build_cost_matrix(space, ABS, order), lam
        )
        assert greedy.objective == pytest.approx(lp.objective, abs=1e-9, rel=1e-9)


@pytest.mark.parametrize("kind", KINDS, ids=KIND_IDS)
def test_information_cost_is_monotone_in_lambda(kind, rng):
    u = rng.uniform(0.0, 5.0, size=41)
    prior = _positive_prior(rng, 41)
    previous = math.inf
    for lam in (0.0, 0.1, 0.5, 1.0, 2.0, 10.0, 1e6):
        cost = best_response_report(u, prior, PenaltyConfig(lam, kind)).info_cost
        assert cost <= previous + 1e-9
        previous = cost


@pytest.mark.parametrize("kind", KINDS[1:], ids=KIND_IDS[1:])
def test_huge_lambda_pins_policy_to_prior(kind, rng):
    u = rng.uniform(0.0, 5.0, size=41)
    prior = _positive_prior(rng, 41)
    result = best_response_report(u, prior, PenaltyConfig(1e6, kind))
    assert info_cost(kind, result.policy, prior) <= 1e-3
    if kind.tag == "wasserstein":
        assert result.policy.total_variation(prior) <= 1e-3


def test_huge_lambda_with_dirac_prior_stays_put(space41):
    u = 40.0 - 0.6 * np.arange(41)
    prior = ActionDistribution.dirac(space41, 20)
    result = best_response_report(u, prior, PenaltyConfig(1e6, InfoCostKind("wasserstein")))
    assert result.policy == prior


@pytest.mark.parametrize("kind", KINDS, ids=KIND_IDS)
def test_objective_certificate(kind, rng):
    for _ in range(25):
        size = int(rng.integers(2, 15))
        space = ActionSpace(size)
        prior = _positive_prior(rng, size)
        u = rng.normal(size=size)
        cfg = PenaltyConfig(float(rng.uniform(0.01, 5.0)), kind)
        result = best_response_report(u, prior, cfg)
        dirac = ActionDistribution.dirac(space, int(np.argmax(u)))
        assert result.objective >= penalized_objective(u, prior, prior, cfg) - 1e-9
        assert result.objective >= penalized_objective(u, dirac, prior, cfg) - 1e-9
        assert result.objective == pytest.approx(
            penalized_objective(u, result.policy, prior, cfg), abs=1e-12
        )


def test_kl_with_prior_missing_the_optimum_is_flagged(space41):
    u = np.zeros(41)
    u[40] = 1.0
    prior = ActionDistribution.dirac(space41, 0)
    result = best_response_report(u, prior, PenaltyConfig(1.0, InfoCostKind("kl")))
    assert result.support_restricted
    assert result.policy == prior

    zero = best_response_report(u, prior, PenaltyConfig(0.0, InfoCostKind("kl")))
    assert zero.policy == ActionDistribution.dirac(space41, 40)
    assert not zero.support_restricted

    smoothed = best_response_report(u, prior, PenaltyConfig(1.0, InfoCostKind("klStar")))
    assert not smoothed.support_restricted


@pytest.mark.parametrize("tag", ["entropy", "kl", "klStar"])
@pytest.mark.parametrize("lam", [1e-310, 1e-12])
def test_tiny_lambda_approaches_the_unpenalized_choice(tag, lam):
    space = ActionSpace(5)
    u = np.array([0.0, 1.0, 2.0, 3.0, 4.0])
    result = best_response_report(
        u, ActionDistribution.uniform(space), PenaltyConfig(lam, InfoCostKind(tag))
    )
    assert result.policy == ActionDistribution.dirac(space, 4)
    assert math.isfinite(result.objective)


def test_tiny_lambda_kl_stays_on_prior_support():
    space = ActionSpace(5)
    u = np.array([0.0, 1.0, 2.0, 3.0, 4.0])
    prior = ActionDistribution(space, np.array([0.5, 0.5, 0.0, 0.0, 0.0]))
    result = best_response_report(u, prior, PenaltyConfig(1e-310, InfoCostKind("kl")))
    assert result.policy == ActionDistribution.dirac(space, 1)
    assert result.info_cost == pytest.approx(math.log(2.0))
    assert result.support_restricted


def test_best_response_input_validation(space41):
    prior = ActionDistribution.uniform(space41)
    cfg = PenaltyConfig(1.0, InfoCostKind("entropy"))
    with pytest.raises(ValidationError):
        best_response_report(np.zeros(40), prior, cfg)
    bad = np.zeros(41)
    bad[3] = np.nan
    with pytest.raises(ValidationError):
        best_response_report(bad, prior, cfg)
    with pytest.raises(ValidationError):
        PenaltyConfig(-1.0, InfoCostKind("entropy"))


def _random_mdp(rng, states=4, actions=3, discount=0.9) -> FiniteMdp:
    transition = rng.dirichlet(np.ones(states), size=(states, actions))
    reward = rng.normal(size=(states, actions))
    return FiniteMdp(transition, reward, discount)


def _chain(discount=0.9) -> FiniteMdp:
    # Actions: 0 moves left, 1 moves right; reward for acting in the last state.
    transition = np.zeros((3, 2, 3))
    for s in range(3):
        transition[s, 0, max(s - 1, 0)] = 1.0
        transition[s, 1, min(s + 1, 2)] = 1.0
    reward = np.array([[0.0, 0.0], [0.0, 0.0], [1.0, 1.0]])
    return FiniteMdp(transition, reward, discount)


def test_policy_iteration_without_penalty_is_optimal(rng):
    mdp = _random_mdp(rng)
    values = np.zeros(mdp.state_count)
    for _ in range(2000):
        values = (mdp.reward + mdp.discount * mdp.transition @ values).max(axis=1)
    result = regularized_policy_iteration(mdp, PenaltyConfig(0.0, InfoCostKind("kl")))
    assert result.converged
    assert result.values == pytest.approx(values, abs=1e-6)
    greedy = (mdp.reward + mdp.discount * mdp.transition @ values).argmax(axis=1)
    assert [int(np.argmax(p.mass)) for p in result.per_state] == greedy.tolist()


@pytest.mark.parametrize(
    "kind,lam",
    [(InfoCostKind("kl"), 1.0), (InfoCostKind("entropy"), 0.7), (InfoCostKind("wasserstein"), 0.3)],
    ids=["kl", "entropy", "wasserstein"],
)
def test_single_state_reduces_to_one_step(kind, lam):
    u = np.array([0.2, 1.0, 0.4, 0.9])
    mdp = FiniteMdp(np.ones((1, 4, 1)), u[None, :], discount=0.5)
    prior = ActionDistribution(ActionSpace(4), np.array([0.4, 0.1, 0.2, 0.3]))
    cfg = PenaltyConfig(lam, kind)
    result = regularized_policy_iteration(mdp, cfg, priors=prior)
    expected = regularized_best_response(u, prior, cfg)
    assert result.converged
    assert result.per_state[0].mass == pytest.approx(expected.mass, abs=1e-9)


def test_chain_policy_beats_random_policies(rng):
    mdp = _chain()
    cfg = PenaltyConfig(1.0, InfoCostKind("kl"), PriorKind("uniform"))
    result = regularized_policy_iteration(mdp, cfg)
    space = mdp.action_space
    for _ in range(1000):
        policy = [ActionDistribution(space, rng.dirichlet(np.ones(2))) for _ in range(3)]
        values = penalized_policy_value(mdp, policy, cfg)
        assert result.achieved_objective >= float(mdp.initial_distribution @ values) - 1e-9


def test_penalized_value_without_penalty_matches_evaluation(rng):
    mdp = _random_mdp(rng)
    space = mdp.action_space
    policy = [ActionDistribution(space, rng.dirichlet(np.ones(3))) for _ in range(4)]
    cfg = PenaltyConfig(0.0, InfoCostKind("wasserstein"))
    assert penalized_policy_value(mdp, policy, cfg) == pytest.approx(
        mdp_expected_return(mdp, policy), abs=1e-8
    )


def test_penalized_value_charges_every_visit():
    mdp = FiniteMdp(np.ones((1, 2, 1)), np.array([[1.0, 0.0]]), discount=0.5)
    policy = [ActionDistribution.dirac(mdp.action_space, 0)]
    values = penalized_policy_value(mdp, policy, PenaltyConfig(1.0, InfoCostKind("kl")))
    assert values.tolist() == pytest.approx([2.0 * (1.0 - math.log(2.0))], abs=1e-9)

    off_support = ActionDistribution(mdp.action_space, np.array([1.0, 0.0]))
    prior = ActionDistribution.dirac(mdp.action_space, 1)
    values = penalized_policy_value(
        mdp, [off_support], PenaltyConfig(1.0, InfoCostKind("kl")), priors=prior
    )
    assert values.tolist() == [-math.inf]


def test_policy_iteration_flags_non_convergence():
    mdp = _chain()
    result = regularized_policy_iteration(
        mdp, PenaltyConfig(1.0, InfoCostKind("kl")), max_iter=1
    )
    assert not result.converged
    assert result.iterations == 1
    assert len(result.per_state) == 3


def test_policy_iteration_prior_validation():
    mdp = _chain()
    with pytest.raises(ValidationError):
        regularized_policy_iteration(
            mdp, PenaltyConfig(1.0, InfoCostKind("kl"), schedule="previousPolicy")
        )
    with pytest.raises(ValidationError):
        regularized_policy_iteration(
            mdp,
            PenaltyConfig(1.0, InfoCostKind("kl")),
            priors=[ActionDistribution.uniform(ActionSpace(2))] * 2,
        )


def test_per_state_priors_are_used():
    mdp = _chain()
    space = mdp.action_space
    left = ActionDistribution(space, np.array([0.99, 0.01]))
    right = ActionDistribution(space, np.array([0.01, 0.99]))
    cfg = PenaltyConfig(50.0, InfoCostKind("kl"))
    result = regularized_policy_iteration(mdp, cfg, priors=[left, right, left])
    assert result.per_state[0].mass[0] > 0.9
    assert result.per_state[1].mass[1] > 0.9
