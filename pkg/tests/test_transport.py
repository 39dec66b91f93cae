import math

import numpy as np
import pytest

from services.transport_service import (
    build_cost_matrix,
    dual_objective,
    sinkhorn_approx,
    transport_plan_cost,
    wasserstein_1d_closed_form,
    wasserstein_exact,
)
from type_definitions.distribution_types import (
    ActionDistribution,
    ActionSpace,
    GroundDistance,
)
from utils.validators import ValidationError

ABS = GroundDistance("absolute")


def _dist(*mass: float) -> ActionDistribution:
    return ActionDistribution(ActionSpace(len(mass)), np.asarray(mass))


def test_cost_matrix_absolute_orders():
    space = ActionSpace(3)
    assert build_cost_matrix(space, ABS, 1).entries.tolist() == [
        [0, 1, 2],
        [1, 0, 1],
        [2, 1, 0],
    ]
    assert build_cost_matrix(space, ABS, 2).entries.tolist() == [
        [0, 1, 4],
        [1, 0, 1],
        [4, 1, 0],
    ]


def test_cost_matrix_fixed_distance():
    cost = build_cost_matrix(ActionSpace(3), GroundDistance("fixed", fixed_value=7), 1)
    assert cost.entries.tolist() == [[0, 7, 7], [7, 0, 7], [7, 7, 0]]


def test_cost_matrix_boundary_penalty_only_when_crossing():
    dist = GroundDistance("boundary", boundary_index=2, boundary_penalty=10)
    cost = build_cost_matrix(ActionSpace(4), dist, 1).entries
    assert cost[0, 1] == 1
    assert cost[1, 2] == 11
    assert cost[0, 3] == 13
    assert cost[2, 3] == 1
    assert np.array_equal(cost, cost.T)
    assert not np.any(np.diag(cost))


def test_cost_matrix_rejects_bad_parameters():
    with pytest.raises(ValidationError):
        build_cost_matrix(ActionSpace(3), ABS, 0)
    with pytest.raises(ValidationError):
        build_cost_matrix(
            ActionSpace(3), GroundDistance("boundary", boundary_index=5), 1
        )


def test_identical_distributions_cost_nothing(make_distribution):
    p = make_distribution()
    cost = build_cost_matrix(p.space, ABS, 1)
    solution = wasserstein_exact(p, p, cost)
    assert solution.distance == pytest.approx(0.0, abs=1e-12)
    assert np.allclose(solution.plan.entries, np.diag(p.mass), atol=1e-12)


def test_opposite_diracs_on_41_actions(space41):
    cost = build_cost_matrix(space41, ABS, 1)
    p = ActionDistribution.dirac(space41, 0)
    q = ActionDistribution.dirac(space41, 40)
    assert wasserstein_exact(p, q, cost).distance == pytest.approx(40.0, abs=1e-9)
    assert wasserstein_1d_closed_form(p, q) == pytest.approx(40.0, abs=1e-9)


def test_half_step_shift():
    p, q = _dist(0.5, 0.5, 0.0), _dist(0.0, 0.5, 0.5)
    cost = build_cost_matrix(p.space, ABS, 1)
    assert wasserstein_exact(p, q, cost).distance == pytest.approx(1.0, abs=1e-12)
    assert wasserstein_1d_closed_form(p, q) == pytest.approx(1.0, abs=1e-12)


def test_root_option_returns_nth_root(space41):
    cost = build_cost_matrix(space41, ABS, 2)
    p = ActionDistribution.dirac(space41, 3)
    q = ActionDistribution.dirac(space41, 7)
    assert wasserstein_exact(p, q, cost).distance == pytest.approx(16.0)
    assert wasserstein_exact(p, q, cost, root=True).distance == pytest.approx(4.0)


def test_input_validation():
    cost3 = build_cost_matrix(ActionSpace(3), ABS, 1)
    with pytest.raises(ValidationError):
        wasserstein_exact(_dist(1, 0, 0), _dist(1, 0, 0, 0), cost3)
    with pytest.raises(ValidationError):
        wasserstein_1d_closed_form(_dist(1, 0, 0), _dist(1, 0, 0, 0))
    with pytest.raises(ValidationError):
        _dist(0.5, 0.5, 0.1)


def test_renormalizes_within_tolerance():
    p = _dist(0.5, 0.5 + 5e-7, 0.0)
    assert p.mass.sum() == pytest.approx(1.0, abs=1e-15)


@pytest.mark.slow
def test_closed_form_matches_exact_solver(make_distribution, space41):
    cost = build_cost_matrix(space41, ABS, 1)
    for k in range(1000):
        # Every fourth pair is sparse so degenerate vertices are exercised.
        sparsity = 0.7 if k % 4 == 0 else 0.0
        p = make_distribution(sparsity=sparsity)
        q = make_distribution(sparsity=sparsity)
        exact = wasserstein_exact(p, q, cost).distance
        assert abs(exact - wasserstein_1d_closed_form(p, q)) <= 1e-9


def test_plans_are_feasible_and_dual_certified(make_distribution, space41):
    for order in (1, 2):
        cost = build_cost_matrix(space41, ABS, order)
        for k in range(40):
            p = make_distribution(sparsity=0.5 if k % 2 else 0.0)
            q = make_distribution(sparsity=0.5 if k % 3 else 0.0)
            solution = wasserstein_exact(p, q, cost)
            plan = solution.plan
            assert np.all(plan.entries >= 0.0)
            assert plan.marginal_residual() <= 1e-8
            assert solution.distance == pytest.approx(
                transport_plan_cost(cost, plan.entries), abs=1e-9
            )

            u, v = solution.dual_source, solution.dual_target
            slack = cost.entries - u[:, None] - v[None, :]
            assert slack.min() >= -1e-7
            used = plan.entries > 1e-12
            assert np.abs(slack[used]).max() <= 1e-7
            assert solution.distance - dual_objective(solution, p, q) <= 1e-7


@pytest.mark.slow
def test_metric_axioms(make_distribution, space41):
    cost = build_cost_matrix(space41, ABS, 1)
    for _ in range(500):
        p, q, r = make_distribution(), make_distribution(), make_distribution()
        pq = wasserstein_exact(p, q, cost).distance
        qp = wasserstein_exact(q, p, cost).distance
        qr = wasserstein_exact(q, r, cost).distance
        pr = wasserstein_exact(p, r, cost).distance
        assert abs(pq - qp) <= 1e-9
        assert pr <= pq + qr + 1e-9


def test_scaling_the_ground_cost(make_distribution, space41):
    cost = build_cost_matrix(space41, ABS, 1)
    for factor in (0.25, 3.0, 17.5):
        p, q = make_distribution(), make_distribution()
        base = wasserstein_exact(p, q, cost).distance
        scaled = wasserstein_exact(p, q, cost.scaled(factor)).distance
        assert scaled == pytest.approx(factor * base, rel=1e-9, abs=1e-12)


def test_disjoint_supports_stay_finite(space41):
    cost = build_cost_matrix(space41, ABS, 2)
    p = ActionDistribution(space41, np.r_[np.full(5, 0.2), np.zeros(36)])
    q = ActionDistribution(space41, np.r_[np.zeros(36), np.full(5, 0.2)])
    assert math.isfinite(wasserstein_exact(p, q, cost).distance)


def test_sinkhorn_identity_bias_bound(space41):
    cost = build_cost_matrix(space41, ABS, 1)
    p = ActionDistribution.uniform(space41)
    solution = sinkhorn_approx(p, p, cost, reg_strength=0.5)
    assert solution.converged
    assert solution.method == "sinkhorn"
    assert 0.0 <= solution.distance <= 0.5 * math.log(41)
    assert solution.plan.marginal_residual() <= 1e-9


@pytest.mark.slow
def test_sinkhorn_close_to_exact(make_distribution, space41):
    cost = build_cost_matrix(space41, ABS, 1)
    for _ in range(100):
        p, q = make_distribution(), make_distribution()
        exact = wasserstein_exact(p, q, cost).distance
        approx = sinkhorn_approx(p, q, cost, reg_strength=1e-3, tol=1e-6).distance
        assert abs(approx - exact) <= 0.05


def test_sinkhorn_on_smoothed_diracs(space41):
    cost = build_cost_matrix(space41, ABS, 1)
    p = ActionDistribution.dirac(space41, 3)
    q = ActionDistribution.dirac(space41, 30)
    solution = sinkhorn_approx(p, q, cost, reg_strength=1e-2, tol=1e-8)
    assert abs(solution.distance - 27.0) <= 0.1


def test_sinkhorn_reports_non_convergence(make_distribution, space41):
    cost = build_cost_matrix(space41, ABS, 1)
    p, q = make_distribution(), make_distribution()
    solution = sinkhorn_approx(p, q, cost, reg_strength=1e-3, max_iter=2)
    assert not solution.converged
    assert solution.iterations == 2


def test_sinkhorn_rejects_bad_regularization(space41):
    cost = build_cost_matrix(space41, ABS, 1)
    p = ActionDistribution.uniform(space41)
    with pytest.raises(ValidationError):
        sinkhorn_approx(p, p, cost, reg_strength=0.0)
