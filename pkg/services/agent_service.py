"""
Bounded-rational decision-making with a pluggable information cost.

This service encapsulates:
- One-step regularized best responses max_pi <U, pi> - lambda * I(pi, q)
- An LP over the joint (pi, T) polytope for the Wasserstein cost
- Regularized policy iteration on finite MDPs
"""

import logging
import math
from typing import List, Optional, Sequence, Union

import numpy as np
from scipy.optimize import linprog
from scipy.special import softmax

from services.info_cost_service import entropy, info_cost, make_prior, smooth_prior
from services.transport_service import build_cost_matrix
from type_definitions.agent_types import (
    BestResponseResult,
    PenaltyConfig,
    RegularizedPolicy,
)
from type_definitions.cost_types import InfoCostKind
from type_definitions.distribution_types import (
    ActionDistribution,
    ActionSpace,
    CostMatrix,
)
from type_definitions.game_types import FiniteMdp
from utils.validators import SolverError, ValidationError

logger = logging.getLogger("BoundedRational.Agents")

PriorInput = Union[ActionDistribution, Sequence[ActionDistribution]]


def charged_cost(
    kind: InfoCostKind, policy: ActionDistribution, prior: ActionDistribution
) -> float:
    """
    Information cost charged by lambda in the penalized objective.

    Identical to info_cost except for the entropy kind, where the charge is
    the entropy deficit log|A| - H(pi) so that uniform play is free.
    """
    if kind.tag == "entropy":
        return max(math.log(policy.size) - entropy(policy), 0.0)
    return info_cost(kind, policy, prior)


def penalized_objective(
    utilities: Sequence[float],
    policy: ActionDistribution,
    prior: ActionDistribution,
    cfg: PenaltyConfig,
) -> float:
    """<U, pi> - lambda * I(pi, q); -inf when the charged cost is infinite."""
    expected = float(np.dot(np.asarray(utilities, dtype=np.float64), policy.mass))
    if cfg.lam == 0.0:
        return expected
    cost = charged_cost(cfg.cost_kind, policy, prior)
    return -math.inf if math.isinf(cost) else expected - cfg.lam * cost


def _argmax_dirac(space: ActionSpace, utilities: np.ndarray) -> ActionDistribution:
    # np.argmax returns the first maximizer, i.e. the lowest index on ties.
    return ActionDistribution.dirac(space, int(np.argmax(utilities)))


def _tempered_softmax(
    space: ActionSpace, log_anchor: np.ndarray, utilities: np.ndarray, lam: float
) -> ActionDistribution:
    """
    pi proportional to exp(log_anchor + U / lambda).

    Utilities are shifted by their maximum first. When lambda is so small
    that every weight underflows, the limit is returned: a Dirac at the
    lowest-index maximizer of U among actions the anchor allows.
    """
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        logits = log_anchor + (utilities - utilities.max()) / lam
        mass = softmax(logits)
    if np.all(np.isfinite(mass)):
        return ActionDistribution(space, mass)
    allowed = np.where(np.isfinite(log_anchor), utilities, -np.inf)
    return ActionDistribution.dirac(space, int(np.argmax(allowed)))


def _greedy_transport(
    utilities: np.ndarray, prior: ActionDistribution, cost: CostMatrix, lam: float
) -> ActionDistribution:
    """
    Move each prior atom j to argmax_i U_i - lambda * C[i][j].

    The joint maximization over (pi, T) separates over the columns of T,
    so this per-column rule is exact.
    """
    gains = utilities[:, None] - lam * np.asarray(cost.entries)
    targets = np.argmax(gains, axis=0)
    mass = np.zeros(prior.size)
    np.add.at(mass, targets, prior.mass)
    return ActionDistribution(prior.space, mass)


def joint_transport_lp_best_response(
    utilities: Sequence[float],
    prior: ActionDistribution,
    cost: CostMatrix,
    lam: float,
) -> BestResponseResult:
    """
    Solve max <U, pi> - lambda * <C, T> over T >= 0 with column sums q.

    The policy is the row marginal of the optimal T. Used as an independent
    check of the greedy rule.
    """
    u = np.asarray(utilities, dtype=np.float64)
    n = prior.size
    gains = u[:, None] - lam * np.asarray(cost.entries)
    # Variables T[i, j] flattened row-major; column-sum equalities.
    a_eq = np.zeros((n, n * n))
    for j in range(n):
        a_eq[j, j::n] = 1.0
    result = linprog(
        -gains.reshape(-1),
        A_eq=a_eq,
        b_eq=prior.mass,
        bounds=(0, None),
        method="highs",
    )
    if not result.success:
        raise SolverError(f"Joint transport LP failed: {result.message}")
    plan = np.clip(result.x.reshape(n, n), 0.0, None)
    policy = ActionDistribution(prior.space, plan.sum(axis=1) / plan.sum())
    transport = float(np.sum(np.asarray(cost.entries) * plan))
    expected = float(np.dot(u, policy.mass))
    return BestResponseResult(
        policy=policy,
        objective=-float(result.fun),
        info_cost=transport,
        expected_utility=expected,
    )


def best_response_report(
    utilities: Sequence[float], prior: ActionDistribution, cfg: PenaltyConfig
) -> BestResponseResult:
    """
    Regularized best response with objective certificate.

    Solution per cost kind:
    - lambda = 0: Dirac at the lowest-index argmax
    - entropy: softmax(U / lambda)
    - kl / klStar: pi proportional to q~ exp(U / lambda), q~ the (smoothed) prior
    - wasserstein: per-column greedy transport

    Args:
        utilities: Finite utility per action
        prior: Prior beliefs q
        cfg: Penalty configuration

    Returns:
        BestResponseResult; support_restricted is set when plain KL keeps
        every unpenalized optimum out of reach because q is zero there
    """
    u = np.asarray(utilities, dtype=np.float64)
    if u.shape != (prior.size,):
        raise ValidationError(
            f"Expected {prior.size} utilities, got {u.size}", field="utilities"
        )
    if not np.all(np.isfinite(u)):
        raise ValidationError("Utilities must be finite", field="utilities")
    kind = cfg.cost_kind
    kind.validate_for(prior.size)

    restricted = False
    if cfg.lam == 0.0:
        policy = _argmax_dirac(prior.space, u)
    elif kind.tag == "entropy":
        policy = _tempered_softmax(prior.space, np.zeros(prior.size), u, cfg.lam)
    elif kind.tag in ("kl", "klStar"):
        anchor = (
            smooth_prior(prior, kind.kl_star_epsilon) if kind.tag == "klStar" else prior
        )
        with np.errstate(divide="ignore"):
            log_anchor = np.log(anchor.mass)
        policy = _tempered_softmax(prior.space, log_anchor, u, cfg.lam)
        best = np.flatnonzero(u == u.max())
        if kind.tag == "kl" and np.all(prior.mass[best] == 0.0):
            restricted = True
            logger.warning(
                "Prior assigns zero mass to every utility maximizer; "
                "KL keeps the policy on the prior support"
            )
    else:
        ot = kind.ot_config
        cost = build_cost_matrix(prior.space, ot.distance, ot.order)
        policy = _greedy_transport(u, prior, cost, cfg.lam)

    charged = charged_cost(kind, policy, prior)
    expected = float(np.dot(u, policy.mass))
    objective = expected if cfg.lam == 0.0 else expected - cfg.lam * charged
    return BestResponseResult(
        policy=policy,
        objective=objective,
        info_cost=charged,
        expected_utility=expected,
        support_restricted=restricted,
    )


def regularized_best_response(
    utilities: Sequence[float], prior: ActionDistribution, cfg: PenaltyConfig
) -> ActionDistribution:
    """argmax over policies of <U, pi> - lambda * I(pi, q)."""
    return best_response_report(utilities, prior, cfg).policy


def _state_priors(
    mdp: FiniteMdp, cfg: PenaltyConfig, priors: Optional[PriorInput]
) -> List[ActionDistribution]:
    if cfg.schedule != "fixed":
        raise ValidationError(
            "Policy iteration supports fixed priors only", field="schedule"
        )
    if priors is None:
        global_prior = make_prior(cfg.prior, mdp.action_space)
        return [global_prior] * mdp.state_count
    if isinstance(priors, ActionDistribution):
        return [priors] * mdp.state_count
    state_priors = list(priors)
    if len(state_priors) != mdp.state_count:
        raise ValidationError(
            f"Expected {mdp.state_count} per-state priors, got {len(state_priors)}",
            field="priors",
        )
    return state_priors


def penalized_policy_value(
    mdp: FiniteMdp,
    policy: Sequence[ActionDistribution],
    cfg: PenaltyConfig,
    priors: Optional[PriorInput] = None,
    tol: float = 1e-11,
) -> np.ndarray:
    """
    Per-state value of E[sum_t gamma^t (U - lambda * I(pi(.|s_t), q(.|s_t)))].

    The per-state charge is applied as a reward adjustment in every visit.
    """
    from features.finite_mdp import mdp_expected_return  # features imports this module

    state_priors = _state_priors(mdp, cfg, priors)
    penalty = np.array(
        [
            0.0 if cfg.lam == 0.0 else cfg.lam * charged_cost(cfg.cost_kind, p, q)
            for p, q in zip(policy, state_priors)
        ]
    )
    if np.any(np.isinf(penalty)):
        return np.full(mdp.state_count, -math.inf)
    return mdp_expected_return(mdp, list(policy), tol=tol, state_penalty=penalty)


def regularized_policy_iteration(
    mdp: FiniteMdp,
    cfg: PenaltyConfig,
    priors: Optional[PriorInput] = None,
    max_iter: int = 200,
    tol: float = 1e-10,
) -> RegularizedPolicy:
    """
    Alternate penalized evaluation and per-state regularized improvement.

    Args:
        mdp: Finite MDP
        cfg: Penalty configuration (fixed prior schedule)
        priors: One global prior, per-state priors, or None to build from cfg.prior
        max_iter: Improvement steps before giving up
        tol: Per-state total-variation change that counts as converged

    Returns:
        RegularizedPolicy; converged is False when max_iter was reached
    """
    state_priors = _state_priors(mdp, cfg, priors)
    policy: List[ActionDistribution] = list(state_priors)
    values = penalized_policy_value(mdp, policy, cfg, state_priors)

    converged = False
    iteration = 0
    for iteration in range(1, max_iter + 1):
        q_values = mdp.reward + mdp.discount * np.einsum(
            "san,n->sa", mdp.transition, values
        )
        improved = [
            regularized_best_response(q_values[s], state_priors[s], cfg)
            for s in range(mdp.state_count)
        ]
        change = max(p.total_variation(o) for p, o in zip(improved, policy))
        policy = improved
        values = penalized_policy_value(mdp, policy, cfg, state_priors)
        logger.debug(f"Policy iteration step {iteration}: max TV change {change:.3g}")
        if change <= tol:
            converged = True
            break

    if not converged:
        logger.warning(f"Regularized policy iteration did not converge in {max_iter} steps")
    objective = float(np.dot(mdp.initial_distribution, values))
    return RegularizedPolicy(
        per_state=tuple(policy),
        values=values,
        achieved_objective=objective,
        iterations=iteration,
        converged=converged,
    )

