"""Policy evaluation on tabular MDPs."""

import logging
from typing import Optional

import numpy as np

from type_definitions.game_types import FiniteMdp, PolicyInput

logger = logging.getLogger("BoundedRational.FiniteMdp")


def mdp_expected_return(
    mdp: FiniteMdp,
    policy: PolicyInput,
    tol: float = 1e-9,
    horizon: Optional[int] = None,
    state_penalty: Optional[np.ndarray] = None,
    max_iter: int = 1_000_000,
) -> np.ndarray:
    """
    Expected discounted return per state by iterative policy evaluation.

    Args:
        mdp: The MDP
        policy: (S, A) array or one ActionDistribution per state
        tol: Sup-norm accuracy of the fixed point
        horizon: Evaluate exactly this many steps instead of to convergence
        state_penalty: Per-state amount subtracted from the expected reward
        max_iter: Iteration cap for the infinite-horizon case

    Returns:
        Value of each state
    """
    pi = mdp.policy_matrix(policy)
    reward = np.einsum("sa,sa->s", pi, mdp.reward)
    if state_penalty is not None:
        reward = reward - np.asarray(state_penalty, dtype=np.float64)
    transition = np.einsum("sa,san->sn", pi, mdp.transition)
    gamma = mdp.discount

    values = np.zeros(mdp.state_count)
    if horizon is not None:
        for _ in range(int(horizon)):
            values = reward + gamma * transition @ values
        return values

    # ||V_{k+1} - V_k|| <= tol (1 - gamma) bounds the distance to the fixed point by tol.
    threshold = tol * (1.0 - gamma) if gamma > 0 else np.inf
    for iteration in range(max_iter):
        updated = reward + gamma * transition @ values
        delta = float(np.abs(updated - values).max())
        values = updated
        if delta <= threshold:
            logger.debug(f"Policy evaluation converged after {iteration + 1} sweeps")
            return values
    logger.warning(f"Policy evaluation stopped at max_iter={max_iter}")
    return values
