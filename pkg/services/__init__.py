"""
Service layer for the bounded-rational decision toolkit.

This module provides the computational services: optimal transport,
information costs, regularized agents and panel analysis.
"""

from .agent_service import (
    best_response_report,
    regularized_best_response,
    regularized_policy_iteration,
)
from .analysis_service import change_stats, historical_policy, metric_table
from .info_cost_service import entropy, info_cost, kl_divergence, kl_star, wasserstein_cost
from .transport_service import sinkhorn_approx, wasserstein_1d_closed_form, wasserstein_exact

__all__ = [
    "wasserstein_exact",
    "wasserstein_1d_closed_form",
    "sinkhorn_approx",
    "entropy",
    "kl_divergence",
    "kl_star",
    "wasserstein_cost",
    "info_cost",
    "regularized_best_response",
    "best_response_report",
    "regularized_policy_iteration",
    "historical_policy",
    "metric_table",
    "change_stats",
]
