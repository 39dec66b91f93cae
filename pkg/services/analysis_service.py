"""
Analysis of repeated-game contribution panels.

This service encapsulates:
- Historical-average policies per subject or pooled
- Metric tables comparing information costs across prior beliefs
- Round-to-round decision-change statistics (stickiness)
"""

import logging
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from services.info_cost_service import (
    entropy,
    info_cost,
    kl_divergence,
    parse_info_cost,
    parse_prior,
)
from type_definitions.analysis_types import (
    STICKINESS_THRESHOLD,
    ChangeReport,
    ContributionPanel,
    MetricReport,
    MetricRow,
)
from type_definitions.cost_types import (
    DEFAULT_KLSTAR_EPSILON,
    InfoCostKind,
    OtConfig,
    PriorKind,
)
from type_definitions.distribution_types import ActionDistribution, ActionSpace
from utils.validators import ValidationError, validate_positive_int

logger = logging.getLogger("BoundedRational.Analysis")

DEFAULT_PRIORS = ("uniform", "previousPolicy", "optimalDirac")
DEFAULT_METRICS = ("entropy", "klStar", "wasserstein")


def historical_policy(
    panel: ContributionPanel, up_to_round: int, subject: Optional[str] = None
) -> ActionDistribution:
    """
    Empirical frequency of contributions in rounds 1..up_to_round.

    Args:
        panel: Contribution panel
        up_to_round: Last round included (t >= 1)
        subject: One subject, or None to pool all subjects

    Returns:
        Distribution over 0..endowment

    Raises:
        ValidationError: If no record exists at or before the round
    """
    t = validate_positive_int(up_to_round, "up_to_round")
    frame = panel.frame
    mask = frame["round"] <= t
    if subject is not None:
        mask &= frame["subject"] == subject
    contributions = frame.loc[mask, "contribution"].to_numpy(dtype=np.int64)
    if contributions.size == 0:
        who = f"subject {subject}" if subject is not None else "the panel"
        raise ValidationError(f"No data for {who} up to round {t}", field="round")
    counts = np.bincount(contributions, minlength=panel.action_count)
    return ActionDistribution.from_counts(ActionSpace(panel.action_count), counts)


def _metric_kind(
    name: str, kl_star_epsilon: float, ot_config: OtConfig
) -> Optional[InfoCostKind]:
    """Metric spec to a cost kind; None stands for the entropy H(policy)."""
    parsed = parse_info_cost(name)
    if parsed.tag == "entropy":
        return None
    bare = ":" not in name
    return InfoCostKind(
        parsed.tag,
        kl_star_epsilon=kl_star_epsilon if bare else parsed.kl_star_epsilon,
        ot_config=ot_config if bare else parsed.ot_config,
    )


def _prior_label(kind: PriorKind) -> str:
    labels = {"previous": "previousPolicy", "dirac": "optimalDirac"}
    if kind.tag == "dirac" and kind.dirac_index != 0:
        return kind.label()
    return labels.get(kind.tag, kind.label())


def _resolve_prior(
    kind: PriorKind,
    panel: ContributionPanel,
    t: int,
    subject: Optional[str],
    space: ActionSpace,
) -> ActionDistribution:
    if kind.tag == "previous":
        return historical_policy(panel, t - 1, subject)
    if kind.tag == "historical":
        return historical_policy(panel, t, subject)
    if kind.tag == "uniform":
        return ActionDistribution.uniform(space)
    if kind.tag == "dirac":
        return ActionDistribution.dirac(space, kind.dirac_index)
    return ActionDistribution(space, np.asarray(kind.custom_mass))


def metric_table(
    panel: ContributionPanel,
    priors: Sequence[str] = DEFAULT_PRIORS,
    metrics: Sequence[str] = DEFAULT_METRICS,
    kl_star_epsilon: float = DEFAULT_KLSTAR_EPSILON,
    subject: Optional[str] = None,
    include_raw_kl: bool = True,
    ot_config: Optional[OtConfig] = None,
) -> MetricReport:
    """
    Information-cost metrics of the historical policy against several priors.

    For each round t >= 2 the policy is the historical average up to t and
    the previous-policy prior is the historical average up to t - 1. The
    entropy metric is H(policy) and therefore identical for every prior.

    Args:
        panel: Contribution panel spanning at least two rounds
        priors: Prior specs (uniform, previousPolicy, optimalDirac, ...)
        metrics: entropy, klStar, wasserstein (kl also accepted)
        kl_star_epsilon: Smoothing of the KL* prior
        subject: One subject, or None to pool
        include_raw_kl: Also report plain KL (may be inf)
        ot_config: Ground distance and order of the wasserstein metric

    Returns:
        MetricReport sorted by (round, prior order, metric order)
    """
    rounds = panel.rounds
    if len(rounds) < 2:
        raise ValidationError("Metric table needs at least two rounds", field="panel")
    prior_kinds = [parse_prior(p) for p in priors]
    metric_names = list(metrics)
    if include_raw_kl and "kl" not in [m.lower() for m in metric_names]:
        metric_names.append("kl")
    ot = ot_config if ot_config is not None else OtConfig()
    kinds = {name: _metric_kind(name, kl_star_epsilon, ot) for name in metric_names}
    space = ActionSpace(panel.action_count)

    report = MetricReport()
    for t in rounds[1:]:
        policy = historical_policy(panel, t, subject)
        policy_entropy = entropy(policy)
        for prior_kind in prior_kinds:
            prior = _resolve_prior(prior_kind, panel, t, subject, space)
            for name in metric_names:
                kind = kinds[name]
                value = (
                    policy_entropy
                    if kind is None
                    else (
                        kl_divergence(policy, prior)
                        if kind.tag == "kl"
                        else info_cost(kind, policy, prior)
                    )
                )
                row: MetricRow = {
                    "round": int(t),
                    "prior": _prior_label(prior_kind),
                    "metric": kind.tag if kind is not None else "entropy",
                    "value": float(value),
                }
                report.rows.append(row)
    logger.info(
        f"Metric table: {len(rounds) - 1} round(s) x {len(prior_kinds)} prior(s) "
        f"x {len(metric_names)} metric(s)"
    )
    return report


def _transitions(panel: ContributionPanel) -> pd.DataFrame:
    """Consecutive-round (previous, current) contribution pairs per subject."""
    frame = panel.frame
    previous = frame.groupby("subject", sort=False)["contribution"].shift(1)
    previous_round = frame.groupby("subject", sort=False)["round"].shift(1)
    consecutive = previous_round == frame["round"] - 1
    pairs = pd.DataFrame(
        {
            "previous": previous[consecutive].astype("int64"),
            "current": frame.loc[consecutive, "contribution"].astype("int64"),
        }
    )
    pairs["delta"] = pairs["current"] - pairs["previous"]
    return pairs


def change_stats(
    panel: ContributionPanel, threshold: int = STICKINESS_THRESHOLD
) -> ChangeReport:
    """
    Decision-change statistics between consecutive rounds.

    Args:
        panel: Contribution panel spanning at least two rounds
        threshold: |delta| below this counts as a sticky step

    Returns:
        ChangeReport with delta and |delta| histograms, the pairwise
        transition count matrix, the phase table of mean delta per previous
        contribution and the stickiness fraction
    """
    if len(panel.rounds) < 2:
        raise ValidationError("Change statistics need at least two rounds", field="panel")
    pairs = _transitions(panel)
    if pairs.empty:
        raise ValidationError("Panel has no consecutive-round transitions", field="panel")
    endowment = panel.endowment
    size = panel.action_count

    delta_counts = (
        pairs["delta"].value_counts().reindex(range(-endowment, endowment + 1), fill_value=0)
    )
    delta_counts.index.name = "change"
    abs_counts = pairs["delta"].abs().value_counts().reindex(range(size), fill_value=0)
    abs_counts.index.name = "abs_change"

    pairwise = np.zeros((size, size), dtype=np.int64)
    np.add.at(pairwise, (pairs["previous"].to_numpy(), pairs["current"].to_numpy()), 1)

    phase = (
        pairs.groupby("previous", sort=True)["delta"]
        .agg(mean_change="mean", count="size")
        .reset_index()
    )

    sticky = float((pairs["delta"].abs() < threshold).mean())
    logger.info(
        f"Change statistics: {len(pairs)} transition(s), stickiness {sticky:.4f}"
    )
    return ChangeReport(
        delta_counts=delta_counts,
        abs_counts=abs_counts,
        pairwise=pairwise,
        phase=phase,
        stickiness=sticky,
        transitions=int(len(pairs)),
        threshold=threshold,
    )


def policy_evolution(
    panel: ContributionPanel, subject: Optional[str] = None
) -> pd.DataFrame:
    """rounds x actions matrix of historical policies."""
    rows: Dict[int, np.ndarray] = {}
    for t in panel.rounds:
        rows[t] = historical_policy(panel, t, subject).mass
    evolution = pd.DataFrame.from_dict(rows, orient="index", columns=list(range(panel.action_count)))
    evolution.index.name = "round"
    return evolution


def contribution_summary(panel: ContributionPanel) -> pd.DataFrame:
    """Per-round mean, median, quartiles and share of zero contributions."""
    grouped = panel.frame.groupby("round", sort=True)["contribution"]
    summary = pd.DataFrame(
        {
            "mean": grouped.mean(),
            "median": grouped.median(),
            "q25": grouped.quantile(0.25),
            "q75": grouped.quantile(0.75),
            "zero_share": grouped.apply(lambda c: float((c == 0).mean())),
            "subjects": grouped.size(),
        }
    )
    return summary.reset_index()


def support_growth(panel: ContributionPanel, subject: Optional[str] = None) -> List[int]:
    """Rounds t >= 2 whose historical policy gains support over round t - 1."""
    grown: List[int] = []
    rounds = panel.rounds
    for previous_t, t in zip(rounds, rounds[1:]):
        before = set(historical_policy(panel, previous_t, subject).support.tolist())
        after = set(historical_policy(panel, t, subject).support.tolist())
        if after - before:
            grown.append(t)
    return grown
