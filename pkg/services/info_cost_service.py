"""
Information-processing costs I(pi, q) and prior-belief constructors.

Costs use natural logarithms. Plain KL returns +inf whenever the policy puts
mass where the prior has none; KL* smooths the prior only.
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np
from scipy.special import entr, rel_entr

from services.transport_service import (
    build_cost_matrix,
    wasserstein_1d_closed_form,
    wasserstein_exact,
)
from type_definitions.cost_types import InfoCostKind, OtConfig, PriorKind
from type_definitions.distribution_types import (
    ActionDistribution,
    ActionSpace,
    GroundDistance,
)
from utils.validators import (
    COST_KIND_TAGS,
    COST_TAG_ALIASES,
    DISTANCE_KIND_TAGS,
    DISTANCE_TAG_ALIASES,
    PRIOR_KIND_TAGS,
    PRIOR_TAG_ALIASES,
    ValidationError,
    canonical_tag,
    parse_float_list,
    parse_number,
    split_spec,
)

logger = logging.getLogger("BoundedRational.InfoCosts")


def _same_space(p: ActionDistribution, q: ActionDistribution) -> None:
    if p.size != q.size:
        raise ValidationError(
            f"Dimension mismatch: {p.size} vs {q.size} actions", field="q"
        )


def entropy(p: ActionDistribution) -> float:
    """Shannon entropy in nats with 0 log 0 = 0."""
    value = float(entr(p.mass).sum())
    return min(max(value, 0.0), math.log(p.size))


def kl_divergence(p: ActionDistribution, q: ActionDistribution) -> float:
    """KL(p || q); +inf exactly when p has mass outside the support of q."""
    _same_space(p, q)
    if np.any((p.mass > 0.0) & (q.mass == 0.0)):
        return math.inf
    return max(float(rel_entr(p.mass, q.mass).sum()), 0.0)


def smooth_prior(q: ActionDistribution, epsilon: float) -> ActionDistribution:
    """Raise every entry of q to at least epsilon, then renormalize."""
    if not 0.0 < epsilon < 1.0 / q.size:
        raise ValidationError(
            f"epsilon {epsilon:g} must lie in (0, 1/{q.size})", field="epsilon"
        )
    raised = np.maximum(q.mass, epsilon)
    return ActionDistribution(q.space, raised / raised.sum())


def kl_star(p: ActionDistribution, q: ActionDistribution, epsilon: float) -> float:
    """KL(p || smooth(q)); always finite."""
    _same_space(p, q)
    return kl_divergence(p, smooth_prior(q, epsilon))


def wasserstein_cost(
    p: ActionDistribution, q: ActionDistribution, cfg: OtConfig
) -> float:
    """
    Wasserstein cost between policy and prior.

    Uses the CDF closed form for absolute distance with order 1 and the exact
    transportation solver otherwise.
    """
    _same_space(p, q)
    if cfg.distance.kind == "absolute" and cfg.order == 1:
        return wasserstein_1d_closed_form(p, q)
    cost = build_cost_matrix(p.space, cfg.distance, cfg.order)
    return wasserstein_exact(p, q, cost, root=cfg.root).distance


def info_cost(
    kind: InfoCostKind, p: ActionDistribution, q: ActionDistribution
) -> float:
    """
    Dispatch to the cost named by kind.

    The entropy kind ignores q by definition.
    """
    kind.validate_for(p.size)
    if kind.tag == "entropy":
        return entropy(p)
    if kind.tag == "kl":
        return kl_divergence(p, q)
    if kind.tag == "klStar":
        return kl_star(p, q, kind.kl_star_epsilon)
    return wasserstein_cost(p, q, kind.ot_config)


def make_prior(
    kind: PriorKind,
    space: ActionSpace,
    history: Optional[Sequence[int]] = None,
) -> ActionDistribution:
    """
    Build a prior-belief distribution.

    Args:
        kind: Prior constructor
        space: Action space
        history: Past action indices (required for the historical kind)

    Returns:
        The prior distribution

    Raises:
        ValidationError: On empty history for historical priors, an out of
            range Dirac index, or an invalid custom mass
    """
    if kind.tag == "uniform":
        return ActionDistribution.uniform(space)
    if kind.tag == "dirac":
        return ActionDistribution.dirac(space, kind.dirac_index)
    if kind.tag == "custom":
        return ActionDistribution(space, np.asarray(kind.custom_mass))
    if kind.tag == "historical":
        if history is None or len(history) == 0:
            raise ValidationError("Historical prior requires a non-empty history")
        actions = np.asarray(history, dtype=np.int64)
        if actions.min() < 0 or actions.max() >= space.size:
            raise ValidationError(
                f"History contains actions outside 0..{space.size - 1}",
                field="history",
            )
        return ActionDistribution.from_counts(
            space, np.bincount(actions, minlength=space.size)
        )
    raise ValidationError(
        "The previous-policy prior depends on the caller's round; "
        "resolve it before calling make_prior",
        field="prior",
    )


def parse_info_cost(text: str) -> InfoCostKind:
    """
    Parse a cost spec string.

    Grammar: "entropy" | "kl" | "klstar[:EPS]" |
    "wasserstein[:abs | :fixed:D | :boundary:IDX:PEN][:ORDER]".
    """
    parts = split_spec(text, "cost")
    tag = canonical_tag(
        parts[0], COST_KIND_TAGS, COST_TAG_ALIASES, "cost", "information cost"
    )
    if tag in ("entropy", "kl") and len(parts) == 1:
        return InfoCostKind(tag)
    if tag == "klStar" and len(parts) <= 2:
        if len(parts) == 1:
            return InfoCostKind("klStar")
        return InfoCostKind("klStar", kl_star_epsilon=parse_number(parts[1], "epsilon"))
    if tag == "wasserstein":
        return InfoCostKind("wasserstein", ot_config=_parse_ot_config(parts[1:], text))
    raise ValidationError(f"Invalid {tag} spec '{text}'", field="cost")


def _parse_ot_config(parts: Sequence[str], text: str) -> OtConfig:
    if not parts:
        return OtConfig()
    kind = canonical_tag(
        parts[0], DISTANCE_KIND_TAGS, DISTANCE_TAG_ALIASES, "cost", "ground distance"
    )
    if kind == "absolute" and len(parts) <= 2:
        distance = GroundDistance("absolute")
        rest = parts[1:]
    elif kind == "fixed" and len(parts) in (2, 3):
        distance = GroundDistance("fixed", fixed_value=parse_number(parts[1], "fixed"))
        rest = parts[2:]
    elif kind == "boundary" and len(parts) in (3, 4):
        index = parse_number(parts[1], "boundary_index")
        if not index.is_integer():
            raise ValidationError(f"Invalid boundary index in '{text}'", "cost")
        distance = GroundDistance(
            "boundary",
            boundary_index=int(index),
            boundary_penalty=parse_number(parts[2], "boundary_penalty"),
        )
        rest = parts[3:]
    else:
        raise ValidationError(f"Invalid wasserstein spec '{text}'", field="cost")
    order = parse_number(rest[0], "order") if rest else 1.0
    if not order.is_integer() or order < 1:
        raise ValidationError(f"Order must be a positive integer in '{text}'", "cost")
    return OtConfig(distance=distance, order=int(order))


def parse_prior(text: str) -> PriorKind:
    """
    Parse a prior spec string.

    Grammar: "uniform" | "historical" | "previous" | "dirac:K" |
    "custom:m0,m1,...".
    """
    parts = split_spec(text, "prior")
    tag = canonical_tag(parts[0], PRIOR_KIND_TAGS, PRIOR_TAG_ALIASES, "prior", "prior")
    if tag in ("uniform", "historical", "previous") and len(parts) == 1:
        return PriorKind(tag)
    if tag == "dirac" and len(parts) <= 2:
        index = parse_number(parts[1], "dirac_index") if len(parts) == 2 else 0.0
        if not index.is_integer() or index < 0:
            raise ValidationError(f"Invalid dirac spec '{text}'", field="prior")
        return PriorKind("dirac", dirac_index=int(index))
    if tag == "custom" and len(parts) == 2:
        return PriorKind("custom", custom_mass=tuple(parse_float_list(parts[1], "mass")))
    raise ValidationError(f"Invalid {tag} prior '{text}'", field="prior")
