"""
Type definitions for information-processing costs and prior beliefs.
"""

from dataclasses import dataclass, field
from typing import Optional, Tuple

from type_definitions.distribution_types import GroundDistance
from utils.validators import (
    COST_KIND_TAGS,
    COST_TAG_ALIASES,
    PRIOR_KIND_TAGS,
    PRIOR_TAG_ALIASES,
    ValidationError,
    canonical_tag,
    validate_positive_int,
)

DEFAULT_KLSTAR_EPSILON = 1e-6


@dataclass(frozen=True)
class OtConfig:
    """Ground distance plus order n for the Wasserstein cost."""

    distance: GroundDistance = field(default_factory=GroundDistance)
    order: int = 1
    root: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "order", validate_positive_int(self.order, "order"))

    def label(self) -> str:
        if self.distance.kind == "fixed":
            body = f"fixed:{self.distance.fixed_value:g}"
        elif self.distance.kind == "boundary":
            body = (
                f"boundary:{self.distance.boundary_index}:"
                f"{self.distance.boundary_penalty:g}"
            )
        else:
            body = "abs"
        return f"{body}:{self.order}"


@dataclass(frozen=True)
class InfoCostKind:
    """One of the information costs I(pi, q): entropy, kl, klStar, wasserstein."""

    tag: str
    kl_star_epsilon: float = DEFAULT_KLSTAR_EPSILON
    ot_config: OtConfig = field(default_factory=OtConfig)

    def __post_init__(self) -> None:
        tag = canonical_tag(
            self.tag, COST_KIND_TAGS, COST_TAG_ALIASES, "tag", "information cost"
        )
        object.__setattr__(self, "tag", tag)
        if not self.kl_star_epsilon > 0.0:
            raise ValidationError("klStar epsilon must be positive", "kl_star_epsilon")

    def validate_for(self, size: int) -> None:
        """Check size-dependent invariants (klStar epsilon below 1/size)."""
        if self.tag == "klStar" and not self.kl_star_epsilon < 1.0 / size:
            raise ValidationError(
                f"klStar epsilon {self.kl_star_epsilon:g} must lie in (0, 1/{size})",
                field="kl_star_epsilon",
            )

    def label(self) -> str:
        if self.tag == "klStar":
            return f"klstar:{self.kl_star_epsilon:g}"
        if self.tag == "wasserstein":
            return f"wasserstein:{self.ot_config.label()}"
        return self.tag


@dataclass(frozen=True)
class PriorKind:
    """
    Prior-belief constructor.

    tag "previous" is a placeholder resolved by callers that know the
    previous round (analysis tables, repeated-play agents).
    """

    tag: str
    dirac_index: int = 0
    custom_mass: Optional[Tuple[float, ...]] = None

    def __post_init__(self) -> None:
        tag = canonical_tag(self.tag, PRIOR_KIND_TAGS, PRIOR_TAG_ALIASES, "tag", "prior")
        object.__setattr__(self, "tag", tag)
        if tag == "custom" and not self.custom_mass:
            raise ValidationError("Custom prior requires a mass vector", "custom_mass")
        if self.custom_mass is not None:
            object.__setattr__(
                self, "custom_mass", tuple(float(m) for m in self.custom_mass)
            )

    def label(self) -> str:
        if self.tag == "dirac":
            return f"dirac:{self.dirac_index}"
        if self.tag == "custom" and self.custom_mass is not None:
            return "custom:" + ",".join(f"{m:g}" for m in self.custom_mass)
        return self.tag
