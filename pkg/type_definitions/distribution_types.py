"""
Type definitions for ordinal action spaces and optimal-transport objects.

Numeric objects are frozen dataclasses whose arrays are made read-only on
construction, so values can be shared freely between threads.
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from utils.validators import (
    DISTANCE_KIND_TAGS,
    DISTANCE_TAG_ALIASES,
    NORMALIZATION_TOL,
    ValidationError,
    canonical_tag,
    validate_mass,
    validate_nonnegative,
    validate_positive_int,
)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=np.float64, copy=True)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class ActionSpace:
    """Ordinal action space with actions indexed 0..size-1."""

    size: int
    labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "size", validate_positive_int(self.size, "size"))
        if self.labels is not None:
            labels = tuple(str(label) for label in self.labels)
            if len(labels) != self.size:
                raise ValidationError(
                    f"Expected {self.size} labels, got {len(labels)}", field="labels"
                )
            object.__setattr__(self, "labels", labels)

    def label(self, index: int) -> str:
        """Display name of an action."""
        if self.labels is not None:
            return self.labels[index]
        return str(index)


@dataclass(frozen=True, eq=False)
class ActionDistribution:
    """Probability vector over an ActionSpace (the policy or a prior)."""

    space: ActionSpace
    mass: np.ndarray

    def __post_init__(self) -> None:
        normalized = validate_mass(self.mass, self.space.size, NORMALIZATION_TOL)
        object.__setattr__(self, "mass", _frozen(normalized))

    @classmethod
    def uniform(cls, space: ActionSpace) -> "ActionDistribution":
        return cls(space, np.full(space.size, 1.0 / space.size))

    @classmethod
    def dirac(cls, space: ActionSpace, index: int) -> "ActionDistribution":
        if not 0 <= index < space.size:
            raise ValidationError(
                f"Dirac index {index} outside action range 0..{space.size - 1}",
                field="index",
            )
        mass = np.zeros(space.size)
        mass[index] = 1.0
        return cls(space, mass)

    @classmethod
    def from_counts(
        cls, space: ActionSpace, counts: Sequence[float]
    ) -> "ActionDistribution":
        counts_arr = np.asarray(counts, dtype=np.float64)
        total = counts_arr.sum()
        if total <= 0:
            raise ValidationError("Counts must contain positive mass", field="counts")
        return cls(space, counts_arr / total)

    @property
    def size(self) -> int:
        return self.space.size

    @property
    def support(self) -> np.ndarray:
        """Indices carrying positive mass."""
        return np.flatnonzero(self.mass > 0.0)

    def mean(self) -> float:
        """Expected action index."""
        return float(np.dot(np.arange(self.size), self.mass))

    def total_variation(self, other: "ActionDistribution") -> float:
        return 0.5 * float(np.abs(self.mass - other.mass).sum())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ActionDistribution):
            return NotImplemented
        return self.space == other.space and bool(
            np.array_equal(self.mass, other.mass)
        )

    def __hash__(self) -> int:
        return hash((self.space, self.mass.tobytes()))


@dataclass(frozen=True)
class GroundDistance:
    """
    Distance between two ordinal actions.

    kind "absolute": |i - j|; kind "fixed": fixed_value for i != j;
    kind "boundary": |i - j| plus boundary_penalty when i and j lie on
    different sides of boundary_index (side = index < boundary_index).
    """

    kind: str = "absolute"
    fixed_value: float = 1.0
    boundary_index: int = 0
    boundary_penalty: float = 0.0

    def __post_init__(self) -> None:
        kind = canonical_tag(
            self.kind, DISTANCE_KIND_TAGS, DISTANCE_TAG_ALIASES, "kind", "ground distance"
        )
        object.__setattr__(self, "kind", kind)
        object.__setattr__(
            self, "fixed_value", validate_nonnegative(self.fixed_value, "fixed_value")
        )
        object.__setattr__(
            self,
            "boundary_penalty",
            validate_nonnegative(self.boundary_penalty, "boundary_penalty"),
        )

    def matrix(self, size: int) -> np.ndarray:
        """Pairwise distance matrix d(i, j) over size actions."""
        idx = np.arange(size)
        gap = np.abs(idx[:, None] - idx[None, :]).astype(np.float64)
        if self.kind == "absolute":
            return gap
        if self.kind == "fixed":
            return np.where(gap > 0, self.fixed_value, 0.0)
        side = idx < self.boundary_index
        crossing = side[:, None] != side[None, :]
        return gap + np.where(crossing, self.boundary_penalty, 0.0)


@dataclass(frozen=True, eq=False)
class CostMatrix:
    """Ground cost matrix with entries d(i, j) ** order."""

    entries: np.ndarray
    order: int = 1
    distance: GroundDistance = field(default_factory=GroundDistance)

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", _frozen(self.entries))
        object.__setattr__(self, "order", validate_positive_int(self.order, "order"))

    @property
    def size(self) -> int:
        return int(self.entries.shape[0])

    @property
    def is_absolute_linear(self) -> bool:
        """True when the CDF closed form applies."""
        return self.distance.kind == "absolute" and self.order == 1

    def scaled(self, factor: float) -> "CostMatrix":
        return CostMatrix(self.entries * factor, self.order, self.distance)


@dataclass(frozen=True, eq=False)
class TransportPlan:
    """Coupling whose rows sum to the source (policy) and columns to the target (prior)."""

    entries: np.ndarray
    source_marginal: ActionDistribution
    target_marginal: ActionDistribution

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", _frozen(self.entries))

    def marginal_residual(self) -> float:
        """Largest absolute violation of either marginal constraint."""
        rows = np.abs(self.entries.sum(axis=1) - self.source_marginal.mass).max()
        cols = np.abs(self.entries.sum(axis=0) - self.target_marginal.mass).max()
        return float(max(rows, cols))


@dataclass(frozen=True, eq=False)
class OtSolution:
    """
    Result of a transport solve.

    dual_source is indexed by rows (policy side) and dual_target by columns
    (prior side), so dual_source[i] + dual_target[j] <= C[i][j] with
    equality on basic cells.
    """

    distance: float
    plan: TransportPlan
    dual_source: np.ndarray
    dual_target: np.ndarray
    iterations: int
    converged: bool = True
    method: str = "exact"

    def __post_init__(self) -> None:
        object.__setattr__(self, "dual_source", _frozen(self.dual_source))
        object.__setattr__(self, "dual_target", _frozen(self.dual_target))
