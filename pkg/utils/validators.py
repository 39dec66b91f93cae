"""
Validation utilities for numeric inputs and command-line spec strings.

This module provides the project-wide ValidationError, probability-vector
checks shared by every solver, and the parsers that turn CLI-style strings
("klstar:1e-6", "wasserstein:abs:1", "dirac:0") into typed configuration.
"""

import logging
import math
import re
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

logger = logging.getLogger("BoundedRational.Validators")

# Constants for validation
NORMALIZATION_TOL = 1e-6
COST_KIND_TAGS = ("entropy", "kl", "klStar", "wasserstein")
PRIOR_KIND_TAGS = ("uniform", "historical", "dirac", "custom", "previous")
DISTANCE_KIND_TAGS = ("absolute", "fixed", "boundary")
# Lower-cased alternative spellings, mapped to their canonical tag.
COST_TAG_ALIASES = {"kl*": "klStar"}
PRIOR_TAG_ALIASES = {
    "optimal": "dirac",
    "optimaldirac": "dirac",
    "previouspolicy": "previous",
}
DISTANCE_TAG_ALIASES = {"abs": "absolute"}

_NUMBER_PATTERN = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


class ValidationError(Exception):
    """Custom exception for validation errors."""

    def __init__(self, message: str, field: Optional[str] = None):
        self.message = message
        self.field = field
        super().__init__(self.message)


class SolverError(RuntimeError):
    """Raised when a solver reaches an internally inconsistent state."""


def validate_mass(
    mass: Any, size: Optional[int] = None, tol: float = NORMALIZATION_TOL
) -> np.ndarray:
    """
    Validate a probability vector and return an exactly renormalized copy.

    Args:
        mass: Sequence or array of nonnegative reals
        size: Expected length, if known
        tol: Accepted absolute deviation of the total mass from 1

    Returns:
        Float64 array summing to 1

    Raises:
        ValidationError: If the vector is empty, has the wrong length,
            contains negative or non-finite entries, or is not normalized
    """
    try:
        arr = np.asarray(mass, dtype=np.float64).reshape(-1)
    except (TypeError, ValueError) as e:
        raise ValidationError(f"Mass must be numeric: {e}", field="mass") from e

    if arr.size == 0:
        raise ValidationError("Mass vector cannot be empty", field="mass")
    if size is not None and arr.size != size:
        raise ValidationError(
            f"Mass has length {arr.size}, expected {size}", field="mass"
        )
    if not np.all(np.isfinite(arr)):
        raise ValidationError("Mass entries must be finite", field="mass")
    if np.any(arr < 0.0):
        raise ValidationError("Mass entries must be nonnegative", field="mass")

    total = float(arr.sum())
    if abs(total - 1.0) > tol:
        raise ValidationError(
            f"Mass sums to {total:.12g}, outside tolerance {tol:g} of 1",
            field="mass",
        )
    return arr / total


def validate_positive_int(value: Any, field: str, minimum: int = 1) -> int:
    """Coerce to int and check a lower bound."""
    if isinstance(value, bool) or (
        isinstance(value, float) and not value.is_integer()
    ):
        raise ValidationError(f"{field} must be an integer", field=field)
    try:
        as_int = int(value)
    except (TypeError, ValueError) as e:
        raise ValidationError(f"{field} must be an integer", field=field) from e
    if as_int < minimum:
        raise ValidationError(f"{field} must be >= {minimum}", field=field)
    return as_int


def validate_nonnegative(value: Any, field: str) -> float:
    """Coerce to a finite float >= 0."""
    try:
        as_float = float(value)
    except (TypeError, ValueError) as e:
        raise ValidationError(f"{field} must be a number", field=field) from e
    if not math.isfinite(as_float) or as_float < 0.0:
        raise ValidationError(f"{field} must be finite and >= 0", field=field)
    return as_float


def parse_number(text: str, field: str) -> float:
    """Parse a plain decimal or scientific-notation literal."""
    text = text.strip()
    if not _NUMBER_PATTERN.match(text):
        raise ValidationError(f"Invalid number for {field}: '{text}'", field=field)
    return float(text)


def parse_float_list(text: str, field: str) -> List[float]:
    """Parse a comma-separated list of numbers."""
    if not text or not text.strip():
        raise ValidationError(f"{field} cannot be empty", field=field)
    return [parse_number(part, field) for part in text.split(",") if part.strip()]


def parse_int_list(text: str, field: str) -> List[int]:
    """Parse a comma-separated list of integers."""
    values = parse_float_list(text, field)
    if any(not float(v).is_integer() for v in values):
        raise ValidationError(f"{field} must contain integers only", field=field)
    return [int(v) for v in values]


def validate_lambda_grid(
    grid: Union[str, Sequence[float]],
) -> Tuple[bool, Union[List[float], str]]:
    """
    Validate a grid of Lagrange multipliers.

    Args:
        grid: Comma-separated string or sequence of numbers

    Returns:
        Tuple of (is_valid, sorted_unique_grid_or_error_message)
    """
    try:
        values = parse_float_list(grid, "lambdas") if isinstance(grid, str) else [
            float(v) for v in grid
        ]
        if not values:
            return False, "Lambda grid cannot be empty"
        if any(not math.isfinite(v) or v < 0.0 for v in values):
            return False, "Lambda values must be finite and nonnegative"
        return True, sorted(set(values))
    except ValidationError as e:
        return False, e.message
    except (TypeError, ValueError):
        return False, "Invalid lambda grid format"


def validate_seed_list(
    seeds: Union[str, Sequence[int]],
) -> Tuple[bool, Union[List[int], str]]:
    """
    Validate explicit random seeds.

    Returns:
        Tuple of (is_valid, seeds_or_error_message)
    """
    try:
        values = parse_int_list(seeds, "seeds") if isinstance(seeds, str) else [
            int(s) for s in seeds
        ]
        if not values:
            return False, "At least one seed is required"
        if any(s < 0 for s in values):
            return False, "Seeds must be nonnegative"
        if len(set(values)) != len(values):
            return False, "Duplicate seeds are not allowed"
        return True, values
    except ValidationError as e:
        return False, e.message
    except (TypeError, ValueError):
        return False, "Invalid seed list format"


def split_spec(text: str, field: str) -> List[str]:
    """Split a colon-separated spec string into stripped parts; case is preserved."""
    if not isinstance(text, str) or not text.strip():
        raise ValidationError(f"{field} cannot be empty", field=field)
    return [part.strip() for part in text.strip().split(":")]


def canonical_tag(
    text: str, tags: Sequence[str], aliases: Dict[str, str], field: str, label: str
) -> str:
    """
    Resolve a kind tag, ignoring case, to its canonical spelling.

    Args:
        text: Tag as written by the caller
        tags: Canonical tags
        aliases: Lower-cased alternative spellings
        field: Field named in the error
        label: Kind named in the error ("information cost", "prior", ...)

    Raises:
        ValidationError: If the tag is neither canonical nor an alias
    """
    lowered = str(text).strip().lower()
    for tag in tags:
        if tag.lower() == lowered:
            return tag
    if lowered in aliases:
        return aliases[lowered]
    raise ValidationError(f"Unknown {label} '{text}'", field=field)
