"""
Text encodings of distributions and cost matrices.

- JSON object {"size": n, "mass": [...]}
- One-line CSV row of masses
- CSV grid for cost matrices
Floats are written with repr so a round trip is exact.
"""

import json
from typing import Any, Dict, Union

import numpy as np

from type_definitions.distribution_types import (
    ActionDistribution,
    ActionSpace,
    CostMatrix,
    GroundDistance,
)
from utils.validators import ValidationError, parse_float_list


def distribution_to_dict(dist: ActionDistribution) -> Dict[str, Any]:
    return {"size": dist.size, "mass": [float(m) for m in dist.mass]}


def distribution_from_dict(data: Dict[str, Any]) -> ActionDistribution:
    if not isinstance(data, dict) or "mass" not in data:
        raise ValidationError("Distribution object needs a 'mass' array", field="mass")
    mass = np.asarray(data["mass"], dtype=np.float64)
    size = int(data.get("size", mass.size))
    if size != mass.size:
        raise ValidationError(
            f"Distribution declares size {size} but has {mass.size} masses", field="size"
        )
    return ActionDistribution(ActionSpace(size), mass)


def distribution_to_json(dist: ActionDistribution) -> str:
    return json.dumps(distribution_to_dict(dist))


def distribution_from_json(text: str) -> ActionDistribution:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"Invalid distribution JSON: {e.msg}", field="mass")
    return distribution_from_dict(data)


def distribution_to_csv_row(dist: ActionDistribution) -> str:
    return ",".join(repr(float(m)) for m in dist.mass)


def distribution_from_csv_row(text: str) -> ActionDistribution:
    mass = parse_float_list(text.strip(), "mass")
    return ActionDistribution(ActionSpace(len(mass)), np.asarray(mass))


def cost_matrix_to_csv(cost: CostMatrix) -> str:
    """One CSV line per source action."""
    return "".join(
        ",".join(repr(float(c)) for c in row) + "\n" for row in np.asarray(cost.entries)
    )


def cost_matrix_from_csv(text: str, order: int = 1) -> CostMatrix:
    """
    Parse a square CSV grid of entries already raised to the order.

    The distance metadata is "absolute" when the grid equals |i - j| ** order
    and "fixed" otherwise; solvers use the entries only.
    """
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise ValidationError("Cost matrix CSV is empty", field="cost")
    rows = [parse_float_list(line, f"cost row {i + 1}") for i, line in enumerate(lines)]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValidationError(f"Cost matrix must be square ({n} rows)", field="cost")
    entries = np.asarray(rows)
    absolute = GroundDistance("absolute")
    if np.allclose(entries, absolute.matrix(n) ** order, rtol=0.0, atol=1e-12):
        return CostMatrix(entries, order=order, distance=absolute)
    off_diagonal = entries[~np.eye(n, dtype=bool)]
    value = float(off_diagonal.max()) if off_diagonal.size else 0.0
    return CostMatrix(entries, order=order, distance=GroundDistance("fixed", fixed_value=value))


def load_distribution(source: Union[str, Dict[str, Any]]) -> ActionDistribution:
    """Accept a JSON object, JSON text or a CSV row."""
    if isinstance(source, dict):
        return distribution_from_dict(source)
    text = source.strip()
    if text.startswith("{"):
        return distribution_from_json(text)
    if text.startswith("["):
        return distribution_from_dict({"mass": json.loads(text)})
    return distribution_from_csv_row(text)
