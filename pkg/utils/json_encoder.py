"""Custom JSON encoder for NumPy and pandas data types and infinite values."""

import json
import math
from typing import Any, Iterator

import numpy as np
import pandas as pd


def _sanitize(obj: Any) -> Any:
    # json emits bare Infinity/NaN for floats without calling default().
    if isinstance(obj, float):
        if math.isnan(obj):
            return None
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return float(obj)
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _sanitize(obj.tolist())
    return obj


class CustomJSONEncoder(json.JSONEncoder):
    """JSON encoder mapping +inf to "inf" and NaN to null."""

    def iterencode(self, o: Any, _one_shot: bool = False) -> Iterator[str]:
        return super().iterencode(_sanitize(o), _one_shot)

    def default(self, obj: Any) -> Any:
        if isinstance(obj, np.generic):
            return _sanitize(obj.item())
        if isinstance(obj, np.ndarray):
            return _sanitize(obj.tolist())
        if pd.isna(obj):
            return None
        return super().default(obj)


def decode_extended(value: Any) -> Any:
    """Inverse of the encoder's infinity mapping for one scalar."""
    if value == "inf":
        return math.inf
    if value == "-inf":
        return -math.inf
    return value
