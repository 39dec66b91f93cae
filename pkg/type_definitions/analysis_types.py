"""
Type definitions for contribution panels and their reports.
"""

from dataclasses import dataclass, field
from typing import List, TypedDict

import numpy as np
import pandas as pd

from utils.validators import ValidationError, validate_nonnegative, validate_positive_int

PANEL_COLUMNS = ["subject", "group", "round", "contribution"]
GENERATOR_KINDS = ("rational", "iidUniform", "stickyDrift")
STICKINESS_THRESHOLD = 5


@dataclass(frozen=True)
class ContributionPanel:
    """
    Repeated-game contributions, one record per (subject, round).

    Rounds are 1-indexed. The frame is kept sorted by (subject, round).
    """

    frame: pd.DataFrame
    endowment: int = 40

    def __post_init__(self) -> None:
        missing = [c for c in PANEL_COLUMNS if c not in self.frame.columns]
        if missing:
            raise ValidationError(f"Panel is missing columns: {', '.join(missing)}", field="panel")
        if self.frame.empty:
            raise ValidationError("Panel contains no records", field="panel")
        frame = (
            self.frame[PANEL_COLUMNS]
            .astype({"round": "int64", "contribution": "int64"})
            .sort_values(["subject", "round"], kind="mergesort")
            .reset_index(drop=True)
        )
        bad = frame[(frame["contribution"] < 0) | (frame["contribution"] > self.endowment)]
        if not bad.empty:
            first = bad.iloc[0]
            raise ValidationError(
                f"Contribution {first['contribution']} of subject {first['subject']} "
                f"in round {first['round']} is outside 0..{self.endowment}",
                field="contribution",
            )
        if (frame["round"] < 1).any():
            raise ValidationError("Rounds are 1-indexed", field="round")
        duplicated = frame.duplicated(["subject", "round"])
        if duplicated.any():
            first = frame[duplicated].iloc[0]
            raise ValidationError(
                f"Duplicate record for subject {first['subject']} round {first['round']}",
                field="round",
            )
        object.__setattr__(self, "frame", frame)

    def __len__(self) -> int:
        return len(self.frame)

    @property
    def action_count(self) -> int:
        return self.endowment + 1

    @property
    def subjects(self) -> List[str]:
        return list(pd.unique(self.frame["subject"]))

    @property
    def rounds(self) -> List[int]:
        return sorted(int(r) for r in self.frame["round"].unique())

    def contributions_matrix(self) -> pd.DataFrame:
        """subjects x rounds table of contributions (NaN where missing)."""
        return self.frame.pivot(index="subject", columns="round", values="contribution")


@dataclass(frozen=True)
class SynthGenerator:
    """Synthetic panel generator and its parameters."""

    kind: str
    decay_rate: float = 0.05
    step_scale: float = 2.0

    def __post_init__(self) -> None:
        if self.kind not in GENERATOR_KINDS:
            raise ValidationError(
                f"Generator must be one of {GENERATOR_KINDS}", field="generator"
            )
        decay = validate_nonnegative(self.decay_rate, "decay_rate")
        if decay > 1.0:
            raise ValidationError("decay_rate must lie in [0, 1]", field="decay_rate")
        object.__setattr__(self, "decay_rate", decay)
        object.__setattr__(self, "step_scale", validate_nonnegative(self.step_scale, "step_scale"))

    def label(self) -> str:
        if self.kind == "stickyDrift":
            return f"stickyDrift:{self.decay_rate:g}:{self.step_scale:g}"
        return self.kind


class MetricRow(TypedDict):
    """One metric value for a (round, prior) pair; value may be inf."""

    round: int
    prior: str
    metric: str
    value: float


@dataclass
class MetricReport:
    rows: List[MetricRow] = field(default_factory=list)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=["round", "prior", "metric", "value"])

    def values(self, prior: str, metric: str) -> np.ndarray:
        """Metric values for one prior, ordered by round."""
        return np.array(
            [r["value"] for r in self.rows if r["prior"] == prior and r["metric"] == metric]
        )


@dataclass(frozen=True)
class ChangeReport:
    """
    Round-to-round decision-change statistics.

    delta_counts is indexed by change -E..E, abs_counts by 0..E, pairwise
    rows by the previous contribution and columns by the current one.
    """

    delta_counts: pd.Series
    abs_counts: pd.Series
    pairwise: np.ndarray
    phase: pd.DataFrame
    stickiness: float
    transitions: int
    threshold: int = STICKINESS_THRESHOLD
