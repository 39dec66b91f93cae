"""
Report writer for analysis, sweep and simulation outputs.

Every table is written with a fixed column order and deterministic row
order, so identical runs produce byte-identical files. Infinite values
appear as the literal inf (CSV) or "inf" (JSON).
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

import pandas as pd

from type_definitions.agent_types import SweepRow
from type_definitions.analysis_types import ChangeReport, MetricReport
from type_definitions.game_types import PggHistory
from utils.json_encoder import CustomJSONEncoder
from utils.validators import ValidationError

logger = logging.getLogger("BoundedRational.ReportWriter")

OUTPUT_FORMATS = ("csv", "json")
SWEEP_COLUMNS = {
    "lam": "lambda",
    "cost_kind": "costKind",
    "prior": "prior",
    "seed": "seed",
    "round": "round",
    "mean_contribution": "meanContribution",
    "info_cost": "infoCost",
    "penalized_objective": "penalizedObjective",
}
HISTORY_COLUMNS = ["episode", "round", "player", "contribution", "payoff"]
TOTALS_COLUMNS = ["episode", "player", "contribution", "payoff"]


class ReportWriter:
    """Writes report tables into one output directory."""

    def __init__(self, out_dir: Union[str, Path], fmt: str = "csv") -> None:
        """
        Initialize the ReportWriter.

        Args:
            out_dir: Output directory (created on demand)
            fmt: csv or json
        """
        if fmt not in OUTPUT_FORMATS:
            raise ValidationError(f"Format must be one of {OUTPUT_FORMATS}", field="format")
        self.out_dir = Path(out_dir)
        self.fmt = fmt
        self.written: List[Path] = []

    def _target(self, stem: str) -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        return self.out_dir / f"{stem}.{self.fmt}"

    def write_frame(self, frame: pd.DataFrame, stem: str, index: bool = False) -> Path:
        target = self._target(stem)
        if self.fmt == "csv":
            frame.to_csv(target, index=index, lineterminator="\n")
        else:
            data = frame.reset_index() if index else frame
            records = data.to_dict(orient="records")
            target.write_text(
                json.dumps(records, cls=CustomJSONEncoder, indent=2) + "\n",
                encoding="utf-8",
            )
        self.written.append(target)
        logger.info(f"Wrote {target} ({len(frame)} rows)")
        return target

    def write_json(self, payload: Dict[str, Any], stem: str) -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        target = self.out_dir / f"{stem}.json"
        target.write_text(
            json.dumps(payload, cls=CustomJSONEncoder, indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
        self.written.append(target)
        logger.info(f"Wrote {target}")
        return target

    def write_metric_report(self, report: MetricReport) -> Path:
        return self.write_frame(report.to_frame(), "metric_report")

    def write_change_report(self, report: ChangeReport) -> List[Path]:
        """changes_delta, changes_abs, changes_pairwise, changes_phase, changes_summary."""
        delta = report.delta_counts.rename("count").reset_index()
        absolute = report.abs_counts.rename("count").reset_index()
        size = report.pairwise.shape[0]
        pairwise = pd.DataFrame(
            report.pairwise, index=pd.Index(range(size), name="previous"), columns=range(size)
        )
        summary = pd.DataFrame(
            [
                {
                    "transitions": report.transitions,
                    "threshold": report.threshold,
                    "stickiness": report.stickiness,
                }
            ]
        )
        return [
            self.write_frame(delta, "changes_delta"),
            self.write_frame(absolute, "changes_abs"),
            self.write_frame(pairwise, "changes_pairwise", index=True),
            self.write_frame(report.phase, "changes_phase"),
            self.write_frame(summary, "changes_summary"),
        ]

    def write_sweep(self, rows: Sequence[SweepRow]) -> Path:
        frame = pd.DataFrame(list(rows), columns=list(SWEEP_COLUMNS)).rename(columns=SWEEP_COLUMNS)
        return self.write_frame(frame, "sweep")

    def write_history(self, history: PggHistory) -> Path:
        frame = pd.DataFrame(history.rows, columns=HISTORY_COLUMNS)
        return self.write_frame(frame, "history")

    def write_sweep_summary(self, summary: pd.DataFrame) -> Path:
        return self.write_frame(summary.rename(columns=SWEEP_COLUMNS), "sweep_summary")

    def write_payoff_totals(self, history: PggHistory) -> Path:
        """Summed contribution and payoff per (episode, player)."""
        records: List[Dict[str, Any]] = []
        for episode in sorted({row["episode"] for row in history.rows}):
            contributed = history.contributions(episode).sum(axis=0)
            earned = history.payoffs(episode).sum(axis=0)
            for player in range(history.config.group_size):
                records.append(
                    {
                        "episode": episode,
                        "player": player,
                        "contribution": int(contributed[player]),
                        "payoff": float(earned[player]),
                    }
                )
        return self.write_frame(pd.DataFrame(records, columns=TOTALS_COLUMNS), "payoff_totals")
