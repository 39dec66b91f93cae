"""
Panel repository for reading and writing contribution panel CSV files.

Input schema: header subject,group,round,contribution; one record per
(subject, round). Malformed rows are reported with their file line number.
"""

import logging
from pathlib import Path
from typing import List, Union

import pandas as pd

from type_definitions.analysis_types import PANEL_COLUMNS, ContributionPanel
from utils.validators import ValidationError

logger = logging.getLogger("BoundedRational.PanelRepository")

PathLike = Union[str, Path]


def _cell(value: object) -> str:
    """Cell text; missing fields read as empty."""
    return "" if pd.isna(value) else str(value).strip()


def _parse_int(value: object, column: str, line: int) -> int:
    text = _cell(value)
    try:
        number = float(text)
    except ValueError:
        raise ValidationError(
            f"Line {line}: {column} '{text}' is not a number", field=column
        )
    if not number.is_integer():
        raise ValidationError(
            f"Line {line}: {column} '{text}' is not an integer", field=column
        )
    return int(number)


class PanelRepository:
    """Reads and writes ContributionPanel CSV files."""

    def __init__(self, endowment: int = 40) -> None:
        """
        Initialize the PanelRepository.

        Args:
            endowment: Upper bound of valid contributions
        """
        self.endowment = endowment

    def load(self, path: PathLike) -> ContributionPanel:
        """
        Load and validate a panel file.

        Raises:
            ValidationError: On a missing file, missing columns, an empty
                panel, non-integer values, out-of-range contributions or
                duplicate (subject, round) records
        """
        source = Path(path)
        try:
            raw = pd.read_csv(
                source,
                dtype=str,
                keep_default_na=False,
                skipinitialspace=True,
                skip_blank_lines=False,
            )
        except FileNotFoundError:
            raise ValidationError(f"Panel file not found: {source}", field="panel")
        except pd.errors.EmptyDataError:
            raise ValidationError(f"Panel file {source} is empty", field="panel")

        raw.columns = [str(c).strip().lower() for c in raw.columns]
        missing = [c for c in PANEL_COLUMNS if c not in raw.columns]
        if missing:
            raise ValidationError(
                f"Panel file {source} is missing columns: {', '.join(missing)}",
                field="panel",
            )
        seen = {}
        records: List[dict] = []
        # Line 1 is the header; blank lines keep their place in the count.
        for line, row in enumerate(raw[PANEL_COLUMNS].itertuples(index=False), start=2):
            if all(not _cell(value) for value in row):
                continue
            subject, group = _cell(row.subject), _cell(row.group)
            if not subject:
                raise ValidationError(f"Line {line}: subject is empty", field="subject")
            round_no = _parse_int(row.round, "round", line)
            contribution = _parse_int(row.contribution, "contribution", line)
            if round_no < 1:
                raise ValidationError(f"Line {line}: round {round_no} must be >= 1", field="round")
            if not 0 <= contribution <= self.endowment:
                raise ValidationError(
                    f"Line {line}: contribution {contribution} outside 0..{self.endowment}",
                    field="contribution",
                )
            key = (subject, round_no)
            if key in seen:
                raise ValidationError(
                    f"Line {line}: duplicate record for subject {subject} round "
                    f"{round_no} (first on line {seen[key]})",
                    field="round",
                )
            seen[key] = line
            records.append(
                {
                    "subject": subject,
                    "group": group,
                    "round": round_no,
                    "contribution": contribution,
                }
            )

        if not records:
            raise ValidationError(f"Panel file {source} contains no records", field="panel")

        panel = ContributionPanel(pd.DataFrame(records, columns=PANEL_COLUMNS), self.endowment)
        logger.info(
            f"Loaded panel {source}: {len(panel)} records, {len(panel.subjects)} subjects"
        )
        return panel

    def save(self, panel: ContributionPanel, path: PathLike) -> Path:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        panel.frame[PANEL_COLUMNS].to_csv(target, index=False, lineterminator="\n")
        logger.info(f"Panel written to {target} ({len(panel)} records)")
        return target


def load_panel(path: PathLike, endowment: int = 40) -> ContributionPanel:
    return PanelRepository(endowment).load(path)


def save_panel(panel: ContributionPanel, path: PathLike) -> Path:
    return PanelRepository(panel.endowment).save(panel, path)
