"""synth: write a synthetic contribution panel."""

import argparse
from pathlib import Path
from typing import Any, Dict, List, Sequence

from commands.common import OUTPUT_DEFAULTS, add_output_arguments
from features.synthetic_panels import synth_panel
from storage.panel_repository import save_panel
from storage.report_writer import ReportWriter

DEFAULTS: Dict[str, Any] = {
    "generator": "stickyDrift",
    "subjects": 40,
    "rounds": 20,
    "seed": 0,
    "endowment": 40,
    "group_size": 4,
    **OUTPUT_DEFAULTS,
}


def register(
    subparsers: Any, parents: Sequence[argparse.ArgumentParser] = ()
) -> argparse.ArgumentParser:
    parser: argparse.ArgumentParser = subparsers.add_parser(
        "synth", help="Generate a synthetic contribution panel",
        parents=list(parents),
    )
    parser.add_argument("--generator", help="rational | iidUniform | stickyDrift[:D[:S]]")
    parser.add_argument("--subjects", type=int, help="Number of subjects")
    parser.add_argument("--rounds", type=int, help="Rounds per subject")
    parser.add_argument("--seed", type=int, help="Run seed")
    parser.add_argument("--endowment", type=int, help="Maximum contribution")
    parser.add_argument("--group-size", dest="group_size", type=int, help="Subjects per group")
    add_output_arguments(parser)
    return parser


def run(options: Dict[str, Any]) -> List[Path]:
    panel = synth_panel(
        options["generator"],
        subjects=options["subjects"],
        rounds=options["rounds"],
        seed=options["seed"],
        endowment=options["endowment"],
        group_size=options["group_size"],
    )
    if options["format"] == "csv":
        return [save_panel(panel, Path(options["out"]) / "panel.csv")]
    writer = ReportWriter(options["out"], "json")
    writer.write_frame(panel.frame, "panel")
    return writer.written
