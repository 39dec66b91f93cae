"""metrics: information-cost metrics and change statistics of a panel."""

import argparse
import logging
from pathlib import Path
from typing import Any, Dict, List, Sequence

from commands.common import OUTPUT_DEFAULTS, add_output_arguments, require_one_of
from features.synthetic_panels import synth_panel
from services.analysis_service import (
    change_stats,
    contribution_summary,
    metric_table,
    policy_evolution,
    support_growth,
)
from storage.panel_repository import load_panel
from storage.report_writer import ReportWriter
from type_definitions.cost_types import OtConfig
from utils import plotting
from utils.config import config

logger = logging.getLogger("BoundedRational.Commands.Metrics")

DEFAULTS: Dict[str, Any] = {
    "panel": None,
    "synth": None,
    "subjects": 40,
    "rounds": 20,
    "seed": 0,
    "endowment": 40,
    "priors": "uniform,previousPolicy,optimalDirac",
    "metrics": "entropy,klStar,wasserstein",
    "klstar_epsilon": config.KLSTAR_EPSILON,
    "wasserstein_order": config.WASSERSTEIN_ORDER,
    "subject": None,
    "svg": False,
    **OUTPUT_DEFAULTS,
}


def register(
    subparsers: Any, parents: Sequence[argparse.ArgumentParser] = ()
) -> argparse.ArgumentParser:
    parser: argparse.ArgumentParser = subparsers.add_parser(
        "metrics", help="Metric table and decision-change statistics of a panel",
        parents=list(parents),
    )
    source = parser.add_argument_group("panel source")
    source.add_argument("--panel", help="Panel CSV (subject,group,round,contribution)")
    source.add_argument("--synth", help="Generator: rational | iidUniform | stickyDrift[:D[:S]]")
    source.add_argument("--subjects", type=int, help="Subjects of a synthetic panel")
    source.add_argument("--rounds", type=int, help="Rounds of a synthetic panel")
    source.add_argument("--seed", type=int, help="Seed of a synthetic panel")
    source.add_argument("--endowment", type=int, help="Maximum contribution")
    parser.add_argument("--priors", help="Comma-separated prior specs")
    parser.add_argument("--metrics", help="Comma-separated metrics")
    parser.add_argument("--klstar-epsilon", dest="klstar_epsilon", type=float)
    parser.add_argument("--wasserstein-order", dest="wasserstein_order", type=int)
    parser.add_argument("--subject", help="Analyse one subject instead of the pooled panel")
    parser.add_argument("--svg", action="store_true", default=None, help="Also write figures")
    add_output_arguments(parser)
    return parser


def run(options: Dict[str, Any]) -> List[Path]:
    source = require_one_of(options, ("panel", "synth"))
    if source == "panel":
        panel = load_panel(options["panel"], endowment=options["endowment"])
    else:
        panel = synth_panel(
            options["synth"],
            subjects=options["subjects"],
            rounds=options["rounds"],
            seed=options["seed"],
            endowment=options["endowment"],
        )

    report = metric_table(
        panel,
        priors=[p for p in options["priors"].split(",") if p.strip()],
        metrics=[m for m in options["metrics"].split(",") if m.strip()],
        kl_star_epsilon=options["klstar_epsilon"],
        subject=options["subject"],
        ot_config=OtConfig(order=options["wasserstein_order"]),
    )
    changes = change_stats(panel)
    summary = contribution_summary(panel)
    grown = support_growth(panel, options["subject"])
    summary["support_grew"] = summary["round"].isin(grown).astype(int)

    writer = ReportWriter(options["out"], options["format"])
    writer.write_metric_report(report)
    writer.write_change_report(changes)
    writer.write_frame(summary, "contributions_summary")

    if options["svg"]:
        out = Path(options["out"])
        evolution = policy_evolution(panel, options["subject"])
        writer.written.extend(
            [
                plotting.plot_metric_grid(report, out / "metric_grid.svg"),
                plotting.plot_change_histograms(changes, out / "changes_histograms.svg"),
                plotting.plot_pairwise_heatmap(changes, out / "changes_pairwise.svg"),
                plotting.plot_phase_diagram(changes, out / "changes_phase.svg"),
                plotting.plot_policy_evolution(evolution, out / "policy_evolution.svg"),
                plotting.plot_contribution_summary(summary, out / "contributions_summary.svg"),
            ]
        )
    logger.info(f"Stickiness fraction {changes.stickiness:.4f} over {changes.transitions} steps")
    logger.info(f"Historical support grew in {len(grown)} of {len(panel.rounds) - 1} rounds")
    return writer.written
