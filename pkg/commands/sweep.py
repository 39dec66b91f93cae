"""sweep: repeated public goods play across a grid of lambda values."""

import argparse
import logging
from pathlib import Path
from typing import Any, Dict, List, Sequence

from commands.common import (
    GAME_DEFAULTS,
    OUTPUT_DEFAULTS,
    add_game_arguments,
    add_output_arguments,
    cost_kind,
    fixed_distribution,
    game_config,
    strategy_list,
)
from features.sweep_runner import SweepRunner, sweep_summary
from services.info_cost_service import parse_prior
from storage.report_writer import ReportWriter
from type_definitions.agent_types import OpponentSpec, PenaltyConfig
from utils import plotting
from utils.config import config
from utils.validators import ValidationError, validate_lambda_grid, validate_seed_list

logger = logging.getLogger("BoundedRational.Commands.Sweep")

DEFAULTS: Dict[str, Any] = {
    "cost": "wasserstein",
    "lambdas": "0,0.5,2,1000000",
    "prior": "dirac:20",
    "schedule": "fixed",
    "initial_prior": None,
    "opponents": "selfplay",
    "seeds": "0",
    "episodes": 1,
    "workers": config.SWEEP_WORKERS,
    "svg": False,
    **GAME_DEFAULTS,
    **OUTPUT_DEFAULTS,
}


def register(
    subparsers: Any, parents: Sequence[argparse.ArgumentParser] = ()
) -> argparse.ArgumentParser:
    parser: argparse.ArgumentParser = subparsers.add_parser(
        "sweep", help="Lambda sweep of regularized public goods play",
        parents=list(parents),
    )
    parser.add_argument("--cost", help="Information cost spec")
    parser.add_argument("--lambdas", help="Comma-separated lambda grid")
    parser.add_argument("--prior", help="Prior spec (uniform, dirac:K, previous, ...)")
    parser.add_argument(
        "--schedule",
        choices=["fixed", "previousPolicy", "realizedHistory"],
        help="How the prior evolves across rounds",
    )
    parser.add_argument(
        "--initial-prior", dest="initial_prior", help="Prior before any history exists"
    )
    parser.add_argument(
        "--opponents", help="'selfplay' or semicolon-separated fixed opponent strategies"
    )
    parser.add_argument("--seeds", help="Comma-separated explicit seeds")
    parser.add_argument("--episodes", type=int, help="Episodes per (lambda, seed) cell")
    parser.add_argument("--workers", type=int, help="Worker threads")
    parser.add_argument("--svg", action="store_true", default=None, help="Also write a figure")
    add_game_arguments(parser)
    add_output_arguments(parser)
    return parser


def run(options: Dict[str, Any]) -> List[Path]:
    cfg = game_config(options)
    space = cfg.action_space

    ok, lambdas = validate_lambda_grid(str(options["lambdas"]))
    if not ok:
        raise ValidationError(str(lambdas), field="lambdas")
    ok, seeds = validate_seed_list(str(options["seeds"]))
    if not ok:
        raise ValidationError(str(seeds), field="seeds")

    # lambda is a placeholder here; each cell sets its own.
    template = PenaltyConfig(
        0.0, cost_kind(options["cost"]), parse_prior(options["prior"]), options["schedule"]
    )
    if options["opponents"] in (None, "", "selfplay"):
        opponents = OpponentSpec()
    else:
        opponents = OpponentSpec(
            tuple(strategy_list(options["opponents"], cfg.group_size - 1, space))
        )
    initial = (
        fixed_distribution(options["initial_prior"], space)
        if options["initial_prior"]
        else None
    )

    runner = SweepRunner(cfg, template, opponents, options["episodes"], initial)
    rows = runner.run(lambdas, seeds, workers=options["workers"])  # type: ignore[arg-type]

    writer = ReportWriter(options["out"], options["format"])
    writer.write_sweep(rows)
    writer.write_sweep_summary(sweep_summary(rows))
    if options["svg"]:
        writer.written.append(plotting.plot_sweep(rows, Path(options["out"]) / "sweep.svg"))
    return writer.written
