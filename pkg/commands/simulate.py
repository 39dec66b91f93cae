"""simulate: public goods episodes for fixed player strategies."""

import argparse
import logging
from pathlib import Path
from typing import Any, Dict, List, Sequence

import numpy as np

from commands.common import (
    GAME_DEFAULTS,
    OUTPUT_DEFAULTS,
    add_game_arguments,
    add_output_arguments,
    game_config,
    strategy_list,
)
from features.public_goods import pgg_episode
from storage.report_writer import ReportWriter

logger = logging.getLogger("BoundedRational.Commands.Simulate")

DEFAULTS: Dict[str, Any] = {
    "strategies": "uniform",
    "episodes": 1,
    "seed": 0,
    **GAME_DEFAULTS,
    **OUTPUT_DEFAULTS,
}


def register(
    subparsers: Any, parents: Sequence[argparse.ArgumentParser] = ()
) -> argparse.ArgumentParser:
    parser: argparse.ArgumentParser = subparsers.add_parser(
        "simulate", help="Simulate public goods episodes",
        parents=list(parents),
    )
    parser.add_argument(
        "--strategies",
        help="One strategy for everyone or one per player, separated by ';'",
    )
    parser.add_argument("--episodes", type=int, help="Independent episodes")
    parser.add_argument("--seed", type=int, help="Run seed")
    add_game_arguments(parser)
    add_output_arguments(parser)
    return parser


def run(options: Dict[str, Any]) -> List[Path]:
    cfg = game_config(options)
    strategies = strategy_list(str(options["strategies"]), cfg.group_size, cfg.action_space)
    history = pgg_episode(strategies, cfg, seed=options["seed"], episodes=options["episodes"])

    writer = ReportWriter(options["out"], options["format"])
    writer.write_history(history)
    writer.write_payoff_totals(history)
    totals = np.sum([history.payoffs(e) for e in range(options["episodes"])], axis=(0, 1))
    logger.info(
        "Total payoff per player: " + ", ".join(f"{p}={v:g}" for p, v in enumerate(totals))
    )
    return writer.written
