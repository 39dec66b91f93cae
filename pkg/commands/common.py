"""Flags and option conversions shared by several subcommands."""

import argparse
from typing import Any, Dict, List, Mapping, Optional, Tuple

from services.info_cost_service import make_prior, parse_info_cost, parse_prior
from type_definitions.cost_types import InfoCostKind, OtConfig
from type_definitions.distribution_types import ActionDistribution, ActionSpace
from type_definitions.game_types import PggConfig
from utils.config import config
from utils.validators import ValidationError

GAME_DEFAULTS: Dict[str, Any] = {
    "endowment": 40,
    "multiplier": 1.6,
    "group_size": 4,
    "rounds": 20,
    "granularity": 1,
    "observation_mode": "individual",
}

OUTPUT_DEFAULTS: Dict[str, Any] = {
    "out": config.OUTPUT_DIR,
    "format": "csv",
}


def add_output_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", help="Output directory")
    parser.add_argument("--format", choices=["csv", "json"], help="Table format")


def add_game_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("public goods game")
    group.add_argument("--endowment", type=int, help="Tokens per player and round")
    group.add_argument("--multiplier", type=float, help="Pool multiplier")
    group.add_argument("--group-size", dest="group_size", type=int, help="Players per group")
    group.add_argument("--rounds", type=int, help="Rounds per episode")
    group.add_argument("--granularity", type=int, help="Contribution step in tokens")
    group.add_argument(
        "--observation-mode",
        dest="observation_mode",
        choices=["individual", "groupTotal"],
        help="What players observe after each round",
    )


def game_config(options: Mapping[str, Any]) -> PggConfig:
    return PggConfig(
        endowment=options["endowment"],
        multiplier=options["multiplier"],
        group_size=options["group_size"],
        rounds=options["rounds"],
        contribution_granularity=options["granularity"],
        observation_mode=options["observation_mode"],
    )


def cost_kind(text: str, kl_star_epsilon: Optional[float] = None) -> InfoCostKind:
    """Parse a cost spec; bare specs take the configured epsilon and order."""
    parsed = parse_info_cost(text)
    if ":" in text:
        return parsed
    return InfoCostKind(
        parsed.tag,
        kl_star_epsilon=kl_star_epsilon if kl_star_epsilon is not None else config.KLSTAR_EPSILON,
        ot_config=OtConfig(order=config.WASSERSTEIN_ORDER),
    )


def fixed_distribution(text: str, space: ActionSpace) -> ActionDistribution:
    """A prior spec that needs no history (uniform, dirac:K, custom:...)."""
    kind = parse_prior(text)
    if kind.tag in ("previous", "historical"):
        raise ValidationError(
            f"'{text}' depends on play history and cannot be used here", field="prior"
        )
    return make_prior(kind, space)


def strategy_list(text: str, count: int, space: ActionSpace) -> List[ActionDistribution]:
    """Semicolon-separated fixed strategies; a single spec applies to everyone."""
    specs = [s.strip() for s in text.split(";") if s.strip()]
    if len(specs) == 1:
        specs = specs * count
    if len(specs) != count:
        raise ValidationError(
            f"Expected 1 or {count} strategies, got {len(specs)}", field="strategies"
        )
    return [fixed_distribution(spec, space) for spec in specs]


def require_one_of(options: Mapping[str, Any], keys: Tuple[str, str]) -> str:
    given = [k for k in keys if options.get(k)]
    if len(given) != 1:
        raise ValidationError(
            f"Exactly one of --{keys[0]} or --{keys[1]} is required", field=keys[0]
        )
    return given[0]
