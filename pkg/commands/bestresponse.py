"""bestresponse: one-step regularized best response, printed as JSON."""

import argparse
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Sequence

import numpy as np

from commands.common import OUTPUT_DEFAULTS, add_output_arguments, cost_kind, require_one_of
from services.agent_service import best_response_report
from services.info_cost_service import make_prior, parse_prior
from storage.distribution_codec import load_distribution
from storage.report_writer import ReportWriter
from type_definitions.agent_types import PenaltyConfig
from type_definitions.distribution_types import ActionSpace
from utils.json_encoder import CustomJSONEncoder
from utils.validators import ValidationError, parse_float_list

logger = logging.getLogger("BoundedRational.Commands.BestResponse")

DEFAULTS: Dict[str, Any] = {
    "utilities": None,
    "utilities_file": None,
    "prior": "uniform",
    "cost": "entropy",
    "lam": 1.0,
    "save": False,
    **OUTPUT_DEFAULTS,
}


def register(
    subparsers: Any, parents: Sequence[argparse.ArgumentParser] = ()
) -> argparse.ArgumentParser:
    parser: argparse.ArgumentParser = subparsers.add_parser(
        "bestresponse", help="Regularized best response to a utility vector",
        parents=list(parents),
    )
    parser.add_argument("--utilities", help="Comma-separated utilities")
    parser.add_argument(
        "--utilities-file", dest="utilities_file", help="File with a CSV row or JSON array"
    )
    parser.add_argument("--prior", help="Prior spec (uniform, dirac:K, custom:m0,m1,...)")
    parser.add_argument("--cost", help="Information cost spec")
    parser.add_argument("--lambda", dest="lam", type=float, help="Lagrange multiplier")
    parser.add_argument(
        "--save", action="store_true", default=None, help="Also write best_response.json"
    )
    add_output_arguments(parser)
    return parser


def _utilities(options: Dict[str, Any]) -> np.ndarray:
    source = require_one_of(options, ("utilities", "utilities_file"))
    if source == "utilities":
        return np.asarray(parse_float_list(str(options["utilities"]), "utilities"))
    path = Path(options["utilities_file"])
    if not path.is_file():
        raise ValidationError(f"Utilities file not found: {path}", field="utilities_file")
    text = path.read_text(encoding="utf-8").strip()
    if text.startswith("["):
        try:
            return np.asarray(json.loads(text), dtype=np.float64)
        except (json.JSONDecodeError, ValueError, TypeError):
            raise ValidationError(f"Invalid utilities array in {path}", field="utilities_file")
    return np.asarray(parse_float_list(text.splitlines()[0], "utilities"))


def run(options: Dict[str, Any]) -> Dict[str, Any]:
    utilities = _utilities(options)
    space = ActionSpace(int(utilities.size))
    prior_text = str(options["prior"])
    if prior_text.lstrip().startswith(("{", "[")):
        prior = load_distribution(prior_text)
    else:
        kind = parse_prior(prior_text)
        if kind.tag in ("previous", "historical"):
            raise ValidationError("A one-step best response needs a fixed prior", field="prior")
        prior = make_prior(kind, space)
    if prior.size != space.size:
        raise ValidationError(
            f"Prior covers {prior.size} actions, utilities cover {space.size}", field="prior"
        )

    cost = cost_kind(str(options["cost"]))
    result = best_response_report(utilities, prior, PenaltyConfig(options["lam"], cost))
    payload: Dict[str, Any] = {
        "lambda": options["lam"],
        "cost": cost.label(),
        "policy": result.policy.mass,
        "objective": result.objective,
        "infoCost": result.info_cost,
        "expectedUtility": result.expected_utility,
        "supportRestricted": result.support_restricted,
    }
    print(json.dumps(payload, cls=CustomJSONEncoder, sort_keys=True))
    if options["save"]:
        written: List[Path] = [ReportWriter(options["out"]).write_json(payload, "best_response")]
        payload["written"] = [str(p) for p in written]
    return payload
