"""
Command-line subcommands.

Each module exposes DEFAULTS (its option keys, also the keys of a run
config file), register(subparsers) and run(options).
"""

from types import ModuleType
from typing import Dict

from . import bestresponse, metrics, simulate, sweep, synth

COMMANDS: Dict[str, ModuleType] = {
    "metrics": metrics,
    "sweep": sweep,
    "bestresponse": bestresponse,
    "simulate": simulate,
    "synth": synth,
}

__all__ = ["COMMANDS"]
