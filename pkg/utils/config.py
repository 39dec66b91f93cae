"""
Centralized configuration management for the bounded-rational toolkit.

Environment variables (optionally from a .env file) set process-wide
defaults; a declarative run file fixes the options of one command so that
the run can be repeated exactly.
"""

import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

from dotenv import load_dotenv

from utils.json_encoder import CustomJSONEncoder
from utils.validators import ValidationError

# Load environment variables from .env file
load_dotenv(".env")

logger = logging.getLogger("BoundedRational.Config")

COMMANDS = ("metrics", "sweep", "bestresponse", "simulate", "synth")


class Config:
    """Process-wide settings loaded from the environment."""

    def __init__(self) -> None:
        """Initialize configuration by loading and validating environment variables."""
        self._load_config()
        self._validate_config()

    def _load_config(self) -> None:
        """Load all configuration values from environment variables."""
        self.LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()
        self.LOG_DIR = os.getenv("LOG_DIR", "logs")
        self.OUTPUT_DIR = os.getenv("OUTPUT_DIR", "results")

        # Numerical defaults
        self.SWEEP_WORKERS = int(os.getenv("SWEEP_WORKERS", "1"))
        self.KLSTAR_EPSILON = float(os.getenv("KLSTAR_EPSILON", "1e-6"))
        self.WASSERSTEIN_ORDER = int(os.getenv("WASSERSTEIN_ORDER", "1"))

        logger.debug("Configuration loaded successfully")

    def _validate_config(self) -> None:
        """Validate ranges of the numerical settings."""
        problems = []
        if self.SWEEP_WORKERS < 1:
            problems.append("SWEEP_WORKERS must be at least 1")
        if not 0.0 < self.KLSTAR_EPSILON < 1.0:
            problems.append("KLSTAR_EPSILON must lie in (0, 1)")
        if self.WASSERSTEIN_ORDER < 1:
            problems.append("WASSERSTEIN_ORDER must be at least 1")
        if self.LOG_LEVEL not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            problems.append(f"Unknown LOG_LEVEL {self.LOG_LEVEL}")

        if problems:
            error_msg = f"Invalid configuration: {'; '.join(problems)}"
            logger.critical(error_msg)
            raise ValueError(error_msg)

    def get_config_summary(self) -> Dict[str, Any]:
        """Get a summary of configuration for logging."""
        return {
            "LOG_LEVEL": self.LOG_LEVEL,
            "LOG_DIR": self.LOG_DIR,
            "OUTPUT_DIR": self.OUTPUT_DIR,
            "SWEEP_WORKERS": self.SWEEP_WORKERS,
            "KLSTAR_EPSILON": self.KLSTAR_EPSILON,
            "WASSERSTEIN_ORDER": self.WASSERSTEIN_ORDER,
        }


@dataclass
class RunConfig:
    """
    Declarative run file: {"command": ..., "options": {...}}.

    Option keys are the destinations of the command's CLI flags.
    """

    command: str
    options: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ValidationError(
                f"Unknown command '{self.command}', expected one of {COMMANDS}",
                field="command",
            )

    @classmethod
    def load(cls, path: Union[str, Path]) -> "RunConfig":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ValidationError(f"Config file not found: {path}", field="config")
        except json.JSONDecodeError as e:
            raise ValidationError(
                f"Config file {path} is not valid JSON (line {e.lineno}): {e.msg}",
                field="config",
            )
        if not isinstance(data, dict) or "command" not in data:
            raise ValidationError(f"Config file {path} must name a command", field="config")
        options = data.get("options", {})
        if not isinstance(options, dict):
            raise ValidationError("Config 'options' must be an object", field="config")
        return cls(command=str(data["command"]), options=dict(options))

    def dump(self, path: Union[str, Path]) -> None:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        payload = {"command": self.command, "options": dict(sorted(self.options.items()))}
        target.write_text(
            json.dumps(payload, cls=CustomJSONEncoder, indent=2) + "\n", encoding="utf-8"
        )
        logger.info(f"Effective configuration written to {target}")

    @classmethod
    def resolve(
        cls,
        command: str,
        defaults: Mapping[str, Any],
        cli_options: Mapping[str, Any],
        file_config: Optional["RunConfig"] = None,
    ) -> "RunConfig":
        """
        Merge defaults, run-file options and explicit CLI flags (in that order).

        CLI values of None mean the flag was not given.
        """
        options: Dict[str, Any] = dict(defaults)
        if file_config is not None:
            if file_config.command != command:
                raise ValidationError(
                    f"Config file is for '{file_config.command}', not '{command}'",
                    field="config",
                )
            unknown = sorted(set(file_config.options) - set(defaults))
            if unknown:
                raise ValidationError(
                    f"Unknown option(s) for {command}: {', '.join(unknown)}",
                    field="config",
                )
            options.update(file_config.options)
        options.update({k: v for k, v in cli_options.items() if v is not None and k in defaults})
        return cls(command=command, options=options)


# Global configuration instance
config = Config()
