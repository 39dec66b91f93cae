"""
Bounded-Rational Decision Toolkit command-line application.

This module provides the entry point that:
- Configures logging (console and log file)
- Parses subcommands and merges them with an optional run config file
- Dispatches to metrics, sweep, bestresponse, simulate and synth
- Maps failures to exit codes (0 success, 1 invalid input, 2 other failure)
"""

import argparse
import logging
import os
import sys
from typing import Any, Dict, List, Optional

from termcolor import colored

from commands import COMMANDS
from utils.config import RunConfig, config
from utils.validators import ValidationError

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_FAILURE = 2


def setup_logging() -> logging.Logger:
    """Configure logging for the application."""
    os.makedirs(config.LOG_DIR, exist_ok=True)
    logging.basicConfig(
        level=getattr(logging, config.LOG_LEVEL, logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[
            logging.FileHandler(os.path.join(config.LOG_DIR, "bounded_rational.log")),
            logging.StreamHandler(sys.stderr),
        ],
    )
    # matplotlib font discovery is noisy at DEBUG
    logging.getLogger("matplotlib").setLevel(logging.WARNING)
    return logging.getLogger("BoundedRational.App")


def status(message: str, color: str = "cyan") -> None:
    """Coloured one-line status on stderr."""
    print(colored(message, color), file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bounded-rational",
        description="Information-cost regularized decision-making experiments",
    )
    run_file = argparse.ArgumentParser(add_help=False)
    run_file.add_argument("--config", help="Run config JSON; explicit flags override it")
    run_file.add_argument(
        "--dump-config", dest="dump_config", help="Write the effective run config here"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for module in COMMANDS.values():
        module.register(subparsers, parents=[run_file])
    return parser


def resolve_options(args: argparse.Namespace) -> RunConfig:
    module = COMMANDS[args.command]
    file_config = RunConfig.load(args.config) if args.config else None
    return RunConfig.resolve(args.command, module.DEFAULTS, vars(args), file_config)


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors; those are invalid input here.
        return EXIT_OK if e.code in (0, None) else EXIT_VALIDATION
    app_logger = setup_logging()

    try:
        run_config = resolve_options(args)
        if args.dump_config:
            run_config.dump(args.dump_config)
        app_logger.info(f"Starting '{run_config.command}' with {len(run_config.options)} option(s)")
        app_logger.debug(f"Configuration: {config.get_config_summary()}")

        result: Any = COMMANDS[run_config.command].run(dict(run_config.options))

        if isinstance(result, list):
            for path in result:
                status(f"wrote {path}", "green")
        app_logger.info(f"Finished '{run_config.command}'")
        return EXIT_OK
    except ValidationError as e:
        field = f" [{e.field}]" if e.field else ""
        app_logger.warning(f"Invalid input{field}: {e.message}")
        status(f"error{field}: {e.message}", "red")
        return EXIT_VALIDATION
    except Exception as e:
        app_logger.error(f"Command '{args.command}' failed: {e}", exc_info=True)
        status(f"failed: {e}", "red")
        return EXIT_FAILURE


def options_for(command: str, **overrides: Any) -> Dict[str, Any]:
    """Default options of a command with keyword overrides (library use)."""
    return RunConfig.resolve(command, COMMANDS[command].DEFAULTS, overrides).options


if __name__ == "__main__":
    sys.exit(main())
