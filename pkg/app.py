import argparse
import logging
import os
import sys
from typing import List, Optional

from dotenv import load_dotenv
from pydantic import ValidationError

from models.data_models import CommandResponse, RunConfig
from commands import acomplex_command, check_command, classify_command, diff_command, invariants_command
from commands.common import emit

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

# Load environment variables
load_dotenv()
logging.getLogger().setLevel(os.getenv("LOG_LEVEL", "INFO").upper())

COMMANDS = {
    module.NAME: module
    for module in (check_command, invariants_command, acomplex_command, classify_command, diff_command)
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="app.py",
        description="Terminal Fano threefolds of Picard number one with a complexity-one torus action"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for module in COMMANDS.values():
        module.register(subparsers)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = {key: value for key, value in vars(args).items() if value is not None}
    if "cases" in values:
        values["cases"] = tuple(case.strip() for case in values["cases"].split(",") if case.strip())
    return RunConfig(**values)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
    except ValidationError as e:
        logger.error(f"Error validating arguments: {e}")
        response = CommandResponse(success=False, data={"error": "ValidationError"},
                                   message=f"Error validating arguments: {e}")
        print(emit(response))
        return 2

    logger.info(f"Running {config.command}")
    response = COMMANDS[config.command].run(config)
    print(emit(response, config.output))
    return 0 if response.success else 1


if __name__ == "__main__":
    sys.exit(main())
