import json
import logging

from models.data_models import CommandResponse, RunConfig
from classify.table import diff_table, load_expected_table
from commands.common import failure
from utils.errors import GeometryError, SchemaMismatch

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

NAME = "diff"


def register(subparsers):
    parser = subparsers.add_parser(NAME, help="compare a result table with the expected table")
    parser.add_argument("input", help="result table JSON written by classify --json")
    parser.add_argument("--seed-table", help="expected table, defaults to the bundled copy")
    parser.add_argument("--output", help="write the JSON response to this file as well")
    return parser


def run(config: RunConfig) -> CommandResponse:
    try:
        try:
            result = json.loads(config.input.read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise SchemaMismatch(f"Cannot read result table {config.input}: {e}")
        report = diff_table(result, load_expected_table(config.seed_table))
        logger.info(report["summary"])
        return CommandResponse(success=True, data=report, message=report["summary"])
    except GeometryError as e:
        return failure("comparing tables", e)
