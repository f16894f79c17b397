import logging
import os

from dotenv import load_dotenv

from models.data_models import CommandResponse, RunConfig
from classify.runner import run_classification
from classify.table import table_row, write_table_csv, write_table_json
from commands.common import failure
from utils.errors import GeometryError

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

load_dotenv()

NAME = "classify"
CLASSIFY_WORKERS = int(os.getenv("CLASSIFY_WORKERS") or os.cpu_count() or 1)


def register(subparsers):
    parser = subparsers.add_parser(NAME, help="run the bounded classification")
    parser.add_argument("--cases", default="i,ii,iii,iv,v,vi,vii,viii", help="comma separated case ids")
    parser.add_argument("--workers", type=int, default=CLASSIFY_WORKERS)
    parser.add_argument("--checkpoint-dir", help="directory for per-shard checkpoints")
    parser.add_argument("--limit-shards", type=int, help="only run the first N shards")
    parser.add_argument("--csv", dest="csv_path", help="write the result table as CSV")
    parser.add_argument("--json", dest="json_path", help="write the result table as JSON")
    parser.add_argument("--output", help="write the JSON response to this file as well")
    return parser


def run(config: RunConfig) -> CommandResponse:
    logger.info(f"Classifying cases {', '.join(config.cases)} with {config.workers} workers")
    try:
        rows, stats = run_classification(config.cases, config.workers, config.checkpoint_dir, config.limit_shards)
        table = [table_row(row, no) for no, row in enumerate(rows, start=1)]
        if config.csv_path:
            write_table_csv(table, config.csv_path)
        if config.json_path:
            write_table_json(table, config.json_path)
        return CommandResponse(
            success=True,
            data={"stats": stats.model_dump(mode="json"),
                  "rows": [row.model_dump(mode="json", by_alias=True) for row in table]},
            message=f"{len(table)} classes"
        )
    except GeometryError as e:
        return failure("running the classification", e)
