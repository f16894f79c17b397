import json
import logging
import os
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from pydantic import ValidationError

from models.data_models import ClassRow, RunStats
from utils.errors import CheckpointCorrupt

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

DEFAULT_CHECKPOINT_DIR = "checkpoints"
SUMMARY_NAME = "run_summary"


class CheckpointStore:
    """One JSON document per finished shard; a shard with a document is skipped on resume.

    Instances are shared per directory.
    """
    _instances: Dict[Path, "CheckpointStore"] = {}

    def __new__(cls, root: Optional[Path] = None, version: str = "1"):
        root = Path(root or os.getenv("CHECKPOINT_DIR") or DEFAULT_CHECKPOINT_DIR).resolve()
        instance = cls._instances.get(root)
        if instance is None:
            instance = super(CheckpointStore, cls).__new__(cls)
            instance.root = root
            instance.version = version
            root.mkdir(parents=True, exist_ok=True)
            cls._instances[root] = instance
            logger.info(f"Checkpoint store opened at {root}")
        return instance

    def path_for(self, shard_name: str) -> Path:
        return self.root / f"{shard_name}.json"

    def has_shard(self, shard_name: str) -> bool:
        return self.path_for(shard_name).exists()

    def completed_shards(self) -> List[str]:
        return sorted(p.stem for p in self.root.glob("*.json") if p.stem != SUMMARY_NAME)

    def save_shard(self, shard_name: str, rows: List[ClassRow], stats: RunStats):
        """Write the shard document atomically"""
        payload = {
            "shard": shard_name,
            "version": self.version,
            "stats": stats.model_dump(mode="json"),
            "rows": [row.model_dump(mode="json", by_alias=True) for row in rows],
        }
        target = self.path_for(shard_name)
        tmp = target.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(payload, indent=1))
        os.replace(tmp, target)

    def load_shard(self, shard_name: str) -> Tuple[List[ClassRow], RunStats]:
        path = self.path_for(shard_name)
        try:
            payload = json.loads(path.read_text())
            if payload.get("version") != self.version:
                raise CheckpointCorrupt(f"{path} was written for bounds version {payload.get('version')}")
            rows = [ClassRow.model_validate(row) for row in payload["rows"]]
            stats = RunStats.model_validate(payload["stats"])
        except (OSError, json.JSONDecodeError, KeyError, ValidationError) as e:
            raise CheckpointCorrupt(f"Unreadable checkpoint {path}: {e}")
        return rows, stats

    def save_run_summary(self, stats: RunStats, rows: int):
        path = self.path_for(SUMMARY_NAME)
        path.write_text(json.dumps({"stats": stats.model_dump(mode="json"), "rows": rows}, indent=1))
        logger.info(f"Run summary written to {path}")
