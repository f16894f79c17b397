import logging
from multiprocessing import Pool
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from tqdm import tqdm

from models.data_models import ClassRow, RunStats
from classify.bounds import BOUNDS_VERSION
from classify.cases import Shard, enumerate_shard, shards
from classify.pipeline import filter_pipeline
from geometry.invariants import distinctness_key, invariant_set
from geometry.rap import cox_presentation, grading, normalize
from storage.checkpoint_store import CheckpointStore

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


def run_shard(shard: Shard) -> Tuple[Shard, List[ClassRow], RunStats]:
    stats = RunStats(shards=1)
    rows = list(filter_pipeline(enumerate_shard(shard), stats))
    return shard, rows, stats


def _data_key(row: ClassRow) -> Tuple:
    D = row.data
    return D.n, D.L, D.d, D.dprime


def canonical_row(row: ClassRow) -> ClassRow:
    """Re-express a row through the normal form of its defining data"""
    D = normalize(row.data)
    G = grading(D)
    return ClassRow(data=D, invariants=invariant_set(D, G), presentation=cox_presentation(D, G))


def deduplicate(rows: Iterable[ClassRow]) -> List[ClassRow]:
    """One row per equivalence class, sorted by distinctness key"""
    by_data: Dict[Tuple, ClassRow] = {}
    for row in rows:
        row = canonical_row(row)
        by_data.setdefault(_data_key(row), row)

    by_invariants: Dict[Tuple, ClassRow] = {}
    for key in sorted(by_data):
        row = by_data[key]
        invariants_key = distinctness_key(row.data, grading(row.data), row.invariants)
        if invariants_key in by_invariants:
            logger.info(f"Normal forms {_data_key(by_invariants[invariants_key])} and {key} share invariants")
            continue
        by_invariants[invariants_key] = row
    return [by_invariants[key] for key in sorted(by_invariants)]


def run_classification(cases: Sequence[str], workers: int = 1, checkpoint_dir: Optional[Path] = None,
                       limit_shards: Optional[int] = None) -> Tuple[List[ClassRow], RunStats]:
    """Enumerate, filter and deduplicate; finished shards are read back from the checkpoint store"""
    store = CheckpointStore(checkpoint_dir, version=BOUNDS_VERSION)
    work = shards(cases, limit_shards)
    collected: List[ClassRow] = []
    stats = RunStats()

    pending = []
    for shard in work:
        if store.has_shard(shard.name):
            rows, shard_stats = store.load_shard(shard.name)
            collected.extend(rows)
            stats = stats.merge(shard_stats)
        else:
            pending.append(shard)
    if len(pending) < len(work):
        logger.info(f"Resuming: {len(work) - len(pending)} of {len(work)} shards already done")

    def record(results):
        nonlocal stats
        for shard, rows, shard_stats in tqdm(results, total=len(pending), desc="Classifying"):
            store.save_shard(shard.name, rows, shard_stats)
            collected.extend(rows)
            stats = stats.merge(shard_stats)

    if workers > 1 and pending:
        with Pool(processes=min(workers, len(pending))) as pool:
            record(pool.imap_unordered(run_shard, pending))
    else:
        record(run_shard(shard) for shard in pending)

    table = deduplicate(collected)
    store.save_run_summary(stats, len(table))
    logger.info(f"Classification of cases {', '.join(cases)}: {stats.generated} candidates, "
                f"{stats.skipped} skipped, {stats.found} passed, {len(table)} classes")
    return table, stats
