import logging
from typing import Iterable, Iterator, Optional, Tuple

from models.data_models import ClassRow, DefiningData, RunStats
from geometry.acomplex import is_terminal
from geometry.invariants import invariant_set
from geometry.rap import cox_presentation, grading, is_fano, is_irredundant, validate
from geometry.tropfan import elementary_big_cones, is_log_terminal, is_q_factorial, maximal_cones
from utils.errors import GeometryError

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

GATES = ("validity", "irredundant", "rank_one", "fano", "q_factorial", "log_terminal", "terminal", "invariants")


def screen(D: DefiningData) -> Tuple[Optional[ClassRow], Optional[str]]:
    """Run one candidate through the gates; returns (row, None) or (None, failed gate)"""
    gate = "validity"
    try:
        validate(D)

        gate = "irredundant"
        if not is_irredundant(D):
            return None, gate

        gate = "rank_one"
        G = grading(D)
        if G.free_rank != 1:
            return None, gate

        gate = "fano"
        if not is_fano(D, G):
            return None, gate

        gate = "q_factorial"
        maximal = maximal_cones(D, G)
        if not is_q_factorial(D, G, maximal):
            return None, gate

        gate = "log_terminal"
        if not is_log_terminal(D, G, elementary_big_cones(D, G)):
            return None, gate

        gate = "terminal"
        if not is_terminal(D, G):
            return None, gate

        gate = "invariants"
        invariants = invariant_set(D, G, maximal)
        return ClassRow(data=D, invariants=invariants, presentation=cox_presentation(D, G)), None
    except GeometryError as e:
        logger.debug(f"Candidate rejected at {gate}: {e}")
        return None, gate


def filter_pipeline(candidates: Iterable[DefiningData], stats: Optional[RunStats] = None) -> Iterator[ClassRow]:
    """Yield the candidates that pass every gate.

    Invalid assemblies count as skipped, every other failure as a rejection at its gate.
    """
    stats = stats if stats is not None else RunStats()
    for D in candidates:
        stats.generated += 1
        row, gate = screen(D)
        if gate == "validity":
            stats.skipped += 1
            continue
        if row is None:
            stats.reject(gate)
            continue
        stats.found += 1
        yield row
