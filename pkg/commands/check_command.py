import logging

from models.data_models import CommandResponse, RunConfig
from commands.common import failure, load_defining_data
from geometry.acomplex import classify
from geometry.rap import grading, is_fano, render_relations, validate
from geometry.tropfan import elementary_big_cones, is_q_factorial, maximal_cones
from utils.errors import GeometryError

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

NAME = "check"


def register(subparsers):
    parser = subparsers.add_parser(NAME, help="Fano flag, singularity verdict and elementary big cones")
    parser.add_argument("input", help="DefiningData JSON file")
    parser.add_argument("--eps", help="also decide eps-log terminality, eps given as p/q")
    parser.add_argument("--output", help="write the JSON response to this file as well")
    return parser


def run(config: RunConfig) -> CommandResponse:
    """Verdict report for one defining datum"""
    try:
        D = load_defining_data(config.input)
        validate(D)
        G = grading(D)
        cones = elementary_big_cones(D, G)
        report = {
            "relations": render_relations(D),
            "fano": is_fano(D, G),
            "q_factorial": is_q_factorial(D, G, maximal_cones(D, G)),
            "elementary_big_cones": [cone.model_dump(mode="json") for cone in cones],
        }
        if not report["fano"]:
            logger.info(f"{config.input} is not Fano")
            return CommandResponse(success=False, data=report, message="NotFano: anticanonical class is not ample")

        verdict = classify(D, G, config.eps)
        report["verdict"] = verdict.model_dump(mode="json")
        logger.info(f"Checked {config.input}: terminal={verdict.terminal} canonical={verdict.canonical}")
        return CommandResponse(success=True, data=report, message=f"terminal: {str(verdict.terminal).lower()}")
    except GeometryError as e:
        return failure("checking defining data", e)
