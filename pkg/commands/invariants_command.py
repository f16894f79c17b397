import logging

from models.data_models import CommandResponse, RunConfig
from commands.common import failure, load_defining_data
from geometry.invariants import invariant_set
from geometry.rap import cox_presentation, grading, validate
from utils.errors import GeometryError

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

NAME = "invariants"


def register(subparsers):
    parser = subparsers.add_parser(NAME, help="class group, degrees, (-K)^3 and Gorenstein index")
    parser.add_argument("input", help="DefiningData JSON file")
    parser.add_argument("--output", help="write the JSON response to this file as well")
    return parser


def run(config: RunConfig) -> CommandResponse:
    try:
        D = load_defining_data(config.input)
        validate(D)
        G = grading(D)
        invariants = invariant_set(D, G)
        data = {
            "invariants": invariants.model_dump(mode="json"),
            "class_group": invariants.class_group.render(),
            "presentation": cox_presentation(D, G).model_dump(mode="json"),
        }
        return CommandResponse(
            success=True,
            data=data,
            message=f"(-K)^3 = {invariants.antican_cube}, Gorenstein index {invariants.gorenstein_index}"
        )
    except GeometryError as e:
        return failure("computing invariants", e)
