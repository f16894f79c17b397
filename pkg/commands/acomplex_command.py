import logging

from models.data_models import CommandResponse, RunConfig
from commands.common import failure, load_defining_data
from geometry.acomplex import (anticanonical_polyhedron, build_complex, classify, complex_from_polyhedron,
                               complex_lattice_points)
from geometry.rap import grading, validate
from utils.errors import GeometryError
from utils.polyhedra import lattice_points

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

NAME = "acomplex"


def register(subparsers):
    parser = subparsers.add_parser(NAME, help="anticanonical complex: vertices, lattice points and verdicts")
    parser.add_argument("input", help="DefiningData JSON file")
    parser.add_argument("--lattice-points", action="store_true", help="dump the lattice points of every leaf")
    parser.add_argument("--eps", help="add the eps-log terminal verdict, eps given as p/q")
    parser.add_argument("--oracle", action="store_true",
                        help="also compute the complex from the anticanonical polyhedron")
    parser.add_argument("--output", help="write the JSON response to this file as well")
    return parser


def _points(points):
    return [[str(c) for c in p] for p in points]


def run(config: RunConfig) -> CommandResponse:
    try:
        D = load_defining_data(config.input)
        validate(D)
        G = grading(D)
        C = build_complex(D, G)
        data = {"complex": C.to_dict()}

        if config.lattice_points:
            data["lattice_points"] = _points(complex_lattice_points(C))
            data["leaf_lattice_points"] = [_points(lattice_points(leaf)) for leaf in C.leaves]
        if config.eps is not None:
            data["verdict"] = classify(D, G, config.eps).model_dump(mode="json")
        if config.oracle:
            A_X = anticanonical_polyhedron(D, G)
            data["polyhedron"] = A_X.to_dict()
            data["oracle_vertices"] = _points(complex_from_polyhedron(D, A_X).vertices())

        logger.info(f"Built anticanonical complex for {config.input} with {len(C.vertices())} vertices")
        return CommandResponse(success=True, data=data, message=f"{len(C.vertices())} vertices")
    except GeometryError as e:
        return failure("building the anticanonical complex", e)
