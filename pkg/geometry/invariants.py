import itertools
import logging
from fractions import Fraction
from math import gcd, prod
from typing import List, Optional, Sequence, Tuple

from models.data_models import ClassGroup, DefiningData, Grading, InvariantSet
from geometry.rap import anticanonical_vector, assemble_P, relation_degree
from geometry.tropfan import maximal_cones
from utils.errors import GeometryError, NotRankOne
from utils.exact import IntMat, lcm, smith_normal_form

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


def class_group(G: Grading) -> ClassGroup:
    return ClassGroup(free_rank=G.free_rank, torsion=G.torsion)


def antican_cube(G: Grading, relation_degrees: Sequence[int], dim: int = 3) -> Fraction:
    """(-K)^dim of a Picard rank one complete intersection in a fake weighted projective space"""
    if G.free_rank != 1:
        raise NotRankOne(f"class group has free rank {G.free_rank}")
    weights = [deg.free[0] for deg in G.degrees]
    order = prod(G.torsion) if G.torsion else 1
    kappa = sum(weights) - sum(relation_degrees)
    return Fraction(prod(relation_degrees) * kappa ** dim, prod(weights) * order)


def local_class_group_order(D: DefiningData, cone: Sequence[int], divisor: Sequence[int],
                            P: Optional[IntMat] = None) -> Optional[int]:
    """Order of the divisor class in Z^cone / im(P_cone^*); None when it has infinite order"""
    P = P if P is not None else assemble_P(D)
    block = P.select_columns(cone).transpose()
    snf = smith_normal_form(block)
    z = snf.U.apply([divisor[j] for j in cone])
    order = 1
    for i, value in enumerate(z):
        factor = snf.D[i, i] if i < min(block.rows, block.cols) else 0
        if factor == 0:
            if value != 0:
                return None
            continue
        order = lcm(order, factor // gcd(factor, value))
    return order


def gorenstein_index(D: DefiningData, G: Grading, maximal: Optional[List[Tuple[int, ...]]] = None) -> int:
    P = assemble_P(D)
    maximal = maximal if maximal is not None else maximal_cones(D, G)
    divisor = anticanonical_vector(D)
    index = 1
    for cone in maximal:
        order = local_class_group_order(D, cone, divisor, P)
        if order is None:
            raise GeometryError(f"anticanonical class is not Q-Cartier on cone {cone}")
        index = lcm(index, order)
    return index


def _units(t: int) -> List[int]:
    return [u for u in range(1, t) if gcd(u, t) == 1] or [1]


def canonical_columns(free_rank: int, torsion: Sequence[int], columns: Sequence[Sequence[int]]) -> Tuple:
    """Minimal sorted column list over the automorphisms (a, b) -> (a, u*b + c*a) of each torsion factor"""
    if not torsion:
        return tuple(sorted(tuple(c) for c in columns))
    per_factor = []
    for t in torsion:
        per_factor.append([(u, c) for u in _units(t) for c in range(t)])
    best = None
    for choice in itertools.product(*per_factor):
        transformed = []
        for column in columns:
            head = column[0] if free_rank else 0
            free = tuple(column[:free_rank])
            tors = tuple(
                (u * column[free_rank + k] + c * head) % t
                for k, ((u, c), t) in enumerate(zip(choice, torsion))
            )
            transformed.append(free + tors)
        candidate = tuple(sorted(transformed))
        if best is None or candidate < best:
            best = candidate
    return best


def canonical_degree_columns(G: Grading) -> Tuple:
    columns = [deg.free + deg.torsion for deg in G.degrees]
    return canonical_columns(G.free_rank, G.torsion, columns)


def exponent_key(exponents: Sequence[Sequence[int]], m: int) -> Tuple:
    return tuple(sorted(tuple(sorted(block)) for block in exponents)), m


def identity_key(D: DefiningData, G: Grading) -> Tuple:
    """Class group, degrees and relation exponents; what a table row is matched on"""
    return ((G.free_rank, tuple(G.torsion)), canonical_degree_columns(G)) + exponent_key(D.L, D.m)


def distinctness_key(D: DefiningData, G: Grading, invariants: Optional[InvariantSet] = None) -> Tuple:
    invariants = invariants if invariants is not None else invariant_set(D, G)
    return identity_key(D, G) + (str(invariants.antican_cube), invariants.gorenstein_index)


def invariant_set(D: DefiningData, G: Grading, maximal: Optional[List[Tuple[int, ...]]] = None) -> InvariantSet:
    mu = relation_degree(D, G).free[0] if G.free_rank == 1 else None
    if mu is None:
        raise NotRankOne(f"class group has free rank {G.free_rank}")
    return InvariantSet(
        class_group=class_group(G),
        degree_matrix=G.degree_matrix(),
        exponents=[list(block) for block in D.L],
        m=D.m,
        antican_cube=antican_cube(G, [mu] * (D.r - 1), D.s + 1),
        gorenstein_index=gorenstein_index(D, G, maximal),
    )
