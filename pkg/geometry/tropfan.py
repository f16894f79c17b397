import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from math import prod
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from models.data_models import DefiningData, ElemBigCone, Grading
from geometry.rap import assemble_P
from utils.exact import gcd_vector, rank
from utils.polyhedra import Cone

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TropStructure:
    """trop(X) as the leaves tau_i = cone(e_i) + lambda over the lineality space lambda = 0 x Q^s"""
    r: int
    s: int
    leaves: Tuple[Cone, ...]
    lineality: Cone

    def leaf_direction(self, i: int) -> Tuple[int, ...]:
        return leaf_direction(self.r, self.s, i)

    def locate(self, v) -> Optional[int]:
        """Leaf index containing v in its relative interior part, -1 for lambda, None off trop(X)"""
        top = list(v[:self.r])
        if not any(top):
            return -1
        if all(x == top[0] for x in top) and top[0] < 0:
            return 0
        nonzero = [k for k, x in enumerate(top) if x]
        if len(nonzero) == 1 and top[nonzero[0]] > 0:
            return nonzero[0] + 1
        return None


def leaf_direction(r: int, s: int, i: int) -> Tuple[int, ...]:
    """e_i in Z^{r+s}, with e_0 = -(e_1 + ... + e_r)"""
    if i == 0:
        return tuple([-1] * r + [0] * s)
    return tuple(int(k == i - 1) for k in range(r)) + (0,) * s


def trop_structure(D: DefiningData) -> TropStructure:
    dim = D.r + D.s
    lineality_rays = []
    for k in range(D.s):
        e = [0] * dim
        e[D.r + k] = 1
        lineality_rays.append(tuple(e))
        lineality_rays.append(tuple(-x for x in e))
    leaves = tuple(
        Cone.from_rays([leaf_direction(D.r, D.s, i)] + lineality_rays, dim)
        for i in range(D.r + 1)
    )
    return TropStructure(D.r, D.s, leaves, Cone.from_rays(lineality_rays, dim))


def _relint_of_degrees(degrees: List[Tuple[int, ...]], kappa: Tuple[int, ...]) -> bool:
    if len(kappa) == 1:
        values = [w[0] for w in degrees]
        if any(w > 0 for w in values) and any(w < 0 for w in values):
            return True
        if any(w > 0 for w in values):
            return kappa[0] > 0
        if any(w < 0 for w in values):
            return kappa[0] < 0
        return kappa[0] == 0
    return Cone.from_rays(degrees, len(kappa)).relint_contains(kappa)


def cone_in_sigma(D: DefiningData, G: Grading, rays: Iterable[int]) -> bool:
    """Whether cone(v_j : j in rays) belongs to the fan of the minimal toric ambient.

    Only free parts enter: the fan for kappa and for any positive multiple of it agree,
    and a multiple kills the torsion part.
    """
    S = set(rays)
    complement = [j for j in range(D.columns) if j not in S]
    if not complement:
        return False
    blocks = {D.block_of(j) for j in S} - {None}
    if 1 < len(blocks) < D.r + 1:
        return False
    return _relint_of_degrees([G.degrees[j].free for j in complement], G.kappa.free)


def ell_sigma(l_values: Iterable[int]) -> int:
    ls = list(l_values)
    total = prod(ls)
    return sum(total // l for l in ls) - (len(ls) - 2) * total


def elementary_big_cones(D: DefiningData, G: Grading) -> List[ElemBigCone]:
    return list(_elementary_big_cones(D, G))


@lru_cache(maxsize=4096)
def _elementary_big_cones(D: DefiningData, G: Grading) -> Tuple[ElemBigCone, ...]:
    P = assemble_P(D)
    offsets = D.block_offsets()
    choices = [range(offsets[i], offsets[i] + D.n[i]) for i in range(D.r + 1)]
    cones = []
    for columns in itertools.product(*choices):
        if not cone_in_sigma(D, G, columns):
            continue
        ls = [D.exponent(j) for j in columns]
        total = prod(ls)
        per_ray = [total // l for l in ls]
        ell = sum(per_ray) - (D.r - 1) * total
        v_sigma = tuple(
            sum(c * P[row, j] for c, j in zip(per_ray, columns))
            for row in range(P.rows)
        )
        v_prime = tuple(Fraction(x, ell) for x in v_sigma) if ell > 0 else None
        cones.append(ElemBigCone(
            columns=tuple(columns),
            l_values=tuple(ls),
            ell_per_ray=tuple(per_ray),
            ell=ell,
            v_sigma=v_sigma,
            c_sigma=gcd_vector(v_sigma),
            v_prime=v_prime,
        ))
    return tuple(cones)


def is_log_terminal(D: DefiningData, G: Grading, cones: Optional[List[ElemBigCone]] = None) -> bool:
    cones = cones if cones is not None else elementary_big_cones(D, G)
    return all(cone.ell > 0 for cone in cones)


def check_relation_bound(D: DefiningData, G: Grading) -> bool:
    return D.r - 1 <= (D.s + 1) + G.free_rank


def sigma_cones(D: DefiningData, G: Grading) -> List[FrozenSet[int]]:
    found = []
    for size in range(D.columns + 1):
        for subset in itertools.combinations(range(D.columns), size):
            if cone_in_sigma(D, G, subset):
                found.append(frozenset(subset))
    return found


def _positive_maximal_cones(D: DefiningData, G: Grading) -> Optional[List[Tuple[int, ...]]]:
    """Maximal cones read off the blocks when K has rank one and all degrees and kappa are positive.

    Then every proper subset meeting at most one block or all blocks is in Sigma, so the
    maximal ones drop a single column that leaves every block met, or are one block
    plus the extra columns when every other block is a single column.
    """
    if G.free_rank != 1 or G.kappa.free[0] <= 0 or any(deg.free[0] <= 0 for deg in G.degrees):
        return None
    offsets = D.block_offsets()
    extras = tuple(range(D.n_total, D.columns))
    everything = frozenset(range(D.columns))
    found = set()
    for j in range(D.columns):
        i = D.block_of(j)
        if i is None or D.n[i] >= 2:
            found.add(everything - {j})
    for i in range(D.r + 1):
        if all(D.n[k] == 1 for k in range(D.r + 1) if k != i):
            found.add(frozenset(range(offsets[i], offsets[i] + D.n[i])) | frozenset(extras))
    return sorted(tuple(sorted(S)) for S in found)


def maximal_cones(D: DefiningData, G: Grading) -> List[Tuple[int, ...]]:
    fast = _positive_maximal_cones(D, G)
    return fast if fast is not None else enumerated_maximal_cones(D, G)


def enumerated_maximal_cones(D: DefiningData, G: Grading) -> List[Tuple[int, ...]]:
    cones = sigma_cones(D, G)
    maximal = [S for S in cones if not any(S < T for T in cones)]
    return sorted(tuple(sorted(S)) for S in maximal)


def is_q_factorial(D: DefiningData, G: Grading, maximal: Optional[List[Tuple[int, ...]]] = None) -> bool:
    P = assemble_P(D)
    maximal = maximal if maximal is not None else maximal_cones(D, G)
    return all(rank([P.col(j) for j in S]) == len(S) for S in maximal)


def discrepancy_bounds(cone: ElemBigCone, r: int, eps=None) -> Dict[str, Optional[bool]]:
    """Necessary inequalities on the l-values for the singularity type along rho_sigma"""
    inverse_sum = sum(Fraction(1, l) for l in cone.l_values)
    inverse_product = Fraction(1, prod(cone.l_values))
    bounds = {
        "log_terminal": inverse_sum > r - 1,
        "canonical": inverse_sum >= r - 1 + cone.c_sigma * inverse_product,
        "terminal": inverse_sum > r - 1 + cone.c_sigma * inverse_product,
        "eps_log_terminal": None,
    }
    if eps is not None:
        bounds["eps_log_terminal"] = inverse_sum > r - 1 + Fraction(eps) * cone.c_sigma * inverse_product
    return bounds
