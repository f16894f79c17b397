import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from models.data_models import DefiningData, ElemBigCone, Grading, SingularityVerdict
from geometry.rap import anticanonical_vector, assemble_P, grading, is_fano
from geometry.tropfan import elementary_big_cones, trop_structure
from utils.errors import NotFano, NotLogTerminal, RayNotOnTrop, UnboundedDirection, WrongShape
from utils.exact import dot, solve_rational
from utils.polyhedra import (Polytope, dual_polytope, hull, iter_lattice_points, lattice_points, minkowski_sum,
                             polytope_from_halfspaces, scale)

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


@dataclass
class ACComplex:
    """Anticanonical complex stored as the lineality polytope plus one chart polytope per leaf.

    Leaf i is charted by (x, y) with x >= 0 the coefficient of e_i and y the
    lineality coordinates; e_0 = -(e_1 + ... + e_r).
    """
    r: int
    s: int
    lineality: Polytope
    leaves: Tuple[Polytope, ...]
    provenance: Dict[Tuple[Fraction, ...], str] = field(default_factory=dict)

    def to_ambient(self, leaf: int, point: Sequence) -> Tuple:
        x, y = point[0], tuple(point[1:])
        if leaf == 0:
            top = (-x,) * self.r
        else:
            top = tuple(x if k == leaf - 1 else 0 for k in range(self.r))
        return tuple(top) + y

    def vertices(self) -> List[Tuple[Fraction, ...]]:
        found = {(Fraction(0),) * self.r + tuple(v) for v in self.lineality.vertices}
        for i, leaf in enumerate(self.leaves):
            found.update(tuple(Fraction(c) for c in self.to_ambient(i, v)) for v in leaf.vertices)
        return sorted(found)

    def to_dict(self) -> dict:
        return {
            "lineality": self.lineality.to_dict(),
            "leaves": [leaf.to_dict() for leaf in self.leaves],
            "vertices": [[str(c) for c in v] for v in self.vertices()],
            "provenance": {",".join(str(c) for c in v): label for v, label in sorted(self.provenance.items())},
        }


def _chart(D: DefiningData, leaf: int, v: Sequence) -> Tuple[Fraction, ...]:
    x = -v[0] if leaf == 0 else v[leaf - 1]
    return (Fraction(x),) + tuple(Fraction(c) for c in v[D.r:])


def _require_bounded(D: DefiningData, G: Grading) -> List[ElemBigCone]:
    if not is_fano(D, G):
        raise NotFano("anticanonical class is not in the relative interior of the moving cone")
    cones = elementary_big_cones(D, G)
    for cone in cones:
        if cone.ell <= 0:
            raise NotLogTerminal(f"elementary big cone {cone.columns} has ell = {cone.ell}", cone=cone)
    return cones


def build_complex(D: DefiningData, G: Optional[Grading] = None) -> ACComplex:
    G = G if G is not None else grading(D)
    cones = _require_bounded(D, G)
    P = assemble_P(D)
    provenance = {}

    lineality_points = []
    for cone in cones:
        lineality_points.append(cone.v_prime)
        provenance[tuple(cone.v_prime)] = f"cone {list(cone.columns)}"
    for k in range(D.n_total, D.columns):
        v = tuple(Fraction(c) for c in P.col(k))
        lineality_points.append(v)
        provenance[v] = f"column {k}"
    if not lineality_points:
        lineality_points.append((Fraction(0),) * (D.r + D.s))
    A0 = hull(tuple(p[D.r:]) for p in lineality_points)

    leaves = []
    offsets = D.block_offsets()
    for i in range(D.r + 1):
        points = [(Fraction(0),) + tuple(p[D.r:]) for p in lineality_points]
        for j in range(offsets[i], offsets[i] + D.n[i]):
            column = P.col(j)
            points.append(_chart(D, i, column))
            provenance[tuple(Fraction(c) for c in column)] = f"column {j}"
        leaves.append(hull(points))
    logger.debug(f"Built complex with lineality vertices {A0.vertices}")
    return ACComplex(D.r, D.s, A0, tuple(leaves), provenance)


def complex_lattice_points(C: ACComplex) -> List[Tuple[int, ...]]:
    found = set()
    for i, leaf in enumerate(C.leaves):
        found.update(C.to_ambient(i, p) for p in lattice_points(leaf))
    found.update((0,) * C.r + tuple(p) for p in lattice_points(C.lineality))
    return sorted(found)


def complex_relint_lattice_points(C: ACComplex) -> List[Tuple[int, ...]]:
    """Lattice points strictly inside every facet of their pieces that avoids the origin"""
    interior: Dict[Tuple[int, ...], bool] = {}
    for i, leaf in enumerate(C.leaves):
        outer = [(n, b) for n, b in leaf.halfspaces if b < 0]
        for p in lattice_points(leaf):
            strict = all(dot(n, p) > b for n, b in outer)
            key = C.to_ambient(i, p)
            interior[key] = interior.get(key, True) and strict
    return sorted(p for p, strict in interior.items() if strict)


def classify(D: DefiningData, G: Optional[Grading] = None, eps=None) -> SingularityVerdict:
    G = G if G is not None else grading(D)
    if not is_fano(D, G):
        raise NotFano("anticanonical class is not in the relative interior of the moving cone")
    eps = Fraction(eps) if eps is not None else None
    cones = elementary_big_cones(D, G)
    bad = [cone for cone in cones if cone.ell <= 0]
    if bad:
        return SingularityVerdict(
            log_terminal=False, canonical=False, terminal=False,
            eps=eps, eps_log_terminal=False if eps is not None else None,
            witnesses={"log_terminal": list(bad[0].columns)},
        )

    C = build_complex(D, G)
    P = assemble_P(D)
    origin = (0,) * (D.r + D.s)
    witnesses = {}

    allowed = {origin} | {tuple(P.col(j)) for j in range(P.cols)}
    extra = [p for p in complex_lattice_points(C) if p not in allowed]
    terminal = not extra
    if extra:
        witnesses["terminal"] = list(extra[0])

    inner = [p for p in complex_relint_lattice_points(C) if p != origin]
    canonical = not inner
    if inner:
        witnesses["canonical"] = list(inner[0])

    eps_log_terminal = None
    if eps is not None:
        scaled = set()
        for i, leaf in enumerate(C.leaves):
            scaled.update(C.to_ambient(i, p) for p in lattice_points(scale(leaf, eps)))
        others = sorted(p for p in scaled if p != origin)
        eps_log_terminal = not others
        if others:
            witnesses["eps_log_terminal"] = list(others[0])

    return SingularityVerdict(
        log_terminal=True, canonical=canonical, terminal=terminal,
        eps=eps, eps_log_terminal=eps_log_terminal, witnesses=witnesses,
    )


def is_terminal(D: DefiningData, G: Optional[Grading] = None) -> bool:
    """Terminality alone, trying the lattice points v_sigma / c before scanning the complex.

    For ell <= c the point v_sigma / c lies on the segment from the origin to v_prime.
    """
    G = G if G is not None else grading(D)
    if not is_fano(D, G):
        raise NotFano("anticanonical class is not in the relative interior of the moving cone")
    cones = elementary_big_cones(D, G)
    if any(cone.ell <= 0 for cone in cones):
        return False
    P = assemble_P(D)
    allowed = {(0,) * (D.r + D.s)} | {tuple(P.col(j)) for j in range(P.cols)}
    C = build_complex(D, G)
    for cone in cones:
        if cone.ell > cone.c_sigma:
            continue
        point = tuple(x // cone.c_sigma for x in cone.v_sigma)
        if point not in allowed and C.lineality.contains(point[D.r:]):
            return False

    for i, leaf in enumerate(C.leaves):
        if any(C.to_ambient(i, p) not in allowed for p in iter_lattice_points(leaf)):
            return False
    return all((0,) * D.r + p in allowed for p in iter_lattice_points(C.lineality))


def discrepancy_ray(D: DefiningData, G: Optional[Grading], ray: Sequence[int]) -> Fraction:
    """Discrepancy along the ray through v: 1/t - 1 where t*v is the boundary point of the complex"""
    G = G if G is not None else grading(D)
    trop = trop_structure(D)
    leaf = trop.locate(ray)
    if leaf is None:
        raise RayNotOnTrop(f"{list(ray)} does not lie on the tropical variety")
    try:
        C = build_complex(D, G)
    except NotLogTerminal as e:
        raise UnboundedDirection(f"complex is unbounded: {e}")
    if leaf == -1:
        piece, point = C.lineality, tuple(Fraction(c) for c in ray[D.r:])
    else:
        piece, point = C.leaves[leaf], _chart(D, leaf, ray)

    if any(dot(n, point) != 0 for n, _ in piece.equations):
        raise RayNotOnTrop(f"{list(ray)} leaves the support of the complex")
    limit = None
    for n, b in piece.halfspaces:
        value = dot(n, point)
        if value < 0:
            bound = Fraction(b) / value
            limit = bound if limit is None else min(limit, bound)
    if limit is None:
        raise UnboundedDirection(f"complex is unbounded along {list(ray)}")
    return 1 / limit - 1


def relation_newton_points(D: DefiningData, newton: str = "relations") -> List[Tuple[int, ...]]:
    """Lattice points whose hull is the Minkowski sum of the relation Newton polytopes"""
    offsets = D.block_offsets()
    monomials = []
    for i in range(D.r + 1):
        exponent = [0] * D.columns
        for j, l in enumerate(D.L[i]):
            exponent[offsets[i] + j] = l
        monomials.append(exponent)
    if newton == "uniform":
        return [tuple((D.r - 1) * x for x in mono) for mono in monomials]
    if newton != "relations":
        raise ValueError(f"unknown Newton polytope convention {newton!r}")
    sums = set()
    for choice in itertools.product(*[(i, i + 1, i + 2) for i in range(D.r - 1)]):
        sums.add(tuple(sum(monomials[i][k] for i in choice) for k in range(D.columns)))
    return sorted(sums)


def anticanonical_polyhedron(D: DefiningData, G: Optional[Grading] = None, newton: str = "relations") -> Polytope:
    """A_X as the dual of B_X, computed through the degree fibre polytope and the relation Newton polytopes"""
    G = G if G is not None else grading(D)
    if not is_fano(D, G):
        raise NotFano("anticanonical class is not in the relative interior of the moving cone")
    P = assemble_P(D)
    Pt = P.transpose().to_rows()
    divisor = anticanonical_vector(D)
    dim = P.rows

    fibre = polytope_from_halfspaces(
        [(P.col(j), -divisor[j]) for j in range(P.cols)], (), dim
    )
    preimages = []
    for b in relation_newton_points(D, newton):
        target = [divisor[j] + b[j] - 1 for j in range(P.cols)]
        u = solve_rational(Pt, target)
        if u is None:
            raise ValueError("relation degree does not match the anticanonical class")
        preimages.append(u)
    B_X = minkowski_sum(fibre, hull(preimages))
    return dual_polytope(B_X)


def complex_from_polyhedron(D: DefiningData, A_X: Polytope) -> ACComplex:
    """Intersect A_X with the lineality space and every leaf of trop(X)"""
    r, s = D.r, D.s
    lineality = polytope_from_halfspaces(
        [(n[r:], b) for n, b in A_X.halfspaces],
        [(n[r:], v) for n, v in A_X.equations], s,
    )
    leaves = []
    for i in range(r + 1):
        def along(n):
            return -sum(n[:r]) if i == 0 else n[i - 1]
        halfspaces = [((along(n),) + tuple(n[r:]), b) for n, b in A_X.halfspaces]
        halfspaces.append(((1,) + (0,) * s, 0))
        equations = [((along(n),) + tuple(n[r:]), v) for n, v in A_X.equations]
        leaves.append(polytope_from_halfspaces(halfspaces, equations, 1 + s))
    return ACComplex(r, s, lineality, tuple(leaves))


def lineality_trapezoid(D: DefiningData) -> Tuple[Polytope, Dict[str, Fraction]]:
    """Closed-form lineality part for two-by-two-by-one data with unit block-0 exponents"""
    if not (D.r == 2 and D.s == 2 and D.m == 0 and D.n == (2, 2, 1) and D.L[0] == (1, 1)):
        raise WrongShape("lineality trapezoid needs r=2, s=2, m=0, n=(2,2,1) and l01=l02=1")
    if (D.d[0][0], D.d[0][1], D.d[1][0], D.d[1][1]) != (0, 1, 0, 0):
        raise WrongShape("block 0 of d must read (0,1) over (0,0)")
    l11, l12 = D.L[1]
    (l21,) = D.L[2]
    _, _, d111, d112, d121 = D.d[0]
    _, _, d211, d212, d221 = D.d[1]
    w11 = -l21 * d212 - l12 * d221
    w12 = l21 * d211 + l11 * d221

    u1 = (Fraction(l21 * d111 + l11 * d121, l21 + l11), Fraction(l21 * d211 + l11 * d221, l21 + l11))
    u2 = (u1[0] + Fraction(l11 * l21, l21 + l11), u1[1])
    u3 = (Fraction(l21 * d112 + l12 * d121, l21 + l12), Fraction(l21 * d212 + l12 * d221, l21 + l12))
    u4 = (u3[0] + Fraction(l12 * l21, l12 + l21), u3[1])

    g1_height = Fraction(w12, l11 + l21)
    g2_height = Fraction(-w11, l12 + l21)
    measures = {
        "g1_length": Fraction(l11 * l21, l11 + l21),
        "g1_height": g1_height,
        "g2_length": Fraction(l12 * l21, l12 + l21),
        "g2_height": g2_height,
        "total_height": g1_height - g2_height,
    }
    return hull([u1, u2, u3, u4]), measures
