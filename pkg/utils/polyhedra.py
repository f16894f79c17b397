import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from math import ceil, floor
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from utils.errors import EmptyPolytope, OriginNotInterior, Unbounded
from utils.exact import dot, lcm, nullspace, primitive_vector, rank, rref, solve_rational

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

Point = Tuple[Fraction, ...]
Halfspace = Tuple[Tuple[int, ...], Fraction]


def as_point(v: Iterable) -> Point:
    return tuple(Fraction(x) for x in v)


def _integer_row(row: Sequence) -> Tuple[int, ...]:
    fractions = [Fraction(x) for x in row]
    denominator = reduce(lcm, (f.denominator for f in fractions), 1)
    return tuple(int(f * denominator) for f in fractions)


def extreme_rays(rows: Sequence[Sequence], dim: int) -> List[Tuple[int, ...]]:
    """Extreme rays of the pointed cone {z : A z >= 0} by double description.

    Rays are returned as primitive integer vectors in lexicographic order.
    Adjacency of a positive and a negative ray is decided combinatorially:
    no third ray may vanish on every row both of them vanish on.
    """
    A = [_integer_row(row) for row in rows if any(Fraction(x) != 0 for x in row)]
    basis = []
    for index, row in enumerate(A):
        if rank([A[i] for i in basis] + [row]) > len(basis):
            basis.append(index)
        if len(basis) == dim:
            break
    if len(basis) < dim:
        raise ValueError("cone is not pointed")

    rays = []
    zero_sets = []
    for j in range(dim):
        target = [int(i == j) for i in range(dim)]
        rays.append(primitive_vector(solve_rational([A[i] for i in basis], target)))
        zero_sets.append(frozenset(basis[i] for i in range(dim) if i != j))

    for index in (i for i in range(len(A)) if i not in basis):
        a = A[index]
        values = [dot(a, ray) for ray in rays]
        positive = [k for k, v in enumerate(values) if v > 0]
        negative = [k for k, v in enumerate(values) if v < 0]
        new_rays = [rays[k] for k, v in enumerate(values) if v >= 0]
        new_zero_sets = [zero_sets[k] | {index} if values[k] == 0 else zero_sets[k]
                         for k, v in enumerate(values) if v >= 0]
        for p in positive:
            for n in negative:
                common = zero_sets[p] & zero_sets[n]
                if len(common) < dim - 2:
                    continue
                if any(k != p and k != n and common <= zero_sets[k] for k in range(len(rays))):
                    continue
                combined = tuple(values[p] * x - values[n] * y for x, y in zip(rays[n], rays[p]))
                new_rays.append(primitive_vector(combined))
                new_zero_sets.append(common | {index})
        rays, zero_sets = new_rays, new_zero_sets

    return sorted(set(rays))


@dataclass(frozen=True)
class Polytope:
    """Bounded polyhedron held in both representations.

    halfspaces are pairs (normal, offset) meaning <normal, x> >= offset and
    equations are pairs (normal, value) meaning <normal, x> = value.
    """
    ambient_dim: int
    vertices: Tuple[Point, ...]
    halfspaces: Tuple[Halfspace, ...]
    equations: Tuple[Halfspace, ...]

    @property
    def dimension(self) -> int:
        return self.ambient_dim - len(self.equations)

    def contains(self, x: Sequence) -> bool:
        x = as_point(x)
        return (all(dot(n, x) == v for n, v in self.equations)
                and all(dot(n, x) >= b for n, b in self.halfspaces))

    def relint_contains(self, x: Sequence) -> bool:
        x = as_point(x)
        return (all(dot(n, x) == v for n, v in self.equations)
                and all(dot(n, x) > b for n, b in self.halfspaces))

    def to_dict(self) -> dict:
        return {
            "ambient_dim": self.ambient_dim,
            "dimension": self.dimension,
            "vertices": [[str(c) for c in v] for v in self.vertices],
        }


def hull(points: Iterable[Sequence]) -> Polytope:
    pts = sorted(set(as_point(p) for p in points))
    if not pts:
        raise EmptyPolytope("convex hull of an empty point set")
    ambient = len(pts[0])
    origin = pts[0]
    directions = [tuple(a - b for a, b in zip(p, origin)) for p in pts[1:]]
    _, pivots = rref(directions) if directions else ([], [])
    d = len(pivots)

    kernel = nullspace(directions) if directions else nullspace([], ambient)
    equations = []
    for e in kernel:
        normal = primitive_vector(e)
        equations.append((normal, dot(normal, origin)))
    equations = tuple(sorted(equations))

    if d == 0:
        return Polytope(ambient, (origin,), (), equations)

    def project(p):
        return tuple(p[j] for j in pivots)

    rows = [project(p) + (Fraction(-1),) for p in pts]
    halfspaces = []
    projected_normals = []
    for ray in extreme_rays(rows, d + 1):
        local, offset = ray[:d], ray[d]
        if not any(local):
            continue
        normal = [0] * ambient
        for k, j in enumerate(pivots):
            normal[j] = local[k]
        halfspaces.append((tuple(normal), Fraction(offset)))
        projected_normals.append(local)

    vertices = []
    for p in pts:
        tight = [n for n, (full, b) in zip(projected_normals, halfspaces) if dot(full, p) == b]
        if rank(tight) == d:
            vertices.append(p)

    return Polytope(ambient, tuple(vertices), tuple(sorted(halfspaces)), equations)


def polytope_from_halfspaces(halfspaces: Sequence[Tuple[Sequence, object]],
                             equations: Sequence[Tuple[Sequence, object]] = (),
                             ambient_dim: Optional[int] = None) -> Polytope:
    """Vertex enumeration of a bounded H-description"""
    if ambient_dim is None:
        source = list(halfspaces) or list(equations)
        if not source:
            raise Unbounded("no constraints given")
        ambient_dim = len(source[0][0])
    rows = []
    for normal, offset in halfspaces:
        rows.append(tuple(Fraction(x) for x in normal) + (-Fraction(offset),))
    for normal, value in equations:
        row = tuple(Fraction(x) for x in normal) + (-Fraction(value),)
        rows.append(row)
        rows.append(tuple(-x for x in row))
    rows.append((Fraction(0),) * ambient_dim + (Fraction(1),))

    if rank(rows) < ambient_dim + 1:
        raise Unbounded("constraint system contains a line")
    rays = extreme_rays(rows, ambient_dim + 1)
    finite = [r for r in rays if r[-1] > 0]
    if not finite:
        raise EmptyPolytope("constraint system has no solution")
    if len(finite) < len(rays):
        raise Unbounded("constraint system has a recession direction")
    return hull(tuple(Fraction(x, r[-1]) for x in r[:-1]) for r in finite)


def intersect_halfspaces(P: Polytope, halfspaces: Sequence[Tuple[Sequence, object]]) -> Polytope:
    return polytope_from_halfspaces(list(P.halfspaces) + list(halfspaces), P.equations, P.ambient_dim)


def dual_polytope(P: Polytope) -> Polytope:
    """{y : <y, x> >= -1 for all x in P}"""
    if P.dimension != P.ambient_dim or any(b >= 0 for _, b in P.halfspaces):
        raise OriginNotInterior("origin is not an interior point of the polytope")
    return hull(tuple(Fraction(-x) / b for x in normal) for normal, b in P.halfspaces)


def scale(P: Polytope, epsilon) -> Polytope:
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError(f"scaling factor must be positive, got {epsilon}")
    return hull(tuple(epsilon * x for x in v) for v in P.vertices)


def minkowski_sum(P: Polytope, Q: Polytope) -> Polytope:
    return hull(tuple(a + b for a, b in zip(p, q)) for p in P.vertices for q in Q.vertices)


def lattice_points(P: Polytope) -> List[Tuple[int, ...]]:
    return list(iter_lattice_points(P))


def iter_lattice_points(P: Polytope) -> Iterator[Tuple[int, ...]]:
    """Integer points of P, scanning the bounding box of all but the last coordinate"""
    if not P.vertices:
        raise Unbounded("polytope without vertices")
    dim = P.ambient_dim
    lows = [ceil(min(v[i] for v in P.vertices)) for i in range(dim)]
    highs = [floor(max(v[i] for v in P.vertices)) for i in range(dim)]
    if any(lo > hi for lo, hi in zip(lows, highs)):
        return
    ranges = [range(lows[i], highs[i] + 1) for i in range(dim - 1)]
    for head in itertools.product(*ranges):
        lo, hi = Fraction(lows[-1]), Fraction(highs[-1])
        feasible = True
        for normal, value in P.equations:
            rest = value - dot(normal[:-1], head)
            c = normal[-1]
            if c == 0:
                if rest != 0:
                    feasible = False
                    break
            else:
                lo, hi = max(lo, rest / c), min(hi, rest / c)
        for normal, offset in P.halfspaces if feasible else ():
            rest = offset - dot(normal[:-1], head)
            c = normal[-1]
            if c > 0:
                lo = max(lo, rest / c)
            elif c < 0:
                hi = min(hi, rest / c)
            elif rest > 0:
                feasible = False
                break
        if not feasible:
            continue
        for last in range(ceil(lo), floor(hi) + 1):
            yield tuple(head) + (last,)


def relative_interior_lattice_points(P: Polytope) -> List[Tuple[int, ...]]:
    return [p for p in lattice_points(P) if P.relint_contains(p)]


@dataclass(frozen=True)
class Cone:
    """Polyhedral cone generated by primitive integer rays"""
    ambient_dim: int
    rays: Tuple[Tuple[int, ...], ...]

    @classmethod
    def from_rays(cls, rays: Iterable[Sequence], ambient_dim: int) -> "Cone":
        primitive = sorted(set(primitive_vector(r) for r in rays if any(Fraction(x) != 0 for x in r)))
        return cls(ambient_dim, tuple(primitive))

    @cached_property
    def dimension(self) -> int:
        return rank(self.rays) if self.rays else 0

    @cached_property
    def equations(self) -> Tuple[Tuple[int, ...], ...]:
        if not self.rays:
            return tuple(tuple(int(i == j) for j in range(self.ambient_dim)) for i in range(self.ambient_dim))
        return tuple(primitive_vector(e) for e in nullspace(self.rays))

    @cached_property
    def facets(self) -> Tuple[Tuple[int, ...], ...]:
        k = self.dimension
        if k == 0:
            return ()
        found = set()
        for subset in itertools.combinations(self.rays, k - 1):
            system = list(subset) + list(self.equations)
            if system and rank(system) != self.ambient_dim - 1:
                continue
            kernel = nullspace(system) if system else nullspace([], self.ambient_dim)
            if len(kernel) != 1:
                continue
            normal = primitive_vector(kernel[0])
            signs = {(dot(normal, r) > 0) - (dot(normal, r) < 0) for r in self.rays} - {0}
            if signs == {1}:
                found.add(normal)
            elif signs == {-1}:
                found.add(tuple(-x for x in normal))
        return tuple(sorted(found))

    @property
    def is_pointed(self) -> bool:
        return rank(list(self.facets) + list(self.equations)) == self.ambient_dim

    @property
    def is_full_space(self) -> bool:
        return not self.facets and not self.equations

    def contains(self, x: Sequence) -> bool:
        x = as_point(x)
        return (all(dot(e, x) == 0 for e in self.equations)
                and all(dot(f, x) >= 0 for f in self.facets))

    def relint_contains(self, x: Sequence) -> bool:
        x = as_point(x)
        return (all(dot(e, x) == 0 for e in self.equations)
                and all(dot(f, x) > 0 for f in self.facets))
