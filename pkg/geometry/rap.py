import itertools
import logging
import random
from fractions import Fraction
from functools import lru_cache, reduce
from typing import List, Optional, Sequence, Tuple

from models.data_models import CoxPresentation, DefiningData, DegreeClass, Grading
from utils.errors import InvalidDefiningData, InvalidOp, ShapeMismatch
from utils.exact import (IntMat, determinant, gcd_vector, hermite_normal_form, kernel_basis, lcm,
                         smith_normal_form, solve_rational)
from utils.polyhedra import Cone

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

OP_TYPES = ("swap_in_block", "swap_blocks", "add_top_row", "lower_unimodular", "swap_extra")


def _lower_rows(D: DefiningData) -> List[List[int]]:
    dprime = D.dprime if D.m else tuple(() for _ in range(D.s))
    return [list(D.d[k]) + list(dprime[k]) for k in range(D.s)]


def _check_shape(D: DefiningData):
    if len(D.n) != D.r + 1 or len(D.L) != D.r + 1:
        raise ShapeMismatch(f"expected {D.r + 1} blocks, got n={len(D.n)} L={len(D.L)}")
    for i, (size, block) in enumerate(zip(D.n, D.L)):
        if size < 1 or len(block) != size:
            raise ShapeMismatch(f"block {i} has size {size} but {len(block)} exponents")
        if any(l < 1 for l in block):
            raise ShapeMismatch(f"block {i} has a non-positive exponent")
    if len(D.d) != D.s or any(len(row) != D.n_total for row in D.d):
        raise ShapeMismatch(f"d must be {D.s} rows of length {D.n_total}")
    if D.m:
        if len(D.dprime) != D.s or any(len(row) != D.m for row in D.dprime):
            raise ShapeMismatch(f"dprime must be {D.s} rows of length {D.m}")
    elif any(len(row) for row in D.dprime):
        raise ShapeMismatch("dprime given without extra columns")


def top_rows(D: DefiningData) -> List[List[int]]:
    offsets = D.block_offsets()
    rows = []
    for i in range(1, D.r + 1):
        row = [0] * D.columns
        for j, l in enumerate(D.L[0]):
            row[offsets[0] + j] = -l
        for j, l in enumerate(D.L[i]):
            row[offsets[i] + j] = l
        rows.append(row)
    return rows


@lru_cache(maxsize=4096)
def assemble_P(D: DefiningData) -> IntMat:
    _check_shape(D)
    return IntMat.from_rows(top_rows(D) + _lower_rows(D), D.columns)


def column_labels(D: DefiningData) -> List[Tuple[str, Optional[int]]]:
    labels = [(f"T{k + 1}", D.block_of(k)) for k in range(D.n_total)]
    labels += [(f"S{k + 1}", None) for k in range(D.m)]
    return labels


def validate(D: DefiningData, irredundant: bool = False) -> IntMat:
    """Assemble P and check the column conditions, returning P"""
    P = assemble_P(D)
    columns = P.columns()
    if len(set(columns)) != len(columns):
        raise InvalidDefiningData("columns of P are not pairwise different")
    for k, column in enumerate(columns):
        if gcd_vector(column) != 1:
            raise InvalidDefiningData(f"column {k} of P is not primitive")
    if not _positively_spanning(P):
        raise InvalidDefiningData("columns of P do not generate the whole space as a cone")
    if irredundant and not is_irredundant(D):
        raise InvalidDefiningData(f"blocks {redundant_blocks(D)} are redundant")
    return P


def redundant_blocks(D: DefiningData) -> List[int]:
    """Blocks of a single column with exponent one"""
    return [i for i, block in enumerate(D.L) if sum(block) < 2]


def is_irredundant(D: DefiningData) -> bool:
    return not redundant_blocks(D)


def _positively_spanning(P: IntMat) -> bool:
    kernel = kernel_basis(P)
    if len(kernel) == 1:
        w = kernel[0]
        return all(x > 0 for x in w) or all(x < 0 for x in w)
    return Cone.from_rays(P.columns(), P.rows).is_full_space


@lru_cache(maxsize=4096)
def grading(D: DefiningData) -> Grading:
    """K = Z^{n+m} / im(P*) with degrees read off a Smith form of P*"""
    P = assemble_P(D)
    snf = smith_normal_form(P.transpose())
    factors = snf.invariant_factors
    rank = snf.rank
    torsion_rows = [i for i in range(rank) if factors[i] > 1]
    free_rows = list(range(rank, P.cols))
    torsion = tuple(factors[i] for i in torsion_rows)

    columns = [snf.U.col(j) for j in range(P.cols)]
    free = [[u[i] for i in free_rows] for u in columns]
    if len(free_rows) == 1 and sum(f[0] for f in free) < 0:
        free = [[-x for x in f] for f in free]
    degrees = tuple(
        DegreeClass(free=tuple(f), torsion=tuple(u[i] % factors[i] for i in torsion_rows))
        for f, u in zip(free, columns)
    )
    kappa = _combine(degrees, anticanonical_vector(D), torsion)
    return Grading(free_rank=len(free_rows), torsion=torsion, degrees=degrees, kappa=kappa)


def _combine(degrees: Sequence[DegreeClass], vector: Sequence[int], torsion: Sequence[int]) -> DegreeClass:
    width = len(degrees[0].free) if degrees else 0
    free = tuple(sum(c * deg.free[k] for c, deg in zip(vector, degrees)) for k in range(width))
    tors = tuple(sum(c * deg.torsion[k] for c, deg in zip(vector, degrees)) % t for k, t in enumerate(torsion))
    return DegreeClass(free=free, torsion=tors)


def anticanonical_vector(D: DefiningData) -> List[int]:
    """Coefficients of the anticanonical divisor class on the coordinate divisors"""
    vector = [1] * D.columns
    for j, l in enumerate(D.L[0]):
        vector[j] -= (D.r - 1) * l
    return vector


def relation_vector(D: DefiningData) -> List[int]:
    vector = [0] * D.columns
    for j, l in enumerate(D.L[0]):
        vector[j] = l
    return vector


def relation_degree(D: DefiningData, G: Grading) -> DegreeClass:
    return G.degree_of(relation_vector(D))


def in_moving_cone(degrees: Sequence[Sequence[int]], kappa: Sequence[int]) -> bool:
    """kappa in the relative interior of the moving cone of the given free degrees"""
    if len(kappa) == 1:
        values = [w[0] for w in degrees]
        positive = sum(1 for w in values if w > 0)
        negative = sum(1 for w in values if w < 0)
        if positive and negative:
            return False
        if negative:
            return negative >= 2 and kappa[0] < 0
        return positive >= 2 and kappa[0] > 0
    dim = len(kappa)
    if not Cone.from_rays(degrees, dim).is_pointed:
        return False
    for j in range(len(degrees)):
        others = Cone.from_rays([w for k, w in enumerate(degrees) if k != j], dim)
        if others.dimension != dim or not others.relint_contains(kappa):
            return False
    return True


def is_fano(D: DefiningData, G: Optional[Grading] = None) -> bool:
    G = G if G is not None else grading(D)
    return in_moving_cone([deg.free for deg in G.degrees], G.kappa.free)


def _monomial(D: DefiningData, block: int) -> str:
    offset = D.block_offsets()[block]
    return "".join(
        f"T{offset + j + 1}" + (f"^{l}" if l > 1 else "")
        for j, l in enumerate(D.L[block])
    )


def lambda_tags(D: DefiningData) -> List[str]:
    if D.r < 3:
        return []
    if D.lam:
        return list(D.lam)
    return ["λ"] if D.r == 3 else [f"λ{i}" for i in range(2, D.r)]


def render_relations(D: DefiningData) -> List[str]:
    tags = lambda_tags(D)
    relations = []
    for i in range(D.r - 1):
        head = _monomial(D, i)
        if i > 0:
            head = f"{tags[i - 1]}{head}"
        relations.append("+".join([head, _monomial(D, i + 1), _monomial(D, i + 2)]))
    return relations


def cox_presentation(D: DefiningData, G: Optional[Grading] = None) -> CoxPresentation:
    G = G if G is not None else grading(D)
    return CoxPresentation(
        generators=[name for name, _ in column_labels(D)],
        degrees=list(G.degrees),
        exponents=[list(block) for block in D.L],
        relations=render_relations(D),
        relation_degree=relation_degree(D, G),
        lam=lambda_tags(D) or None,
    )


def _with_lower(D: DefiningData, lower: Sequence[Sequence[int]]) -> DefiningData:
    n = D.n_total
    return D.model_copy(update={
        "d": tuple(tuple(row[:n]) for row in lower),
        "dprime": tuple(tuple(row[n:]) for row in lower) if D.m else D.dprime,
    })


def _permute_columns(D: DefiningData, order: Sequence[int], n: Sequence[int], L) -> DefiningData:
    lower = [[row[k] for k in order] for row in _lower_rows(D)]
    data = D.model_copy(update={"n": tuple(n), "L": tuple(tuple(b) for b in L)})
    return _with_lower(data, lower)


def admissible_ops(D: DefiningData, op: Sequence) -> DefiningData:
    """Apply one admissible operation given as a descriptor tuple"""
    kind, *args = op
    offsets = D.block_offsets()
    try:
        if kind == "swap_in_block":
            i, j1, j2 = args
            if not 0 <= i <= D.r:
                raise InvalidOp("block index out of range")
            if not (0 <= j1 < D.n[i] and 0 <= j2 < D.n[i]):
                raise InvalidOp(f"column index out of block {i}")
            order = list(range(D.columns))
            order[offsets[i] + j1], order[offsets[i] + j2] = order[offsets[i] + j2], order[offsets[i] + j1]
            L = [list(b) for b in D.L]
            L[i][j1], L[i][j2] = L[i][j2], L[i][j1]
            return _permute_columns(D, order, D.n, L)
        if kind == "swap_blocks":
            i, i2 = args
            if not (0 <= i <= D.r and 0 <= i2 <= D.r):
                raise InvalidOp("block index out of range")
            blocks = list(range(D.r + 1))
            blocks[i], blocks[i2] = blocks[i2], blocks[i]
            return _reorder_blocks(D, blocks)
        if kind == "add_top_row":
            lower_row, top_row, factor = args
            if not (0 <= lower_row < D.s and 1 <= top_row <= D.r):
                raise InvalidOp("row index out of range")
            top = top_rows(D)[top_row - 1]
            lower = _lower_rows(D)
            lower[lower_row] = [a + factor * b for a, b in zip(lower[lower_row], top)]
            return _with_lower(D, lower)
        if kind == "lower_unimodular":
            (matrix,) = args
            M = IntMat.from_rows(matrix)
            if M.rows != D.s or M.cols != D.s or abs(determinant(M)) != 1:
                raise InvalidOp("row operation matrix is not unimodular")
            lower = _lower_rows(D)
            mixed = [[sum(M[a, b] * lower[b][k] for b in range(D.s)) for k in range(D.columns)] for a in range(D.s)]
            return _with_lower(D, mixed)
        if kind == "swap_extra":
            k1, k2 = args
            if not (0 <= k1 < D.m and 0 <= k2 < D.m):
                raise InvalidOp("extra column index out of range")
            order = list(range(D.columns))
            a, b = D.n_total + k1, D.n_total + k2
            order[a], order[b] = order[b], order[a]
            return _permute_columns(D, order, D.n, D.L)
    except (TypeError, ValueError, IndexError) as e:
        raise InvalidOp(f"malformed operation {op!r}: {e}")
    raise InvalidOp(f"unknown operation type {kind!r}")


def _reorder_blocks(D: DefiningData, blocks: Sequence[int], within: Optional[Sequence[Sequence[int]]] = None,
                    extras: Optional[Sequence[int]] = None) -> DefiningData:
    offsets = D.block_offsets()
    order, n, L = [], [], []
    for position, i in enumerate(blocks):
        columns = within[position] if within is not None else range(D.n[i])
        order += [offsets[i] + j for j in columns]
        n.append(D.n[i])
        L.append([D.L[i][j] for j in columns])
    extra_order = extras if extras is not None else range(D.m)
    order += [D.n_total + k for k in extra_order]
    return _permute_columns(D, order, n, L)


def _random_op(D: DefiningData, rng: random.Random) -> Optional[tuple]:
    kind = rng.choice(OP_TYPES)
    if kind == "swap_in_block":
        i = rng.randrange(D.r + 1)
        return kind, i, rng.randrange(D.n[i]), rng.randrange(D.n[i])
    if kind == "swap_blocks":
        return kind, rng.randrange(D.r + 1), rng.randrange(D.r + 1)
    if kind == "add_top_row" and D.s:
        return kind, rng.randrange(D.s), rng.randint(1, D.r), rng.randint(-3, 3)
    if kind == "lower_unimodular" and D.s:
        matrix = [[int(a == b) for b in range(D.s)] for a in range(D.s)]
        a, b = rng.randrange(D.s), rng.randrange(D.s)
        if a != b:
            matrix[a][b] = rng.randint(-2, 2)
        else:
            matrix[a][a] = rng.choice((1, -1))
        return kind, matrix
    if kind == "swap_extra" and D.m:
        return kind, rng.randrange(D.m), rng.randrange(D.m)
    return None


def random_admissible_sequence(D: DefiningData, rng: random.Random, length: int = 5) -> List[tuple]:
    """Random operations, each drawn against the data the previous ones produce"""
    ops = []
    for _ in range(length):
        op = _random_op(D, rng)
        if op is None:
            continue
        D = admissible_ops(D, op)
        ops.append(op)
    return ops


def apply_ops(D: DefiningData, ops: Sequence[Sequence]) -> DefiningData:
    for op in ops:
        D = admissible_ops(D, op)
    return D


def _tie_orders(keys: Sequence, indices: Sequence[int]):
    """All orderings of indices sorted by key descending, permuting equal keys"""
    ranked = sorted(indices, key=lambda k: keys[k], reverse=True)
    groups = [list(g) for _, g in itertools.groupby(ranked, key=lambda k: keys[k])]
    for choice in itertools.product(*(itertools.permutations(g) for g in groups)):
        yield [k for group in choice for k in group]


def _canonical_lower(D: DefiningData) -> Tuple[Tuple[int, ...], ...]:
    """Canonical representative of the lower rows modulo the top rows and GL_s(Z)"""
    if D.s == 0:
        return ()
    offsets = D.block_offsets()
    pivots = [(offsets[i], D.L[i][0]) for i in range(1, D.r + 1)]
    tops = top_rows(D)
    lower = _lower_rows(D)
    scale = reduce(lcm, (l for block in D.L for l in block), 1)

    projected = []
    for row in lower:
        x = [Fraction(v) for v in row]
        for (column, l), top in zip(pivots, tops):
            c = Fraction(row[column], l)
            x = [a - c * b for a, b in zip(x, top)]
        projected.append([int(a * scale) for a in x])
    H = hermite_normal_form(IntMat.from_rows(projected, D.columns))
    if H.rows != D.s:
        raise InvalidDefiningData("lower rows are dependent modulo the relation rows")
    transposed = [list(column) for column in zip(*projected)]
    reduced = []
    for a in range(D.s):
        coefficients = [int(c) for c in solve_rational(transposed, H.row(a))]
        y = [sum(c * lower[b][k] for b, c in enumerate(coefficients)) for k in range(D.columns)]
        for (column, l), top in zip(pivots, tops):
            q = y[column] // l
            if q:
                y = [u - q * v for u, v in zip(y, top)]
        reduced.append(tuple(y))
    return tuple(reduced)


def normalize(D: DefiningData) -> DefiningData:
    """Canonical representative of the admissible-operation orbit of D"""
    block_keys = [(D.n[i], tuple(sorted(D.L[i], reverse=True))) for i in range(D.r + 1)]
    best_key, best = None, None
    for blocks in _tie_orders(block_keys, range(D.r + 1)):
        within_choices = [list(_tie_orders(D.L[i], range(D.n[i]))) for i in blocks]
        for within in itertools.product(*within_choices):
            for extras in itertools.permutations(range(D.m)):
                candidate = _reorder_blocks(D, blocks, within, extras)
                lower = _canonical_lower(candidate)
                candidate = _with_lower(candidate, lower)
                key = (candidate.n, candidate.L, candidate.d, candidate.dprime)
                if best_key is None or key < best_key:
                    best_key, best = key, candidate
    return best
