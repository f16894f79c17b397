import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import hermite_normal_form as _hermite_columns
from sympy.polys.matrices.normalforms import invariant_factors as _invariant_factors

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

Rat = Fraction
Vector = Tuple[int, ...]


def parse_rat(text) -> Fraction:
    """Parse a "p/q" string (or an int) into a reduced Fraction"""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    return Fraction(str(text).strip())


def format_rat(value) -> str:
    return str(Fraction(value))


@dataclass(frozen=True)
class IntMat:
    """Dense integer matrix stored row-major"""
    rows: int
    cols: int
    entries: Tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(f"IntMat expects {self.rows * self.cols} entries, got {len(self.entries)}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMat":
        rows = [tuple(int(x) for x in row) for row in rows]
        width = cols if cols is not None else (len(rows[0]) if rows else 0)
        for row in rows:
            if len(row) != width:
                raise ValueError("ragged rows")
        return cls(len(rows), width, tuple(x for row in rows for x in row))

    @classmethod
    def identity(cls, size: int) -> "IntMat":
        return cls.from_rows([[int(i == j) for j in range(size)] for i in range(size)], size)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMat":
        return cls(rows, cols, (0,) * (rows * cols))

    def __getitem__(self, index: Tuple[int, int]) -> int:
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> List[List[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> List[Vector]:
        return [self.col(j) for j in range(self.cols)]

    def transpose(self) -> "IntMat":
        return IntMat.from_rows([self.col(j) for j in range(self.cols)], self.rows)

    def select_columns(self, indices: Sequence[int]) -> "IntMat":
        return IntMat.from_rows([[self[i, j] for j in indices] for i in range(self.rows)], len(indices))

    def __matmul__(self, other: "IntMat") -> "IntMat":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        other_cols = other.columns()
        return IntMat.from_rows(
            [[sum(a * b for a, b in zip(self.row(i), c)) for c in other_cols] for i in range(self.rows)],
            other.cols,
        )

    def apply(self, vector: Sequence[int]) -> Vector:
        return tuple(sum(a * b for a, b in zip(self.row(i), vector)) for i in range(self.rows))

    def is_diagonal(self) -> bool:
        return all(self[i, j] == 0 for i in range(self.rows) for j in range(self.cols) if i != j)

    def diagonal(self) -> Vector:
        return tuple(self[i, i] for i in range(min(self.rows, self.cols)))

    def to_domain_matrix(self) -> DomainMatrix:
        return domain_matrix(self.to_rows(), self.cols, ZZ)


@dataclass(frozen=True)
class SmithForm:
    U: IntMat
    D: IntMat
    V: IntMat

    @property
    def invariant_factors(self) -> Vector:
        return self.D.diagonal()

    @property
    def rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d != 0)


def gcd_vector(v: Sequence[int]) -> int:
    """gcd of the absolute values; 0 for the zero vector"""
    return reduce(gcd, (abs(int(x)) for x in v), 0)


def lcm(a: int, b: int) -> int:
    return abs(a * b) // gcd(a, b) if a and b else 0


def primitive_vector(v: Sequence) -> Vector:
    """Positive multiple of a rational vector with coprime integer entries"""
    fractions = [Fraction(x) for x in v]
    denominator = reduce(lcm, (f.denominator for f in fractions), 1)
    scaled = [int(f * denominator) for f in fractions]
    g = gcd_vector(scaled)
    if g == 0:
        return tuple(scaled)
    return tuple(x // g for x in scaled)


def _choose_pivot(A: List[List[int]], t: int) -> Optional[Tuple[int, int]]:
    best = None
    for j in range(t, len(A[0]) if A else 0):
        for i in range(t, len(A)):
            a = abs(A[i][j])
            if a and (best is None or a < best[0]):
                best = (a, i, j)
    return None if best is None else (best[1], best[2])


def smith_normal_form(M: IntMat) -> SmithForm:
    """Smith normal form U*M*V = D with deterministic pivoting.

    The pivot is the entry of smallest absolute value in the remaining
    submatrix, ties resolved by the leftmost column and then the topmost row.
    """
    rows, cols = M.rows, M.cols
    A = M.to_rows()
    U = IntMat.identity(rows).to_rows()
    V = IntMat.identity(cols).to_rows()

    def swap_rows(i, k):
        A[i], A[k] = A[k], A[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for row in A:
            row[j], row[k] = row[k], row[j]
        for row in V:
            row[j], row[k] = row[k], row[j]

    def add_row(target, source, factor):
        A[target] = [a + factor * b for a, b in zip(A[target], A[source])]
        U[target] = [a + factor * b for a, b in zip(U[target], U[source])]

    def add_col(target, source, factor):
        for row in A:
            row[target] += factor * row[source]
        for row in V:
            row[target] += factor * row[source]

    for t in range(min(rows, cols)):
        pivot = _choose_pivot(A, t)
        if pivot is None:
            break
        i, j = pivot
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            for i in range(t + 1, rows):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
            for j in range(t + 1, cols):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
            leftovers = [(abs(A[i][t]), i, None) for i in range(t + 1, rows) if A[i][t]]
            leftovers += [(abs(A[t][j]), None, j) for j in range(t + 1, cols) if A[t][j]]
            if leftovers:
                _, i, j = min(leftovers, key=lambda item: (item[0], item[2] if item[2] is not None else -1,
                                                            item[1] if item[1] is not None else -1))
                if i is not None:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            blocker = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if A[i][j] % A[t][t]),
                None,
            )
            if blocker is None:
                break
            add_row(t, blocker, 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]

    return SmithForm(
        U=IntMat.from_rows(U, rows),
        D=IntMat.from_rows(A, cols),
        V=IntMat.from_rows(V, cols),
    )


def _normalize_sign(v: Sequence[int]) -> Vector:
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


def kernel_basis(M: IntMat) -> List[Vector]:
    """Lattice basis of ker(M) in Z^cols, saturated by construction"""
    snf = smith_normal_form(M)
    return [_normalize_sign(snf.V.col(j)) for j in range(snf.rank, M.cols)]


def _to_qq(x):
    f = Fraction(x)
    return QQ(f.numerator, f.denominator)


def _from_qq(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def domain_matrix(rows: Sequence[Sequence], width: int, domain=QQ) -> DomainMatrix:
    """Dense DomainMatrix over ZZ or QQ from a list of rows"""
    convert = _to_qq if domain == QQ else (lambda x: ZZ(int(x)))
    return DomainMatrix([[convert(x) for x in row] for row in rows], (len(rows), width), domain)


def invariant_factors(M: IntMat) -> Vector:
    """Nonzero invariant factors of M, in divisibility order"""
    factors = _invariant_factors(M.to_domain_matrix()) if M.rows and M.cols else ()
    return tuple(abs(int(f)) for f in factors if f)


def hermite_normal_form(M: IntMat) -> IntMat:
    """Row-style Hermite normal form of the lattice spanned by the rows of M.

    Only nonzero rows are returned. Pivots are positive and move strictly to
    the right; entries above a pivot are reduced into [0, pivot).
    """
    _, pivots = rref(M.to_rows())
    if not pivots:
        return IntMat.zeros(0, M.cols)
    # sympy puts the pivots of a column-style form in its bottom rows, so the
    # pivot coordinates go last, first pivot at the very bottom.
    order = [j for j in range(M.cols) if j not in pivots] + list(reversed(pivots))
    stacked = IntMat.from_rows([M.col(j) for j in order], M.rows)
    W = _hermite_columns(stacked.to_domain_matrix()).to_list()
    position = {j: i for i, j in enumerate(order)}
    s = len(pivots)
    return IntMat.from_rows(
        [[int(W[position[j]][s - 1 - a]) for j in range(M.cols)] for a in range(s)],
        M.cols,
    )


def rref(rows: Sequence[Sequence]) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form over Q; returns nonzero rows and pivot columns"""
    if not rows:
        return [], []
    R, pivots = domain_matrix(rows, len(rows[0])).rref()
    reduced = R.to_list()[:len(pivots)]
    return [[_from_qq(x) for x in row] for row in reduced], list(pivots)


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return domain_matrix(rows, len(rows[0])).rank()


def nullspace(rows: Sequence[Sequence], width: Optional[int] = None) -> List[Tuple[Fraction, ...]]:
    """Rational basis of {x : A x = 0}, one vector per free column of the echelon form"""
    if not rows:
        if width is None:
            raise ValueError("width required for an empty system")
        return [tuple(Fraction(int(i == j)) for j in range(width)) for i in range(width)]
    width = len(rows[0])
    R, pivots = rref(rows)
    basis = []
    for f in (j for j in range(width) if j not in pivots):
        x = [Fraction(0)] * width
        x[f] = Fraction(1)
        for row, p in zip(R, pivots):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def solve_rational(A: Sequence[Sequence], b: Sequence) -> Optional[Tuple[Fraction, ...]]:
    """One rational solution of A x = b, or None if the system is inconsistent"""
    if not A:
        return None if any(Fraction(x) != 0 for x in b) else ()
    width = len(A[0])
    R, pivots = rref([list(row) + [y] for row, y in zip(A, b)])
    if width in pivots:
        return None
    x = [Fraction(0)] * width
    for row, p in zip(R, pivots):
        x[p] = row[width]
    return tuple(x)


def determinant(M: IntMat) -> int:
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    if M.rows == 0:
        return 1
    return int(M.to_domain_matrix().det())


def unimodular_inverse(M: IntMat) -> IntMat:
    if M.rows != M.cols or abs(determinant(M)) != 1:
        raise ValueError("matrix is not unimodular")
    inverse = M.to_domain_matrix().convert_to(QQ).inv().to_list()
    return IntMat.from_rows([[int(_from_qq(x)) for x in row] for row in inverse], M.cols)


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))
