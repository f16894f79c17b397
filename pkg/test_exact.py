from fractions import Fraction

import pytest
from hypothesis import given, strategies as st
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DM
from sympy.polys.matrices.normalforms import invariant_factors

from utils.exact import (IntMat, determinant, format_rat, hermite_normal_form, kernel_basis, nullspace,
                         parse_rat, primitive_vector, rank, smith_normal_form, solve_rational,
                         unimodular_inverse)
from utils.exact import invariant_factors as invariant_factors_of

small = st.integers(min_value=-12, max_value=12)


@st.composite
def int_matrices(draw, max_rows=4, max_cols=5):
    rows = draw(st.integers(min_value=1, max_value=max_rows))
    cols = draw(st.integers(min_value=1, max_value=max_cols))
    return IntMat.from_rows(draw(st.lists(st.lists(small, min_size=cols, max_size=cols),
                                          min_size=rows, max_size=rows)), cols)


def test_rationals_serialize_as_fraction_strings():
    assert parse_rat("729/20") == Fraction(729, 20)
    assert parse_rat(" -3/6 ") == Fraction(-1, 2)
    assert parse_rat(7) == Fraction(7)
    assert format_rat(Fraction(54)) == "54"
    assert format_rat(Fraction(1331, 84)) == "1331/84"


def test_primitive_vector_clears_denominators():
    assert primitive_vector([Fraction(1, 2), Fraction(3, 4)]) == (2, 3)
    assert primitive_vector([0, -4, 6]) == (0, -2, 3)
    assert primitive_vector([0, 0]) == (0, 0)


def test_smith_form_of_known_matrix():
    M = IntMat.from_rows([[12, 6, 4, 8], [3, 9, 6, 12], [2, 16, 14, 28], [20, 10, 10, 20]])
    snf = smith_normal_form(M)
    assert list(snf.invariant_factors) == [1, 10, 30, 0]
    assert snf.rank == 3


@given(int_matrices())
def test_smith_form_factorization(M):
    snf = smith_normal_form(M)
    assert snf.U @ M @ snf.V == snf.D
    assert abs(determinant(snf.U)) == 1
    assert abs(determinant(snf.V)) == 1
    assert snf.D.is_diagonal()
    factors = [d for d in snf.invariant_factors if d]
    assert all(d > 0 for d in factors)
    assert all(b % a == 0 for a, b in zip(factors, factors[1:]))


@given(int_matrices())
def test_smith_form_matches_sympy(M):
    ours = [d for d in smith_normal_form(M).invariant_factors if d]
    theirs = [abs(int(f)) for f in invariant_factors(DM(M.to_rows(), ZZ)) if f]
    assert ours == theirs


@given(int_matrices())
def test_kernel_basis_spans_kernel(M):
    basis = kernel_basis(M)
    assert len(basis) == M.cols - rank(M.to_rows())
    for v in basis:
        assert list(M.apply(v)) == [0] * M.rows


@st.composite
def unimodular_matrices(draw, size):
    lower = [[1 if i == j else (draw(small) if j < i else 0) for j in range(size)] for i in range(size)]
    upper = [[1 if i == j else (draw(small) if j > i else 0) for j in range(size)] for i in range(size)]
    return IntMat.from_rows(lower, size) @ IntMat.from_rows(upper, size)


def assert_echelon(H: IntMat):
    pivots = []
    for a in range(H.rows):
        row = H.row(a)
        p = next(j for j, x in enumerate(row) if x)
        assert row[p] > 0
        pivots.append(p)
    assert pivots == sorted(set(pivots))
    for a, p in enumerate(pivots):
        assert all(0 <= H[b, p] < H[a, p] for b in range(a))


def product(values) -> int:
    result = 1
    for v in values:
        result *= v
    return result


@given(int_matrices())
def test_hermite_form_spans_the_row_lattice(M):
    H = hermite_normal_form(M)
    assert H.rows == rank(M.to_rows())
    assert_echelon(H)
    stacked = IntMat.from_rows(M.to_rows() + H.to_rows(), M.cols)
    covolume = product(invariant_factors_of(stacked))
    assert product(invariant_factors_of(M)) == covolume
    assert product(invariant_factors_of(H)) == covolume


@given(st.data())
def test_hermite_form_is_canonical(data):
    M = data.draw(int_matrices())
    U = data.draw(unimodular_matrices(M.rows))
    assert hermite_normal_form(U @ M) == hermite_normal_form(M)


def test_hermite_form_reduces_above_pivots():
    H = hermite_normal_form(IntMat.from_rows([[2, 3], [4, 1]]))
    assert H.to_rows() == [[2, 3], [0, 5]]
    assert hermite_normal_form(IntMat.from_rows([[0, 0, 0]])).rows == 0
    assert hermite_normal_form(IntMat.from_rows([[0, 2, 4], [0, 3, 6]])).to_rows() == [[0, 1, 2]]


@given(int_matrices())
def test_invariant_factors_agree_with_smith_form(M):
    assert invariant_factors_of(M) == tuple(d for d in smith_normal_form(M).invariant_factors if d)


@given(int_matrices())
def test_kernel_basis_is_saturated(M):
    basis = kernel_basis(M)
    if basis:
        # a saturated sublattice has all invariant factors equal to one
        assert set(invariant_factors_of(IntMat.from_rows(basis, M.cols))) == {1}


def test_solve_rational_and_nullspace():
    A = [[1, 2], [3, 4]]
    assert solve_rational(A, [5, 6]) == (Fraction(-4), Fraction(9, 2))
    assert solve_rational([[1, 1], [2, 2]], [1, 3]) is None
    (v,) = nullspace([[1, 2, 3]], 3)[:1]
    assert sum(a * b for a, b in zip([1, 2, 3], v)) == 0
    assert len(nullspace([[1, 2, 3]], 3)) == 2


def test_unimodular_inverse():
    M = IntMat.from_rows([[2, 1], [1, 1]])
    assert M @ unimodular_inverse(M) == IntMat.identity(2)
    with pytest.raises(ValueError):
        unimodular_inverse(IntMat.from_rows([[2, 0], [0, 1]]))
