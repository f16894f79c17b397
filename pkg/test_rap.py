import random

import pytest
from hypothesis import given, settings, strategies as st
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DM
from sympy.polys.matrices.normalforms import invariant_factors

from conftest import load_instance, realized_rows
from models.data_models import DefiningData
from geometry.acomplex import classify
from geometry.invariants import distinctness_key
from geometry.rap import (admissible_ops, apply_ops, assemble_P, column_labels, cox_presentation, grading,
                          in_moving_cone, is_fano, is_irredundant, normalize, random_admissible_sequence,
                          relation_degree, render_relations, validate)
from utils.errors import InvalidDefiningData, InvalidOp, ShapeMismatch
from utils.exact import IntMat, kernel_basis
from utils.exact import invariant_factors as lattice_invariant_factors


def redundant_tower() -> DefiningData:
    return DefiningData(r=2, s=2, m=0, n=(2, 2, 1), L=((1, 1), (1, 1), (1,)),
                        d=((0, 1, -1, 0, 0), (0, 0, 1, -1, 0)))


def test_assemble_quadric(quadric):
    P = validate(quadric)
    assert P.columns() == [(-1, -1, 0, 0), (-1, -1, 1, 0), (1, 0, 0, 1), (1, 0, 0, 0), (0, 2, -1, -1)]


def test_validate_rejects_duplicate_and_imprimitive_columns(quadric):
    duplicate = quadric.model_copy(update={"d": ((0, 0, 0, 0, -1), (0, 0, 1, -1, 0))})
    with pytest.raises(InvalidDefiningData):
        validate(duplicate)
    imprimitive = quadric.model_copy(update={"d": ((0, 1, 0, 0, 0), (0, 0, 1, -1, 0))})
    with pytest.raises(InvalidDefiningData):
        validate(imprimitive)


def test_validate_rejects_wrong_shapes(quadric):
    with pytest.raises(ShapeMismatch):
        validate(quadric.model_copy(update={"n": (2, 2)}))
    with pytest.raises(ShapeMismatch):
        validate(quadric.model_copy(update={"d": ((0, 1, 0, 0),)}))


def test_irredundancy():
    D = redundant_tower()
    validate(D)
    assert not is_irredundant(D)
    with pytest.raises(InvalidDefiningData):
        validate(D, irredundant=True)


def test_grading_of_quadric(quadric):
    G = grading(quadric)
    assert G.free_rank == 1
    assert G.torsion == ()
    assert [deg.free for deg in G.degrees] == [(1,)] * 5
    assert G.kappa.free == (3,)
    assert relation_degree(quadric, G).free == (2,)
    assert is_fano(quadric, G)


def test_grading_of_e6_cubic(e6_cubic):
    G = grading(e6_cubic)
    assert [deg.free[0] for deg in G.degrees] == [3, 1, 2, 3]
    assert G.kappa.free == (3,)
    assert relation_degree(e6_cubic, G).free == (6,)


def test_grading_with_torsion(row26):
    G = grading(row26)
    assert G.free_rank == 1
    assert G.torsion == (2,)
    assert [deg.free for deg in G.degrees] == [(1,)] * 6


@pytest.mark.parametrize("name", ["quadric", "e6_cubic", "row26"])
def test_torsion_matches_sympy(name):
    D = load_instance(name)
    P = assemble_P(D)
    expected = tuple(abs(int(f)) for f in invariant_factors(DM(P.transpose().to_rows(), ZZ)) if abs(int(f)) > 1)
    assert grading(D).torsion == expected


def test_moving_cone_in_rank_one():
    assert in_moving_cone([(1,), (1,)], (3,))
    assert not in_moving_cone([(1,)], (1,))
    assert not in_moving_cone([(1,), (2,), (3,)], (0,))
    assert not in_moving_cone([(1,), (-1,)], (1,))


def test_relations_and_labels(row26):
    assert render_relations(row26) == ["T1T2+T3T4+T5^2", "λT3T4+T5^2+T6^2"]
    presentation = cox_presentation(row26)
    assert presentation.generators == ["T1", "T2", "T3", "T4", "T5", "T6"]
    assert presentation.lam == ["λ"]

    extra = DefiningData(r=2, s=2, m=1, n=(2, 1, 1), L=((1, 1), (3,), (2,)),
                         d=((0, 1, 0, 0), (0, 0, 0, 0)), dprime=((0,), (1,)))
    assert [name for name, _ in column_labels(extra)] == ["T1", "T2", "T3", "T4", "S1"]
    assert render_relations(extra) == ["T1T2+T3^3+T4^2"]


def test_malformed_operations(quadric):
    with pytest.raises(InvalidOp):
        admissible_ops(quadric, ("swap_in_block", 5, 0, 1))
    with pytest.raises(InvalidOp):
        admissible_ops(quadric, ("swap_blocks", 0))
    with pytest.raises(InvalidOp):
        admissible_ops(quadric, ("lower_unimodular", [[2, 0], [0, 1]]))
    with pytest.raises(InvalidOp):
        admissible_ops(quadric, ("transpose",))


def test_block_swap_keeps_the_variety(quadric):
    swapped = admissible_ops(quadric, ("swap_blocks", 0, 2))
    assert swapped.n == (1, 2, 2)
    assert grading(swapped).kappa.free == (3,)
    assert normalize(swapped) == normalize(quadric)


@settings(max_examples=25)
@given(seed=st.integers(min_value=0, max_value=10 ** 6), name=st.sampled_from(["quadric", "e6_cubic", "row26"]))
def test_admissible_operations_keep_normal_form(seed, name):
    D = load_instance(name)
    moved = apply_ops(D, random_admissible_sequence(D, random.Random(seed), length=6))
    validate(moved)
    assert normalize(moved) == normalize(D)
    G, H = grading(D), grading(moved)
    assert distinctness_key(moved, H) == distinctness_key(D, G)


@settings(max_examples=10)
@given(seed=st.integers(min_value=0, max_value=10 ** 6))
def test_admissible_operations_keep_verdict(seed):
    D = load_instance("e6_cubic")
    moved = apply_ops(D, random_admissible_sequence(D, random.Random(seed), length=4))
    before, after = classify(D), classify(moved)
    assert (before.log_terminal, before.canonical, before.terminal) == (after.log_terminal, after.canonical,
                                                                        after.terminal)


@pytest.mark.parametrize("name", ["quadric", "e6_cubic", "row26"])
def test_random_sequences_follow_the_moved_blocks(name):
    D = load_instance(name)
    for seed in range(300):
        ops = random_admissible_sequence(D, random.Random(seed), length=6)
        moved = D
        for op in ops:
            if op[0] == "swap_in_block":
                _, i, j, k = op
                assert j < moved.n[i] and k < moved.n[i]
            moved = admissible_ops(moved, op)
        assert moved == apply_ops(D, ops)
        validate(moved)


@pytest.mark.parametrize("no, D", realized_rows(), ids=[f"row{no}" for no, _ in realized_rows()])
def test_kernel_of_P_is_saturated(no, D):
    P = assemble_P(D)
    basis = kernel_basis(P)
    assert len(basis) == grading(D).free_rank
    assert all(list(P.apply(v)) == [0] * P.rows for v in basis)
    assert set(lattice_invariant_factors(IntMat.from_rows(basis, P.cols))) == {1}
