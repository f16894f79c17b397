import itertools
from fractions import Fraction

import pytest

from conftest import realized_rows, unit_candidates
from models.data_models import DefiningData, DegreeClass
from geometry.rap import assemble_P, grading
from geometry.tropfan import (check_relation_bound, cone_in_sigma, discrepancy_bounds, elementary_big_cones,
                              ell_sigma, enumerated_maximal_cones, is_log_terminal, is_q_factorial,
                              leaf_direction, maximal_cones, trop_structure)
from utils.exact import nullspace
from utils.polyhedra import Cone

ROW_IDS = [f"row{no}" for no, _ in realized_rows()]


def cubic_333() -> DefiningData:
    """Surface whose elementary big cone over the exponents (3,3,3) has ell = 0"""
    return DefiningData(r=2, s=1, m=0, n=(2, 1, 1), L=((3, 1), (3,), (3,)), d=((-1, -1, 1, 1),))


def test_quadric_elementary_big_cones(quadric):
    cones = elementary_big_cones(quadric, grading(quadric))
    assert [cone.columns for cone in cones] == [(0, 2, 4), (0, 3, 4), (1, 2, 4), (1, 3, 4)]
    assert all(cone.ell == 3 and cone.c_sigma == 1 for cone in cones)
    first = cones[0]
    assert first.l_values == (1, 1, 2)
    assert first.ell_per_ray == (2, 2, 1)
    assert first.v_sigma == (0, 0, -1, 1)
    assert first.v_prime == (0, 0, Fraction(-1, 3), Fraction(1, 3))


def test_e6_elementary_big_cones(e6_cubic):
    cones = elementary_big_cones(e6_cubic, grading(e6_cubic))
    assert [(cone.columns, cone.ell) for cone in cones] == [((0, 2, 3), 5), ((1, 2, 3), 3)]
    assert cones[0].v_prime == (0, 0, Fraction(-1, 5))
    assert cones[1].v_sigma == (0, 0, 3)
    assert cones[1].c_sigma == 3
    assert cones[1].v_prime == (0, 0, 1)


@pytest.mark.parametrize("l_values, expected", [
    ((1, 1, 1), 2), ((2, 2, 1), 4), ((5, 3, 2), 1), ((4, 3, 2), 2), ((3, 3, 2), 3), ((7, 2, 2), 4),
])
def test_ell_closed_forms(l_values, expected):
    assert ell_sigma(l_values) == expected


def test_ell_positive_exactly_on_platonic_triples():
    for a in range(1, 31):
        for b in range(1, a + 1):
            for c in range(1, b + 1):
                platonic = Fraction(1, a) + Fraction(1, b) + Fraction(1, c) > 1
                assert (ell_sigma((a, b, c)) > 0) == platonic


def test_non_log_terminal_cone():
    D = cubic_333()
    G = grading(D)
    cones = elementary_big_cones(D, G)
    bad = [cone for cone in cones if cone.ell <= 0]
    assert [cone.columns for cone in bad] == [(0, 2, 3)]
    assert bad[0].v_prime is None
    assert not is_log_terminal(D, G, cones)


def test_sigma_membership(quadric):
    G = grading(quadric)
    assert cone_in_sigma(quadric, G, (0, 1))
    assert cone_in_sigma(quadric, G, (4,))
    assert not cone_in_sigma(quadric, G, (0, 2))
    assert not cone_in_sigma(quadric, G, range(5))


def test_quadric_maximal_cones(quadric):
    G = grading(quadric)
    maximal = maximal_cones(quadric, G)
    assert maximal == [(0, 1, 2, 4), (0, 1, 3, 4), (0, 2, 3, 4), (1, 2, 3, 4)]
    assert is_q_factorial(quadric, G, maximal)
    assert check_relation_bound(quadric, G)


def test_tropical_structure_locates_rays(quadric):
    trop = trop_structure(quadric)
    assert len(trop.leaves) == 3
    assert trop.leaf_direction(0) == leaf_direction(2, 2, 0) == (-1, -1, 0, 0)
    assert trop.locate((0, 0, 5, 1)) == -1
    assert trop.locate((-1, -1, 0, 0)) == 0
    assert trop.locate((2, 0, 1, 1)) == 1
    assert trop.locate((0, 3, 0, 0)) == 2
    assert trop.locate((1, 1, 0, 0)) is None
    assert trop.locate((-1, -2, 0, 0)) is None
    assert trop.leaves[1].contains((2, 0, 1, 1))
    assert trop.lineality.contains((0, 0, -3, 7))


def test_discrepancy_bounds(quadric):
    cone = elementary_big_cones(quadric, grading(quadric))[0]
    bounds = discrepancy_bounds(cone, quadric.r)
    assert bounds == {"log_terminal": True, "canonical": True, "terminal": True, "eps_log_terminal": None}
    assert discrepancy_bounds(cone, quadric.r, eps=Fraction(1, 2))["eps_log_terminal"] is True


@pytest.mark.parametrize("no, D", realized_rows(), ids=ROW_IDS)
def test_big_cones_meet_lineality_in_their_ray(no, D):
    P = assemble_P(D)
    for cone in elementary_big_cones(D, grading(D)):
        rays = [P.col(j) for j in cone.columns]
        tops = [[ray[k] for ray in rays] for k in range(D.r)]
        (a,) = nullspace(tops, len(rays))
        a = a if a[0] > 0 else tuple(-x for x in a)
        assert all(x > 0 for x in a)
        point = [sum(x * ray[k] for x, ray in zip(a, rays)) for k in range(D.r + D.s)]
        t = next(p / v for p, v in zip(point, cone.v_sigma) if v)
        assert t > 0
        assert point == [t * v for v in cone.v_sigma]
        assert Cone.from_rays(rays, D.r + D.s).relint_contains(cone.v_sigma)


@pytest.mark.parametrize("no, D", realized_rows(), ids=ROW_IDS)
def test_block_maximal_cones_match_enumeration(no, D):
    G = grading(D)
    assert maximal_cones(D, G) == enumerated_maximal_cones(D, G)


def test_block_maximal_cones_on_unit_candidates(e6_cubic):
    for D in unit_candidates()[:30] + (e6_cubic, cubic_333()):
        G = grading(D)
        assert maximal_cones(D, G) == enumerated_maximal_cones(D, G)


def test_sigma_ignores_the_torsion_of_kappa(row26):
    G = grading(row26)
    assert G.torsion == (2,)
    doubled = G.model_copy(update={"kappa": DegreeClass(free=tuple(2 * x for x in G.kappa.free), torsion=(0,))})
    for size in range(row26.columns + 1):
        for subset in itertools.combinations(range(row26.columns), size):
            assert cone_in_sigma(row26, doubled, subset) == cone_in_sigma(row26, G, subset)
    assert enumerated_maximal_cones(row26, doubled) == maximal_cones(row26, G)
