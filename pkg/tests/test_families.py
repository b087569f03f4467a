from fractions import Fraction as F

import pytest

from ncspaces.algebra import check_central, graded_dimensions, presentation_from_R
from ncspaces.conditions import run_suite, suite_passed
from ncspaces.corpus import phase_counterexample
from ncspaces.families import (build_theta_deformation, central_quadratics, check_left_action_automorphism,
                               classical_R, component_formula, form_product, hodge_star, jmatrices,
                               quaternionic_R, simplified_quaternionic_R, sphere_relations, theta_R,
                               torus_relations)
from ncspaces.scalars import gauss

import oracles


def _eq(a, b):
    return all(a[i, j] == b[i, j] for i in range(4) for j in range(4))


def test_classical_examples():
    assert suite_passed(run_suite(classical_R(2, 2)))
    assert graded_dimensions(presentation_from_R(classical_R(3, 2)), 3).to_list() == [1, 5, 15, 35]


def test_theta_constructor(r0, theta35):
    assert theta_R(1, 0).same_entries(r0)
    assert suite_passed(run_suite(theta35))
    with pytest.raises(ValueError):
        theta_R(F(3, 5), F(3, 5))


def test_deformation_matches_theta(theta35, r0):
    assert build_theta_deformation(2, 2, 1, 1, [[(F(3, 5), F(4, 5))]]).same_entries(theta35)
    assert build_theta_deformation(2, 1, 1, 0, [[]], [[1]]).same_entries(classical_R(2, 1))


def test_deformation_3_3_valid():
    R = build_theta_deformation(3, 3, 1, 1, [[(F(3, 5), F(4, 5))]])
    assert suite_passed(run_suite(R))
    assert graded_dimensions(presentation_from_R(R), 3).to_list() == [1, 6, 21, 56]


def test_deformation_argument_errors():
    with pytest.raises(ValueError):
        build_theta_deformation(2, 2, 2, 1)
    with pytest.raises(ValueError):
        build_theta_deformation(2, 2, 1, 1, [[(F(3, 5), F(3, 5))]])
    with pytest.raises(ValueError):
        build_theta_deformation(3, 2, 1, 1, [[0.3]], [[None], [2]])


def test_multiplication_matrices_match_hamilton_table():
    J = jmatrices()
    for a in range(3):
        unit = tuple(1 if i == a + 1 else 0 for i in range(4))
        assert _eq(J.e_plus[a], oracles.left_mult_matrix(unit))
        assert _eq(J.e_minus[a], oracles.right_mult_matrix(unit))


def test_j_matrix_algebra():
    J = jmatrices()
    jp, jm = J.j_plus, J.j_minus
    assert _eq(jp[0] @ jp[1], jp[2])
    for a in range(3):
        for b in range(3):
            assert _eq(jp[a] @ jm[b], jm[b] @ jp[a])
            assert form_product(jp[a], jp[b]) == (1 if a == b else 0)
            assert form_product(jm[a], jm[b]) == (1 if a == b else 0)
            assert form_product(jp[a], jm[b]) == 0
        assert _eq(hodge_star(jp[a]), jp[a])
        assert _eq(hodge_star(jm[a]), -jm[a])


def test_component_formula_sign_mismatch():
    # the closed component expression lands on -J^{-sign}, not on J^{sign}
    J = jmatrices()
    for a in range(3):
        assert _eq(component_formula(+1, a + 1), -J.j_minus[a])
        assert _eq(component_formula(-1, a + 1), -J.j_plus[a])


def test_quaternionic_examples(quat):
    assert quaternionic_R(1, [0, 0, 0], [0, 0, 0]).same_entries(classical_R(4, 4))
    assert suite_passed(run_suite(quat))
    with pytest.raises(ValueError):
        quaternionic_R(1, [1, 0, 0], [1, 0, 0])


def test_simplified_examples(simple_quat):
    assert simplified_quaternionic_R(1, 0, 0).same_entries(classical_R(4, 4))
    assert suite_passed(run_suite(simple_quat))
    with pytest.raises(ValueError):
        simplified_quaternionic_R(1, 1, 0)


def test_left_action(quat, theta35):
    rep = check_left_action_automorphism(quat)
    assert rep.passed and rep.residual == 0.0 and rep.details["pairs"] == 9
    with pytest.raises(ValueError):
        check_left_action_automorphism(theta35)
    generic = build_theta_deformation(4, 4, 2, 2, [[(F(3, 5), F(4, 5)), (F(5, 13), F(12, 13))],
                                                   [(F(8, 17), F(15, 17)), (0, 1)]])
    assert suite_passed(run_suite(generic))
    assert not check_left_action_automorphism(generic).passed


def test_central_quadratics_theta(theta35):
    cq = central_quadratics(theta35)
    names = [n for n, _ in cq.elements]
    assert names[:3] == ["(x1,x1)", "(x2,x2)", "(x,x)"]
    assert len(names) == 5 and cq.passed
    assert all(r.residual == 0.0 for r in cq.reports)


def test_central_quadratics_corrupted():
    assert not central_quadratics(phase_counterexample(), include_cells=False).passed


def test_cell_products_central_by_hand(theta35):
    # z1 = x1_1 + i x1_2: z z* = (x1_1)^2 + (x1_2)^2 + i (x1_2 x1_1 - x1_1 x1_2)
    P = presentation_from_R(theta35)
    i = gauss(0, 1)
    q = {(0, 0): gauss(1), (1, 1): gauss(1), (1, 0): i, (0, 1): -i}
    assert check_central(P, q).passed


def test_sphere_and_torus(theta35):
    P, rels = sphere_relations(theta35)
    assert P.n == 4 and len(rels) == 1 and rels[0][()] == gauss(-1)
    P, rels = torus_relations(theta35)
    assert len(rels) == 2 and all(r[()] == gauss(-1) for r in rels)
