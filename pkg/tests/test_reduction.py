import math
import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ncspaces.conditions import run_suite, suite_passed
from ncspaces.corpus import rational_rotation
from ncspaces.families import build_theta_deformation, classical_R, j_minus, theta_R
from ncspaces.reduction import (FactorFamilies, ReductionError, check_families,
                                decompose_ST, emit_complex_presentation, extract_invariants,
                                factorize_families, invariant_signature, reconstruct_R, reduce_R,
                                same_invariants)
from ncspaces.rmatrix import gauge_transform
from ncspaces.scalars import gauss

J = np.array([[0.0, -1.0], [1.0, 0.0]])


def _f(mat):
    return np.array([[float(v.x) if hasattr(v, "x") else float(v) for v in row] for row in mat])


def test_decompose_theta_closed_form(theta35):
    S, T = decompose_ST(theta35).matrices()
    assert np.allclose(S, 0.6 * np.eye(4), atol=1e-15)
    assert np.allclose(T, 0.8 * np.kron(J, J), atol=1e-15)


def test_decompose_classical(r0):
    S, T = decompose_ST(r0).matrices()
    assert np.array_equal(S, np.eye(4)) and not T.any()


def test_decompose_quaternionic(quat):
    S, T = decompose_ST(quat).matrices()
    want_T = np.kron(_f(j_minus([1, 0, 0])), _f(j_minus([F(2, 3), F(1, 3), 0])))
    assert np.allclose(S, (2 / 3) * np.eye(16), atol=1e-14)
    assert np.allclose(T, want_T, atol=1e-14)


def test_factor_counts(r0, theta35):
    F1 = factorize_families(decompose_ST(theta35))
    assert (F1.p, F1.q) == (1, 1)
    a, b = F1.A[0], F1.B[0]
    assert np.allclose(a / a[0, 0], np.eye(2)) and np.allclose(b / b[0, 0], np.eye(2))
    c, d = F1.C[0], F1.D[0]
    assert np.allclose(c / c[1, 0], J) and np.allclose(d / d[1, 0], J)
    F0 = factorize_families(decompose_ST(r0))
    assert (F0.p, F0.q) == (1, 0)


def test_family_checks(theta35, quat):
    assert check_families(factorize_families(decompose_ST(theta35))).passed
    assert check_families(factorize_families(decompose_ST(quat))).passed
    X = np.array([[0.0, 1.0], [1.0, 0.0]])
    bogus = FactorFamilies(2, 2, np.array([np.eye(2)]), np.array([np.eye(2)]),
                           np.array([J, X]), np.array([J, J]))
    rep = check_families(bogus)
    assert not rep.passed and rep.residual > 0


def test_canonical_block_counts(r0, theta35, simple_quat):
    assert (reduce_R(theta35).k1, reduce_R(theta35).k2) == (1, 1)
    C = reduce_R(r0)
    assert (C.k1, C.k2) == (0, 0) and C.c.size == 0
    C = reduce_R(simple_quat)
    assert (C.k1, C.k2) == (2, 2)


def test_theta_invariant(theta35):
    theta, eps = extract_invariants(reduce_R(theta35))
    assert abs(theta[0][0] - math.atan2(0.8, 0.6)) <= 1e-12
    assert eps == [[None]]


def test_classical_signs():
    theta, eps = extract_invariants(reduce_R(classical_R(2, 1)))
    assert theta == [] and all(e == 1 for row in eps for e in row)


def test_quaternionic_cells(simple_quat):
    C = reduce_R(simple_quat)
    assert np.allclose(np.abs(C.cos_table()), 2 / 3, atol=1e-9)
    assert np.allclose(np.abs(C.sin_table()), math.sqrt(5) / 3, atol=1e-9)


def test_signs_reproduced():
    eps_in = [[None, -1], [1, -1]]
    R = build_theta_deformation(3, 3, 1, 1, [[(F(5, 13), F(12, 13))]], eps_in)
    theta, eps = extract_invariants(reduce_R(R))
    assert eps == eps_in
    assert abs(abs(theta[0][0]) - math.atan2(12, 5)) < 1e-12


def test_complex_presentation_sizes(r0, theta35, simple_quat):
    P = emit_complex_presentation(reduce_R(theta35))
    assert P.n == 4 and P.relation_count == 6
    assert P.labels[:2] == ("z1^1", "zb1^1")
    P0 = emit_complex_presentation(reduce_R(r0))
    assert P0.relation_count == 6
    Pq = emit_complex_presentation(reduce_R(simple_quat))
    assert Pq.relation_count == 28


def test_wrong_phase_sign_is_rejected(theta35):
    with pytest.raises(ReductionError):
        emit_complex_presentation(reduce_R(theta35), phase_sign=+1)


def test_roundtrips(r0, theta35, simple_quat):
    # the reduction is floating point throughout, so R0 comes back to rounding error only
    assert reconstruct_R(reduce_R(r0)).max_deviation(r0) <= 1e-15
    assert reconstruct_R(reduce_R(theta35)).max_deviation(theta35) <= 1e-9
    back = reconstruct_R(reduce_R(simple_quat))
    assert back.max_deviation(simple_quat) <= 1e-9
    assert suite_passed(run_suite(back))
    assert same_invariants(invariant_signature(reduce_R(back)), invariant_signature(reduce_R(simple_quat)))


def test_refusal_on_invalid():
    bad = theta_R(F(3, 5), F(4, 5)).replace((0, 0, 0, 0), gauss(F(1, 2)))
    with pytest.raises(ReductionError):
        reduce_R(bad)


def test_seed_changes_nothing_observable(theta35):
    a = invariant_signature(reduce_R(theta35, seed=1))
    b = invariant_signature(reduce_R(theta35, seed=2))
    assert same_invariants(a, b)


@given(st.integers(0, 10 ** 6))
def test_gauge_invariance_property(seed):
    rng = random.Random(seed)
    R = build_theta_deformation(3, 3, 1, 1, [[(F(3, 5), F(4, 5))]], [[None, -1], [1, 1]])
    rotated = gauge_transform(R, rational_rotation(3, rng), rational_rotation(3, rng))
    assert same_invariants(invariant_signature(reduce_R(R)), invariant_signature(reduce_R(rotated)))
