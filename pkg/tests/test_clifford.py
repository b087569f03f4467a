from fractions import Fraction as F

import numpy as np
import pytest

from ncspaces.algebra import NonConfluentError, presentation_from_R
from ncspaces.clifford import (build_clifford, check_clifford_pbw, check_orthogonality, clifford_dimension,
                               commutative_presentation, dagger, is_hermitian_rows, verify_gamma_x_identity,
                               verify_theta_x_identity)
from ncspaces.families import classical_R, theta_R
from ncspaces.scalars import gauss


def test_classical_clifford_relations(r0):
    C = build_clifford(r0)
    assert C.hermitian and is_hermitian_rows(C.relations, 4)
    rs = C.rewriting
    for k in range(4):
        assert rs.normalize((k, k)) == {(): gauss(1)}
        for l in range(k + 1, 4):
            anti = {}
            for w, c in list(rs.normalize((k, l)).items()) + list(rs.normalize((l, k)).items()):
                anti[w] = anti.get(w, gauss(0)) + c
            assert all(not v for v in anti.values()), (k, l)


def test_theta_mixed_constants_vanish(theta35):
    C = build_clifford(theta35)
    for row, c in zip(C.relations, C.constants):
        m = row.reshape(4, 4)
        if any(m[i, j] for i in range(2) for j in range(2, 4)) and not any(m[i, i] for i in range(4)):
            assert not c


def test_dimensions(theta35):
    assert clifford_dimension(build_clifford(theta35)) == 16
    assert clifford_dimension(build_clifford(classical_R(1, 1))) == 4
    assert clifford_dimension(build_clifford(classical_R(2, 3))) == 32


def test_corrupted_refused():
    bad = theta_R(F(3, 5), F(4, 5)).replace((0, 0, 0, 0), gauss(F(1, 2)))
    C = build_clifford(bad, check=False)
    with pytest.raises(NonConfluentError) as info:
        clifford_dimension(C)
    assert len(info.value.report.witness) == 3


def test_invalid_R_rejected_by_default():
    bad = theta_R(F(3, 5), F(4, 5)).replace((0, 0, 0, 0), gauss(F(1, 2)))
    with pytest.raises(ValueError):
        build_clifford(bad)


def test_orthogonality_exact(theta35):
    rep = check_orthogonality(build_clifford(theta35), presentation_from_R(theta35))
    assert rep.passed and rep.residual == 0.0


def test_theta_x_identity(r0, theta35):
    for R in (r0, theta35):
        rep = verify_theta_x_identity(R)
        assert rep.passed and rep.residual == 0.0 and rep.details["converse"]


def test_theta_x_identity_detects_wrong_primal(theta35):
    wrong = presentation_from_R(classical_R(2, 2))
    rep = verify_theta_x_identity(theta35, primal=wrong)
    assert not rep.passed and rep.residual > 0


def test_gamma_x_identity(r0, theta35):
    for R in (r0, theta35):
        rep = verify_gamma_x_identity(R)
        assert rep.passed and rep.residual == 0.0


def test_gamma_x_identity_wrong_algebra(theta35):
    rep = verify_gamma_x_identity(theta35, primal=commutative_presentation(theta35))
    assert not rep.passed and rep.residual > 0


def test_pbw(theta35):
    assert check_clifford_pbw(build_clifford(theta35)).passed
    assert check_clifford_pbw(build_clifford(classical_R(2, 2))).passed


def test_dagger_involution(theta35):
    C = build_clifford(theta35)
    assert np.array_equal(dagger(dagger(C.relations, 4), 4), C.relations)
