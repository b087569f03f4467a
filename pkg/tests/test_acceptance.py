"""The ten acceptance criteria, one test each, each printing a single PASS/FAIL line.

The lines are also collected and repeated in the pytest terminal summary.
Criterion 3 is false as stated (see the counterexamples it prints) and is
marked as a strict expected failure; the weaker statement that does hold is
checked separately.
"""
import math
import random
import time
from fractions import Fraction as F

import pytest

from ncspaces.algebra import (check_confluence, classical_dimensions, dual_presentation, graded_dimensions,
                              presentation_from_R, quotient_dimensions)
from ncspaces.clifford import (build_clifford, check_clifford_pbw, clifford_dimension, verify_gamma_x_identity,
                               verify_theta_x_identity)
from ncspaces.conditions import (check_centrality_components, check_euclidean, check_reality,
                                 check_yang_baxter_full, check_yb_components, run_suite, suite_passed)
from ncspaces.corpus import build_corpus, rational_rotation
from ncspaces.families import (central_quadratics, check_left_action_automorphism, quaternionic_R,
                               simplified_quaternionic_R, theta_R)
from ncspaces.koszul import koszul_homology_low
from ncspaces.reduction import (canonical_R, extract_invariants, invariant_signature, reconstruct_R, reduce_R,
                                same_invariants)
from ncspaces.rmatrix import gauge_transform

RESULTS: dict[int, str] = {}


def record(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = line
    print(line)


@pytest.fixture(scope="module")
def theta():
    return theta_R(F(3, 5), F(4, 5))


@pytest.fixture(scope="module")
def corpus():
    return build_corpus()


def test_criterion_01_hilbert_series(theta):
    t0 = time.perf_counter()
    primal = graded_dimensions(presentation_from_R(theta), 6).to_list()
    elapsed = time.perf_counter() - t0
    dual = graded_dimensions(dual_presentation(theta), 6).to_list()
    ok = (primal == [math.comb(n + 3, 3) for n in range(7)] and dual[:6] == [1, 4, 6, 4, 1, 0]
          and not any(dual[5:]) and elapsed < 10 and theta.exact)
    record(1, ok, f"dims {primal}, dual {dual[:6]}, {elapsed:.2f}s")
    assert ok


def test_criterion_02_condition_equivalences(corpus):
    bad = []
    for e in corpus:
        yb_full = check_yang_baxter_full(e.R).passed
        yb_comp = check_yb_components(e.R).passed
        eucl = check_euclidean(e.R).passed
        combo = check_reality(e.R).passed and yb_comp and check_centrality_components(e.R).passed
        if yb_full != yb_comp or eucl != combo:
            bad.append(e.name)
    ok = len(corpus) >= 100 and not bad
    record(2, ok, f"{len(corpus)} matrices, {len(bad)} disagreements {bad[:3]}")
    assert ok


def _confluent_classical(R) -> bool:
    P = presentation_from_R(R)
    if not check_confluence(P, 3).passed:
        return False
    return quotient_dimensions(P, 3).to_list() == classical_dimensions(R.n, 3).to_list()


def _criterion_3_counterexamples(corpus):
    valid_failures = [e.name for e in corpus if e.valid and not check_confluence(presentation_from_R(e.R), 3).passed]
    missed = [e for e in corpus if not e.valid and not check_euclidean(e.R).passed and _confluent_classical(e.R)]
    return valid_failures, missed


@pytest.mark.xfail(strict=True, reason="an imaginary shift of a zero entry keeps reality, Yang-Baxter, "
                                       "confluence and classical dimensions while breaking centrality")
def test_criterion_03_confluence_iff_validity(corpus):
    valid_failures, missed = _criterion_3_counterexamples(corpus)
    ok = not valid_failures and not missed
    detail = ", ".join(f"{e.name} at {tuple(i + 1 for i in e.perturbed_index)}" for e in missed)
    record(3, ok, f"valid failing confluence: {len(valid_failures)}; invalid yet confluent with classical "
                  f"dims: {len(missed)} ({detail})")
    assert ok


def test_criterion_03_refined_statement(corpus):
    """What does hold: every invalid perturbation that survives confluence only breaks centrality."""
    valid_failures, missed = _criterion_3_counterexamples(corpus)
    assert not valid_failures
    for e in missed:
        reports = {r.condition: r.passed for r in run_suite(e.R)}
        assert reports["reality"] and reports["yang_baxter_full"] and reports["yb_components"], e.name
        assert not reports["centrality_components"], e.name
    for e in corpus:
        if e.valid:
            continue
        if not (check_reality(e.R).passed and check_yb_components(e.R).passed):
            assert not _confluent_classical(e.R), e.name


def test_criterion_04_clifford(theta):
    C = build_clifford(theta)
    dim = clifford_dimension(C)
    nilpotent = verify_theta_x_identity(theta)
    square = verify_gamma_x_identity(theta, clifford=C)
    pbw = check_clifford_pbw(C)
    ok = (dim == 16 and nilpotent.passed and nilpotent.residual == 0.0 and square.passed
          and square.residual == 0.0 and pbw.passed)
    record(4, ok, f"dim {dim}, (theta x)^2 residual {nilpotent.residual}, (Gamma x)^2 residual "
                  f"{square.residual}, pbw {pbw.passed}")
    assert ok


def test_criterion_05_reduction_roundtrip():
    R = simplified_quaternionic_R(F(2, 3), F(2, 3), F(1, 3))
    C = reduce_R(R)
    back = reconstruct_R(C)
    gauge_dev = canonical_R(C).max_deviation(gauge_transform(R.to_approx(), C.O1, C.O2))
    dev = back.max_deviation(R)
    suite_ok = suite_passed(run_suite(back))
    C2 = reduce_R(back)
    cos_t, sin_t = C2.cos_table(), C2.sin_table()
    cells = [(cos_t[i, j], sin_t[i, j]) for i in range(C2.k1) for j in range(C2.k2)]
    ok = (suite_ok and dev <= 1e-9 and gauge_dev <= 1e-9 and (C2.k1, C2.k2) == (2, 2) and len(cells) == 4
          and all(abs(c - 2 / 3) <= 1e-9 and abs(abs(s) - math.sqrt(5) / 3) <= 1e-9 for c, s in cells))
    record(5, ok, f"k=({C2.k1},{C2.k2}), deviation {max(dev, gauge_dev):.2e}, suite {suite_ok}")
    assert ok


def test_criterion_06_theta_extraction(theta):
    C = reduce_R(theta)
    angles, _ = extract_invariants(C)
    err = abs(angles[0][0] - math.atan2(4 / 5, 3 / 5)) if (C.k1, C.k2) == (1, 1) else float("inf")
    ok = err <= 1e-12
    record(6, ok, f"k=({C.k1},{C.k2}), theta {angles[0][0] if angles else None}, error {err:.1e}")
    assert ok


def test_criterion_07_gauge_invariance(theta):
    quat = quaternionic_R(F(2, 3), [1, 0, 0], [F(2, 3), F(1, 3), 0])
    rng = random.Random(20240601)
    mismatches = []
    for name, R in (("theta", theta), ("quaternionic", quat)):
        ref = invariant_signature(reduce_R(R))
        for k in range(20):
            rotated = gauge_transform(R, rational_rotation(R.n1, rng), rational_rotation(R.n2, rng))
            if not same_invariants(ref, invariant_signature(reduce_R(rotated))):
                mismatches.append((name, k))
    ok = not mismatches
    record(7, ok, f"40 rotated inputs, {len(mismatches)} invariant mismatches")
    assert ok


def test_criterion_08_quaternionic_symmetry():
    R = quaternionic_R(F(2, 3), [1, 0, 0], [F(2, 3), F(1, 3), 0])
    rep = check_left_action_automorphism(R)
    ok = rep.passed and rep.residual == 0.0 and rep.details["pairs"] == 9
    record(8, ok, f"9 substitutions, residual {rep.residual}, witness {rep.witness}")
    assert ok


def test_criterion_09_koszul(theta):
    t0 = time.perf_counter()
    groups = koszul_homology_low(theta, 5)
    elapsed = time.perf_counter() - t0
    h0 = [g for g in groups if g.n == 0]
    low = [g for g in groups if g.n in (1, 2)]
    ok = (all(g.dim == (1 if g.total_degree == 0 else 0) for g in h0)
          and all(g.dim == 0 for g in low) and elapsed < 60)
    record(9, ok, f"H_0 = C, H_1 = H_2 = 0 through total degree 5 ({len(groups)} groups, {elapsed:.2f}s)")
    assert ok


def test_criterion_10_centrality(theta):
    cq = central_quadratics(theta)
    names = [n for n, _ in cq.elements]
    wanted = {"(x1,x1)", "(x2,x2)", "z1^1 z1^1*", "z2^1 z2^1*"}
    exact_zero = all(r.residual == 0.0 for r in cq.reports)
    ok = cq.passed and exact_zero and wanted <= set(names)
    record(10, ok, f"central: {', '.join(names)}; exact zero {exact_zero}")
    assert ok
