import random

import numpy as np

from ncspaces.conditions import run_suite, suite_passed
from ncspaces.corpus import build_corpus, phase_counterexample, rational_rotation
from ncspaces.scalars import gauss


def test_size_and_determinism(corpus):
    assert len(corpus) >= 100
    again = build_corpus()
    assert [e.name for e in again] == [e.name for e in corpus]
    assert all(a.R.same_entries(b.R) for a, b in zip(again, corpus))


def test_valid_members_pass(corpus):
    for e in corpus:
        if e.valid:
            assert suite_passed(run_suite(e.R)), e.name


def test_perturbations_touch_one_entry(corpus):
    by_name = {e.name: e for e in corpus if e.valid}
    for e in corpus:
        if e.valid:
            continue
        base = by_name[e.name.rsplit("_pert", 1)[0]]
        diff = np.argwhere(e.R.data != base.R.data)
        assert [tuple(d) for d in diff] == [e.perturbed_index]


def test_rational_rotations_are_orthogonal():
    rng = random.Random(5)
    for n in (2, 3, 4):
        O = rational_rotation(n, rng)
        gram = O.T @ O
        for i in range(n):
            for j in range(n):
                assert gram[i, j] == gauss(1 if i == j else 0)


def test_phase_counterexample_profile():
    names = {r.condition: r.passed for r in run_suite(phase_counterexample())}
    assert names["reality"] and names["yang_baxter_full"] and names["yb_components"]
    assert not names["centrality_components"] and not names["euclidean"]
