"""Seeded test corpus: valid family members, rotated copies and single-entry perturbations."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg
from .families import (build_theta_deformation, classical_R, quaternionic_R,
                       simplified_quaternionic_R, theta_R)
from .rmatrix import RMatrix, gauge_transform
from .scalars import Backend, cast_array, gauss, to_exact

DEFAULT_CORPUS_SEED = 1729
F = Fraction


@dataclass(frozen=True, eq=False)
class CorpusEntry:
    name: str
    R: RMatrix
    valid: bool
    perturbed_index: tuple | None = None


def rational_rotation(n: int, rng: random.Random, reflect: bool | None = None) -> np.ndarray:
    """A random element of O(n) with rational entries via the Cayley transform (I - K)(I + K)^-1."""
    K = np.zeros((n, n), dtype=object)
    for i in range(n):
        for j in range(i + 1, n):
            v = F(rng.randint(-3, 3), rng.randint(1, 3))
            K[i, j], K[j, i] = v, -v
    I = np.eye(n, dtype=object) * F(1)
    Kx = cast_array(K, Backend.EXACT)
    Ix = cast_array(I, Backend.EXACT)
    inv = linalg.inverse(Ix + Kx)
    Q = linalg.matmul(Ix - Kx, inv)
    if reflect if reflect is not None else rng.random() < 0.5:
        Q = Q.copy()
        Q[:, 0] = -Q[:, 0]
    return Q


def valid_members() -> list[CorpusEntry]:
    out = []

    def add(name: str, R: RMatrix):
        out.append(CorpusEntry(name, R, True))

    for n1, n2 in [(1, 1), (2, 1), (1, 2), (2, 2), (3, 1), (2, 3), (3, 3)]:
        add(f"classical_{n1}_{n2}", classical_R(n1, n2))
    for c, s in [(F(3, 5), F(4, 5)), (F(4, 5), F(3, 5)), (F(5, 13), F(12, 13)), (F(-3, 5), F(4, 5)),
                 (F(8, 17), F(-15, 17)), (0, 1), (-1, 0), (F(7, 25), F(24, 25))]:
        add(f"theta_{c}_{s}", theta_R(c, s))
    add("deform_3_3", build_theta_deformation(3, 3, 1, 1, [[(F(3, 5), F(4, 5))]]))
    add("deform_3_3_eps", build_theta_deformation(3, 3, 1, 1, [[(F(5, 13), F(12, 13))]],
                                                  [[None, -1], [1, -1]]))
    add("deform_3_2", build_theta_deformation(3, 2, 1, 1, [[(F(-4, 5), F(3, 5))]], [[None], [-1]]))
    add("deform_2_3", build_theta_deformation(2, 3, 1, 0, [[]], [[1, -1, 1]]))
    add("deform_4_2", build_theta_deformation(4, 2, 2, 1, [[(F(3, 5), F(4, 5))], [(F(8, 17), F(15, 17))]]))
    add("quaternionic_a", quaternionic_R(F(2, 3), [1, 0, 0], [F(2, 3), F(1, 3), 0]))
    add("quaternionic_b", quaternionic_R(F(3, 5), [F(4, 5), 0, 0], [0, 0, 1]))
    add("simple_q_a", simplified_quaternionic_R(F(2, 3), F(2, 3), F(1, 3)))
    add("simple_q_b", simplified_quaternionic_R(F(3, 5), 0, F(4, 5)))
    return out


def rotated_members(rng: random.Random, count: int = 4) -> list[CorpusEntry]:
    out = []
    bases = [("theta", theta_R(F(3, 5), F(4, 5))),
             ("deform_3_3", build_theta_deformation(3, 3, 1, 1, [[(F(3, 5), F(4, 5))]], [[None, -1], [1, 1]]))]
    for name, R in bases:
        for k in range(count):
            O1 = rational_rotation(R.n1, rng)
            O2 = rational_rotation(R.n2, rng)
            out.append(CorpusEntry(f"{name}_rot{k}", gauge_transform(R, O1, O2), True))
    return out


def perturb(R: RMatrix, rng: random.Random) -> tuple[RMatrix, tuple]:
    """Add a nonzero random rational (real or imaginary) to one random entry."""
    idx = tuple(rng.randrange(s) for s in R.data.shape)
    delta = F(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(2, 11))
    shift = gauss(delta, 0) if rng.random() < 0.6 else gauss(0, delta)
    return R.replace(idx, R.data[idx] + shift), idx


def build_corpus(seed: int = DEFAULT_CORPUS_SEED, perturbations: int = 70) -> list[CorpusEntry]:
    """At least 100 matrices: valid members, rotated copies and single-entry perturbations."""
    rng = random.Random(seed)
    valid = valid_members() + rotated_members(rng)
    small = [e for e in valid if e.R.n <= 6]
    out = list(valid)
    for k in range(perturbations):
        base = small[k % len(small)]
        R, idx = perturb(base.R, rng)
        out.append(CorpusEntry(f"{base.name}_pert{k}", R, False, idx))
    return out


def phase_counterexample() -> RMatrix:
    """R0 on (2, 2) with one diagonal entry turned into the unit phase (3 + 4i)/5.

    It keeps reality and Yang-Baxter, and its presentation is confluent with
    classical dimensions, yet centrality of sum x^2 fails.
    """
    return classical_R(2, 2).replace((0, 0, 0, 0), gauss(F(3, 5), F(4, 5)))


__all__ = ["CorpusEntry", "build_corpus", "valid_members", "rotated_members", "perturb",
           "rational_rotation", "phase_counterexample", "to_exact"]
