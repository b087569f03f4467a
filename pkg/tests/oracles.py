"""Independent reference computations used to check the package.

Nothing here imports package internals beyond the RMatrix container: every
oracle recomputes its quantity from the raw entries in plain numpy/Fraction
arithmetic, along a route different from the implementation under test.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import comb

import numpy as np


def raw(R) -> np.ndarray:
    return np.asarray(R.as_complex(), dtype=complex)


def big_matrix(R) -> np.ndarray:
    """The braiding on C^N (x) C^N as an N^2 x N^2 matrix M[(a,b),(c,d)], x^a x^b = M x^c x^d."""
    r = raw(R)
    n1, n2 = R.n1, R.n2
    n = n1 + n2
    M = np.zeros((n * n, n * n), dtype=complex)
    for i, j in product(range(n), repeat=2):
        if (i < n1) == (j < n1):
            M[i * n + j, j * n + i] = 1
    for l, a, b, m in product(range(n1), range(n2), range(n2), range(n1)):
        M[l * n + n1 + a, (n1 + b) * n + m] = r[l, a, b, m]
        M[(n1 + a) * n + l, m * n + n1 + b] = np.conj(r[l, a, b, m])
    return M


def braid_residual(R) -> float:
    n = R.n1 + R.n2
    M = big_matrix(R)
    I = np.eye(n)
    A = np.kron(M, I)
    B = np.kron(I, M)
    return float(np.max(np.abs(A @ B @ A - B @ A @ B)))


def involution_residual(R) -> float:
    M = big_matrix(R)
    return float(np.max(np.abs(M @ M - np.eye(M.shape[0]))))


def polynomial_dims(n: int, d: int) -> list[int]:
    return [comb(k + n - 1, k) for k in range(d + 1)]


def exterior_dims(n: int, d: int) -> list[int]:
    return [comb(n, k) for k in range(d + 1)]


def mixed_rule(R, alpha: int, lam: int) -> dict:
    """x2^alpha x1^lam rewritten by the fourth relation family, 0-based words, complex coefficients."""
    r = raw(R)
    n1 = R.n1
    out = {}
    for b in range(R.n2):
        for m in range(R.n1):
            c = np.conj(r[lam, alpha, b, m])
            if abs(c) > 0:
                out[(m, n1 + b)] = c
    return out


def euler_characteristic(dims_a: list[int], dims_dual: list[int], t: int) -> int:
    """sum_n (-1)^n dim A_{t-n} dim A^!_n; zero for t > 0 when H_A(s) H_{A!}(-s) = 1."""
    return sum((-1) ** n * dims_a[t - n] * (dims_dual[n] if n < len(dims_dual) else 0)
               for n in range(t + 1))


# quaternions through Hamilton's table, independent of the package's formula

HAMILTON = {
    ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
    ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
    ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
    ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
}
UNITS = ("1", "i", "j", "k")


def hamilton_product(p: tuple, q: tuple) -> tuple:
    out = [Fraction(0)] * 4
    for a, x in enumerate(p):
        for b, y in enumerate(q):
            sign, unit = HAMILTON[(UNITS[a], UNITS[b])]
            out[UNITS.index(unit)] += sign * Fraction(x) * Fraction(y)
    return tuple(out)


def left_mult_matrix(q: tuple) -> np.ndarray:
    cols = [hamilton_product(q, tuple(1 if i == c else 0 for i in range(4))) for c in range(4)]
    return np.array(cols, dtype=object).T


def right_mult_matrix(q: tuple) -> np.ndarray:
    cols = [hamilton_product(tuple(1 if i == c else 0 for i in range(4)), q) for c in range(4)]
    return np.array(cols, dtype=object).T


def pythagorean(m: int, n: int) -> tuple[Fraction, Fraction]:
    """(cos, sin) on the unit circle from integers, (m^2 - n^2, 2mn) / (m^2 + n^2)."""
    d = m * m + n * n
    return Fraction(m * m - n * n, d), Fraction(2 * m * n, d)
