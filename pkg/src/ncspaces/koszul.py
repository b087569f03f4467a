"""Koszul complex A (x) A^!*_n with differential b(a (x) x0 x1..xn) = a x0 (x) x1..xn.

A^!*_n is the intersection of E^r (x) R (x) E^s over r + s + 2 = n, built
recursively as (A^!*_{n-1} (x) E) cut down by the relation constraint on the
last two factors. Multiplication in A comes from the linear-algebra quotient,
so the computation does not rely on rewriting being confluent.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .algebra import GradedQuotient, Presentation, graded_quotient, orthogonal_relations, presentation_from_R
from .rmatrix import RMatrix
from .scalars import DEFAULT_TOL, ONE, Backend, zeros

KOSZUL_CAP = 6


@dataclass(frozen=True)
class HomologyGroup:
    n: int
    total_degree: int
    dim: int

    def to_dict(self) -> dict:
        return {"n": self.n, "total_degree": self.total_degree, "dim": self.dim}


def koszul_dual_spaces(P: Presentation, n_max: int) -> list[np.ndarray]:
    """Bases (as rows of length N^n) of A^!*_n for n = 0..n_max."""
    N = P.n
    backend = P.backend
    tol = None if backend is Backend.EXACT else P.tol
    perp = orthogonal_relations(P)
    one = zeros((1, 1), backend)
    one[0, 0] = 1.0 + 0j if backend is Backend.APPROX else ONE
    spaces = [one]
    if n_max >= 1:
        eye = zeros((N, N), backend)
        for i in range(N):
            eye[i, i] = one[0, 0]
        spaces.append(eye)
    for n in range(2, n_max + 1):
        prev = spaces[-1]
        d_prev = prev.shape[0]
        if d_prev == 0 or perp.shape[0] == 0:
            # no constraints: everything in prev (x) E survives
            spaces.append(_tensor_with_generators(prev, N, backend))
            continue
        lead = N ** (n - 2)
        # prev[i] reshaped to (lead, N): index (u, a); new vector v[u, a, b] = c[i, b] * prev[i][u, a]
        shaped = prev.reshape(d_prev, lead, N)
        rows = []
        for w in perp:
            wm = w.reshape(N, N)
            # constraint (w, u): sum_{i,b} c[i,b] sum_a w[a,b] prev[i,u,a]
            block = np.einsum("iua,ab->uib", shaped, wm) if backend is Backend.APPROX else _exact_block(shaped, wm)
            rows.append(block.reshape(lead, d_prev * N))
        cons = np.vstack(rows)
        coeffs = linalg.nullspace(cons, tol)
        # v = sum c[i,b] prev[i] (x) e_b
        basis = _combine(coeffs, prev, N, backend)
        spaces.append(basis)
    return spaces


def _exact_block(shaped: np.ndarray, wm: np.ndarray) -> np.ndarray:
    d, lead, N = shaped.shape
    out = zeros((lead, d, N), Backend.EXACT)
    for a in range(N):
        for b in range(N):
            c = wm[a, b]
            if not c:
                continue
            col = shaped[:, :, a]
            for i in range(d):
                for u in range(lead):
                    if col[i, u]:
                        out[u, i, b] += col[i, u] * c
    return out


def _tensor_with_generators(prev: np.ndarray, N: int, backend: Backend) -> np.ndarray:
    d = prev.shape[0]
    out = zeros((d * N, prev.shape[1] * N), backend)
    for i in range(d):
        for b in range(N):
            out[i * N + b, b::N] = prev[i]
    return out


def _combine(coeffs: np.ndarray, prev: np.ndarray, N: int, backend: Backend) -> np.ndarray:
    k = coeffs.shape[0]
    d, width = prev.shape
    out = zeros((k, width * N), backend)
    for r in range(k):
        for i in range(d):
            for b in range(N):
                c = coeffs[r, i * N + b]
                if (c if backend is Backend.EXACT else abs(c) > 0):
                    out[r, b::N] = out[r, b::N] + prev[i] * c
    return out


def koszul_differential(gq: GradedQuotient, spaces: list[np.ndarray], k: int, n: int) -> np.ndarray:
    """Matrix of b : A_k (x) A^!*_n -> A_{k+1} (x) E^(n-1).

    Rows index the domain pair (s, i), columns the target pair (t, w).
    """
    N = gq.n
    backend = gq.backend
    dk = len(gq.basis[k])
    dk1 = len(gq.basis[k + 1])
    K = spaces[n]
    tail = N ** (n - 1)
    phi = gq.phi[k + 1]
    out = zeros((dk * K.shape[0], dk1 * tail), backend)
    exact = backend is Backend.EXACT
    for i in range(K.shape[0]):
        kappa = K[i].reshape(N, tail)
        for x0 in range(N):
            ws = [w for w in range(tail) if (kappa[x0, w] if exact else abs(kappa[x0, w]) > 0)]
            if not ws:
                continue
            for s in range(dk):
                prod = phi[:, s * N + x0]
                row = s * K.shape[0] + i
                for t in range(dk1):
                    pt = prod[t]
                    if not (pt if exact else abs(pt) > 0):
                        continue
                    for w in ws:
                        out[row, t * tail + w] += pt * kappa[x0, w]
    return out


def koszul_homology_low(R: RMatrix | Presentation, max_total_degree: int = 5,
                        cap: int = KOSZUL_CAP, tol: float = DEFAULT_TOL) -> list[HomologyGroup]:
    """Homology dimensions of the Koszul complex in every (n, total degree) with total <= max."""
    if max_total_degree > cap:
        raise ValueError(f"total degree {max_total_degree} exceeds the Koszul cap {cap}")
    if max_total_degree < 0:
        raise ValueError("total degree must be nonnegative")
    P = R if isinstance(R, Presentation) else presentation_from_R(R, tol)
    rtol = None if P.backend is Backend.EXACT else tol
    T = max_total_degree
    gq = graded_quotient(P, T)
    spaces = koszul_dual_spaces(P, T)
    ranks: dict[tuple[int, int], int] = {}

    def rank_b(k: int, n: int) -> int:
        # rank of b on A_k (x) K_n, zero when n == 0 or the domain is empty
        if n == 0 or k < 0 or spaces[n].shape[0] == 0:
            return 0
        key = (k, n)
        if key not in ranks:
            ranks[key] = linalg.rank(koszul_differential(gq, spaces, k, n), rtol)
        return ranks[key]

    out = []
    for t in range(T + 1):
        for n in range(t + 1):
            k = t - n
            dim = len(gq.basis[k]) * spaces[n].shape[0]
            h = dim - rank_b(k, n) - (rank_b(k - 1, n + 1) if n + 1 <= T else 0)
            out.append(HomologyGroup(n, t, h))
    return out


def homology_summary(groups: list[HomologyGroup]) -> list[tuple[int, int]]:
    """(n, total homology dimension) per homological degree."""
    acc: dict[int, int] = {}
    for g in groups:
        acc[g.n] = acc.get(g.n, 0) + g.dim
    return sorted(acc.items())


def is_acyclic(groups: list[HomologyGroup]) -> bool:
    """H_0 = C in total degree 0 and zero everywhere else."""
    for g in groups:
        expected = 1 if (g.n == 0 and g.total_degree == 0) else 0
        if g.dim != expected:
            return False
    return True
