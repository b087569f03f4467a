"""Row reduction, rank, kernels and span membership over both backends.

Exact matrices are numpy object arrays of Q(i) elements and are reduced with
sympy's sparse ``DomainMatrix`` (fraction-free internally). Approx matrices
are complex arrays; rank uses the singular-value threshold
``rel_tol * sigma_max``.
"""
from __future__ import annotations

import numpy as np
from sympy.polys.domains import QQ_I
from sympy.polys.matrices import DomainMatrix

from .scalars import Backend, zeros

RANK_REL_TOL = 1e-9


def is_exact(mat: np.ndarray) -> bool:
    return mat.dtype == object


def _to_dm(mat: np.ndarray) -> DomainMatrix:
    rows: dict = {}
    for (i, j) in zip(*np.nonzero(_nonzero_mask(mat))):
        rows.setdefault(int(i), {})[int(j)] = mat[i, j]
    return DomainMatrix(rows, mat.shape, QQ_I)


def _nonzero_mask(mat: np.ndarray) -> np.ndarray:
    if is_exact(mat):
        return np.vectorize(bool, otypes=[bool])(mat) if mat.size else np.zeros(mat.shape, bool)
    return mat != 0


def _from_dm(dm: DomainMatrix, nrows: int | None = None) -> np.ndarray:
    shape = dm.shape if nrows is None else (nrows, dm.shape[1])
    out = zeros(shape, Backend.EXACT)
    for i, row in dm.to_sdm().items():
        if i >= shape[0]:
            continue
        for j, v in row.items():
            out[i, j] = v
    return out


def rref(mat: np.ndarray, tol: float | None = None) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    mat = np.asarray(mat)
    if mat.ndim != 2:
        raise ValueError("expected a matrix")
    if mat.shape[0] == 0:
        return mat.copy(), []
    if is_exact(mat):
        red, pivots = _to_dm(mat).rref()
        return _from_dm(red, len(pivots)), list(pivots)
    return _approx_rref(mat.astype(complex), tol)


def _approx_rref(mat: np.ndarray, tol: float | None) -> tuple[np.ndarray, list[int]]:
    a = mat.copy()
    m, n = a.shape
    scale = np.max(np.abs(a)) if a.size else 0.0
    eps = (RANK_REL_TOL if tol is None else tol) * max(scale, 1e-300)
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        k = r + int(np.argmax(np.abs(a[r:, c])))
        if abs(a[k, c]) <= eps:
            a[r:, c] = 0
            continue
        a[[r, k]] = a[[k, r]]
        a[r] = a[r] / a[r, c]
        others = np.arange(m) != r
        a[others] -= np.outer(a[others, c], a[r])
        a[others, c] = 0
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(mat: np.ndarray, tol: float | None = None) -> int:
    mat = np.asarray(mat)
    if mat.size == 0:
        return 0
    if is_exact(mat):
        return int(_to_dm(mat).rank())
    s = np.linalg.svd(mat.astype(complex), compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > (RANK_REL_TOL if tol is None else tol) * s[0]))


def nullspace(mat: np.ndarray, tol: float | None = None) -> np.ndarray:
    """Rows form a basis of {v : mat @ v = 0}."""
    mat = np.asarray(mat)
    n = mat.shape[1]
    if is_exact(mat):
        red, pivots = rref(mat)
        free = [j for j in range(n) if j not in set(pivots)]
        out = zeros((len(free), n), Backend.EXACT)
        for k, f in enumerate(free):
            out[k, f] = QQ_I(1)
            for i, p in enumerate(pivots):
                out[k, p] = -red[i, f]
        return out
    if mat.shape[0] == 0:
        return np.eye(n, dtype=complex)
    u, s, vh = np.linalg.svd(mat.astype(complex))
    thr = (RANK_REL_TOL if tol is None else tol) * (s[0] if s.size else 0.0)
    r = int(np.sum(s > thr)) if s.size and s[0] > 0 else 0
    return vh[r:].conj()


def row_basis(mat: np.ndarray, tol: float | None = None) -> np.ndarray:
    """A basis of the row space (reduced echelon rows)."""
    red, _ = rref(mat, tol)
    return red


def contains(basis: np.ndarray, vecs: np.ndarray, tol: float | None = None) -> tuple[bool, float]:
    """Whether every row of ``vecs`` lies in the row span of ``basis``; returns (ok, residual)."""
    basis = np.asarray(basis)
    vecs = np.asarray(vecs)
    if vecs.shape[0] == 0:
        return True, 0.0
    if is_exact(basis) and is_exact(vecs):
        r0 = rank(basis) if basis.shape[0] else 0
        r1 = rank(np.vstack([basis, vecs]) if basis.shape[0] else vecs)
        return r0 == r1, 0.0 if r0 == r1 else float(r1 - r0)
    b = basis.astype(complex)
    v = vecs.astype(complex)
    if b.shape[0] == 0:
        res = float(np.max(np.abs(v)))
    else:
        coef, *_ = np.linalg.lstsq(b.T, v.T, rcond=None)
        res = float(np.max(np.abs(b.T @ coef - v.T)))
    thr = RANK_REL_TOL if tol is None else tol
    return res <= thr, res


def same_span(a: np.ndarray, b: np.ndarray, tol: float | None = None) -> bool:
    return contains(a, b, tol)[0] and contains(b, a, tol)[0]


def inverse(mat: np.ndarray) -> np.ndarray | None:
    """Matrix inverse, or None when singular."""
    mat = np.asarray(mat)
    n = mat.shape[0]
    if is_exact(mat):
        dm = _to_dm(mat)
        if dm.rank() < n:
            return None
        return _from_dm(dm.inv())
    if rank(mat) < n:
        return None
    return np.linalg.inv(mat.astype(complex))


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if is_exact(a) or is_exact(b):
        return _from_dm(_to_dm(np.asarray(a, dtype=object)) * _to_dm(np.asarray(b, dtype=object)))
    return a @ b


def is_zero_matrix(mat: np.ndarray, tol: float = 0.0) -> bool:
    if is_exact(mat):
        return not any(bool(v) for v in mat.flat)
    return mat.size == 0 or float(np.max(np.abs(mat))) <= tol


__all__ = ["rref", "rank", "nullspace", "row_basis", "contains", "same_span", "inverse",
           "matmul", "is_zero_matrix"]
