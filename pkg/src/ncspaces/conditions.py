"""Pointwise tensor-identity checkers for R-matrices.

Every checker returns a :class:`ConditionReport`; failure is data, never an
exception. Witnesses are 1-based index tuples, the lexicographically smallest
failing one. Checkers made of several equation families prefix the witness
with the label of the first failing family.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from sympy.polys.domains import QQ_I
from sympy.polys.matrices import DomainMatrix

from . import linalg
from .rmatrix import RMatrix, build_big_R
from .scalars import DEFAULT_TOL, ONE, Backend, conj_array, magnitude, magnitudes, zeros


@dataclass(frozen=True)
class ConditionReport:
    condition: str
    passed: bool
    residual: float = 0.0
    witness: tuple = ()
    details: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        out = {"condition": self.condition, "passed": self.passed,
               "residual": self.residual, "witness": list(self.witness)}
        if self.details:
            out["details"] = self.details
        return out

    def __bool__(self) -> bool:
        return self.passed


def reports_to_json(reports) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=1, sort_keys=True)


# residual bookkeeping

def _compare(diff: np.ndarray, tol: float) -> tuple[bool, float, tuple]:
    """Judge a difference array; returns (passed, worst residual, 1-based witness)."""
    if diff.size == 0:
        return True, 0.0, ()
    mags = magnitudes(diff)
    worst = float(mags.max())
    failing = mags > 0 if diff.dtype == object else mags > tol
    if not failing.any():
        return True, worst if diff.dtype != object else 0.0, ()
    idx = np.argwhere(failing)[0]
    return False, worst, tuple(int(i) + 1 for i in idx)


def _single(name: str, diff: np.ndarray, tol: float) -> ConditionReport:
    ok, res, wit = _compare(diff, tol)
    return ConditionReport(name, ok, res, wit)


def _combine(name: str, parts: list[tuple[str, np.ndarray]], tol: float) -> ConditionReport:
    worst = 0.0
    witness: tuple = ()
    ok_all = True
    for label, diff in parts:
        ok, res, wit = _compare(diff, tol)
        worst = max(worst, res)
        if not ok and ok_all:
            ok_all = False
            witness = (label,) + wit
    return ConditionReport(name, ok_all, worst, witness)


def _combine_reports(name: str, reports: list[ConditionReport]) -> ConditionReport:
    worst = max((r.residual for r in reports), default=0.0)
    for r in reports:
        if not r.passed:
            return ConditionReport(name, False, worst, r.witness)
    return ConditionReport(name, True, worst, ())


def _delta(n: int, backend: Backend) -> np.ndarray:
    d = zeros((n, n), backend)
    one = ONE if backend is Backend.EXACT else 1.0
    for i in range(n):
        d[i, i] = one
    return d


def _einsum(spec: str, *ops: np.ndarray) -> np.ndarray:
    if ops[0].dtype == object:
        if len(ops) == 2:
            return _exact_contract(spec, ops[0], ops[1])
        return np.einsum(spec, *ops, optimize=False)
    return np.einsum(spec, *ops, optimize=True)


def _exact_contract(spec: str, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Two-operand einsum over Q(i) done as one sparse matrix product."""
    ins, out = spec.split("->")
    sa, sb = ins.split(",")
    summed = [c for c in sa if c in sb and c not in out]
    fa = [c for c in sa if c not in summed]
    fb = [c for c in sb if c not in summed]
    dims = dict(zip(sa, a.shape)) | dict(zip(sb, b.shape))
    ka = int(np.prod([dims[c] for c in summed])) if summed else 1
    am = a.transpose([sa.index(c) for c in fa + summed]).reshape(-1, ka)
    bm = b.transpose([sb.index(c) for c in summed + fb]).reshape(ka, -1)
    prod = linalg.matmul(np.ascontiguousarray(am), np.ascontiguousarray(bm))
    res = prod.reshape([dims[c] for c in fa + fb])
    return np.ascontiguousarray(res.transpose([(fa + fb).index(c) for c in out]))


def _tol(R: RMatrix, tol: float | None) -> float:
    return DEFAULT_TOL if tol is None else tol


# checkers

def check_reality(R: RMatrix, tol: float | None = None) -> ConditionReport:
    """conj(R)^{la}_{bm} R^{mb}_{gn} = delta^l_n delta^a_g; witness order (l, a, g, n)."""
    Rc = R.conj()
    lhs = _einsum("labm,mbgn->lagn", Rc, R.data)
    rhs = _einsum("ln,ag->lagn", _delta(R.n1, R.backend), _delta(R.n2, R.backend))
    return _single("reality", lhs - rhs, _tol(R, tol))


def _sparse_from_dense(mat: np.ndarray) -> dict[int, dict[int, object]]:
    out: dict[int, dict[int, object]] = {}
    for i, j in zip(*np.nonzero(magnitudes(mat) > 0)):
        out.setdefault(int(i), {})[int(j)] = mat[i, j]
    return out


def _sparse_kron_left(mat: dict, n: int) -> dict:
    """Sparse form of mat (x) I_n for a square matrix of size N^2 on pairs."""
    out: dict[int, dict[int, object]] = {}
    for i, row in mat.items():
        for c in range(n):
            out[i * n + c] = {j * n + c: v for j, v in row.items()}
    return out


def _sparse_kron_right(mat: dict, n: int, size: int) -> dict:
    """Sparse form of I_n (x) mat where mat acts on C^size."""
    out: dict[int, dict[int, object]] = {}
    for a in range(n):
        for i, row in mat.items():
            out[a * size + i] = {a * size + j: v for j, v in row.items()}
    return out


def _sparse_to_dense(mat: dict, dim: int) -> np.ndarray:
    out = zeros((dim, dim), Backend.EXACT)
    for i, row in mat.items():
        for j, v in row.items():
            out[i, j] = v
    return out


def check_involutive(R: RMatrix, tol: float | None = None) -> ConditionReport:
    """Big R squared is the identity; witness (a, b, c, d) of (R^2)^{ab}_{cd}."""
    big = build_big_R(R)
    n = big.n
    m = big.matrix()
    if R.exact:
        sq = linalg.matmul(m, m)
    else:
        sq = m @ m
    diff = sq - _delta(n * n, R.backend)
    return _single("involutive", diff.reshape(n, n, n, n), _tol(R, tol))


def yang_baxter_sides(R: RMatrix) -> tuple[np.ndarray, np.ndarray]:
    """(R12 R23 R12, R23 R12 R23) as arrays indexed [a, b, c, d, e, f]."""
    big = build_big_R(R)
    n = big.n
    m = big.matrix()
    if R.exact:
        dim = n ** 3
        r12, r23 = _exact_braid_factors(R)
        lhs = _sparse_to_dense((r12 * r23 * r12).to_sdm(), dim)
        rhs = _sparse_to_dense((r23 * r12 * r23).to_sdm(), dim)
    else:
        eye = np.eye(n)
        r12 = np.kron(m, eye)
        r23 = np.kron(eye, m)
        lhs = r12 @ r23 @ r12
        rhs = r23 @ r12 @ r23
    shape = (n,) * 6
    return lhs.reshape(shape), rhs.reshape(shape)


def check_yang_baxter_full(R: RMatrix, tol: float | None = None) -> ConditionReport:
    """Braid relation for the assembled big R over all index triples.

    Witness (a, b, c, d, e, f) locates the entry [abc, def] of the difference.
    """
    if not R.exact:
        lhs, rhs = yang_baxter_sides(R)
        return _single("yang_baxter_full", lhs - rhs, _tol(R, tol))
    n = R.n
    r12, r23 = _exact_braid_factors(R)
    diff = (r12 * r23 * r12 - r23 * r12 * r23).to_sdm()
    entries = [(i, j, v) for i, row in diff.items() for j, v in row.items() if v]
    if not entries:
        return ConditionReport("yang_baxter_full", True, 0.0, ())
    worst = max(magnitude(v) for _, _, v in entries)
    i, j, _ = min(entries, key=lambda e: (e[0], e[1]))
    wit = tuple(int(k) + 1 for k in np.unravel_index(i * n ** 3 + j, (n,) * 6))
    return ConditionReport("yang_baxter_full", False, worst, wit)


def _exact_braid_factors(R: RMatrix):
    n = R.n
    s = _sparse_from_dense(build_big_R(R).matrix())
    dim = n ** 3
    r12 = DomainMatrix(_sparse_kron_left(s, n), (dim, dim), QQ_I)
    r23 = DomainMatrix(_sparse_kron_right(s, n, n * n), (dim, dim), QQ_I)
    return r12, r23


def _yb_family(R: RMatrix, which: str) -> np.ndarray:
    """Difference LHS - RHS for one quadratic family.

    yb1.* indices are (l, a, g, b, d, m); yb2.* indices are (l, a, n, m, b, r).
    """
    P = R.data
    C = R.conj()
    if which == "yb1.1":
        return _einsum("lagr,rbdm->lagbdm", P, P) - _einsum("lbdr,ragm->lagbdm", P, P)
    if which == "yb1.2":
        return _einsum("lagr,rbdm->lagbdm", C, C) - _einsum("lbdr,ragm->lagbdm", C, C)
    if which == "yb1.3":
        return _einsum("lagr,rbdm->lagbdm", C, P) - _einsum("lbdr,ragm->lagbdm", P, C)
    if which == "yb2.1":
        return _einsum("lagn,mgbr->lanmbr", P, P) - _einsum("magr,lgbn->lanmbr", P, P)
    if which == "yb2.2":
        return _einsum("lagn,mgbr->lanmbr", C, C) - _einsum("magr,lgbn->lanmbr", C, C)
    if which == "yb2.3":
        return _einsum("lagn,mgbr->lanmbr", P, C) - _einsum("magr,lgbn->lanmbr", C, P)
    raise ValueError(which)


YB_FAMILIES = ("yb1.1", "yb1.2", "yb1.3", "yb2.1", "yb2.2", "yb2.3")


def check_yb_components(R: RMatrix, tol: float | None = None) -> ConditionReport:
    """The six quadratic families equivalent to the braid relation."""
    parts = [(f, _yb_family(R, f)) for f in YB_FAMILIES]
    return _combine("yb_components", parts, _tol(R, tol))


def centrality_differences(R: RMatrix) -> list[tuple[str, np.ndarray]]:
    P = R.data
    d1 = _delta(R.n1, R.backend)
    d2 = _delta(R.n2, R.backend)
    # sum_{l,b} R^{lg}_{bn} R^{lb}_{am} = delta^g_a delta_{mn}, indices (g, a, m, n)
    c1 = _einsum("lgbn,lbam->gamn", P, P) - _einsum("ga,mn->gamn", d2, d1)
    # sum_{a,r} R^{la}_{br} R^{ra}_{gm} = delta^l_m delta_{bg}, indices (l, b, g, m)
    c2 = _einsum("labr,ragm->lbgm", P, P) - _einsum("lm,bg->lbgm", d1, d2)
    return [("cerad.1", c1), ("cerad.2", c2)]


def check_centrality_components(R: RMatrix, tol: float | None = None) -> ConditionReport:
    return _combine("centrality_components", centrality_differences(R), _tol(R, tol))


def euclid_quantities(R: RMatrix):
    """The four quantities of the Euclidean chain, indexed (l, b, a, m), plus X^{-1} or None."""
    n1, n2 = R.n1, R.n2
    P = R.data
    q1 = P
    q2 = P.transpose(3, 2, 1, 0)
    q3 = conj_array(P.transpose(3, 1, 2, 0))
    X = P.reshape(n1 * n2, n2 * n1)
    Xinv = linalg.inverse(np.ascontiguousarray(X))
    q4 = None
    if Xinv is not None:
        q4 = Xinv.reshape(n2, n1, n1, n2).transpose(2, 0, 3, 1)
    return q1, q2, q3, q4, X


def check_euclidean(R: RMatrix, tol: float | None = None) -> ConditionReport:
    """The Euclidean chain of equalities plus the two retained braid families.

    Witnesses for the chain parts are in (l, b, a, m) order.
    """
    t = _tol(R, tol)
    n1, n2 = R.n1, R.n2
    q1, q2, q3, q4, X = euclid_quantities(R)
    parts = [("eucl0.1", q1 - q2), ("eucl0.2", q2 - q3)]
    if q4 is not None:
        parts.append(("eucl0.3", q3 - q4))
    else:
        # X is singular: locate the failure in X W - 1, W being the candidate inverse from q3
        W = np.ascontiguousarray(q3.transpose(1, 3, 0, 2)).reshape(n2 * n1, n1 * n2)
        prod = linalg.matmul(np.ascontiguousarray(X), W)
        diff = (prod - _delta(n1 * n2, R.backend)).reshape(n1, n2, n1, n2)
        if _compare(diff, t)[0]:
            diff = diff.copy()
            diff[(0, 0, 0, 0)] += ONE if R.exact else 1.0
        parts.append(("eucl0.3", diff))
    parts += [("eucl1.yb1.1", _yb_family(R, "yb1.1")), ("eucl1.yb2.1", _yb_family(R, "yb2.1"))]
    report = _combine("euclidean", parts, t)
    if q4 is None:
        return ConditionReport(report.condition, False, report.residual, report.witness,
                               {"singular": True})
    return report


CHECKERS = (
    ("reality", check_reality),
    ("involutive", check_involutive),
    ("yang_baxter_full", check_yang_baxter_full),
    ("yb_components", check_yb_components),
    ("centrality_components", check_centrality_components),
    ("euclidean", check_euclidean),
)


def run_suite(R: RMatrix, tol: float | None = None) -> list[ConditionReport]:
    return [fn(R, tol) for _, fn in CHECKERS]


def suite_passed(reports) -> bool:
    return all(r.passed for r in reports)

