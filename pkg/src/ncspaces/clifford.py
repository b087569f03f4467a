"""Generalized Clifford algebra: the dual relations deformed by their traces.

Relations are r - c(r) 1 for r in the orthogonal R-perp of the relation space
of A_R, with c(r) = sum_i r^{ii}. Everything is verified by filtered rewriting;
no matrix representation of the generators is built.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import linalg
from .algebra import (NonConfluentError, Presentation, RewriteSystem, ANTISYMMETRIC,
                      check_pbw_conditions, check_rewrite_confluence, dual_presentation,
                      generator_labels, orthogonal_relations, presentation_from_R)
from .conditions import ConditionReport, check_euclidean
from .families import classical_R
from .rmatrix import RMatrix
from .scalars import DEFAULT_TOL, I_UNIT, ONE, Backend, conj_array, magnitude, zeros


def dagger(vectors: np.ndarray, n: int) -> np.ndarray:
    """r -> r^dagger with (r^dagger)^{kl} = conj(r^{lk}), row-wise."""
    v = np.asarray(vectors)
    return conj_array(v.reshape(-1, n, n).transpose(0, 2, 1)).reshape(v.shape)


def hermitian_basis(vectors: np.ndarray, n: int, backend: Backend,
                    tol: float = DEFAULT_TOL) -> np.ndarray | None:
    """A basis of span(vectors) made of hermitian tensors, or None if the span is not dagger-closed."""
    t = None if backend is Backend.EXACT else tol
    vecs = np.asarray(vectors)
    if vecs.shape[0] == 0:
        return vecs
    dag = dagger(vecs, n)
    if not linalg.contains(vecs, dag, t)[0]:
        return None
    if backend is Backend.EXACT:
        half = ONE / 2
        imag = ONE / (2 * I_UNIT)
        cands = [(v + d) * half for v, d in zip(vecs, dag)] + [(v - d) * imag for v, d in zip(vecs, dag)]
    else:
        cands = [(v + d) / 2 for v, d in zip(vecs, dag)] + [(v - d) / 2j for v, d in zip(vecs, dag)]
    target = linalg.rank(vecs, t)
    chosen: list = []
    current = 0
    for c in cands:
        trial = np.array(chosen + [c], dtype=vecs.dtype)
        r = linalg.rank(trial, t)
        if r > current:
            chosen.append(c)
            current = r
            if current == target:
                break
    return np.array(chosen, dtype=vecs.dtype)


def is_hermitian_rows(vectors: np.ndarray, n: int, tol: float = 0.0) -> bool:
    diff = np.asarray(vectors) - dagger(vectors, n)
    return linalg.is_zero_matrix(diff, tol)


@dataclass(frozen=True, eq=False)
class CliffordPresentation:
    """Generators Gamma_k with relations r_L - c_L 1; ``relations`` rows are hermitian."""
    n: int
    labels: tuple
    relations: np.ndarray
    constants: tuple
    backend: Backend
    hermitian: bool = True
    tol: float = DEFAULT_TOL

    def filtered_elements(self) -> list[dict]:
        out = []
        for row, c in zip(self.relations, self.constants):
            el = {}
            for idx, v in enumerate(row):
                if (v if self.backend is Backend.EXACT else abs(v) > 0):
                    el[divmod(idx, self.n)] = v
            if (c if self.backend is Backend.EXACT else abs(c) > 0):
                el[()] = -c
            out.append(el)
        return out

    @cached_property
    def rewriting(self) -> RewriteSystem:
        return RewriteSystem.from_rows(self.n, self.filtered_elements(), self.backend, self.tol)

    def to_dict(self) -> dict:
        from .scalars import to_complex
        return {"n": self.n, "relations": len(self.constants),
                "constants": [[to_complex(c).real, to_complex(c).imag] for c in self.constants],
                "hermitian": self.hermitian}


def trace_constant(row: np.ndarray, n: int):
    m = np.asarray(row).reshape(n, n)
    total = m[0, 0]
    for i in range(1, n):
        total = total + m[i, i]
    return total


def build_clifford(R: RMatrix, tol: float = DEFAULT_TOL, check: bool = True) -> CliffordPresentation:
    """Clifford presentation of A_R; refuses unless R passes check_euclidean (when ``check``)."""
    if check:
        rep = check_euclidean(R, None if R.exact else tol)
        if not rep.passed:
            raise ValueError(f"R fails the Euclidean conditions at {rep.witness}; no Clifford algebra")
    n = R.n
    perp = orthogonal_relations(presentation_from_R(R, tol))
    basis = hermitian_basis(perp, n, R.backend, tol)
    hermitian = basis is not None
    if basis is None:
        if check:
            raise ValueError("dual relation space is not closed under the hermitian adjoint")
        basis = perp
    constants = tuple(trace_constant(row, n) for row in basis)
    basis = np.array(basis)
    basis.setflags(write=False)
    return CliffordPresentation(n, generator_labels(R.n1, R.n2, "G"), basis, constants,
                                R.backend, hermitian, tol)


def check_clifford_confluence(C: CliffordPresentation) -> ConditionReport:
    return check_rewrite_confluence(C.rewriting, "clifford_confluence", C.tol)


def clifford_dimension(C: CliffordPresentation) -> int:
    """Number of irreducible words; refuses when the filtered rewriting has an unresolved overlap."""
    rep = check_clifford_confluence(C)
    if not rep.passed:
        raise NonConfluentError(rep)
    rs = C.rewriting
    total = 0
    for k in range(C.n + 2):
        c = rs.count_normal_words(k)
        if k == C.n + 1 and c:
            raise ValueError("irreducible words do not terminate: infinite-dimensional quotient")
        total += c
    return total


def check_clifford_pbw(C: CliffordPresentation) -> ConditionReport:
    return check_pbw_conditions(C.n, C.filtered_elements(), C.backend, C.tol)


def check_orthogonality(C: CliffordPresentation, P: Presentation) -> ConditionReport:
    """Every Clifford relation tensor pairs to zero with every primal relation."""
    if C.backend is Backend.EXACT:
        prod = linalg.matmul(np.ascontiguousarray(C.relations), np.ascontiguousarray(P.relations.T))
    else:
        prod = C.relations @ P.relations.T
    worst = 0.0
    witness: tuple = ()
    for (i, j), v in np.ndenumerate(prod):
        m = magnitude(v)
        if m > worst:
            worst = m
        if (v if C.backend is Backend.EXACT else m > C.tol) and not witness:
            witness = (i + 1, j + 1)
    return ConditionReport("orthogonality", not witness, 0.0 if not witness and C.backend is Backend.EXACT else worst,
                           witness)


def _tensor_expansion(left: RewriteSystem, right: RewriteSystem, n: int) -> dict:
    """sum_{k,l} NF_left(g_k g_l) (x) NF_right(x^k x^l), keyed by (word, word)."""
    out: dict = {}
    for k in range(n):
        for l in range(n):
            a = left.normalize((k, l))
            b = right.normalize((k, l))
            for wa, ca in a.items():
                for wb, cb in b.items():
                    key = (wa, wb)
                    out[key] = out[key] + ca * cb if key in out else ca * cb
    return out


def _residual(expansion: dict, backend: Backend, tol: float) -> tuple[bool, float, tuple]:
    worst = 0.0
    witness: tuple = ()
    for key in sorted(expansion):
        m = magnitude(expansion[key])
        worst = max(worst, m)
        bad = bool(expansion[key]) if backend is Backend.EXACT else m > tol
        if bad and not witness:
            witness = (tuple(i + 1 for i in key[0]), tuple(i + 1 for i in key[1]))
    ok = not witness
    return ok, (0.0 if ok and backend is Backend.EXACT else worst), witness


def verify_theta_x_identity(R: RMatrix, primal: Presentation | None = None,
                            tol: float = DEFAULT_TOL) -> ConditionReport:
    """(theta_k x^k)^2 = 0 in A^! (x) A, and the converse: its coefficients span the primal relations."""
    P = primal if primal is not None else presentation_from_R(R, tol)
    D = dual_presentation(R, tol)
    expansion = _tensor_expansion(D.rewriting, P.rewriting, R.n)
    ok, res, witness = _residual(expansion, R.backend, tol)
    # converse: q_w = sum_{kl} [NF(theta_k theta_l)]_w x^k x^l over normal words w
    n = R.n
    coeffs: dict = {}
    for k in range(n):
        for l in range(n):
            for w, c in D.rewriting.normalize((k, l)).items():
                coeffs.setdefault(w, zeros(n * n, R.backend))[k * n + l] += c
    q = np.array([coeffs[w] for w in sorted(coeffs)]) if coeffs else zeros((0, n * n), R.backend)
    converse = linalg.same_span(q, P.relations, None if R.exact else tol) if q.shape[0] else P.relation_count == 0
    passed = ok and converse
    return ConditionReport("theta_x_identity", passed, res,
                           witness if witness else (() if converse else ("converse",)),
                           {"expansion_zero": ok, "converse": bool(converse)})


def verify_gamma_x_identity(R: RMatrix, primal: Presentation | None = None,
                            clifford: CliffordPresentation | None = None,
                            tol: float = DEFAULT_TOL) -> ConditionReport:
    """(Gamma_k x^k)^2 = 1 (x) sum_p (x^p)^2 in Cl(A) (x) A."""
    P = primal if primal is not None else presentation_from_R(R, tol)
    C = clifford if clifford is not None else build_clifford(R, tol)
    expansion = _tensor_expansion(C.rewriting, P.rewriting, R.n)
    one = ONE if R.exact else 1.0 + 0j
    for p in range(R.n):
        for w, c in P.rewriting.normalize((p, p)).items():
            key = ((), w)
            expansion[key] = expansion[key] - one * c if key in expansion else -one * c
    if R.exact:
        expansion = {k: v for k, v in expansion.items() if v}
    ok, res, witness = _residual(expansion, R.backend, tol)
    return ConditionReport("gamma_x_identity", ok, res, witness)


def commutative_presentation(R: RMatrix) -> Presentation:
    """Plain commutativity on the same generators (the wrong algebra for a deformed R)."""
    return presentation_from_R(classical_R(R.n1, R.n2) if R.exact else classical_R(R.n1, R.n2).to_approx())


def clifford_summary(R: RMatrix, tol: float = DEFAULT_TOL) -> dict:
    C = build_clifford(R, tol)
    P = presentation_from_R(R, tol)
    pbw = check_clifford_pbw(C)
    nilpotent = verify_theta_x_identity(R, tol=tol)
    square = verify_gamma_x_identity(R, clifford=C, tol=tol)
    orth = check_orthogonality(C, P)
    return {"n": C.n, "dimension": clifford_dimension(C), "expected": 2 ** C.n,
            "hermitian": C.hermitian, "pbw": pbw.to_dict(), "orthogonality": orth.to_dict(),
            "theta_x_identity": nilpotent.to_dict(), "gamma_x_identity": square.to_dict()}


__all__ = ["CliffordPresentation", "build_clifford", "clifford_dimension", "check_clifford_pbw",
           "check_orthogonality", "verify_theta_x_identity", "verify_gamma_x_identity",
           "hermitian_basis", "dagger", "commutative_presentation", "clifford_summary", "ANTISYMMETRIC"]
