"""Quadratic presentations, rewriting to normal form, confluence and graded dimensions.

Generators are numbered 0..n-1: first the n1 generators x1^l, then the n2
generators x2^a. Words are tuples of generator numbers; a normal form is a
dict mapping words to nonzero coefficients.

Rewriting rules come from the reduced echelon form of the relation space
with monomials ordered degree-lexicographically, largest first, so every
relation rewrites its largest monomial into strictly smaller ones.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from math import comb
from typing import Iterable, Mapping

import numpy as np

from . import linalg
from .conditions import ConditionReport
from .rmatrix import RMatrix
from .scalars import DEFAULT_TOL, INVARIANT_TOL, ONE, Backend, magnitude, zeros

Word = tuple
NormalForm = dict

SYMMETRIC = "symmetric"
ANTISYMMETRIC = "antisymmetric"


class NonConfluentError(ValueError):
    """Raised when a computation needs a confluent rewriting system."""

    def __init__(self, report: ConditionReport):
        super().__init__(f"rewriting system is not confluent; failing overlap {report.witness}")
        self.report = report


def generator_labels(n1: int, n2: int, stem: str = "x") -> tuple[str, ...]:
    if stem == "x":
        return tuple(f"x1^{l + 1}" for l in range(n1)) + tuple(f"x2^{a + 1}" for a in range(n2))
    return tuple(f"{stem}1_{l + 1}" for l in range(n1)) + tuple(f"{stem}2_{a + 1}" for a in range(n2))


def _one(backend: Backend):
    return ONE if backend is Backend.EXACT else 1.0 + 0j


def _nonzero(c, backend: Backend, tol: float) -> bool:
    if backend is Backend.EXACT:
        return bool(c)
    return abs(c) > tol


# relation spaces

def reduce_quadratic(n: int, vectors: np.ndarray, tol: float | None = None) -> np.ndarray:
    """Independent basis of a span in E (x) E, reduced with respect to lex order largest first.

    Rows are in natural coordinates (index a*n + b for x_a x_b); row k has a
    coefficient 1 at its leading monomial and zeros at the other leading monomials.
    """
    vectors = np.asarray(vectors)
    if vectors.shape[0] == 0:
        return vectors.reshape(0, n * n)
    red, _ = linalg.rref(np.ascontiguousarray(vectors[:, ::-1]), tol)
    return np.ascontiguousarray(red[:, ::-1])


@dataclass(frozen=True, eq=False)
class Presentation:
    """Generators plus a quadratic relation space; ``relations`` rows live in E (x) E."""
    n: int
    labels: tuple
    relations: np.ndarray
    kind: str
    backend: Backend
    n1: int | None = None
    n2: int | None = None
    tol: float = DEFAULT_TOL

    @classmethod
    def from_vectors(cls, n: int, vectors, kind: str, backend: Backend,
                     labels: tuple | None = None, n1: int | None = None,
                     n2: int | None = None, tol: float = DEFAULT_TOL) -> "Presentation":
        vecs = np.asarray(vectors)
        if vecs.size == 0:
            vecs = zeros((0, n * n), backend)
        rel = reduce_quadratic(n, vecs, tol if backend is Backend.APPROX else None)
        rel.setflags(write=False)
        if labels is None:
            labels = tuple(f"g{i + 1}" for i in range(n))
        return cls(n, tuple(labels), rel, kind, backend, n1, n2, tol)

    @property
    def relation_count(self) -> int:
        return int(self.relations.shape[0])

    def relation_dicts(self) -> list[dict]:
        out = []
        for row in self.relations:
            d = {}
            for idx, c in enumerate(row):
                if _nonzero(c, self.backend, 0.0):
                    d[divmod(idx, self.n)] = c
            out.append(d)
        return out

    @cached_property
    def rewriting(self) -> "RewriteSystem":
        return RewriteSystem.from_rows(self.n, [{w: c for w, c in d.items()} for d in self.relation_dicts()],
                                       self.backend, self.tol)

    def to_dict(self) -> dict:
        from .scalars import to_complex
        rels = []
        for d in self.relation_dicts():
            rels.append([[list(k), [to_complex(c).real, to_complex(c).imag]] for k, c in sorted(d.items())])
        return {"n": self.n, "labels": list(self.labels), "kind": self.kind,
                "backend": self.backend.value, "relations": rels}


def mixed_relation_vectors(R: RMatrix) -> np.ndarray:
    """All four relation families of A_R as vectors in E (x) E (possibly dependent)."""
    n1, n2 = R.n1, R.n2
    n = n1 + n2
    one = _one(R.backend)
    rows = []

    def vec():
        return zeros(n * n, R.backend)

    for group in (range(n1), range(n1, n)):
        for a in group:
            for b in group:
                if a < b:
                    v = vec()
                    v[a * n + b] = one
                    v[b * n + a] = -one
                    rows.append(v)
    rc = R.conj()
    for l in range(n1):
        for a in range(n2):
            # x1^l x2^a - R^{la}_{bm} x2^b x1^m
            v = vec()
            v[l * n + n1 + a] = one
            for b in range(n2):
                for m in range(n1):
                    v[(n1 + b) * n + m] -= R.data[l, a, b, m]
            rows.append(v)
            # x2^a x1^l - conj(R)^{la}_{bm} x1^m x2^b
            w = vec()
            w[(n1 + a) * n + l] = one
            for b in range(n2):
                for m in range(n1):
                    w[m * n + n1 + b] -= rc[l, a, b, m]
            rows.append(w)
    return np.array(rows, dtype=object if R.exact else complex)


def presentation_from_R(R: RMatrix, tol: float = DEFAULT_TOL) -> Presentation:
    """Presentation of A_R: commuting groups and the two mixed families.

    For R satisfying the reality condition the relation count is
    C(n1,2) + C(n2,2) + n1*n2; otherwise the mixed families are not equivalent
    and more relations survive.
    """
    n = R.n
    return Presentation.from_vectors(n, mixed_relation_vectors(R), SYMMETRIC, R.backend,
                                     generator_labels(R.n1, R.n2), R.n1, R.n2, tol)


def orthogonal_relations(P: Presentation) -> np.ndarray:
    """R-perp under the pairing <theta_i theta_j, x_k x_l> = delta_ik delta_jl."""
    if P.relation_count == 0:
        mat = zeros((0, P.n * P.n), P.backend)
        return np.eye(P.n * P.n, dtype=complex) if P.backend is Backend.APPROX else _identity_exact(P.n * P.n)
    return linalg.nullspace(P.relations, P.tol if P.backend is Backend.APPROX else None)


def _identity_exact(k: int) -> np.ndarray:
    out = zeros((k, k), Backend.EXACT)
    for i in range(k):
        out[i, i] = ONE
    return out


def koszul_dual(P: Presentation, kind: str | None = None, labels: tuple | None = None) -> Presentation:
    if kind is None:
        kind = ANTISYMMETRIC if P.kind == SYMMETRIC else SYMMETRIC
    return Presentation.from_vectors(P.n, orthogonal_relations(P), kind, P.backend,
                                     labels or P.labels, P.n1, P.n2, P.tol)


def dual_presentation(R: RMatrix, tol: float = DEFAULT_TOL) -> Presentation:
    """Presentation of the Koszul dual: relation space is the orthogonal of that of A_R."""
    P = presentation_from_R(R, tol)
    return koszul_dual(P, ANTISYMMETRIC, generator_labels(R.n1, R.n2, "th"))


def pairing(P: Presentation, Q: Presentation) -> np.ndarray:
    """Matrix of pairings between the relation bases of two presentations."""
    return linalg.matmul(P.relations, np.ascontiguousarray(Q.relations.T)) \
        if P.backend is Backend.EXACT else P.relations @ Q.relations.T


def same_relation_space(P: Presentation, Q: Presentation) -> bool:
    tol = None if P.backend is Backend.EXACT else P.tol
    return linalg.same_span(P.relations, Q.relations, tol)


# rewriting

def _deglex_key(word: Word):
    return (len(word), word)


class RewriteSystem:
    """Rules ab -> combination of smaller words (length <= 2), from reduced relations.

    Works for homogeneous quadratic relations and for filtered ones carrying
    lower-degree terms (words of length 0 or 1).
    """

    def __init__(self, n: int, rules: Mapping[Word, Mapping[Word, object]], backend: Backend,
                 tol: float = DEFAULT_TOL):
        self.n = n
        self.rules = {k: dict(v) for k, v in rules.items()}
        self.backend = backend
        self.prune = 0.0 if backend is Backend.EXACT else min(tol, INVARIANT_TOL)
        self._memo: dict[Word, dict] = {}

    @classmethod
    def from_rows(cls, n: int, rows: list[Mapping[Word, object]], backend: Backend,
                  tol: float = DEFAULT_TOL) -> "RewriteSystem":
        words = sorted({w for r in rows for w in r}, key=_deglex_key, reverse=True)
        index = {w: i for i, w in enumerate(words)}
        if not rows:
            return cls(n, {}, backend, tol)
        mat = zeros((len(rows), len(words)), backend)
        for i, r in enumerate(rows):
            for w, c in r.items():
                mat[i, index[w]] = c
        red, pivots = linalg.rref(mat, tol if backend is Backend.APPROX else None)
        rules = {}
        pivot_set = set(pivots)
        for k, p in enumerate(pivots):
            lead = words[p]
            if len(lead) != 2:
                raise ValueError(f"relation with leading word of length {len(lead)}: not rewritable")
            rhs = {}
            for j, w in enumerate(words):
                if j in pivot_set:
                    continue
                c = red[k, j]
                if _nonzero(c, backend, 0.0):
                    rhs[w] = -c
            rules[lead] = rhs
        return cls(n, rules, backend, tol)

    @property
    def leading_words(self) -> set:
        return set(self.rules)

    def is_normal(self, word: Word) -> bool:
        return all((word[i], word[i + 1]) not in self.rules for i in range(len(word) - 1))

    def _clean(self, d: dict) -> dict:
        if self.backend is Backend.EXACT:
            return {w: c for w, c in d.items() if c}
        return {w: c for w, c in d.items() if abs(c) > self.prune}

    def normalize(self, word: Word) -> NormalForm:
        word = tuple(word)
        hit = self._memo.get(word)
        if hit is not None:
            return hit
        result: dict = {}
        for i in range(len(word) - 1):
            rule = self.rules.get((word[i], word[i + 1]))
            if rule is None:
                continue
            for w, c in rule.items():
                for w2, c2 in self.normalize(word[:i] + w + word[i + 2:]).items():
                    result[w2] = result[w2] + c * c2 if w2 in result else c * c2
            result = self._clean(result)
            break
        else:
            result = {word: _one(self.backend)}
        self._memo[word] = result
        return result

    def normalize_element(self, element: Mapping[Word, object]) -> NormalForm:
        out: dict = {}
        for w, c in element.items():
            for w2, c2 in self.normalize(w).items():
                out[w2] = out[w2] + c * c2 if w2 in out else c * c2
        return self._clean(out)

    def one_step(self, word: Word, pos: int) -> dict:
        rule = self.rules[(word[pos], word[pos + 1])]
        return {word[:pos] + w + word[pos + 2:]: c for w, c in rule.items()}

    def overlaps(self) -> list[Word]:
        lead = sorted(self.rules)
        by_first: dict[int, list[int]] = {}
        for a, b in lead:
            by_first.setdefault(a, []).append(b)
        out = []
        for a, b in lead:
            for c in by_first.get(b, []):
                out.append((a, b, c))
        return sorted(out)

    def count_normal_words(self, degree: int) -> int:
        """Number of words of the given length avoiding all leading words."""
        if degree == 0:
            return 1
        counts = [1] * self.n
        for _ in range(degree - 1):
            counts = [sum(counts[a] for a in range(self.n) if (a, b) not in self.rules)
                      for b in range(self.n)]
        return sum(counts)

    def normal_words(self, degree: int) -> list[Word]:
        words: list[Word] = [()]
        for _ in range(degree):
            words = [w + (b,) for w in words for b in range(self.n)
                     if not w or (w[-1], b) not in self.rules]
        return sorted(words)


def difference(a: Mapping, b: Mapping, backend: Backend, prune: float = 0.0) -> dict:
    out = dict(a)
    for w, c in b.items():
        out[w] = out[w] - c if w in out else -c
    if backend is Backend.EXACT:
        return {w: c for w, c in out.items() if c}
    return {w: c for w, c in out.items() if abs(c) > prune}


def _max_coeff(d: Mapping) -> float:
    return max((magnitude(c) for c in d.values()), default=0.0)


def normalize_word(P: Presentation, word: Iterable[int]) -> NormalForm:
    """Normal form of a word (0-based generator numbers) by exhaustive leftmost rewriting."""
    word = tuple(int(i) for i in word)
    if any(not 0 <= i < P.n for i in word):
        raise ValueError(f"generator index out of range in {word}")
    return P.rewriting.normalize(word)


def check_rewrite_confluence(rs: RewriteSystem, name: str = "confluence",
                             tol: float = DEFAULT_TOL) -> ConditionReport:
    """Resolve every overlap abc of leading words both ways; witness is the 1-based word."""
    worst = 0.0
    witness: tuple = ()
    for w in rs.overlaps():
        left = rs.normalize_element(rs.one_step(w, 0))
        right = rs.normalize_element(rs.one_step(w, 1))
        diff = difference(left, right, rs.backend, rs.prune)
        res = _max_coeff(diff)
        worst = max(worst, res)
        bad = bool(diff) if rs.backend is Backend.EXACT else res > tol
        if bad and not witness:
            witness = tuple(i + 1 for i in w)
    if rs.backend is Backend.EXACT and not witness:
        worst = 0.0
    return ConditionReport(name, not witness, worst, witness,
                           {"overlaps": len(rs.overlaps())})


def check_confluence(P: Presentation, degree: int = 3) -> ConditionReport:
    """Overlap resolution; for degree > 3 also compares normal-word counts with the quotient dimensions."""
    if degree < 3:
        raise ValueError("degree must be at least 3")
    report = check_rewrite_confluence(P.rewriting, "confluence", P.tol)
    if not report.passed or degree == 3:
        return report
    oracle = quotient_dimensions(P, degree)
    for k in range(degree + 1):
        if P.rewriting.count_normal_words(k) != oracle[k]:
            return ConditionReport("confluence", False, report.residual, ("degree", k),
                                   report.details)
    return report


@dataclass(frozen=True)
class DimTable:
    dims: tuple

    def __getitem__(self, k: int) -> int:
        return self.dims[k]

    def __len__(self) -> int:
        return len(self.dims)

    def to_list(self) -> list[int]:
        return list(self.dims)

    def to_json(self) -> str:
        return json.dumps(self.to_list())


DEFAULT_DEGREE_CAP = 6


def graded_dimensions(P: Presentation, d: int, cap: int | None = None) -> DimTable:
    """Counts of normal words in degrees 0..d; refuses when rewriting is not confluent."""
    if cap is not None and d > cap:
        raise ValueError(f"degree {d} exceeds the configured cap {cap}")
    report = check_confluence(P, 3)
    if not report.passed:
        raise NonConfluentError(report)
    return DimTable(tuple(P.rewriting.count_normal_words(k) for k in range(d + 1)))


def classical_dimensions(n: int, d: int, kind: str = SYMMETRIC) -> DimTable:
    if kind == SYMMETRIC:
        return DimTable(tuple(comb(k + n - 1, k) for k in range(d + 1)))
    return DimTable(tuple(comb(n, k) for k in range(d + 1)))


# graded pieces by linear algebra

@dataclass
class GradedQuotient:
    """Homogeneous components of T(E)/(rel) computed without rewriting.

    ``basis[k]`` lists words whose classes form a basis of A_k; ``phi[k]`` is
    the matrix of A_{k-1} (x) E -> A_k in those bases (column t*n + x is the
    product of basis element t with generator x).
    """
    n: int
    backend: Backend
    basis: list = field(default_factory=list)
    phi: list = field(default_factory=list)

    @property
    def dims(self) -> list[int]:
        return [len(b) for b in self.basis]

    def right_multiply(self, k: int, t: int, x: int) -> np.ndarray:
        return self.phi[k + 1][:, t * self.n + x]


def graded_quotient(P: Presentation, d: int) -> GradedQuotient:
    n, backend = P.n, P.backend
    tol = None if backend is Backend.EXACT else P.tol
    rels = P.relation_dicts()
    gq = GradedQuotient(n, backend)
    gq.basis.append([()])
    gq.phi.append(None)
    if d >= 1:
        gq.basis.append([(x,) for x in range(n)])
        eye = zeros((n, n), backend)
        for i in range(n):
            eye[i, i] = _one(backend)
        gq.phi.append(eye)
    for k in range(2, d + 1):
        prev = gq.basis[k - 1]
        ncols = len(prev) * n
        prev_phi = gq.phi[k - 1]
        rows = []
        for s in range(len(gq.basis[k - 2])):
            for rel in rels:
                v = zeros(ncols, backend)
                for (a, b), c in rel.items():
                    col = prev_phi[:, s * n + a]
                    for t in range(len(prev)):
                        if _nonzero(col[t], backend, 0.0):
                            v[t * n + b] = v[t * n + b] + c * col[t]
                rows.append(v)
        if rows:
            mat = np.array(rows, dtype=object if backend is Backend.EXACT else complex)
            red, piv = linalg.rref(np.ascontiguousarray(mat[:, ::-1]), tol)
            pivots = [ncols - 1 - p for p in piv]
            red = red[:, ::-1]
        else:
            red, pivots = zeros((0, ncols), backend), []
        pivset = set(pivots)
        free = [j for j in range(ncols) if j not in pivset]
        col_of = {j: i for i, j in enumerate(free)}
        phi = zeros((len(free), ncols), backend)
        for j in free:
            phi[col_of[j], j] = _one(backend)
        for r, p in enumerate(pivots):
            for j in free:
                c = red[r, j]
                if _nonzero(c, backend, 0.0):
                    phi[col_of[j], p] = -c
        gq.basis.append([prev[j // n] + (j % n,) for j in free])
        gq.phi.append(phi)
    return gq


def quotient_dimensions(P: Presentation, d: int) -> DimTable:
    """Dimensions of A_0..A_d by exact linear algebra (needs no confluence)."""
    return DimTable(tuple(graded_quotient(P, d).dims))


# centrality and filtered relations

def multiply(a: Mapping, b: Mapping) -> dict:
    out: dict = {}
    for w1, c1 in a.items():
        for w2, c2 in b.items():
            w = tuple(w1) + tuple(w2)
            out[w] = out[w] + c1 * c2 if w in out else c1 * c2
    return out


def check_central(P: Presentation, q: Mapping, name: str = "central") -> ConditionReport:
    """normalize(q x_g) == normalize(x_g q) for every generator; witness (g,) 1-based."""
    rs = P.rewriting
    one = _one(P.backend)
    worst = 0.0
    witness: tuple = ()
    for g in range(P.n):
        left = rs.normalize_element(multiply(q, {(g,): one}))
        right = rs.normalize_element(multiply({(g,): one}, q))
        diff = difference(left, right, P.backend, rs.prune)
        res = _max_coeff(diff)
        worst = max(worst, res)
        bad = bool(diff) if P.backend is Backend.EXACT else res > P.tol
        if bad and not witness:
            witness = (g + 1,)
    if P.backend is Backend.EXACT and not witness:
        worst = 0.0
    return ConditionReport(name, not witness, worst, witness)


def _vectorize(elements: list[Mapping], words: list[Word], backend: Backend) -> np.ndarray:
    index = {w: i for i, w in enumerate(words)}
    mat = zeros((len(elements), len(words)), backend)
    for i, el in enumerate(elements):
        for w, c in el.items():
            mat[i, index[tuple(w)]] = mat[i, index[tuple(w)]] + c
    return mat


def _words_upto(n: int, d: int) -> list[Word]:
    out: list[Word] = [()]
    layer: list[Word] = [()]
    for _ in range(d):
        layer = [w + (x,) for w in layer for x in range(n)]
        out.extend(layer)
    return out


def check_pbw_conditions(n: int, P_elements: list[Mapping], backend: Backend = Backend.EXACT,
                         tol: float = DEFAULT_TOL) -> ConditionReport:
    """Conditions (i) P meets F^1 trivially and (ii) (P E + E P) meets F^2 inside P.

    ``P_elements`` are elements of F^2 given as word -> coefficient maps
    (words of length 0, 1 or 2).
    """
    t = None if backend is Backend.EXACT else tol
    words2 = _words_upto(n, 2)
    if not P_elements:
        return ConditionReport("pbw", True, 0.0, (), {"i": True, "ii": True})
    Pm = _vectorize(P_elements, words2, backend)
    dimP = linalg.rank(Pm, t)
    quad_cols = [i for i, w in enumerate(words2) if len(w) == 2]
    rank_quad = linalg.rank(np.ascontiguousarray(Pm[:, quad_cols]), t)
    ok_i = rank_quad == dimP
    if not ok_i:
        return ConditionReport("pbw", False, float(dimP - rank_quad), ("i",), {"i": False, "ii": None})
    basis = linalg.row_basis(Pm, t)
    elems = []
    for row in basis:
        el = {words2[j]: row[j] for j in range(len(words2)) if _nonzero(row[j], backend, 0.0)}
        elems.append(el)
    one = _one(backend)
    gens = []
    for el in elems:
        for x in range(n):
            gens.append(multiply(el, {(x,): one}))
            gens.append(multiply({(x,): one}, el))
    words3 = _words_upto(n, 3)
    G = _vectorize(gens, words3, backend)
    cubic = [i for i, w in enumerate(words3) if len(w) == 3]
    lower = [i for i, w in enumerate(words3) if len(w) < 3]
    combos = linalg.nullspace(np.ascontiguousarray(G[:, cubic].T), t)
    if combos.shape[0] == 0:
        return ConditionReport("pbw", True, 0.0, (), {"i": True, "ii": True, "checked": 0})
    low = linalg.matmul(combos, np.ascontiguousarray(G[:, lower])) if backend is Backend.EXACT \
        else combos @ G[:, lower]
    # lower-part words of length <= 2 coincide with words2 ordering
    ok_ii, res = linalg.contains(basis, low, t)
    return ConditionReport("pbw", ok_ii, 0.0 if ok_ii and backend is Backend.EXACT else res,
                           () if ok_ii else ("ii",),
                           {"i": True, "ii": ok_ii, "checked": int(combos.shape[0])})
