"""Reduction of a Euclidean R-matrix to its canonical block form.

R-hat = S + iT with S = sum_r A_r (x) B_r and T = sum_a C_a (x) D_a. Each side's
family {A_r, C_a} commutes, so one orthogonal frame per side turns the A_r
into block scalars and the C_a into multiples of J = [[0, -1], [1, 0]] on
2x2 cells. The cell/cell couplings give angles theta, the remaining block
pairs give signs eps.

All of this runs in floating point; the structural checks on the input stay
with the conditions module.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .algebra import Presentation, SYMMETRIC, presentation_from_R
from .conditions import ConditionReport, _combine
from .rmatrix import Endo12, RMatrix, gauge_transform, hat
from .scalars import Backend

DEFAULT_SEED = 20240601
CLUSTER_TOL = 1e-7
RANK_TOL = 1e-9
J = np.array([[0.0, -1.0], [1.0, 0.0]])


class ReductionError(ValueError):
    def __init__(self, message: str, report: ConditionReport | None = None, gap: float | None = None):
        super().__init__(message)
        self.report = report
        self.gap = gap


@dataclass(frozen=True, eq=False)
class STDecomp:
    n1: int
    n2: int
    S: np.ndarray
    T: np.ndarray
    report: ConditionReport

    def matrices(self) -> tuple[np.ndarray, np.ndarray]:
        d = self.n1 * self.n2
        return self.S.reshape(d, d), self.T.reshape(d, d)


@dataclass(frozen=True, eq=False)
class FactorFamilies:
    n1: int
    n2: int
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    residual: float = 0.0

    @property
    def p(self) -> int:
        return int(self.A.shape[0])

    @property
    def q(self) -> int:
        return int(self.C.shape[0])

    def S(self) -> np.ndarray:
        return _kron_sum(self.A, self.B, self.n1 * self.n2)

    def T(self) -> np.ndarray:
        return _kron_sum(self.C, self.D, self.n1 * self.n2)


def _kron_sum(X: np.ndarray, Y: np.ndarray, d: int) -> np.ndarray:
    out = np.zeros((d, d))
    for x, y in zip(X, Y):
        out += np.kron(x, y)
    return out


@dataclass(eq=False)
class CanonicalForm:
    """Frames O1, O2 (columns: cell pairs first, then singles) and block parameters.

    ``a[u, r]`` is the scalar of A_r on block u of side 1, ``c[m, a]`` the
    multiple of J of C_a on cell m; ``b`` and ``d`` likewise on side 2.
    """
    n1: int
    n2: int
    O1: np.ndarray
    O2: np.ndarray
    k1: int
    k2: int
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray
    seed: int
    residuals: dict = field(default_factory=dict)

    @property
    def blocks1(self) -> list[list[int]]:
        return _layout(self.n1, self.k1)

    @property
    def blocks2(self) -> list[list[int]]:
        return _layout(self.n2, self.k2)

    def cos_table(self) -> np.ndarray:
        return self.a[: self.k1] @ self.b[: self.k2].T

    def sin_table(self) -> np.ndarray:
        return self.c @ self.d.T

    def block_products(self) -> np.ndarray:
        return self.a @ self.b.T

    def to_dict(self) -> dict:
        theta, eps = extract_invariants(self)
        return {"n1": self.n1, "n2": self.n2, "k1": self.k1, "k2": self.k2,
                "theta": theta, "eps": eps,
                "O1": self.O1.tolist(), "O2": self.O2.tolist(),
                "blocks": {"a": self.a.tolist(), "b": self.b.tolist(),
                           "c": self.c.tolist(), "d": self.d.tolist()},
                "residuals": dict(self.residuals), "seed": self.seed}


def _layout(n: int, k: int) -> list[list[int]]:
    return [[2 * m, 2 * m + 1] for m in range(k)] + [[i] for i in range(2 * k, n)]


# S / T split

def decompose_ST(R: RMatrix, tol: float = RANK_TOL) -> STDecomp:
    """Real and imaginary parts of R-hat, refusing unless their symmetry and normalization hold."""
    Ra = R.to_approx() if R.exact else R
    H = hat(Ra).data
    S = np.ascontiguousarray(H.real)
    T = np.ascontiguousarray(H.imag)
    d = R.n1 * R.n2
    Sm, Tm = S.reshape(d, d), T.reshape(d, d)
    parts = [
        ("S.sym1", S - S.transpose(2, 1, 0, 3)),
        ("S.sym2", S - S.transpose(0, 3, 2, 1)),
        ("T.anti1", T + T.transpose(2, 1, 0, 3)),
        ("T.anti2", T + T.transpose(0, 3, 2, 1)),
        ("S2+T2", Sm @ Sm + Tm @ Tm - np.eye(d)),
        ("[T,S]", Tm @ Sm - Sm @ Tm),
    ]
    report = _combine("st_split", parts, tol)
    if not report.passed:
        raise ReductionError(f"R-hat does not split into admissible S, T: failing {report.witness}", report)
    S.setflags(write=False)
    T.setflags(write=False)
    return STDecomp(R.n1, R.n2, S, T, report)


# factor families

def _orient(x: np.ndarray) -> float:
    """Sign making the largest-magnitude entry (first in row-major order) positive."""
    flat = x.ravel()
    idx = int(np.argmax(np.abs(flat) > np.abs(flat).max() - 1e-12))
    return -1.0 if flat[idx] < 0 else 1.0


def _factor(X: np.ndarray, n1: int, n2: int, sym: float, tol: float) -> tuple[np.ndarray, np.ndarray]:
    # X indexed (l, a, m, b); matricize as (l, m) x (a, b)
    M = X.transpose(0, 2, 1, 3).reshape(n1 * n1, n2 * n2)
    U, s, Vt = np.linalg.svd(M)
    top = s[0] if s.size else 0.0
    rank = int(np.sum(s > tol * max(top, 1.0))) if top > 0 else 0
    left, right = [], []
    for r in range(rank):
        a = U[:, r].reshape(n1, n1)
        b = s[r] * Vt[r].reshape(n2, n2)
        a = (a + sym * a.T) / 2
        b = (b + sym * b.T) / 2
        sign = _orient(a)
        left.append(sign * a / np.linalg.norm(a))
        right.append(sign * b * np.linalg.norm(a))
    return (np.array(left).reshape(rank, n1, n1), np.array(right).reshape(rank, n2, n2))


def factorize_families(D: STDecomp, tol: float = RANK_TOL) -> FactorFamilies:
    """Minimal-rank factorizations S = sum A_r (x) B_r (symmetric) and T = sum C_a (x) D_a (antisymmetric)."""
    n1, n2 = D.n1, D.n2
    A, B = _factor(D.S, n1, n2, 1.0, tol)
    C, Dd = _factor(D.T, n1, n2, -1.0, tol)
    for fam, name in ((A, "A"), (B, "B"), (C, "C"), (Dd, "D")):
        if fam.shape[0] and linalg.rank(fam.reshape(fam.shape[0], -1).astype(complex)) != fam.shape[0]:
            raise AssertionError(f"family {name} is not linearly independent")
    F = FactorFamilies(n1, n2, A, B, C, Dd)
    Sm, Tm = D.matrices()
    res = max(float(np.max(np.abs(F.S() - Sm))), float(np.max(np.abs(F.T() - Tm))))
    return FactorFamilies(n1, n2, A, B, C, Dd, res)


def _commutators(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    if X.shape[0] == 0 or Y.shape[0] == 0:
        return np.zeros((0,))
    return np.einsum("rij,sjk->rsik", X, Y) - np.einsum("sij,rjk->rsik", Y, X)


def check_families(F: FactorFamilies, tol: float = RANK_TOL) -> ConditionReport:
    """Commutation of the factor families on each side plus the normalization S^2 + T^2 = 1."""
    d = F.n1 * F.n2
    S, T = F.S(), F.T()
    parts = [
        ("AA", _commutators(F.A, F.A)), ("AC", _commutators(F.A, F.C)), ("CC", _commutators(F.C, F.C)),
        ("BB", _commutators(F.B, F.B)), ("BD", _commutators(F.B, F.D)), ("DD", _commutators(F.D, F.D)),
        ("norm", S @ S + T @ T - np.eye(d)),
    ]
    return _combine("families", parts, tol)


# canonical frames

def _is_scalar(X: np.ndarray, tol: float) -> bool:
    d = X.shape[0]
    return float(np.max(np.abs(X - np.trace(X) / d * np.eye(d)))) <= tol


def _clusters(evals: np.ndarray) -> list[list[int]]:
    scale = max(1.0, float(np.max(np.abs(evals))))
    groups = [[0]]
    for i in range(1, len(evals)):
        if evals[i] - evals[i - 1] > CLUSTER_TOL * scale:
            groups.append([i])
        else:
            groups[-1].append(i)
    return groups


def _split(V: np.ndarray, gens: list[np.ndarray], rng: np.random.Generator, depth: int = 0) -> list[np.ndarray]:
    """Orthonormal bases of the joint eigenspaces of commuting symmetric ``gens`` inside span(V)."""
    restricted = [V.T @ G @ V for G in gens]
    scale = max([1.0] + [float(np.max(np.abs(X))) for X in restricted])
    if all(_is_scalar(X, CLUSTER_TOL * scale) for X in restricted):
        return [V]
    smallest_gap = None
    for _ in range(4):
        w = rng.standard_normal(len(restricted))
        M = sum(wi * X for wi, X in zip(w, restricted))
        M = (M + M.T) / 2
        evals, evecs = np.linalg.eigh(M)
        groups = _clusters(evals)
        if len(groups) > 1:
            out = []
            for g in groups:
                out.extend(_split(V @ evecs[:, g], gens, rng, depth + 1))
            return out
        gaps = np.diff(evals)
        smallest_gap = float(gaps.max()) if gaps.size else 0.0
    raise ReductionError("eigenvalue clustering failed to separate a non-scalar family", gap=smallest_gap)


def _side_frame(sym: np.ndarray, anti: np.ndarray, rng: np.random.Generator, tol: float):
    n = sym.shape[1] if sym.shape[0] else anti.shape[1]
    gens = [x for x in sym]
    for i in range(anti.shape[0]):
        for j in range(i, anti.shape[0]):
            prod = anti[i] @ anti[j]
            gens.append((prod + prod.T) / 2)
    spaces = _split(np.eye(n), gens, rng)
    cells: list[tuple[np.ndarray, np.ndarray]] = []
    singles: list[np.ndarray] = []
    for V in spaces:
        dim = V.shape[1]
        Cs = [V.T @ C @ V for C in anti]
        norms = [float(np.linalg.norm(C)) for C in Cs]
        if not Cs or max(norms) <= tol:
            singles.extend(V[:, j] for j in range(dim))
            continue
        if dim % 2:
            raise ReductionError("odd-dimensional joint eigenspace carrying a nonzero antisymmetric factor")
        top = Cs[int(np.argmax(norms))]
        mu = math.sqrt(max(-np.trace(top @ top) / dim, 0.0))
        K = top / mu
        chosen: list[np.ndarray] = []
        for j in range(dim):
            v = np.eye(dim)[:, j]
            for u in chosen:
                v = v - (u @ v) * u
            nv = np.linalg.norm(v)
            if nv < 0.5:
                continue
            v = v / nv
            kv = K @ v
            kv = kv / np.linalg.norm(kv)
            chosen.extend([v, kv])
            e1, e2 = V @ v, V @ kv
            coeffs = [float(e2 @ C @ e1) for C in anti]
            first = next((x for x in coeffs if abs(x) > tol), 0.0)
            if first < 0:
                e2 = -e2
            cells.append((e1, e2))
            if len(chosen) == dim:
                break
    cols = [v for pair in cells for v in pair] + singles
    return np.column_stack(cols), len(cells)


def _block_params(O: np.ndarray, k: int, sym: np.ndarray, anti: np.ndarray):
    n = O.shape[0]
    blocks = _layout(n, k)
    a = np.zeros((len(blocks), sym.shape[0]))
    c = np.zeros((k, anti.shape[0]))
    shape_res = 0.0
    for r, X in enumerate(sym):
        Y = O.T @ X @ O
        model = np.zeros((n, n))
        for u, blk in enumerate(blocks):
            a[u, r] = float(np.mean([Y[i, i] for i in blk]))
            for i in blk:
                model[i, i] = a[u, r]
        shape_res = max(shape_res, float(np.max(np.abs(Y - model))))
    for s, X in enumerate(anti):
        Y = O.T @ X @ O
        model = np.zeros((n, n))
        for m in range(k):
            c[m, s] = (Y[2 * m + 1, 2 * m] - Y[2 * m, 2 * m + 1]) / 2
            model[2 * m: 2 * m + 2, 2 * m: 2 * m + 2] = c[m, s] * J
        shape_res = max(shape_res, float(np.max(np.abs(Y - model))))
    return a, c, shape_res


def canonical_reduce(F: FactorFamilies, seed: int = DEFAULT_SEED, tol: float = RANK_TOL) -> CanonicalForm:
    """Orthogonal frames putting A_r, C_a (side 1) and B_r, D_a (side 2) into block form."""
    rng = np.random.default_rng(seed)
    O1, k1 = _side_frame(F.A, F.C, rng, 1e-8)
    O2, k2 = _side_frame(F.B, F.D, rng, 1e-8)
    a, c, r1 = _block_params(O1, k1, F.A, F.C)
    b, d, r2 = _block_params(O2, k2, F.B, F.D)
    cf = CanonicalForm(F.n1, F.n2, O1, O2, k1, k2, a, b, c, d, seed,
                       {"shape1": r1, "shape2": r2, "factorization": F.residual})
    return cf


# invariants

INVARIANT_CHECK_TOL = 1e-7


def extract_invariants(C: CanonicalForm, tol: float = INVARIANT_CHECK_TOL):
    """(theta table k1 x k2, eps table over all block pairs with None at cell/cell positions)."""
    cos_t, sin_t = C.cos_table(), C.sin_table()
    theta = [[0.0] * C.k2 for _ in range(C.k1)]
    for m1 in range(C.k1):
        for m2 in range(C.k2):
            norm = cos_t[m1, m2] ** 2 + sin_t[m1, m2] ** 2
            if abs(norm - 1) > tol:
                raise ReductionError(f"cell pair ({m1 + 1},{m2 + 1}) has cos^2+sin^2 = {norm}")
            theta[m1][m2] = math.atan2(sin_t[m1, m2], cos_t[m1, m2])
    prods = C.block_products()
    nb1, nb2 = prods.shape
    eps: list[list] = [[None] * nb2 for _ in range(nb1)]
    for u in range(nb1):
        for v in range(nb2):
            if u < C.k1 and v < C.k2:
                continue
            val = prods[u, v]
            if abs(abs(val) - 1) > tol:
                raise ReductionError(f"block pair ({u + 1},{v + 1}) has sum a b = {val}, not +-1")
            eps[u][v] = 1 if val > 0 else -1
    return theta, eps


def invariant_signature(C: CanonicalForm) -> dict:
    theta, eps = extract_invariants(C)
    pairs = sorted((abs(math.cos(t)), abs(math.sin(t))) for row in theta for t in row)
    signs = sorted(e for row in eps for e in row if e is not None)
    return {"k1": C.k1, "k2": C.k2, "cos_sin": pairs, "eps": signs}


def same_invariants(x: dict, y: dict, tol: float = 1e-9) -> bool:
    if (x["k1"], x["k2"], x["eps"]) != (y["k1"], y["k2"], y["eps"]):
        return False
    if len(x["cos_sin"]) != len(y["cos_sin"]):
        return False
    return all(abs(p[0] - q[0]) <= tol and abs(p[1] - q[1]) <= tol
               for p, q in zip(x["cos_sin"], y["cos_sin"]))


# rebuilding and complex coordinates

def canonical_hat(C: CanonicalForm) -> np.ndarray:
    """R-hat in the canonical frame, sum A (x) B + i sum C (x) D from the block parameters."""
    n1, n2 = C.n1, C.n2
    H = np.zeros((n1 * n2, n1 * n2), dtype=complex)
    for r in range(C.a.shape[1]):
        A = _block_matrix(n1, C.k1, C.a[:, r], None)
        B = _block_matrix(n2, C.k2, C.b[:, r], None)
        H += np.kron(A, B)
    for s in range(C.c.shape[1]):
        Cm = _block_matrix(n1, C.k1, None, C.c[:, s])
        Dm = _block_matrix(n2, C.k2, None, C.d[:, s])
        H += 1j * np.kron(Cm, Dm)
    return H.reshape(n1, n2, n1, n2)


def _block_matrix(n: int, k: int, scalars, cells) -> np.ndarray:
    out = np.zeros((n, n))
    if scalars is not None:
        for u, blk in enumerate(_layout(n, k)):
            for i in blk:
                out[i, i] = scalars[u]
    if cells is not None:
        for m in range(k):
            out[2 * m: 2 * m + 2, 2 * m: 2 * m + 2] = cells[m] * J
    return out


def canonical_R(C: CanonicalForm) -> RMatrix:
    return Endo12(C.n1, C.n2, canonical_hat(C)).unhat()


def reconstruct_R(C: CanonicalForm) -> RMatrix:
    """R in the original frame: the canonical R-hat conjugated back by (O1, O2)."""
    return gauge_transform(canonical_R(C), C.O1.T, C.O2.T)


def complex_coordinates(n: int, k: int) -> tuple[np.ndarray, list[tuple]]:
    """Rows of U with w = U x: z^m, conj(z^m) for each cell, then the single coordinates.

    Each generator also gets a tag ("z", m), ("zb", m) or ("x", index).
    """
    U = np.zeros((n, n), dtype=complex)
    tags: list[tuple] = []
    row = 0
    for m in range(k):
        U[row, 2 * m], U[row, 2 * m + 1] = 1, 1j
        U[row + 1, 2 * m], U[row + 1, 2 * m + 1] = 1, -1j
        tags += [("z", m), ("zb", m)]
        row += 2
    for i in range(2 * k, n):
        U[row, i] = 1
        tags.append(("x", i))
        row += 1
    return U, tags


def _label(tag: tuple, side: int) -> str:
    kind, i = tag
    if kind == "z":
        return f"z{side}^{i + 1}"
    if kind == "zb":
        return f"zb{side}^{i + 1}"
    return f"x{side}^{i + 1}"


COMPLEX_PHASE_SIGN = -1


def complex_relations(C: CanonicalForm, phase_sign: int = COMPLEX_PHASE_SIGN):
    """Relation vectors in the complex generators, with their tags.

    Cell/cell pairs commute up to exp(i s phase_sign theta) where s = +1 for
    z z and zb zb and s = -1 for mixed conjugation; all other mixed pairs
    commute up to eps; same-side generators commute.
    """
    theta, eps = extract_invariants(C)
    U1, tags1 = complex_coordinates(C.n1, C.k1)
    U2, tags2 = complex_coordinates(C.n2, C.k2)
    n1, n = C.n1, C.n1 + C.n2
    tags = [(1,) + t for t in tags1] + [(2,) + t for t in tags2]
    rows = []

    def comm(i: int, j: int, phase: complex) -> np.ndarray:
        v = np.zeros(n * n, dtype=complex)
        v[i * n + j] += 1
        v[j * n + i] -= phase
        return v

    for side, size, off in ((1, C.n1, 0), (2, C.n2, n1)):
        for i in range(size):
            for j in range(i + 1, size):
                rows.append(comm(off + i, off + j, 1.0))

    def block_of(tag: tuple, k: int) -> int:
        kind, i = tag
        return i if kind in ("z", "zb") else k + (i - 2 * k)

    for i, t1 in enumerate(tags1):
        for j, t2 in enumerate(tags2):
            u, v = block_of(t1, C.k1), block_of(t2, C.k2)
            if t1[0] != "x" and t2[0] != "x":
                s = 1 if (t1[0] == "z") == (t2[0] == "z") else -1
                phase = complex(np.exp(1j * s * phase_sign * theta[u][v]))
            else:
                phase = eps[u][v]
            rows.append(comm(i, n1 + j, phase))
    U = np.zeros((n, n), dtype=complex)
    U[:n1, :n1] = U1
    U[n1:, n1:] = U2
    return np.array(rows), U, tags


def emit_complex_presentation(C: CanonicalForm, tol: float = 1e-9,
                              phase_sign: int = COMPLEX_PHASE_SIGN) -> Presentation:
    """z / zbar / x' presentation, verified equal to the canonical-frame relations under w = U x."""
    rows, U, tags = complex_relations(C, phase_sign)
    # a relation r' in the w generators reads U^T r' U in the x generators
    pulled = np.array([(U.T @ r.reshape(U.shape) @ U).ravel() for r in rows])
    target = presentation_from_R(canonical_R(C), tol)
    if not linalg.same_span(pulled, target.relations, tol):
        ok, res = linalg.contains(target.relations, pulled, tol)
        raise ReductionError(f"complex presentation is not equivalent to the canonical relations (residual {res:.3g})")
    labels = tuple(_label(t[1:], t[0]) for t in tags)
    return Presentation.from_vectors(C.n1 + C.n2, rows, SYMMETRIC, Backend.APPROX, labels,
                                     C.n1, C.n2, tol)


def reduce_R(R: RMatrix, seed: int = DEFAULT_SEED, tol: float = RANK_TOL) -> CanonicalForm:
    """decompose -> factorize -> family check -> canonical frame, refusing on any failure."""
    D = decompose_ST(R, tol)
    F = factorize_families(D, tol)
    rep = check_families(F, tol)
    if not rep.passed:
        raise ReductionError(f"factor families violate commutation/normalization at {rep.witness}", rep)
    C = canonical_reduce(F, seed, tol)
    extract_invariants(C)
    C.residuals["reconstruct"] = float(np.max(np.abs(reconstruct_R(C).as_complex() - R.as_complex())))
    return C


def reduction_certifies(R: RMatrix, tol: float = RANK_TOL) -> bool:
    """Whether the S/T split, factorization, commutation and normalization all succeed."""
    try:
        D = decompose_ST(R, tol)
    except ReductionError:
        return False
    return check_families(factorize_families(D, tol), tol).passed
