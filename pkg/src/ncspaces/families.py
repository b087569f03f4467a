"""Constructors for concrete solutions and quaternion arithmetic.

Rational inputs (ints, Fractions, "p/q" strings) give exact R-matrices;
any float input switches the result to the approx backend.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .rmatrix import Endo12, RMatrix
from .scalars import DEFAULT_TOL, Backend, I_UNIT, cast_array, to_exact, zeros

J2 = np.array([[0, -1], [1, 0]], dtype=object)


def _is_float(v) -> bool:
    return isinstance(v, (float, complex, np.floating, np.complexfloating))


def _backend_for(values) -> Backend:
    flat = []
    stack = list(values)
    while stack:
        v = stack.pop()
        if isinstance(v, (list, tuple, np.ndarray)):
            stack.extend(list(v))
        elif v is not None:
            flat.append(v)
    return Backend.APPROX if any(_is_float(v) for v in flat) else Backend.EXACT


def _num(v, backend: Backend):
    if backend is Backend.EXACT:
        return to_exact(Fraction(v) if isinstance(v, str) else v)
    return complex(float(Fraction(v)) if isinstance(v, str) else v)


def _unit(backend: Backend):
    return I_UNIT if backend is Backend.EXACT else 1j


def _is_one(value, backend: Backend, tol: float) -> bool:
    if backend is Backend.EXACT:
        return value == to_exact(1)
    return abs(complex(value) - 1.0) <= tol


def _real_matrix(mat, backend: Backend) -> np.ndarray:
    return cast_array(np.asarray(mat, dtype=object), backend)


def _rmatrix_from_parts(sym: np.ndarray, left: np.ndarray, right: np.ndarray,
                        scale, backend: Backend) -> RMatrix:
    """R^{la}_{bm} = scale * sym^{la}_{bm} + i * left[l, m] * right[a, b]."""
    n1, n2 = left.shape[0], right.shape[0]
    data = zeros((n1, n2, n2, n1), backend)
    i = _unit(backend)
    for l in range(n1):
        for a in range(n2):
            for b in range(n2):
                for m in range(n1):
                    data[l, a, b, m] = scale * sym[l, a, b, m] + i * left[l, m] * right[a, b]
    return RMatrix(n1, n2, data, backend)


def _delta4(n1: int, n2: int, backend: Backend) -> np.ndarray:
    one = to_exact(1) if backend is Backend.EXACT else 1.0 + 0j
    data = zeros((n1, n2, n2, n1), backend)
    for l in range(n1):
        for a in range(n2):
            data[l, a, a, l] = one
    return data


def classical_R(n1: int, n2: int) -> RMatrix:
    """The commutative solution R^{la}_{bm} = delta^l_m delta^a_b."""
    if n1 < 1 or n2 < 1:
        raise ValueError("n1 and n2 must be positive")
    return RMatrix(n1, n2, _delta4(n1, n2, Backend.EXACT), Backend.EXACT)


def theta_R(cos_t, sin_t, tol: float = DEFAULT_TOL) -> RMatrix:
    """R = cos(t) delta delta + i sin(t) J (x) J on R^2 x R^2."""
    backend = _backend_for([cos_t, sin_t])
    c, s = _num(cos_t, backend), _num(sin_t, backend)
    if not _is_one(c * c + s * s, backend, tol):
        raise ValueError(f"cos^2 + sin^2 != 1 for ({cos_t}, {sin_t})")
    j = _real_matrix(J2, backend)
    return _rmatrix_from_parts(_delta4(2, 2, backend), j * s, j, c, backend)


def _block_layout(n: int, k: int) -> list[list[int]]:
    """Coordinate lists of the k two-dimensional cells followed by the singles."""
    return [[2 * m, 2 * m + 1] for m in range(k)] + [[i] for i in range(2 * k, n)]


def _angle_pair(entry, backend: Backend):
    if isinstance(entry, (tuple, list)) and len(entry) == 2:
        return _num(entry[0], backend), _num(entry[1], backend)
    t = float(entry)
    return complex(math.cos(t)), complex(math.sin(t))


def build_theta_deformation(n1: int, n2: int, k1: int, k2: int,
                            theta: Sequence[Sequence] | None = None,
                            eps: Sequence[Sequence] | None = None,
                            tol: float = DEFAULT_TOL) -> RMatrix:
    """Assemble R directly in canonical block form.

    ``theta`` is a k1 x k2 table whose entries are angles (floats) or
    (cos, sin) pairs (rationals give an exact result). ``eps`` is a table over
    all blocks (cells first, then singles) on each side; entries at
    cell-cell positions are ignored, the rest must be +1 or -1. Missing ``eps``
    means all +1.
    """
    if not (0 <= 2 * k1 <= n1 and 0 <= 2 * k2 <= n2):
        raise ValueError("need 2*k1 <= n1 and 2*k2 <= n2")
    theta = [[0] * k2 for _ in range(k1)] if theta is None else theta
    if len(theta) != k1 or any(len(row) != k2 for row in theta):
        raise ValueError("theta table must be k1 x k2")
    blocks1, blocks2 = _block_layout(n1, k1), _block_layout(n2, k2)
    if eps is None:
        eps = [[1] * len(blocks2) for _ in blocks1]
    if len(eps) != len(blocks1) or any(len(row) != len(blocks2) for row in eps):
        raise ValueError(f"eps table must be {len(blocks1)} x {len(blocks2)}")
    backend = _backend_for([theta])
    i = _unit(backend)
    one = _num(1, backend)
    j = _real_matrix(J2, backend)
    H = zeros((n1, n2, n1, n2), backend)
    for u, c1 in enumerate(blocks1):
        for v, c2 in enumerate(blocks2):
            if len(c1) == 2 and len(c2) == 2:
                c, s = _angle_pair(theta[u][v], backend)
                if not _is_one(c * c + s * s, backend, tol):
                    raise ValueError(f"theta[{u}][{v}] is not on the unit circle")
                for p in range(2):
                    for q in range(2):
                        for r in range(2):
                            for t in range(2):
                                val = i * s * j[p, r] * j[q, t]
                                if p == r and q == t:
                                    val = val + c
                                H[c1[p], c2[q], c1[r], c2[t]] = val
            else:
                e = eps[u][v]
                if e not in (1, -1):
                    raise ValueError(f"eps[{u}][{v}] must be +1 or -1")
                for p in range(len(c1)):
                    for q in range(len(c2)):
                        H[c1[p], c2[q], c1[p], c2[q]] = one * e
    return Endo12(n1, n2, H).unhat()


# quaternions

@dataclass(frozen=True)
class Quaternion:
    """q = x0 + x1 e1 + x2 e2 + x3 e3 with e_a e_b = -delta_ab + eps_abc e_c."""
    x0: object = 0
    x1: object = 0
    x2: object = 0
    x3: object = 0

    @property
    def coords(self) -> tuple:
        return (self.x0, self.x1, self.x2, self.x3)

    def __mul__(self, other: "Quaternion") -> "Quaternion":
        a0, a1, a2, a3 = self.coords
        b0, b1, b2, b3 = other.coords
        return Quaternion(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 + a2 * b0 + a3 * b1 - a1 * b3,
            a0 * b3 + a3 * b0 + a1 * b2 - a2 * b1,
        )

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(*(p + q for p, q in zip(self.coords, other.coords)))

    def __neg__(self) -> "Quaternion":
        return Quaternion(*(-p for p in self.coords))

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.x0, -self.x1, -self.x2, -self.x3)

    def norm2(self):
        return sum(p * p for p in self.coords)

    @classmethod
    def unit(cls, a: int) -> "Quaternion":
        c = [0, 0, 0, 0]
        c[a] = 1
        return cls(*c)


def levi_civita(a: int, b: int, c: int) -> int:
    """Totally antisymmetric symbol on {1,2,3} with eps_123 = +1."""
    if len({a, b, c}) < 3:
        return 0
    return 1 if (a, b, c) in ((1, 2, 3), (2, 3, 1), (3, 1, 2)) else -1


def _mult_matrix(q: Quaternion, side: str) -> np.ndarray:
    """Matrix of x -> q x (side 'left') or x -> x q (side 'right') on coordinates."""
    out = np.zeros((4, 4), dtype=object)
    for col in range(4):
        basis = Quaternion.unit(col)
        img = q * basis if side == "left" else basis * q
        for row in range(4):
            out[row, col] = img.coords[row]
    return out


@dataclass(frozen=True)
class JMatrices:
    """E+_a (left multiplication), E-_a (right multiplication), J+_a = E+_a, J-_a = -E-_a."""
    e_plus: tuple
    e_minus: tuple
    j_plus: tuple
    j_minus: tuple


def jmatrices() -> JMatrices:
    ep = tuple(_mult_matrix(Quaternion.unit(a), "left") for a in (1, 2, 3))
    em = tuple(_mult_matrix(Quaternion.unit(a), "right") for a in (1, 2, 3))
    jm = tuple(-m for m in em)
    return JMatrices(ep, em, ep, jm)


def component_formula(sign: int, a: int) -> np.ndarray:
    """The closed component expression -/+(d_0mu d_anu - d_amu d_0nu) + eps_abc d_bmu d_cnu.

    ``sign=+1`` evaluates the upper-sign variant. This evaluates to -J^{-sign}_a,
    not J^{sign}_a; kept for comparison only.
    """
    out = np.zeros((4, 4), dtype=object)
    for mu in range(4):
        for nu in range(4):
            v = -sign * ((mu == 0 and nu == a) - (mu == a and nu == 0))
            v += sum(levi_civita(a, b, c) for b in (1, 2, 3) for c in (1, 2, 3)
                     if b == mu and c == nu)
            out[mu, nu] = v
    return out


def hodge_star(F: np.ndarray) -> np.ndarray:
    """(*F)_{mu nu} = 1/2 sum eps_{mu nu rho sigma} F_{rho sigma} on R^4."""
    from itertools import permutations
    out = np.zeros((4, 4), dtype=object)
    for perm in permutations(range(4)):
        inv = sum(1 for i in range(4) for k in range(i + 1, 4) if perm[i] > perm[k])
        sgn = -1 if inv % 2 else 1
        mu, nu, rho, sigma = perm
        out[mu, nu] += Fraction(sgn, 2) * F[rho, sigma]
    return out


def form_product(F: np.ndarray, G: np.ndarray) -> Fraction:
    """(F|G) = 1/4 sum F_{mu nu} G_{mu nu}."""
    return Fraction(sum(F[i, j] * G[i, j] for i in range(4) for j in range(4))) / 4


def j_minus(v: Sequence, backend: Backend = Backend.EXACT) -> np.ndarray:
    jm = jmatrices().j_minus
    out = sum((jm[a] * v[a] for a in range(3)), np.zeros((4, 4), dtype=object))
    return _real_matrix(out, backend)


def quaternionic_R(u, v1: Sequence, v2: Sequence, tol: float = DEFAULT_TOL) -> RMatrix:
    """R^{la}_{bm} = u delta^l_m delta^a_b + i J-(v1)^l_m J-(v2)^a_b on R^4 x R^4."""
    if len(v1) != 3 or len(v2) != 3:
        raise ValueError("v1 and v2 must have three components")
    backend = _backend_for([u, list(v1), list(v2)])
    uu = _num(u, backend)
    a = [_num(x, backend) for x in v1]
    b = [_num(x, backend) for x in v2]
    norm = uu * uu + sum(x * x for x in a) * sum(x * x for x in b)
    if not _is_one(norm, backend, tol):
        raise ValueError("normalization u^2 + |v1|^2 |v2|^2 = 1 violated")
    return _rmatrix_from_parts(_delta4(4, 4, backend), j_minus(a, backend), j_minus(b, backend),
                               uu, backend)


def simplified_quaternionic_R(u0, u1, u2, tol: float = DEFAULT_TOL) -> RMatrix:
    """R = u0 delta delta + i J-_1 (x) (u1 J-_1 + u2 J-_2)."""
    backend = _backend_for([u0, u1, u2])
    p0, p1, p2 = (_num(x, backend) for x in (u0, u1, u2))
    if not _is_one(p0 * p0 + p1 * p1 + p2 * p2, backend, tol):
        raise ValueError("sphere constraint u0^2 + u1^2 + u2^2 = 1 violated")
    one, zero = _num(1, backend), _num(0, backend)
    return _rmatrix_from_parts(_delta4(4, 4, backend), j_minus([one, zero, zero], backend),
                               j_minus([p1, p2, zero], backend), p0, backend)


# symmetries and central elements

def _blockdiag(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    n1, n2 = x.shape[0], y.shape[0]
    out = np.zeros((n1 + n2, n1 + n2), dtype=x.dtype)
    out[:n1, :n1] = x
    out[n1:, n1:] = y
    return out


def transform_relations(relations: np.ndarray, M: np.ndarray) -> np.ndarray:
    """Relation vectors after the substitution x_i -> sum_k M[i, k] x_k (r -> M^T r M)."""
    from . import linalg
    n = M.shape[0]
    out = []
    for row in relations:
        r = np.ascontiguousarray(row.reshape(n, n))
        out.append(linalg.matmul(linalg.matmul(np.ascontiguousarray(M.T), r), M).ravel()
                   if relations.dtype == object else (M.T @ r @ M).ravel())
    return np.array(out, dtype=relations.dtype)


def check_left_action_automorphism(R: RMatrix, tol: float = DEFAULT_TOL):
    """For all a, b: x1 -> J+_a x1, x2 -> J+_b x2 keeps the relation space of A_R.

    Witness is the first failing (a, b), 1-based.
    """
    from . import linalg
    from .algebra import presentation_from_R
    from .conditions import ConditionReport
    if (R.n1, R.n2) != (4, 4):
        raise ValueError(f"left quaternionic action needs n1 = n2 = 4, got ({R.n1}, {R.n2})")
    P = presentation_from_R(R, tol)
    jp = jmatrices().j_plus
    t = None if R.exact else tol
    worst = 0.0
    witness: tuple = ()
    for a in range(3):
        for b in range(3):
            M = _blockdiag(_real_matrix(jp[a], R.backend), _real_matrix(jp[b], R.backend))
            moved = transform_relations(P.relations, M)
            ok, res = linalg.contains(P.relations, moved, t)
            if not (ok and R.exact):
                worst = max(worst, res)
            if not ok and not witness:
                witness = (a + 1, b + 1)
    return ConditionReport("left_action", not witness, worst, witness, {"pairs": 9})


@dataclass
class CentralQuadratics:
    """Distinguished quadratic elements (word -> coefficient maps on 0-based words) and their certificates."""
    elements: list
    reports: list

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def report(self):
        from .conditions import ConditionReport
        worst = max((r.residual for r in self.reports), default=0.0)
        for r in self.reports:
            if not r.passed:
                return ConditionReport("central_quadratics", False, worst, r.witness)
        return ConditionReport("central_quadratics", True, worst, (),
                               {"elements": [name for name, _ in self.elements]})


def _square_sum(indices, backend: Backend) -> dict:
    one = _num(1, backend)
    return {(i, i): one for i in indices}


def _snap_orthonormal(x: np.ndarray, tol: float = 1e-13):
    """Exact rational copy of float columns that are orthonormal, or None if no small-denominator match."""
    out = np.zeros(x.shape, dtype=object)
    for idx, v in np.ndenumerate(x):
        f = Fraction(float(v)).limit_denominator(10 ** 4)
        if abs(float(f) - float(v)) > tol:
            return None
        out[idx] = f
    gram = out.T @ out
    if any(gram[i, j] != (1 if i == j else 0) for i in range(gram.shape[0]) for j in range(gram.shape[1])):
        return None
    return np.vectorize(to_exact, otypes=[object])(out)


def cell_elements(R: RMatrix, seed: int | None = None) -> list[tuple[str, dict, Backend]]:
    """z z* for each 2x2 cell of the canonical frame, written in the original generators.

    With w = (1, i) on the cell basis (e1, e2): z = sum_j w_j y_j, y = O^T x.
    The element is kept exact when the frame columns are rational.
    """
    from .reduction import DEFAULT_SEED, reduce_R
    C = reduce_R(R, DEFAULT_SEED if seed is None else seed)
    out = []
    for side, O, k, off in ((1, C.O1, C.k1, 0), (2, C.O2, C.k2, R.n1)):
        for m in range(k):
            cols = O[:, 2 * m: 2 * m + 2]
            exact_cols = _snap_orthonormal(cols) if R.exact else None
            backend = Backend.EXACT if exact_cols is not None else Backend.APPROX
            cols_used = exact_cols if exact_cols is not None else cols.astype(complex)
            w = [_num(1, backend), I_UNIT if backend is Backend.EXACT else 1j]
            # z = sum_i zc[i] x_i, zbar = sum_i conj(zc[i]) x_i
            zc = [sum((cols_used[i, j] * w[j] for j in range(2)), _num(0, backend)) for i in range(O.shape[0])]
            el: dict = {}
            for i in range(O.shape[0]):
                for j in range(O.shape[0]):
                    cj = zc[j].conjugate() if backend is Backend.APPROX else type(zc[j])(zc[j].x, -zc[j].y)
                    v = zc[i] * cj
                    if (v if backend is Backend.EXACT else abs(v) > 1e-15):
                        el[(off + i, off + j)] = v
            out.append((f"z{side}^{m + 1} z{side}^{m + 1}*", el, backend))
    return out


def central_quadratics(R: RMatrix, include_cells: bool = True, tol: float = DEFAULT_TOL) -> CentralQuadratics:
    """(x1,x1), (x2,x2), (x,x) and, when 2x2 cells exist, the z z* elements, each checked for centrality."""
    from .algebra import check_central, presentation_from_R
    P = presentation_from_R(R, tol)
    n1, n = R.n1, R.n
    elements = [("(x1,x1)", _square_sum(range(n1), R.backend)),
                ("(x2,x2)", _square_sum(range(n1, n), R.backend)),
                ("(x,x)", _square_sum(range(n), R.backend))]
    reports = [check_central(P, q, name) for name, q in elements]
    if include_cells:
        approx_P = None
        try:
            cells = cell_elements(R)
        except ValueError:
            cells = []
        for name, q, backend in cells:
            if backend is R.backend:
                reports.append(check_central(P, q, name))
            else:
                approx_P = approx_P or presentation_from_R(R.to_approx(), tol)
                reports.append(check_central(approx_P, q, name))
            elements.append((name, q))
    return CentralQuadratics(elements, reports)


def sphere_relations(R: RMatrix) -> tuple:
    """The sphere quotient as (presentation, [sum x^2 - 1])."""
    from .algebra import presentation_from_R
    q = _square_sum(range(R.n), R.backend)
    q[()] = -_num(1, R.backend)
    return presentation_from_R(R), [q]


def torus_relations(R: RMatrix) -> tuple:
    """The torus quotient as (presentation, [z z* - 1 for every cell])."""
    from .algebra import presentation_from_R
    rels = []
    for _, q, backend in cell_elements(R):
        q = dict(q)
        q[()] = -_num(1, backend)
        rels.append(q)
    return presentation_from_R(R), rels
