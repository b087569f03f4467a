"""The R-matrix container, its hat reindexing, the assembled big R, and the JSON interchange format.

Index convention: ``R.data[l, a, b, m]`` holds R^{la}_{bm} with l, m ranging
over the first factor (size n1) and a, b over the second (size n2), all
0-based in storage. The defining relations read

    x1^l x2^a = R^{la}_{bm} x2^b x1^m.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np

from .scalars import (
    Backend,
    ONE,
    ZERO,
    cast_array,
    conj_array,
    format_rational,
    gauss,
    magnitudes,
    parts,
    to_complex,
    zeros,
)


class SchemaError(ValueError):
    """Raised when an interchange document violates the schema."""


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class RMatrix:
    n1: int
    n2: int
    data: np.ndarray
    backend: Backend

    def __post_init__(self):
        if self.n1 < 1 or self.n2 < 1:
            raise ValueError("n1 and n2 must be positive")
        shape = (self.n1, self.n2, self.n2, self.n1)
        if self.data.shape != shape:
            raise ValueError(f"data shape {self.data.shape} != {shape}")
        want = object if self.backend is Backend.EXACT else complex
        if self.data.dtype != want:
            raise ValueError("data dtype does not match backend")
        if self.data.flags.writeable:
            object.__setattr__(self, "data", _freeze(self.data.copy()))

    @classmethod
    def from_array(cls, values, backend: Backend | None = None) -> "RMatrix":
        arr = np.asarray(values, dtype=object)
        if arr.ndim != 4 or arr.shape[0] != arr.shape[3] or arr.shape[1] != arr.shape[2]:
            raise ValueError(f"expected shape (n1, n2, n2, n1), got {arr.shape}")
        if backend is None:
            backend = Backend.EXACT
            for v in arr.flat:
                if isinstance(v, (float, complex, np.floating, np.complexfloating)):
                    backend = Backend.APPROX
                    break
        return cls(arr.shape[0], arr.shape[1], cast_array(arr, backend), backend)

    @property
    def n(self) -> int:
        return self.n1 + self.n2

    @property
    def exact(self) -> bool:
        return self.backend is Backend.EXACT

    def entry(self, l: int, a: int, b: int, m: int):
        """Entry R^{la}_{bm} with 1-based indices."""
        return self.data[l - 1, a - 1, b - 1, m - 1]

    def conj(self) -> np.ndarray:
        return conj_array(self.data)

    def to_approx(self) -> "RMatrix":
        if not self.exact:
            return self
        return RMatrix(self.n1, self.n2, cast_array(self.data, Backend.APPROX), Backend.APPROX)

    def as_complex(self) -> np.ndarray:
        return self.to_approx().data

    def replace(self, index: tuple[int, int, int, int], value) -> "RMatrix":
        """Copy with one 0-based entry replaced."""
        arr = self.data.copy()
        arr[index] = cast_array([value], self.backend)[0]
        return RMatrix(self.n1, self.n2, arr, self.backend)

    def hat(self) -> "Endo12":
        return hat(self)

    def max_deviation(self, other: "RMatrix") -> float:
        if (self.n1, self.n2) != (other.n1, other.n2):
            raise ValueError("dimension mismatch")
        return float(np.max(np.abs(self.as_complex() - other.as_complex())))

    def same_entries(self, other: "RMatrix") -> bool:
        if (self.n1, self.n2) != (other.n1, other.n2):
            return False
        if self.exact and other.exact:
            return bool(np.all(self.data == other.data))
        return self.max_deviation(other) == 0.0

    def __repr__(self) -> str:
        return f"RMatrix(n1={self.n1}, n2={self.n2}, backend={self.backend.value})"


@dataclass(frozen=True, eq=False)
class Endo12:
    """Endomorphism of C^{n1} (x) C^{n2}; ``data[l, a, m, b]`` is the hat entry R^{la}_{mb}."""
    n1: int
    n2: int
    data: np.ndarray

    def __post_init__(self):
        if self.data.flags.writeable:
            object.__setattr__(self, "data", _freeze(self.data.copy()))

    def matrix(self) -> np.ndarray:
        """Row index l*n2 + a, column index m*n2 + b."""
        k = self.n1 * self.n2
        return self.data.reshape(k, k)

    @classmethod
    def from_matrix(cls, n1: int, n2: int, mat: np.ndarray) -> "Endo12":
        return cls(n1, n2, np.asarray(mat).reshape(n1, n2, n1, n2))

    def unhat(self) -> RMatrix:
        arr = np.ascontiguousarray(self.data.transpose(0, 1, 3, 2))
        backend = Backend.EXACT if arr.dtype == object else Backend.APPROX
        return RMatrix(self.n1, self.n2, arr.copy(), backend)


@dataclass(frozen=True, eq=False)
class BigR:
    """Assembled operator on C^N (x) C^N; ``data[a, b, c, d]`` is the coefficient of x^c x^d in x^a x^b."""
    n1: int
    n2: int
    data: np.ndarray

    def __post_init__(self):
        if self.data.flags.writeable:
            object.__setattr__(self, "data", _freeze(self.data.copy()))

    @property
    def n(self) -> int:
        return self.n1 + self.n2

    def matrix(self) -> np.ndarray:
        n = self.n
        return self.data.reshape(n * n, n * n)

    def nonzero_rows(self) -> dict[tuple[int, int], list[tuple[tuple[int, int], Any]]]:
        rows: dict = {}
        for idx in zip(*np.nonzero(magnitudes(self.data) > 0)):
            a, b, c, d = (int(i) for i in idx)
            rows.setdefault((a, b), []).append(((c, d), self.data[a, b, c, d]))
        return rows


def hat(R: RMatrix) -> Endo12:
    """R-hat^{la}_{mb} = R^{la}_{bm}."""
    return Endo12(R.n1, R.n2, np.ascontiguousarray(R.data.transpose(0, 1, 3, 2)).copy())


def build_big_R(R: RMatrix) -> BigR:
    n1, n2 = R.n1, R.n2
    n = n1 + n2
    one = ONE if R.exact else 1.0 + 0j
    big = zeros((n, n, n, n), R.backend)
    for l in range(n1):
        for m in range(n1):
            big[l, m, m, l] = one
    for g in range(n2):
        for d in range(n2):
            big[n1 + g, n1 + d, n1 + d, n1 + g] = one
    rc = R.conj()
    for l in range(n1):
        for a in range(n2):
            for b in range(n2):
                for m in range(n1):
                    # x1^l x2^a = R x2^b x1^m  and  x2^a x1^l = conj(R) x1^m x2^b
                    big[l, n1 + a, n1 + b, m] = R.data[l, a, b, m]
                    big[n1 + a, l, m, n1 + b] = rc[l, a, b, m]
    return BigR(n1, n2, big)


def big_R_pattern(n1: int, n2: int) -> np.ndarray:
    """Boolean mask of the entries allowed to be nonzero in the assembled big R."""
    n = n1 + n2
    g1 = np.arange(n) < n1
    mask = np.zeros((n, n, n, n), dtype=bool)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    if g1[a] == g1[b]:
                        mask[a, b, c, d] = (c == b and d == a)
                    else:
                        mask[a, b, c, d] = (g1[c] == g1[b] and g1[d] == g1[a])
    return mask


# interchange format

def _classify(value: Any, where: str) -> str:
    if isinstance(value, bool) or value is None:
        raise SchemaError(f"{where}: non-numeric value {value!r}")
    if isinstance(value, str):
        try:
            Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise SchemaError(f"{where}: non-numeric value {value!r}") from None
        return "str"
    if isinstance(value, (int, float)):
        if isinstance(value, float) and not np.isfinite(value):
            raise SchemaError(f"{where}: non-finite value {value!r}")
        return "num"
    raise SchemaError(f"{where}: non-numeric value {value!r}")


def rmatrix_from_dict(doc: Any) -> RMatrix:
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object")
    for key in ("n1", "n2", "entries"):
        if key not in doc:
            raise SchemaError(f"missing key {key!r}")
    n1, n2, entries = doc["n1"], doc["n2"], doc["entries"]
    for name, v in (("n1", n1), ("n2", n2)):
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise SchemaError(f"{name} must be a positive integer")
    if not isinstance(entries, list):
        raise SchemaError("entries must be a list")
    kinds = set()
    seen = set()
    parsed = []
    for k, e in enumerate(entries):
        where = f"entries[{k}]"
        if not isinstance(e, dict):
            raise SchemaError(f"{where}: must be an object")
        missing = {"l", "a", "b", "m", "re", "im"} - set(e)
        if missing:
            raise SchemaError(f"{where}: missing {sorted(missing)}")
        idx = []
        for name, bound in (("l", n1), ("a", n2), ("b", n2), ("m", n1)):
            v = e[name]
            if not isinstance(v, int) or isinstance(v, bool):
                raise SchemaError(f"{where}: index {name} must be an integer")
            if not 1 <= v <= bound:
                raise SchemaError(f"{where}: index {name}={v} out of range 1..{bound}")
            idx.append(v - 1)
        key = tuple(idx)
        if key in seen:
            raise SchemaError(f"{where}: duplicate entry for (l,a,b,m)={tuple(i + 1 for i in key)}")
        seen.add(key)
        kinds.add(_classify(e["re"], where + ".re"))
        kinds.add(_classify(e["im"], where + ".im"))
        parsed.append((key, e["re"], e["im"]))
    if len(kinds) > 1:
        raise SchemaError("mixed string and number values: backend must be homogeneous")
    backend = Backend.APPROX if kinds == {"num"} else Backend.EXACT
    data = zeros((n1, n2, n2, n1), backend)
    for key, re, im in parsed:
        if backend is Backend.EXACT:
            data[key] = gauss(re.strip(), im.strip())
        else:
            data[key] = complex(float(re), float(im))
    return RMatrix(n1, n2, data, backend)


def load_rmatrix(text: str) -> RMatrix:
    """Parse the JSON interchange format."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from None
    return rmatrix_from_dict(doc)


def rmatrix_to_dict(R: RMatrix) -> dict:
    entries = []
    for idx in np.ndindex(R.data.shape):
        v = R.data[idx]
        l, a, b, m = (i + 1 for i in idx)
        if R.exact:
            if not v:
                continue
            re, im = parts(v)
            entries.append({"l": l, "a": a, "b": b, "m": m,
                            "re": format_rational(re), "im": format_rational(im)})
        else:
            z = to_complex(v)
            if z == 0:
                continue
            entries.append({"l": l, "a": a, "b": b, "m": m, "re": z.real, "im": z.imag})
    if not entries and not R.exact:
        # keep the backend tag of an all-zero approx matrix
        entries.append({"l": 1, "a": 1, "b": 1, "m": 1, "re": 0.0, "im": 0.0})
    return {"n1": R.n1, "n2": R.n2, "entries": entries}


def dump_rmatrix(R: RMatrix) -> str:
    return json.dumps(rmatrix_to_dict(R), indent=1)


def zero_like(R: RMatrix):
    return ZERO if R.exact else 0j


def gauge_transform(R: RMatrix, O1, O2) -> RMatrix:
    """R-hat' = (O1 (x) O2)^T R-hat (O1 (x) O2), i.e. the generators rotated by (O1, O2)."""
    H = hat(R).data
    if R.exact:
        o1 = cast_array(O1, Backend.EXACT)
        o2 = cast_array(O2, Backend.EXACT)
        from . import linalg
        d = R.n1 * R.n2
        big = np.empty((d, d), dtype=object)
        for (p, l), x in np.ndenumerate(o1):
            for (q, a), y in np.ndenumerate(o2):
                big[p * R.n2 + q, l * R.n2 + a] = x * y
        mat = linalg.matmul(linalg.matmul(np.ascontiguousarray(big.T), np.ascontiguousarray(H.reshape(d, d))), big)
        out = mat.reshape(R.n1, R.n2, R.n1, R.n2)
    else:
        o1 = np.asarray(O1, dtype=float)
        o2 = np.asarray(O2, dtype=float)
        out = np.einsum("pl,qa,pqrs,rm,sb->lamb", o1, o2, H, o1, o2, optimize=True)
    return Endo12(R.n1, R.n2, out).unhat()
