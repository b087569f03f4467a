"""Scalar backends.

Exact scalars are elements of the Gaussian rationals Q(i), represented by
sympy's ``QQ_I`` domain elements (a pair of gmpy2 rationals). Approx scalars
are complex doubles. Approx comparisons always go through an explicit
tolerance.
"""
from __future__ import annotations

import enum
import math
from fractions import Fraction
from typing import Any

import numpy as np
from sympy.polys.domains import QQ, QQ_I

DEFAULT_TOL = 1e-9
INVARIANT_TOL = 1e-12


class Backend(str, enum.Enum):
    EXACT = "exact"
    APPROX = "approx"


ZERO = QQ_I(0)
ONE = QQ_I(1)
I_UNIT = QQ_I(0, 1)


def _q(v: Any):
    f = Fraction(v)
    return QQ(f.numerator, f.denominator)


def gauss(re: Any = 0, im: Any = 0):
    """Exact Gaussian rational from rationals (ints, Fractions, "p/q" strings)."""
    return QQ_I(_q(re), _q(im))


def is_exact_scalar(z) -> bool:
    return type(z).__name__ == "GaussianRational"


def conj(z):
    if is_exact_scalar(z):
        return QQ_I(z.x, -z.y)
    return complex(z).conjugate()


def to_complex(z) -> complex:
    if is_exact_scalar(z):
        return complex(float(z.x), float(z.y))
    return complex(z)


def magnitude(z) -> float:
    if is_exact_scalar(z):
        return math.hypot(float(z.x), float(z.y))
    return abs(complex(z))


def parts(z) -> tuple[Fraction, Fraction]:
    """Real and imaginary parts of an exact scalar."""
    return (Fraction(int(z.x.numerator), int(z.x.denominator)),
            Fraction(int(z.y.numerator), int(z.y.denominator)))


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def to_exact(v):
    """Coerce ints, Fractions, "p/q" strings or (re, im) pairs to an exact scalar."""
    if is_exact_scalar(v):
        return v
    if isinstance(v, tuple) and len(v) == 2:
        return gauss(*v)
    if isinstance(v, (float, complex, np.floating, np.complexfloating)):
        raise TypeError(f"float {v!r} has no exact representation here")
    if type(v).__name__ == "mpq":
        return QQ_I(v, 0)
    return gauss(v)


def zeros(shape, backend: Backend) -> np.ndarray:
    if backend is Backend.EXACT:
        out = np.empty(shape, dtype=object)
        out.fill(ZERO)
        return out
    return np.zeros(shape, dtype=complex)


def cast_array(values, backend: Backend) -> np.ndarray:
    """Convert an array-like of numbers into the storage array of a backend."""
    arr = np.asarray(values, dtype=object)
    out = zeros(arr.shape, backend)
    conv = to_exact if backend is Backend.EXACT else to_complex
    for idx, v in np.ndenumerate(arr):
        out[idx] = conv(v)
    return out


def conj_array(arr: np.ndarray) -> np.ndarray:
    if arr.dtype == object:
        out = np.empty(arr.shape, dtype=object)
        for idx, v in np.ndenumerate(arr):
            out[idx] = QQ_I(v.x, -v.y)
        return out
    return np.conj(arr)


def magnitudes(arr: np.ndarray) -> np.ndarray:
    if arr.dtype == object:
        out = np.zeros(arr.shape, dtype=float)
        for idx, v in np.ndenumerate(arr):
            if v:
                out[idx] = magnitude(v)
        return out
    return np.abs(arr)


def backend_of(arr: np.ndarray) -> Backend:
    return Backend.EXACT if arr.dtype == object else Backend.APPROX
