"""Shared kernels: Kloosterman sums, Bessel J, small complex matrices, cube quadrature."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

TWO_PI = 2.0 * math.pi


def e(z):
    """The additive character e(z) = exp(2 pi i z), elementwise."""
    return np.exp(2j * np.pi * np.asarray(z))


# ---------------------------------------------------------------------------
# exact integer helpers

def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, u, v) with u*a + v*b = g = gcd(a, b) >= 0."""
    u0, v0, u1, v1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    if a < 0:
        a, u0, v0 = -a, -u0, -v0
    return a, u0, v0


def mod_inverse(x: int, c: int) -> int:
    g, u, _ = ext_gcd(x % c, c)
    if g != 1:
        raise ValueError(f"{x} is not invertible mod {c}")
    return u % c


def euler_phi(n: int) -> int:
    result, p, m = n, 2, n
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


# ---------------------------------------------------------------------------
# Kloosterman sums

@lru_cache(maxsize=None)
def kloosterman(m: int, n: int, c: int) -> float:
    """S(m, n; c) by direct summation over the units mod c."""
    if c < 1:
        raise ValueError("modulus must be >= 1")
    if c == 1:
        return 1.0
    terms = []
    for x in range(1, c):
        if math.gcd(x, c) != 1:
            continue
        xbar = mod_inverse(x, c)
        # reduce the phase exactly before going to floating point
        terms.append(math.cos(TWO_PI * ((m * x + n * xbar) % c) / c))
    return math.fsum(terms)


# ---------------------------------------------------------------------------
# Bessel functions of the first kind

BESSEL_MAX_ORDER = 200
BESSEL_MAX_X = 100.0


def bessel_j(order: int, x: float) -> float:
    """J_order(x) from the power series sum_j (-1)^j (x/2)^(order+2j) / (j! (order+j)!).

    The series is accumulated in exact rational arithmetic on the binary value
    of ``x`` and rounded once at the end; in double precision the alternating
    terms cancel catastrophically as soon as x/2 exceeds about sqrt(order).
    """
    if order != int(order) or not 1 <= order <= BESSEL_MAX_ORDER:
        raise ValueError(f"order {order} outside 1..{BESSEL_MAX_ORDER}")
    if not 0.0 <= x <= BESSEL_MAX_X:
        raise ValueError(f"argument {x} outside [0, {BESSEL_MAX_X}]")
    return _bessel_series(int(order), float(x))


@lru_cache(maxsize=8192)
def _bessel_series(order: int, x: float) -> float:
    if x == 0.0:
        return 0.0
    half = Fraction(x) / 2
    h2 = half * half
    term = half**order / math.factorial(order)
    total = term
    j = 0
    while True:
        j += 1
        term = -term * h2 / (j * (order + j))
        total += term
        # stop once past the peak of the terms and below 1e-18 of the sum
        if j * (order + j) > h2 and abs(term) * 10**18 < abs(total):
            break
    return float(total)


def bessel_bound(order: int, x: float) -> float:
    """Majorant |J_order(x)| <= (x/2)^order / order! for real x >= 0."""
    return math.exp(order * math.log(x / 2) - math.lgamma(order + 1)) if x > 0 else 0.0


# ---------------------------------------------------------------------------
# 2x2 complex matrices, batched over leading axes
#
# Arrays have shape (..., 2, 2).  Determinants and inverses use the closed
# 2x2 formulas so results do not depend on a LAPACK pivoting path.

def det2(m: np.ndarray) -> np.ndarray:
    return m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]


def inv2(m: np.ndarray) -> np.ndarray:
    det = det2(m)
    out = np.empty(np.broadcast_shapes(m.shape), dtype=np.result_type(m, 1.0))
    out[..., 0, 0] = m[..., 1, 1]
    out[..., 1, 1] = m[..., 0, 0]
    out[..., 0, 1] = -m[..., 0, 1]
    out[..., 1, 0] = -m[..., 1, 0]
    return out / det[..., None, None]


def cond2(m: np.ndarray) -> np.ndarray:
    """Frobenius-norm condition number of 2x2 matrices: |m|_F^2 / |det m|."""
    fro2 = np.sum(np.abs(m) ** 2, axis=(-2, -1))
    with np.errstate(divide="ignore"):
        return fro2 / np.abs(det2(m))


def symmetrize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + np.swapaxes(m, -1, -2))


def sym2(a11, a12, a22) -> np.ndarray:
    """Assemble symmetric 2x2 matrices from their three free coordinates."""
    a11, a12, a22 = np.broadcast_arrays(a11, a12, a22)
    out = np.empty(a11.shape + (2, 2), dtype=np.result_type(a11, a12, a22))
    out[..., 0, 0] = a11
    out[..., 0, 1] = a12
    out[..., 1, 0] = a12
    out[..., 1, 1] = a22
    return out


# ---------------------------------------------------------------------------
# midpoint quadrature on the unit cube [-1/2, 1/2]^d

@dataclass(frozen=True)
class QuadratureGrid:
    dim: int
    n: int

    def __post_init__(self):
        if self.dim not in (1, 3):
            raise ValueError("grid dimension must be 1 or 3")
        if self.n < 1 or self.n & (self.n - 1):
            raise ValueError("points per axis must be a power of two")

    @property
    def axis(self) -> np.ndarray:
        return (np.arange(self.n) + 0.5) / self.n - 0.5

    @property
    def weight(self) -> float:
        return float(self.n) ** (-self.dim)

    def mesh(self) -> tuple[np.ndarray, ...]:
        return tuple(np.meshgrid(*([self.axis] * self.dim), indexing="ij"))

    def points(self) -> np.ndarray:
        """Nodes as an (n**dim, dim) array in C order."""
        return np.stack([m.ravel() for m in self.mesh()], axis=-1)

    def doubled(self) -> "QuadratureGrid":
        return QuadratureGrid(self.dim, 2 * self.n)


def tree_sum(values: np.ndarray, axis: int | None = None):
    """Pairwise sum whose reduction tree depends only on the length summed.

    With ``axis=None`` the flattened array is reduced to a scalar; otherwise
    the given axis is reduced.
    """
    v = np.asarray(values)
    if axis is None:
        v = v.ravel()
        axis = 0
    v = np.moveaxis(v, axis, 0)
    if v.shape[0] == 0:
        return np.zeros(v.shape[1:], dtype=v.dtype)[()]
    while v.shape[0] > 1:
        if v.shape[0] % 2:
            v = np.concatenate([v, np.zeros((1,) + v.shape[1:], dtype=v.dtype)])
        v = v[0::2] + v[1::2]
    return v[0]


def cube_quadrature(f, grid: QuadratureGrid) -> complex:
    """Midpoint rule for the integral of f over [-1/2, 1/2]^d.

    ``f`` is called once with d coordinate arrays of shape (n,)*d and must
    return an array of the same shape.
    """
    values = np.asarray(f(*grid.mesh()))
    if values.shape != (grid.n,) * grid.dim:
        values = np.broadcast_to(values, (grid.n,) * grid.dim)
    return complex(tree_sum(values)) * grid.weight
