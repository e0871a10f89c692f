"""Coset representatives for the stabilizer of the cusp in SL(2,Z) and Sp(4,Z).

Cosets of Gamma_inf (translations by integral symmetric matrices, and -1)
are labelled by their bottom row (c, d) up to sign.  Every representative
carries an integral completion (a, b) so that the full matrix lies in the
group.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .numerics import cond2, ext_gcd, inv2

COND_LIMIT = 1e12
G2_MAX_HEIGHT = 4

IDENTITY2 = ((1, 0), (0, 1))
ZERO2 = ((0, 0), (0, 0))


class IllConditioned(ArithmeticError):
    """cz + d is too close to singular for a trustworthy inverse."""


def _t(m) -> tuple:
    return tuple(tuple(int(v) for v in row) for row in np.asarray(m).reshape(2, 2))


# ---------------------------------------------------------------------------
# genus 1

@dataclass(frozen=True)
class CosetRepG1:
    c: int
    d: int
    a: int
    b: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"({self.a} {self.b}; {self.c} {self.d}) is not in SL(2,Z)")

    @property
    def bottom(self) -> tuple[int, int]:
        return (self.c, self.d)


def complete_g1(c: int, d: int) -> tuple[int, int]:
    """Return (a, b) with a*d - b*c = 1."""
    g, u, v = ext_gcd(d, c)
    if g != 1:
        raise ValueError(f"bottom row ({c}, {d}) is not coprime")
    return u, -v


def enumerate_g1_cosets(B: int) -> list[CosetRepG1]:
    """One representative per coset with max(|c|, |d|) <= B.

    Normalized so that c > 0, or c = 0 and d = 1.
    """
    if B < 1:
        raise ValueError("height must be >= 1")
    reps = [CosetRepG1(0, 1, 1, 0)]
    for c in range(1, B + 1):
        for d in range(-B, B + 1):
            if math.gcd(c, d) == 1:
                a, b = complete_g1(c, d)
                reps.append(CosetRepG1(c, d, a, b))
    return reps


def gamma0_indicator(rep: CosetRepG1, q: int) -> int:
    if q < 1:
        raise ValueError("level must be >= 1")
    return int(rep.c % q == 0)


@lru_cache(maxsize=64)
def g1_coset_arrays(B: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(a, b, c, d) as read-only int64 arrays, in enumeration order."""
    reps = enumerate_g1_cosets(B)
    out = tuple(np.array([getattr(r, f) for r in reps], dtype=np.int64) for f in "abcd")
    for arr in out:
        arr.setflags(write=False)
    return out


# ---------------------------------------------------------------------------
# genus 2

J4 = np.block([[np.zeros((2, 2), int), np.eye(2, dtype=int)],
               [-np.eye(2, dtype=int), np.zeros((2, 2), int)]])


@dataclass(frozen=True)
class SymplecticMatrix:
    a: tuple
    b: tuple
    c: tuple
    d: tuple

    @classmethod
    def from_matrix(cls, m) -> "SymplecticMatrix":
        m = np.asarray(m, dtype=np.int64)
        return cls(_t(m[:2, :2]), _t(m[:2, 2:]), _t(m[2:, :2]), _t(m[2:, 2:]))

    @property
    def matrix(self) -> np.ndarray:
        return np.block([[np.array(self.a), np.array(self.b)],
                         [np.array(self.c), np.array(self.d)]]).astype(np.int64)

    def is_symplectic(self) -> bool:
        m = self.matrix
        return bool(np.array_equal(m.T @ J4 @ m, J4))

    def __matmul__(self, other: "SymplecticMatrix") -> "SymplecticMatrix":
        return SymplecticMatrix.from_matrix(self.matrix @ other.matrix)


@dataclass(frozen=True)
class SiegelPoint:
    """z = x + iy in the genus-2 Siegel upper half-space."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float).reshape(2, 2)
        y = np.asarray(self.y, dtype=float).reshape(2, 2)
        if not (np.array_equal(x, x.T) and np.array_equal(y, y.T)):
            raise ValueError("real and imaginary parts must be symmetric")
        if not (y[0, 0] > 0 and y[0, 0] * y[1, 1] - y[0, 1] ** 2 > 0):
            raise ValueError("imaginary part must be positive definite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def from_complex(cls, z) -> "SiegelPoint":
        z = np.asarray(z, dtype=complex)
        z = 0.5 * (z + z.T)
        return cls(z.real, z.imag)

    @property
    def z(self) -> np.ndarray:
        return self.x + 1j * self.y


@dataclass(frozen=True)
class CosetRepG2:
    c: tuple
    d: tuple
    a: tuple
    b: tuple

    @property
    def gamma(self) -> SymplecticMatrix:
        return SymplecticMatrix(self.a, self.b, self.c, self.d)

    @property
    def bottom(self) -> tuple:
        return (self.c, self.d)

    @property
    def rank_c(self) -> int:
        return int(np.linalg.matrix_rank(np.array(self.c)))


def _minors(c: np.ndarray, d: np.ndarray) -> list[int]:
    cols = [c[:, 0], c[:, 1], d[:, 0], d[:, 1]]
    return [int(u[0] * v[1] - u[1] * v[0]) for u, v in itertools.combinations(cols, 2)]


def is_symmetric_pair(c, d) -> bool:
    cdt = np.asarray(c) @ np.asarray(d).T
    return bool(cdt[0, 1] == cdt[1, 0])


def is_primitive_pair(c, d) -> bool:
    return math.gcd(*_minors(np.asarray(c), np.asarray(d))) == 1


def normalize_sign(c, d) -> tuple[np.ndarray, np.ndarray]:
    """Flip (c, d) so the first nonzero entry of the 2x4 block [c d] is positive."""
    c, d = np.asarray(c, dtype=np.int64), np.asarray(d, dtype=np.int64)
    flat = np.hstack([c, d]).ravel()
    nz = flat[flat != 0]
    if nz.size and nz[0] < 0:
        return -c, -d
    return c, d


def _left_inverse(m: np.ndarray) -> np.ndarray:
    """Integral 2x4 matrix L with L @ m = I for a primitive integral 4x2 matrix m."""
    work = np.array(m, dtype=object)
    p = np.eye(4, dtype=object)
    for col in range(2):
        # Euclid down the column until a single nonzero pivot remains at row `col`
        while True:
            rows = [r for r in range(col, 4) if work[r, col] != 0]
            if not rows:
                raise ValueError("matrix is rank deficient")
            piv = min(rows, key=lambda r: abs(work[r, col]))
            work[[col, piv]] = work[[piv, col]]
            p[[col, piv]] = p[[piv, col]]
            done = True
            for r in range(col + 1, 4):
                q = work[r, col] // work[col, col]
                if q:
                    work[r] -= q * work[col]
                    p[r] -= q * p[col]
                if work[r, col] != 0:
                    done = False
            if done:
                break
    h = work[:2, :]
    det = h[0, 0] * h[1, 1] - h[0, 1] * h[1, 0]
    if abs(det) != 1:
        raise ValueError("matrix is not primitive")
    hinv = np.array([[h[1, 1], -h[0, 1]], [-h[1, 0], h[0, 0]]], dtype=object) * det
    return (hinv @ p[:2, :]).astype(np.int64)


def complete_g2(c, d) -> tuple[np.ndarray, np.ndarray]:
    """Top blocks (a, b) making (a b; c d) symplectic."""
    c, d = np.asarray(c, dtype=np.int64), np.asarray(d, dtype=np.int64)
    if not is_symmetric_pair(c, d):
        raise ValueError("c d^T is not symmetric")
    if not is_primitive_pair(c, d):
        raise ValueError("[c d] is not primitive")
    w = np.hstack([c, d])
    # rows u of (a b) need u J w_j^T = delta_ij
    u = _left_inverse(J4 @ w.T)
    alpha = int(u[0] @ J4 @ u[1])
    u[0] = u[0] + alpha * w[1]
    return u[:, :2].copy(), u[:, 2:].copy()


def _enumerate_pairs(B: int) -> np.ndarray:
    """All normalized symmetric primitive pairs with entries in [-B, B], as (M, 8)."""
    r = np.arange(-B, B + 1, dtype=np.int64)
    chunks = []
    # fix c and scan all d at once to keep memory flat
    dgrid = np.array(np.meshgrid(r, r, r, r, indexing="ij")).reshape(4, -1).T
    d11, d12, d21, d22 = dgrid.T
    for c11, c12, c21, c22 in itertools.product(r, repeat=4):
        sym = (c11 * d21 + c12 * d22) == (c21 * d11 + c22 * d12)
        if not sym.any():
            continue
        cols = [(np.full(sym.sum(), c11), np.full(sym.sum(), c21)),
                (np.full(sym.sum(), c12), np.full(sym.sum(), c22)),
                (d11[sym], d21[sym]), (d12[sym], d22[sym])]
        minors = [u[0] * v[1] - u[1] * v[0] for u, v in itertools.combinations(cols, 2)]
        prim = np.gcd.reduce(np.abs(np.array(minors)), axis=0) == 1
        dd = dgrid[sym][prim]
        block = np.column_stack([np.tile([c11, c12, c21, c22], (len(dd), 1)), dd])
        # [c d] row-major is (c11, c12, d11, d12, c21, c22, d21, d22)
        order = block[:, [0, 1, 4, 5, 2, 3, 6, 7]]
        first = order[np.arange(len(order)), np.argmax(order != 0, axis=1)]
        chunks.append(block[first > 0])
    return np.concatenate(chunks) if chunks else np.zeros((0, 8), np.int64)


@lru_cache(maxsize=8)
def g2_coset_arrays(B: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(a, b, c, d) stacked as (M, 2, 2) int64 arrays, in enumeration order."""
    if not 1 <= B <= G2_MAX_HEIGHT:
        raise ValueError(f"genus-2 height must be in 1..{G2_MAX_HEIGHT}")
    pairs = _enumerate_pairs(B)
    c = pairs[:, :4].reshape(-1, 2, 2)
    d = pairs[:, 4:].reshape(-1, 2, 2)
    a = np.empty_like(c)
    b = np.empty_like(d)
    for i in range(len(pairs)):
        a[i], b[i] = complete_g2(c[i], d[i])
    for arr in (a, b, c, d):
        arr.setflags(write=False)
    return a, b, c, d


def enumerate_g2_cosets(B: int) -> list[CosetRepG2]:
    """One representative per coset whose (c, d) entries are bounded by B in absolute value."""
    a, b, c, d = g2_coset_arrays(B)
    return [CosetRepG2(_t(c[i]), _t(d[i]), _t(a[i]), _t(b[i])) for i in range(len(c))]


def symplectic_action(gamma: SymplecticMatrix, z: SiegelPoint) -> SiegelPoint:
    """gamma . z = (az + b)(cz + d)^{-1}."""
    a, b, c, d = (np.array(m, dtype=float) for m in (gamma.a, gamma.b, gamma.c, gamma.d))
    zz = z.z
    m = c @ zz + d
    if cond2(m) > COND_LIMIT:
        raise IllConditioned(f"cz + d has condition estimate {cond2(m):.3g}")
    return SiegelPoint.from_complex((a @ zz + b) @ inv2(m))
