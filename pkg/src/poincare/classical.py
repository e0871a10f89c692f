"""Classical Poincare series P_{m,k} on SL(2,Z) and Gamma_0(q), and their Fourier coefficients.

Two independent routes to the coefficient p_{m,k}(n):

* ``coeff_quadrature_g1`` sums the series directly on the segment
  x + i*y0, |x| <= 1/2, and integrates against e(-n z);
* ``coeff_kloosterman`` uses the Kloosterman/Bessel expansion.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace

import numpy as np

from .modgroup import g1_coset_arrays
from .numerics import QuadratureGrid, bessel_j, cube_quadrature, e, kloosterman, tree_sum
from .report import ScanReport

MAX_HEIGHT = 480
MAX_POINTS = 4096


class QuadratureError(ArithmeticError):
    """The computed coefficient failed its realness check."""


@dataclass(frozen=True)
class ClassicalParams:
    k: int
    m: int
    n: int = 1
    q: int = 1
    y0: float = 1.1
    B: int = 30
    N: int = 64

    def __post_init__(self):
        if self.k < 4 or self.k % 2:
            raise ValueError(f"weight must be even and >= 4, got {self.k}")
        if self.m < 1 or self.n < 1 or self.q < 1:
            raise ValueError("m, n, q must be positive")
        if not self.y0 > 1:
            raise ValueError("y0 must exceed 1")
        if self.B < 1:
            raise ValueError("truncation height must be >= 1")
        QuadratureGrid(1, self.N)


def delta(m, n) -> int:
    return int(m == n)


def _terms(z: np.ndarray, p: ClassicalParams) -> np.ndarray:
    """Series terms, shape (cosets, *z.shape)."""
    a, b, c, d = g1_coset_arrays(p.B)
    if p.q > 1:
        keep = c % p.q == 0
        a, b, c, d = a[keep], b[keep], c[keep], d[keep]
    shape = (-1,) + (1,) * z.ndim
    a, b, c, d = (v.reshape(shape).astype(float) for v in (a, b, c, d))
    j = c * z + d
    gz = (a * z + b) / j
    return j ** (-p.k) * e(p.m * gz)


def eval_poincare_g1(z, p: ClassicalParams):
    """Truncated P_{m,k}(z) (restricted to Gamma_0(q) when q > 1)."""
    z = np.asarray(z, dtype=complex)
    if np.any(z.imag <= 0):
        raise ValueError("z must lie in the upper half-plane")
    terms = _terms(z, p)
    out = tree_sum(terms, axis=0)
    return out if z.ndim else complex(out)


def majorant_g1(z, p: ClassicalParams) -> float:
    """Sum of |cz + d|^{-k} over the same truncated coset list."""
    a, b, c, d = g1_coset_arrays(p.B)
    if p.q > 1:
        keep = c % p.q == 0
        c, d = c[keep], d[keep]
    return float(np.sum(np.abs(c * complex(z) + d) ** (-float(p.k))))


def coeff_quadrature_g1(p: ClassicalParams, imag_tol: float = 1e-9) -> float:
    """p_{m,k}(n) by the midpoint rule on the segment x + i*y0."""
    grid = QuadratureGrid(1, p.N)

    def integrand(x):
        z = x + 1j * p.y0
        vals = tree_sum(_terms(z, p), axis=0)
        return vals * e(-p.n * z)

    val = cube_quadrature(integrand, grid)
    if abs(val.imag) >= imag_tol:
        raise QuadratureError(f"imaginary part {val.imag:.3g} too large; raise B or N")
    return val.real


def coeff_quadrature_adaptive(p: ClassicalParams, tol: float = 1e-8) -> tuple[float, float]:
    """Double (B, N) until the coefficient moves by less than tol/2.

    Returns (value, error estimate) where the estimate is the last change.
    """
    prev = coeff_quadrature_g1(p)
    while True:
        if 2 * p.B > MAX_HEIGHT or 2 * p.N > MAX_POINTS:
            raise QuadratureError("adaptive refinement left the envelope without converging")
        p = replace(p, B=2 * p.B, N=2 * p.N)
        cur = coeff_quadrature_g1(p)
        change = abs(cur - prev)
        if change < tol / 2:
            return cur, change
        prev = cur


# ---------------------------------------------------------------------------
# Kloosterman / Bessel route

def kloosterman_tail(m: int, n: int, k: int, c_max: int) -> float:
    """Bound on the omitted part of the normalized expansion beyond c_max.

    Uses |S(m,n;c)| <= c, |J_{k-1}(x)| <= (x/2)^{k-1}/(k-1)! and
    sum_{c > C} c^{1-k} <= C^{2-k}/(k-2).
    """
    log = ((k - 1) * math.log(2 * math.pi * math.sqrt(m * n)) - math.lgamma(k)
           + (2 - k) * math.log(c_max) - math.log(k - 2) + math.log(2 * math.pi))
    return math.exp(log)


def petersson_delta(m: int, n: int, k: int, q: int = 1, c_max: int = 100) -> tuple[float, float]:
    """delta(m,n) + 2 pi i^{-k} sum_{q | c <= c_max} S(m,n;c)/c J_{k-1}(4 pi sqrt(mn)/c).

    This is the normalized (symmetric in m, n) form; returns (value, tail bound).
    """
    if k < 4 or k % 2:
        raise ValueError("weight must be even and >= 4")
    if c_max < q:
        raise ValueError("c_max must be at least q")
    x0 = 4 * math.pi * math.sqrt(m * n)
    terms = [kloosterman(m, n, c) / c * bessel_j(k - 1, x0 / c) for c in range(q, c_max + 1, q)]
    s = (-1) ** (k // 2) * 2 * math.pi * math.fsum(terms)
    return delta(m, n) + s, kloosterman_tail(m, n, k, c_max)


def coeff_kloosterman(p: ClassicalParams, c_max: int = 100) -> tuple[float, float]:
    """p_{m,k}(n) from the Kloosterman expansion; returns (value, tail bound).

    The Fourier coefficient is delta(m,n) + (n/m)^{(k-1)/2} times the
    Kloosterman-Bessel sum.
    """
    val, tail = petersson_delta(p.m, p.n, p.k, p.q, c_max)
    scale = (p.n / p.m) ** ((p.k - 1) / 2)
    d = delta(p.m, p.n)
    return d + scale * (val - d), scale * tail


def coeff_kloosterman_auto(p: ClassicalParams, tol: float = 1e-12) -> tuple[float, float]:
    """coeff_kloosterman with c_max grown until the tail bound is below tol."""
    c_max = max(p.q, 50)
    while kloosterman_tail(p.m, p.n, p.k, c_max) * (p.n / p.m) ** ((p.k - 1) / 2) > tol:
        c_max *= 2
        if c_max > 10**4:
            break
    c_max -= c_max % p.q
    return coeff_kloosterman(p, max(c_max, p.q))


# ---------------------------------------------------------------------------
# limit scans

def _coefficient(p: ClassicalParams, method: str, tol: float) -> tuple[float, float]:
    if method == "kloosterman":
        return coeff_kloosterman_auto(p)
    if method == "quadrature":
        return coeff_quadrature_adaptive(p, tol)
    raise ValueError(f"unknown method {method!r}")


def weight_limit_scan(m: int, n: int, k_list, q: int = 1, method: str = "kloosterman",
                      tol: float = 1e-8, **params) -> ScanReport:
    """One row per weight comparing p_{m,k}(n) with delta(m,n)."""
    report = ScanReport(("m", "n", "k", "q"))
    for k in k_list:
        t0 = time.perf_counter()
        val, err = _coefficient(ClassicalParams(k=k, m=m, n=n, q=q, **params), method, tol)
        report.add((m, n, k, q), val, delta(m, n), err, time.perf_counter() - t0)
    return report


def level_limit_scan(m: int, n: int, k: int, q_list, method: str = "kloosterman",
                     tol: float = 1e-8, **params) -> ScanReport:
    """One row per level comparing the Gamma_0(q) coefficient with delta(m,n)."""
    report = ScanReport(("m", "n", "k", "q"))
    for q in q_list:
        t0 = time.perf_counter()
        val, err = _coefficient(ClassicalParams(k=k, m=m, n=n, q=q, **params), method, tol)
        report.add((m, n, k, q), val, delta(m, n), err, time.perf_counter() - t0)
    return report
