"""Genus-2 Siegel fundamental domain: Minkowski reduction, Gottschling's pairs, y0 certificates."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import minimize

from .modgroup import SiegelPoint
from .numerics import QuadratureGrid, det2
from .report import ScanReport

MARGIN_FLOOR = 1e-3
BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class GottschlingPair:
    c: tuple
    d: tuple

    @property
    def rank_c(self) -> int:
        return int(np.linalg.matrix_rank(np.array(self.c, dtype=float)))

    def __str__(self) -> str:
        return f"c={list(map(list, self.c))} d={list(map(list, self.d))}"


def gottschling_set() -> list[GottschlingPair]:
    """The 19 pairs (c, d) whose inequalities |det(cz+d)| >= 1 cut out F_2."""
    e11, e22 = ((1, 0), (0, 0)), ((0, 0), (0, 1))
    pairs = [GottschlingPair(e11, e22), GottschlingPair(e22, e11)]
    for entry in (0, 1):
        pairs.append(GottschlingPair(((1, -1), (0, 0)), ((1, entry), (-2, 1))))
    one = ((1, 0), (0, 1))
    pairs.append(GottschlingPair(one, ((0, 0), (0, 0))))
    for s in (-1, 1):
        for d in (((s, 0), (0, 0)), ((0, 0), (0, s)), ((s, 0), (0, s)), ((s, 0), (0, -s)),
                  ((0, s), (s, 0)), ((s, s), (s, 0)), ((0, s), (s, s))):
            pairs.append(GottschlingPair(one, d))
    return pairs


# ---------------------------------------------------------------------------
# Minkowski reduction of 2x2 positive matrices

def is_minkowski_reduced(y: np.ndarray, tol: float = 0.0) -> bool:
    y = np.asarray(y, dtype=float)
    return bool(2 * abs(y[0, 1]) <= y[0, 0] + tol and y[0, 0] <= y[1, 1] + tol)


def minkowski_reduce(y, max_iter: int = 10_000) -> tuple[np.ndarray, np.ndarray]:
    """Lagrange-Gauss reduction; returns (reduced, u) with u^T y u = reduced."""
    y = np.asarray(y, dtype=float)
    if not (np.allclose(y, y.T) and y[0, 0] > 0 and np.linalg.det(y) > 0):
        raise ValueError("matrix is not symmetric positive definite")
    u = np.eye(2, dtype=np.int64)
    cur = y.copy()

    def apply(m):
        nonlocal u, cur
        u = u @ m
        cur = m.T @ cur @ m

    for _ in range(max_iter):
        k = int(np.round(-cur[0, 1] / cur[0, 0]))
        if k:
            apply(np.array([[1, k], [0, 1]]))
        if cur[0, 0] > cur[1, 1]:
            apply(np.array([[0, 1], [1, 0]]))
            continue
        break
    else:
        raise RuntimeError("reduction did not terminate")
    if cur[0, 1] < 0:
        apply(np.array([[1, 0], [0, -1]]))
    return cur, u


# ---------------------------------------------------------------------------
# |det(cz + d)| over the box U_2(y0)

def abs_det(c, d, x11, x12, x22, y11, y12, y22) -> np.ndarray:
    """|det(c z + d)| for z with coordinates x + i y (arrays broadcast)."""
    c = np.asarray(c, dtype=float)
    d = np.asarray(d, dtype=float)
    z11, z12, z22 = x11 + 1j * y11, x12 + 1j * y12, x22 + 1j * y22
    j11 = c[0, 0] * z11 + c[0, 1] * z12 + d[0, 0]
    j12 = c[0, 0] * z12 + c[0, 1] * z22 + d[0, 1]
    j21 = c[1, 0] * z11 + c[1, 1] * z12 + d[1, 0]
    j22 = c[1, 0] * z12 + c[1, 1] * z22 + d[1, 1]
    return np.abs(j11 * j22 - j12 * j21)


@dataclass(frozen=True)
class BoxMinimum:
    value: float
    at: tuple
    grid_min: float
    lower_bound: float


def box_minimum(pair: GottschlingPair, y0: float, grid: QuadratureGrid) -> BoxMinimum:
    """Grid minimum of |det(c(x + i y0 I) + d)| over x in U_2, plus one local descent.

    ``lower_bound`` subtracts the largest neighbour-to-neighbour change times
    the covering radius of the grid; it is an estimate, not a proof.
    """
    if grid.dim != 3:
        raise ValueError("box minimization needs a 3-D grid")
    x11, x12, x22 = grid.mesh()
    vals = abs_det(pair.c, pair.d, x11, x12, x22, y0, 0.0, y0)
    idx = np.unravel_index(np.argmin(vals), vals.shape)
    grid_min = float(vals[idx])
    start = np.array([x11[idx], x12[idx], x22[idx]])

    def f(x):
        return float(abs_det(pair.c, pair.d, x[0], x[1], x[2], y0, 0.0, y0))

    res = minimize(f, start, method="L-BFGS-B", bounds=[(-0.5, 0.5)] * 3,
                   options={"maxiter": 20})
    best, at = (float(res.fun), tuple(res.x)) if res.fun < grid_min else (grid_min, tuple(start))
    h = 1.0 / grid.n
    slope = max(float(np.max(np.abs(np.diff(vals, axis=ax)))) / h for ax in range(3))
    # nodes sit h/2 inside the faces, so every point is within h*sqrt(3)/2 of one
    lower = grid_min - slope * h * np.sqrt(3) / 2
    return BoxMinimum(best, at, grid_min, float(lower))


def min_det_over_box(pair: GottschlingPair, y0: float, grid: QuadratureGrid) -> float:
    return box_minimum(pair, y0, grid).value


@dataclass(frozen=True)
class DomainCertificate:
    y0: float
    grid_n: int
    minima: tuple
    lower_bounds: tuple
    margin: float
    margin_floor: float

    @property
    def passed(self) -> bool:
        return self.margin > self.margin_floor

    def to_json(self) -> str:
        data = asdict(self)
        data["minima"] = list(self.minima)
        data["lower_bounds"] = list(self.lower_bounds)
        data["passed"] = self.passed
        return json.dumps(data, indent=2)


def certify_y0(y0: float, grid: QuadratureGrid | None = None,
               margin_floor: float = MARGIN_FLOOR) -> DomainCertificate:
    """Check |det(cz+d)| > 1 + margin_floor on U_2(y0) for every Gottschling pair."""
    grid = grid or QuadratureGrid(3, 64)
    mins = [box_minimum(p, y0, grid) for p in gottschling_set()]
    minima = tuple(m.value for m in mins)
    return DomainCertificate(float(y0), grid.n, minima, tuple(m.lower_bound for m in mins),
                             min(minima) - 1.0, margin_floor)


def search_y0(tol: float = 1e-3, grid: QuadratureGrid | None = None,
              margin_floor: float = MARGIN_FLOOR) -> float:
    """Bisection on (1, 2] for the smallest y0 whose certificate passes."""
    if tol < 1e-3:
        raise ValueError("tolerance below 1e-3 is not supported")
    grid = grid or QuadratureGrid(3, 32)
    lo, hi = 1.0, 2.0
    if not certify_y0(hi, grid, margin_floor).passed:
        raise RuntimeError("y0 = 2 does not certify; grid too coarse?")
    while hi - lo >= tol:
        mid = 0.5 * (lo + hi)
        if certify_y0(mid, grid, margin_floor).passed:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# structure of alpha -> |det(c(x + i alpha) + d)|^2

def det_alpha_polynomial(c, d, x) -> np.ndarray:
    """Coefficients [p0, p1, p2] with |det(c(x + i alpha I) + d)|^2 = p0 + p1 alpha^2 + p2 alpha^4."""
    x = np.asarray(x, dtype=float)
    u = np.array([0.0, 1.0, 4.0])
    vals = abs_det(c, d, x[0, 0], x[0, 1], x[1, 1], np.sqrt(u), 0.0, np.sqrt(u)) ** 2
    return np.linalg.solve(np.vander(u, 3, increasing=True), vals)


def top_degree(coeffs, rel_tol: float = 1e-9) -> int:
    coeffs = np.asarray(coeffs, dtype=float)
    scale = np.max(np.abs(coeffs))
    nz = np.nonzero(np.abs(coeffs) > rel_tol * scale)[0]
    return int(nz[-1]) if nz.size else 0


# ---------------------------------------------------------------------------
# membership

@dataclass(frozen=True)
class Membership:
    status: str  # "strict", "boundary" or "fail"
    failing: str | None = None

    @property
    def inside(self) -> bool:
        return self.status != "fail"


def in_fundamental_domain(z: SiegelPoint, tol: float = BOUNDARY_TOL) -> Membership:
    """Reduction conditions on Im z and Re z, then |det(cz+d)| >= 1 over the 19 pairs.

    "boundary" means some |det(cz+d)| equals 1 within ``tol``; equality in the
    reduction conditions (such as y11 = y22) does not change the status.
    """
    y, x = z.y, z.x
    if not is_minkowski_reduced(y):
        return Membership("fail", "imaginary part not Minkowski-reduced")
    if np.any(np.abs(x) > 0.5):
        return Membership("fail", "real part has an entry above 1/2")
    boundary = None
    for pair in gottschling_set():
        v = float(abs_det(pair.c, pair.d, x[0, 0], x[0, 1], x[1, 1], y[0, 0], y[0, 1], y[1, 1]))
        if v < 1 - tol:
            return Membership("fail", f"|det(cz+d)| = {v:.6g} < 1 for {pair}")
        if v <= 1 + tol and boundary is None:
            boundary = f"|det(cz+d)| = 1 for {pair}"
    if boundary:
        return Membership("boundary", boundary)
    return Membership("strict")


def rank_asymptotic_check(c, d, y_list, grid: QuadratureGrid | None = None) -> ScanReport:
    """Worst deviation over x in U_2 of det(c(x+iyI)+d) / ((iy)^2 det c) from 1, per y.

    The modulus ratio |det(...)| / (y^2 |det c|) deviates from 1 by at most the
    reported value.
    """
    c = np.asarray(c, dtype=float)
    d = np.asarray(d, dtype=float)
    dc = float(det2(c))
    if dc == 0:
        raise ValueError("c must be invertible")
    grid = grid or QuadratureGrid(3, 8)
    x11, x12, x22 = (m.ravel() for m in grid.mesh())
    report = ScanReport(("y",))
    for y in y_list:
        z11, z12, z22 = x11 + 1j * y, x12 + 0j, x22 + 1j * y
        j11 = c[0, 0] * z11 + c[0, 1] * z12 + d[0, 0]
        j12 = c[0, 0] * z12 + c[0, 1] * z22 + d[0, 1]
        j21 = c[1, 0] * z11 + c[1, 1] * z12 + d[1, 0]
        j22 = c[1, 0] * z12 + c[1, 1] * z22 + d[1, 1]
        ratio = (j11 * j22 - j12 * j21) / ((1j * y) ** 2 * dc)
        report.add((float(y),), float(np.max(np.abs(ratio - 1))), 0.0, 0.0)
    return report


def tr_pairing(s: np.ndarray, y: np.ndarray) -> float:
    return float(np.trace(np.asarray(s) @ np.asarray(y)))
