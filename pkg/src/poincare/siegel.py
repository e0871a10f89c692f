"""Genus-2 Siegel Poincare series, its majorant, and Fourier coefficients by 3-D quadrature.

Points of H_2 are handled in coordinates (z11, z12, z22).  The Fourier
pairing is Tr(t z) = t11 z11 + 2 t12 z12 + t22 z22, so with t half-integral
every frequency on the unit cube of (x11, x12, x22) is an integer.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .modgroup import G2_MAX_HEIGHT, SiegelPoint, g2_coset_arrays
from .numerics import QuadratureGrid, tree_sum
from .quadform import HalfIntegralForm, act, orbit_count
from .report import ScanReport

DEFAULT_Y0 = 1.05
CHUNK_ELEMENTS = 1 << 19
MAX_WEIGHT = 60
MAX_POINTS = 32


class QuadratureError(ArithmeticError):
    pass


@dataclass(frozen=True)
class SiegelParams:
    s: HalfIntegralForm
    t: HalfIntegralForm
    k: int
    y0: float = DEFAULT_Y0
    B: int = 2
    N: int = 16

    def __post_init__(self):
        check_weight(self.k)
        if not self.y0 > 1:
            raise ValueError("y0 must exceed 1")
        if not 1 <= self.B <= G2_MAX_HEIGHT:
            raise ValueError(f"B must be in 1..{G2_MAX_HEIGHT}")
        QuadratureGrid(3, self.N)


def check_weight(k: int) -> None:
    if k < 6 or k % 2:
        raise ValueError(f"weight must be even and >= 6, got {k}")


@dataclass
class SeriesValues:
    """Truncated series and majorant at a batch of points, one row per weight."""

    weights: tuple
    series: np.ndarray
    majorant: np.ndarray
    max_exp_factor: float = field(default=0.0)


def _coords(z) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    z = np.asarray(z, dtype=complex)
    return z[..., 0, 0].ravel(), 0.5 * (z[..., 0, 1] + z[..., 1, 0]).ravel(), z[..., 1, 1].ravel()


NEGLIGIBLE_LOG = -80.0


def _chunk_sums(blocks, z11, z12, z22, s: HalfIntegralForm, weights):
    a, b, c, d = (blocks[i].astype(float)[:, :, :, None] for i in range(4))
    j11 = c[:, 0, 0] * z11 + c[:, 0, 1] * z12 + d[:, 0, 0]
    j12 = c[:, 0, 0] * z12 + c[:, 0, 1] * z22 + d[:, 0, 1]
    j21 = c[:, 1, 0] * z11 + c[:, 1, 1] * z12 + d[:, 1, 0]
    j22 = c[:, 1, 0] * z12 + c[:, 1, 1] * z22 + d[:, 1, 1]
    det = j11 * j22 - j12 * j21
    # drop cosets whose every term is below exp(NEGLIGIBLE_LOG) at the lowest weight;
    # the exponential factor never exceeds 1
    kmin = min(weights)
    keep = -kmin * np.log(np.min(np.abs(det), axis=1)) > NEGLIGIBLE_LOG
    out_shape = (len(weights), z11.size)
    if not keep.any():
        return np.zeros(out_shape, complex), np.zeros(out_shape), 0.0
    a, b = a[keep], b[keep]
    j11, j12, j21, j22, det = j11[keep], j12[keep], j21[keep], j22[keep], det[keep]
    n11 = a[:, 0, 0] * z11 + a[:, 0, 1] * z12 + b[:, 0, 0]
    n12 = a[:, 0, 0] * z12 + a[:, 0, 1] * z22 + b[:, 0, 1]
    n21 = a[:, 1, 0] * z11 + a[:, 1, 1] * z12 + b[:, 1, 0]
    n22 = a[:, 1, 0] * z12 + a[:, 1, 1] * z22 + b[:, 1, 1]
    # gamma.z = (az + b) adj(cz + d) / det
    w11 = (n11 * j22 - n12 * j21) / det
    w12 = (n12 * j11 - n11 * j12) / det
    w21 = (n21 * j22 - n22 * j21) / det
    w22 = (n22 * j11 - n21 * j12) / det
    tr = s.a * w11 + 0.5 * s.b * (w12 + w21) + s.c * w22
    max_exp = float(np.max(np.exp(-2 * np.pi * tr.imag)))
    # walk up the sorted weights multiplying by det^{-2}
    order = np.argsort(weights, kind="stable")
    inv_det2 = det ** -2
    term = np.exp(2j * np.pi * tr - weights[order[0]] * np.log(det))
    current = weights[order[0]]
    series = np.empty(out_shape, complex)
    major = np.empty(out_shape)
    for idx in order:
        while current < weights[idx]:
            term = term * inv_det2
            current += 2
        series[idx] = tree_sum(term, axis=0)
        major[idx] = tree_sum(np.abs(term), axis=0)
    return series, major, max_exp


def series_values(z, s: HalfIntegralForm, weights, B: int, workers: int = 1) -> SeriesValues:
    """Truncated P_{s,k}(z) and M_{s,k}(z) for every k in ``weights``.

    ``z`` is an array of symmetric complex 2x2 matrices (..., 2, 2).
    """
    weights = tuple(int(k) for k in weights)
    for k in weights:
        check_weight(k)
    z11, z12, z22 = _coords(z)
    blocks = g2_coset_arrays(B)
    m = len(blocks[0])
    step = max(1, CHUNK_ELEMENTS // max(1, z11.size))
    starts = range(0, m, step)

    def run(i):
        return _chunk_sums([blk[i:i + step] for blk in blocks], z11, z12, z22, s, weights)

    acc = _PairwiseAccumulator()
    max_exp = 0.0
    # bounded windows keep memory flat; results are consumed in chunk order either way
    window = max(1, 2 * workers)
    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        for w in range(0, len(starts), window):
            batch = starts[w:w + window]
            parts = list(pool.map(run, batch)) if pool else [run(i) for i in batch]
            for series, major, mx in parts:
                acc.add(np.stack([series, major.astype(complex)]))
                max_exp = max(max_exp, mx)
    finally:
        if pool:
            pool.shutdown()
    total = acc.total()
    if total is None:
        total = np.zeros((2, len(weights), z11.size), complex)
    return SeriesValues(weights, total[0], total[1].real, max_exp)


class _PairwiseAccumulator:
    """Streaming pairwise sum: partials of equal size are merged like a binary counter.

    The summation tree depends only on the number of terms added, never on timing.
    """

    def __init__(self):
        self._stack: list[tuple[int, np.ndarray]] = []

    def add(self, value: np.ndarray) -> None:
        size = 1
        while self._stack and self._stack[-1][0] == size:
            _, prev = self._stack.pop()
            value = prev + value
            size *= 2
        self._stack.append((size, value))

    def total(self):
        if not self._stack:
            return None
        out = self._stack[-1][1]
        for _, v in reversed(self._stack[:-1]):
            out = v + out
        return out


def _point_array(z: SiegelPoint) -> np.ndarray:
    return z.z[None]


def eval_siegel_poincare(z: SiegelPoint, p: SiegelParams) -> complex:
    """Truncated P_{s,k}(z) = sum det(cz+d)^{-k} e(Tr(s gamma.z))."""
    return complex(series_values(_point_array(z), p.s, (p.k,), p.B).series[0, 0])


def eval_majorant(z: SiegelPoint, p: SiegelParams) -> float:
    """Truncated M_{s,k}(z) = sum |det(cz+d)|^{-k} exp(-2 pi Tr(s Im gamma.z))."""
    return float(series_values(_point_array(z), p.s, (p.k,), p.B).majorant[0, 0])


def cube_points(y0: float, N: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Coordinates (z11, z12, z22) of U_2(y0) sampled at the midpoint nodes."""
    x11, x12, x22 = (m.ravel() for m in QuadratureGrid(3, N).mesh())
    return x11 + 1j * y0, x12 + 0j, x22 + 1j * y0


def _as_matrices(z11, z12, z22) -> np.ndarray:
    out = np.empty(z11.shape + (2, 2), dtype=complex)
    out[..., 0, 0], out[..., 0, 1], out[..., 1, 0], out[..., 1, 1] = z11, z12, z12, z22
    return out


def siegel_coeff_table(s: HalfIntegralForm, t_list, weights, y0: float, B: int, N: int,
                       workers: int = 1) -> np.ndarray:
    """Complex coefficients p_{s,k}(t), shape (len(weights), len(t_list))."""
    z11, z12, z22 = cube_points(y0, N)
    vals = series_values(_as_matrices(z11, z12, z22), s, weights, B, workers)
    out = np.empty((len(vals.weights), len(t_list)), dtype=complex)
    for j, t in enumerate(t_list):
        char = np.exp(-2j * np.pi * t.pairing(z11, z12, z22))
        for i in range(len(vals.weights)):
            out[i, j] = tree_sum(vals.series[i] * char) / N**3
    return out


def _checked_real(values: np.ndarray, imag_tol: float) -> np.ndarray:
    bad = np.abs(values.imag) >= imag_tol
    if np.any(bad):
        raise QuadratureError(f"imaginary part {np.max(np.abs(values.imag)):.3g} exceeds {imag_tol}")
    return values.real


def siegel_coeff_estimates(s, t_list, weights, y0=DEFAULT_Y0, B=2, N=16, workers=1,
                           imag_tol=1e-6) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients at (B, N) with error estimates from the (B+1, N) and (B, 2N) reruns.

    The estimate is the sum of the two changes, so it bounds each of them.
    """
    base = siegel_coeff_table(s, t_list, weights, y0, B, N, workers)
    finer_b = siegel_coeff_table(s, t_list, weights, y0, min(B + 1, G2_MAX_HEIGHT), N, workers)
    finer_n = siegel_coeff_table(s, t_list, weights, y0, B, 2 * N, workers)
    value = _checked_real(base, imag_tol)
    err = np.abs(finer_b.real - value) + np.abs(finer_n.real - value)
    return value, err


def siegel_coeff(p: SiegelParams, workers: int = 1) -> tuple[float, float]:
    """p_{s,k}(t) over U_2(y0) with an error estimate."""
    value, err = siegel_coeff_estimates(p.s, [p.t], [p.k], p.y0, p.B, p.N, workers)
    return float(value[0, 0]), float(err[0, 0])


def gl2_mod_sign(B: int) -> list[tuple]:
    """GL(2,Z) elements with entries bounded by B, one from each {u, -u}."""
    out = []
    r = range(-B, B + 1)
    for p, q, rr, t in ((p, q, rr, t) for p in r for q in r for rr in r for t in r):
        if abs(p * t - q * rr) != 1:
            continue
        first = next(v for v in (p, q, rr, t) if v)
        if first > 0:
            out.append(((p, q), (rr, t)))
    return out


def limit_function_partial(z: SiegelPoint, s: HalfIntegralForm, B: int) -> complex:
    """sum over u in GL(2,Z)/+-1 with entries <= B of e(Tr((u.s) z))."""
    zz = z.z
    z12 = 0.5 * (zz[0, 1] + zz[1, 0])
    terms = [np.exp(2j * np.pi * act(u, s).pairing(zz[0, 0], z12, zz[1, 1])) for u in gl2_mod_sign(B)]
    return complex(tree_sum(np.array(terms)))


def siegel_weight_scan(s: HalfIntegralForm, t: HalfIntegralForm, k_list, y0=DEFAULT_Y0,
                       B: int = 2, N: int = 16, workers: int = 1) -> ScanReport:
    """One row per weight comparing p_{s,k}(t) with the orbit count of s onto t."""
    k_list = tuple(k_list)
    for k in k_list:
        check_weight(k)
        if k > MAX_WEIGHT:
            raise ValueError(f"weight {k} above the desk envelope {MAX_WEIGHT}")
    t0 = time.perf_counter()
    value, err = siegel_coeff_estimates(s, [t], k_list, y0, B, N, workers)
    per_row = (time.perf_counter() - t0) / max(1, len(k_list))
    target = orbit_count(s, t)
    report = ScanReport(("s", "t", "k", "y0", "B", "N"))
    for i, k in enumerate(k_list):
        report.add((str(s), str(t), k, y0, B, N), value[i, 0], target, err[i, 0], per_row)
    return report
