"""Level-1 Hecke eigenforms from exact q-expansions, Petersson weights, and Weyl sums.

Eigenvalues are normalized as lambda_f(n) = a_f(n) / n^((k-1)/2) with a_f(1) = 1.
The weights omega_f are fitted so that sum_f omega_f lambda_f(m) reproduces the
Kloosterman expansion of the normalized Poincare coefficients.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .classical import petersson_delta

MAX_WEIGHT = 60
MAX_PRIME = 50
MAX_PRECISION = 400


def primes_up_to(n: int) -> list[int]:
    sieve = bytearray([1]) * (n + 1)
    sieve[:2] = b"\x00\x00"
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p::p] = bytearray(len(sieve[p * p::p]))
    return [i for i, v in enumerate(sieve) if v]


def sigma(n: int, power: int) -> int:
    return sum(d**power for d in range(1, n + 1) if n % d == 0)


class QExpansion:
    """Power series a(0) + a(1) q + ... + a(N) q^N with exact rational coefficients."""

    def __init__(self, coeffs, weight: int = 0):
        self.coeffs = [Fraction(c) for c in coeffs]
        self.weight = weight

    @property
    def prec(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n]

    def __repr__(self) -> str:
        head = " + ".join(f"{c}q^{i}" for i, c in enumerate(self.coeffs[:4]) if c)
        return f"QExpansion(weight={self.weight}, {head} + O(q^{self.prec + 1}))"

    def __eq__(self, other) -> bool:
        return isinstance(other, QExpansion) and self.coeffs == other.coeffs

    def __add__(self, other: "QExpansion") -> "QExpansion":
        n = min(self.prec, other.prec) + 1
        return QExpansion([a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n])], self.weight)

    def __sub__(self, other: "QExpansion") -> "QExpansion":
        return self + other.scale(-1)

    def scale(self, c) -> "QExpansion":
        c = Fraction(c)
        return QExpansion([c * a for a in self.coeffs], self.weight)

    def __mul__(self, other: "QExpansion") -> "QExpansion":
        n = min(self.prec, other.prec)
        a, b = self.coeffs, other.coeffs
        out = [sum(a[i] * b[j - i] for i in range(j + 1)) for j in range(n + 1)]
        return QExpansion(out, self.weight + other.weight)

    def __pow__(self, e: int) -> "QExpansion":
        result = QExpansion([1] + [0] * self.prec, 0)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result


def eisenstein(weight: int, N: int) -> QExpansion:
    """E4 = 1 + 240 sum sigma_3(n) q^n or E6 = 1 - 504 sum sigma_5(n) q^n."""
    if N > MAX_PRECISION:
        raise ValueError(f"precision above {MAX_PRECISION}")
    if weight == 4:
        return QExpansion([1] + [240 * sigma(n, 3) for n in range(1, N + 1)], 4)
    if weight == 6:
        return QExpansion([1] + [-504 * sigma(n, 5) for n in range(1, N + 1)], 6)
    raise ValueError("only weights 4 and 6 are provided")


def delta_series(N: int) -> QExpansion:
    """Delta = (E4^3 - E6^2) / 1728."""
    e4, e6 = eisenstein(4, N), eisenstein(6, N)
    d = (e4**3 - e6**2).scale(Fraction(1, 1728))
    d.weight = 12
    return d


def cusp_dimension(k: int) -> int:
    if k < 12 or k % 2:
        return 0
    return k // 12 - 1 if k % 12 == 2 else k // 12


def miller_basis(k: int, N: int) -> list[QExpansion]:
    """Echelon basis f_i = q^i + O(q^(d+1)), i = 1..d, of level-1 weight-k cusp forms."""
    if k > MAX_WEIGHT:
        raise ValueError(f"weight above {MAX_WEIGHT}")
    d = cusp_dimension(k)
    if d == 0:
        return []
    if N < d:
        raise ValueError("precision below the dimension")
    e4, e6, delta = eisenstein(4, N), eisenstein(6, N), delta_series(N)
    rows = []
    for j in range(1, d + 1):
        rest = k - 12 * j
        b = 1 if rest % 4 else 0
        a = (rest - 6 * b) // 4
        rows.append(delta**j * e4**a * e6**b)
    # Delta^j starts at q^j, so the rows are already triangular; clear above the diagonal
    for i in range(d - 1, -1, -1):
        piv = rows[i][i + 1]
        rows[i] = rows[i].scale(1 / piv)
        for r in range(i):
            rows[r] = rows[r] - rows[i].scale(rows[r][i + 1])
    for f in rows:
        f.weight = k
    return rows


def hecke_matrix(basis: list[QExpansion], p: int, k: int) -> list[list[Fraction]]:
    """Matrix M with T_p f_i = sum_j M[i][j] f_j, exact."""
    d = len(basis)
    if basis and basis[0].prec < p * d:
        raise ValueError(f"need precision >= {p * d} for T_{p}")
    pk = p ** (k - 1)
    rows = []
    for f in basis:
        rows.append([f[p * n] + (pk * f[n // p] if n % p == 0 else 0) for n in range(1, d + 1)])
    return rows


def matmul(a, b):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def charpoly(m: list[list[Fraction]]) -> list[Fraction]:
    """Monic characteristic polynomial, highest degree first (Faddeev-LeVerrier)."""
    n = len(m)
    coeffs = [Fraction(1)]
    ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    acc = [row[:] for row in ident]
    for i in range(1, n + 1):
        am = matmul(m, acc)
        c = -sum(am[j][j] for j in range(n)) / i
        coeffs.append(c)
        acc = [[am[r][s] + (c if r == s else 0) for s in range(n)] for r in range(n)]
    return coeffs


def _polyval(coeffs, x):
    v = 0
    for c in coeffs:
        v = v * x + c
    return v


def real_roots(coeffs: list[Fraction], newton_steps: int = 6) -> list[Fraction]:
    """Roots of a polynomial with only real, simple roots, refined by exact Newton steps."""
    approx = np.roots([float(c) for c in coeffs])
    deriv = [c * (len(coeffs) - 1 - i) for i, c in enumerate(coeffs[:-1])]
    out = []
    for r in sorted(approx.real):
        x = Fraction(r)
        for _ in range(newton_steps):
            dv = _polyval(deriv, x)
            if dv == 0:
                break
            x = x - _polyval(coeffs, x) / dv
            # keep the rationals small; 200 bits is far past double precision
            x = Fraction(round(x * 2**200), 2**200)
        out.append(x)
    return out


def _left_eigenvector(m, lam: Fraction) -> list[Fraction]:
    """v with v M = lam v and v[0] = 1, dropping one equation."""
    d = len(m)
    if d == 1:
        return [Fraction(1)]
    # (M^T - lam I) v = 0; unknowns v[1:], equations 1..d-1
    a = [[m[j][i] - (lam if i == j else 0) for j in range(1, d)] for i in range(1, d)]
    rhs = [-(m[0][i]) for i in range(1, d)]
    sol = _solve(a, rhs)
    return [Fraction(1)] + sol


def _solve(a, b):
    n = len(a)
    aug = [row[:] + [b[i]] for i, row in enumerate(a)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(aug[r][col]))
        aug[col], aug[piv] = aug[piv], aug[col]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col] / aug[col][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [aug[i][n] / aug[i][i] for i in range(n)]


@dataclass
class HeckeEigenform:
    weight: int
    index: int
    coeffs: np.ndarray  # normalized lambda(n) for n = 0..N, lambda(0) unused

    def lam(self, n: int) -> float:
        if not 1 <= n <= self.prec:
            raise ValueError(f"lambda({n}) is beyond the computed precision {self.prec}")
        return float(self.coeffs[n])

    @property
    def prec(self) -> int:
        return len(self.coeffs) - 1

    def eigenvalues(self, P: int) -> dict[int, float]:
        return {p: self.lam(p) for p in primes_up_to(P)}


class HeckeError(ArithmeticError):
    pass


def hecke_eigensystem(k: int, P: int = MAX_PRIME, N: int | None = None) -> list[HeckeEigenform]:
    """Normalized Hecke eigenforms of level 1 and weight k, via T_2 and checked on T_3."""
    if k > MAX_WEIGHT or P > MAX_PRIME:
        raise ValueError("outside the (k <= 60, P <= 50) envelope")
    d = cusp_dimension(k)
    if d == 0:
        return []
    N = N or max(2 * P, 3 * d, 64)
    basis = miller_basis(k, N)
    t2 = hecke_matrix(basis, 2, k)
    t3 = hecke_matrix(basis, 3, k)
    roots = real_roots(charpoly(t2))
    scale = max(abs(float(r)) for r in roots)
    for r1, r2 in zip(roots, roots[1:]):
        if abs(float(r2 - r1)) < 1e-8 * scale:
            raise HeckeError(f"T_2 has a repeated eigenvalue in weight {k}")
    forms = []
    for idx, lam in enumerate(roots):
        v = _left_eigenvector(t2, lam)
        # the same vector must diagonalize T_3
        vt3 = [sum(v[i] * t3[i][j] for i in range(d)) for j in range(d)]
        mu = vt3[0]
        res = max(abs(float(vt3[j] - mu * v[j])) for j in range(d))
        if res > 1e-8 * max(1.0, abs(float(mu))):
            raise HeckeError("T_2 eigenvector is not a T_3 eigenvector")
        raw = [sum(v[i] * basis[i][n] for i in range(d)) for n in range(N + 1)]
        norm = np.array([0.0] + [float(raw[n]) / n ** ((k - 1) / 2) for n in range(1, N + 1)])
        forms.append(HeckeEigenform(k, idx, norm))
    return forms


def chebyshev_u(n: int, x: float) -> float:
    """U_n with U_n(2 cos t) = sin((n+1)t) / sin t."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    prev, cur = 1.0, x
    if n == 0:
        return prev
    for _ in range(n - 1):
        prev, cur = cur, x * cur - prev
    return cur


@dataclass(frozen=True)
class SpectralWeight:
    form_index: int
    omega: float


@dataclass
class WeightFit:
    weight: int
    weights: list
    residual: float
    forms: list

    @property
    def omegas(self) -> np.ndarray:
        return np.array([w.omega for w in self.weights])


def estimate_weights(k: int, M: int | None = None, c_max: int = 200,
                     max_residual: float = 1e-5) -> WeightFit:
    """Least-squares omega_f from sum_f omega_f lambda_f(m) = Delta_k(m, 1), m = 1..M."""
    forms = hecke_eigensystem(k, P=MAX_PRIME)
    d = len(forms)
    if d == 0:
        return WeightFit(k, [], 0.0, [])
    M = M or d + 4
    if M < d:
        raise ValueError("need at least as many equations as forms")
    a = np.array([[f.lam(m) for f in forms] for m in range(1, M + 1)])
    b = np.array([petersson_delta(m, 1, k, 1, c_max)[0] for m in range(1, M + 1)])
    omega, *_ = np.linalg.lstsq(a, b, rcond=None)
    residual = float(np.linalg.norm(a @ omega - b))
    if residual > max_residual:
        raise HeckeError(f"weight fit residual {residual:.3g} above {max_residual}")
    return WeightFit(k, [SpectralWeight(i, float(w)) for i, w in enumerate(omega)], residual, forms)


def weyl_sum(k: int, exponents: dict[int, int], fit: WeightFit | None = None) -> float:
    """sum_f omega_f prod_p U_{n(p)}(lambda_f(p))."""
    fit = fit or estimate_weights(k)
    terms = []
    for w, f in zip(fit.weights, fit.forms):
        prod = 1.0
        for p, n in exponents.items():
            prod *= chebyshev_u(n, f.lam(p))
        terms.append(w.omega * prod)
    return math.fsum(terms)


def eigen_csv(fits: list[WeightFit], P: int = MAX_PRIME) -> str:
    """Rows (k, form, p, lambda(p), omega)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "form", "p", "lambda", "omega"])
    for fit in fits:
        for sw, f in zip(fit.weights, fit.forms):
            for p in primes_up_to(P):
                w.writerow([fit.weight, sw.form_index, p, f"{f.lam(p):.12g}", f"{sw.omega:.12g}"])
    return buf.getvalue()
