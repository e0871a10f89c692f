"""Random test objects: symplectic bottom rows, points of U_2, forms in A_2, positive matrices."""

from __future__ import annotations

import numpy as np

from .modgroup import J4, SymplecticMatrix
from .quadform import HalfIntegralForm

_UNIMODULAR = [np.array(u) for u in (((1, 1), (0, 1)), ((1, 0), (1, 1)), ((0, 1), (1, 0)),
                                      ((1, 0), (0, -1)), ((1, -1), (0, 1)))]


def _translation(rng) -> np.ndarray:
    s = rng.integers(-1, 2, size=(2, 2))
    s = np.triu(s) + np.triu(s, 1).T
    g = np.eye(4, dtype=np.int64)
    g[:2, 2:] = s
    return g


def _rotation(rng) -> np.ndarray:
    u = _UNIMODULAR[rng.integers(len(_UNIMODULAR))]
    g = np.zeros((4, 4), dtype=np.int64)
    g[:2, :2] = u
    g[2:, 2:] = np.round(np.linalg.inv(u).T).astype(np.int64)
    return g


# J acting on the first coordinate only; its c block has rank 1
J_PARTIAL = np.array([[0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1]])


def random_symplectic(rng, length: int = 6) -> SymplecticMatrix:
    """Random word in translations, J, partial J and GL(2,Z) blocks."""
    g = np.eye(4, dtype=np.int64)
    for _ in range(length):
        pick = rng.integers(4)
        if pick == 0:
            step = _translation(rng)
        elif pick == 1:
            step = _rotation(rng)
        else:
            step = J4 if pick == 2 else J_PARTIAL
        g = g @ step
    return SymplecticMatrix.from_matrix(g)


def random_bottom_rows(rng, count: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Bottom rows (c, d) cycling through target ranks 1, 2, 1, 2, 0 of c."""
    targets = (1, 2, 1, 2, 0)
    out = []
    while len(out) < count:
        g = random_symplectic(rng, int(rng.integers(1, 7)))
        c = np.array(g.c)
        if np.linalg.matrix_rank(c) == targets[len(out) % len(targets)]:
            out.append((c, np.array(g.d)))
    return out


def random_x(rng) -> np.ndarray:
    """Symmetric real x with entries in [-1/2, 1/2]."""
    x11, x12, x22 = rng.uniform(-0.5, 0.5, size=3)
    return np.array([[x11, x12], [x12, x22]])


def random_form(rng, bound: int = 6) -> HalfIntegralForm:
    while True:
        a, c = rng.integers(1, bound + 1, size=2)
        b = int(rng.integers(-2 * bound, 2 * bound + 1))
        if 4 * a * c - b * b > 0:
            return HalfIntegralForm(int(a), b, int(c))


def random_positive(rng, scale: float = 3.0) -> np.ndarray:
    m = rng.normal(size=(2, 2)) * scale
    return m @ m.T + 1e-6 * np.eye(2)
