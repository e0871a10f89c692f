"""Half-integral positive binary forms: GL(2,Z) action, Gauss reduction, automorphisms.

A form s = (s11 s12; s12 s22) with integral diagonal and half-integral
off-diagonal is stored as the integer triple (a, b, c) = (s11, 2*s12, s22),
i.e. the binary quadratic form a x^2 + b x y + c y^2 = v^T s v.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

IDENTITY = ((1, 0), (0, 1))


@dataclass(frozen=True, order=True)
class HalfIntegralForm:
    a: int
    b: int
    c: int

    def __post_init__(self):
        for v in (self.a, self.b, self.c):
            if int(v) != v:
                raise ValueError("form entries must be integers (a, 2*s12, c)")
        if not (self.a > 0 and 4 * self.a * self.c - self.b * self.b > 0):
            raise ValueError(f"{self} is not positive definite")

    @classmethod
    def parse(cls, text: str) -> "HalfIntegralForm":
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise ValueError(f"expected 'a,b,c', got {text!r}")
        return cls(*(int(p) for p in parts))

    @classmethod
    def diag(cls, a: int, c: int) -> "HalfIntegralForm":
        return cls(a, 0, c)

    def __str__(self) -> str:
        return f"{self.a},{self.b},{self.c}"

    @property
    def det(self) -> Fraction:
        return Fraction(4 * self.a * self.c - self.b * self.b, 4)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b / 2], [self.b / 2, self.c]])

    def value(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def pairing(self, x11, x12, x22):
        """Tr(s x) for a symmetric x given by its three free coordinates."""
        return self.a * x11 + self.b * x12 + self.c * x22


def is_unimodular(u) -> bool:
    (p, q), (r, t) = u
    return abs(p * t - q * r) == 1


def matmul2(u, v) -> tuple:
    (p, q), (r, t) = u
    (p2, q2), (r2, t2) = v
    return ((p * p2 + q * r2, p * q2 + q * t2), (r * p2 + t * r2, r * q2 + t * t2))


def act(u, s: HalfIntegralForm) -> HalfIntegralForm:
    """u . s = u^T s u."""
    (p, q), (r, t) = u
    return HalfIntegralForm(
        s.value(p, r),
        2 * s.a * p * q + s.b * (p * t + q * r) + 2 * s.c * r * t,
        s.value(q, t),
    )


def is_reduced(s: HalfIntegralForm) -> bool:
    return 0 <= s.b <= s.a <= s.c


def reduce(s: HalfIntegralForm) -> tuple[HalfIntegralForm, tuple]:
    """Gauss-reduce s under GL(2,Z); returns (reduced, u) with act(u, s) == reduced.

    Reduced means 0 <= 2 s12 <= s11 <= s22, which singles out one form per class.
    """
    u = IDENTITY
    cur = s
    while True:
        # shear so that |b| <= a
        k = -((cur.b + cur.a) // (2 * cur.a))
        if k:
            m = ((1, k), (0, 1))
            u, cur = matmul2(u, m), act(m, cur)
        if cur.a > cur.c:
            m = ((0, 1), (1, 0))
            u, cur = matmul2(u, m), act(m, cur)
            continue
        break
    if cur.b < 0:
        m = ((1, 0), (0, -1))
        u, cur = matmul2(u, m), act(m, cur)
    return cur, u


def is_equivalent(s: HalfIntegralForm, t: HalfIntegralForm) -> bool:
    return reduce(s)[0] == reduce(t)[0]


def _vectors_up_to(s: HalfIntegralForm, bound: int) -> list[tuple[int, int]]:
    """All integer (x, y) with s.value(x, y) <= bound."""
    disc = 4 * s.a * s.c - s.b * s.b
    xmax = math.isqrt(4 * s.c * bound // disc)
    ymax = math.isqrt(4 * s.a * bound // disc)
    return [(x, y) for x in range(-xmax, xmax + 1) for y in range(-ymax, ymax + 1)
            if s.value(x, y) <= bound]


def representations(s: HalfIntegralForm, t: HalfIntegralForm) -> list[tuple]:
    """All u in GL(2,Z) with u . s == t."""
    vecs = _vectors_up_to(s, max(t.a, t.c))
    first = [v for v in vecs if s.value(*v) == t.a]
    second = [v for v in vecs if s.value(*v) == t.c]
    out = []
    for (p, r), (q, t2) in itertools.product(first, second):
        u = ((p, q), (r, t2))
        if is_unimodular(u) and act(u, s) == t:
            out.append(u)
    return out


def aut_group(s: HalfIntegralForm) -> list[tuple]:
    """The finite group O(s, Z) = {u : u^T s u = s}."""
    return representations(s, s)


def orbit_count(s: HalfIntegralForm, t: HalfIntegralForm) -> int:
    """Number of u in GL(2,Z)/{+-1} with u . s == t."""
    if not is_equivalent(s, t):
        return 0
    return len(aut_group(s)) // 2


def is_group(elements: list[tuple]) -> bool:
    """Closure under products and inverses, exactly."""
    found = set(elements)
    for u, v in itertools.product(elements, repeat=2):
        if matmul2(u, v) not in found:
            return False
    for (p, q), (r, t) in elements:
        det = p * t - q * r
        if ((t * det, -q * det), (-r * det, p * det)) not in found:
            return False
    return True


def generators(group: list[tuple]) -> list[tuple]:
    """A small generating set, chosen greedily in sorted order."""
    gens: list[tuple] = []
    span = {IDENTITY}
    for g in sorted(group):
        if g in span:
            continue
        gens.append(g)
        frontier = list(span)
        while frontier:
            nxt = []
            for h in frontier:
                for x in gens:
                    y = matmul2(h, x)
                    if y not in span:
                        span.add(y)
                        nxt.append(y)
            frontier = nxt
    return gens
