import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import jv

from poincare.numerics import (QuadratureGrid, bessel_bound, bessel_j, cube_quadrature, e,
                               euler_phi, kloosterman, mod_inverse, tree_sum)


def kloosterman_complex(m, n, c):
    # independent route: complex exponentials, inverse by search
    total = 0j
    for x in range(c):
        if math.gcd(x, c) != 1:
            continue
        xbar = next(y for y in range(c) if (x * y) % c == 1 % c)
        total += cmath.exp(2j * math.pi * (m * x + n * xbar) / c)
    return total


@pytest.mark.parametrize("m,n,c,want", [(1, 1, 1, 1), (1, 1, 2, 1), (1, 1, 3, -1)])
def test_kloosterman_examples(m, n, c, want):
    assert kloosterman(m, n, c) == pytest.approx(want, abs=1e-14)


def test_kloosterman_against_complex_sum():
    for m, n, c in [(1, 2, 7), (3, 5, 12), (2, 2, 30), (4, 9, 49)]:
        z = kloosterman_complex(m, n, c)
        assert abs(z.imag) < 1e-10
        assert kloosterman(m, n, c) == pytest.approx(z.real, abs=1e-10)


def test_kloosterman_phi_bound():
    for c in range(1, 101):
        for m, n in [(1, 1), (2, 3), (5, 7)]:
            assert abs(kloosterman(m, n, c)) <= euler_phi(c) + 1e-9


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 50), st.integers(1, 50), st.integers(1, 60))
def test_kloosterman_symmetric(m, n, c):
    assert kloosterman(m, n, c) == pytest.approx(kloosterman(n, m, c), abs=1e-9)


def test_kloosterman_rejects_bad_modulus():
    with pytest.raises(ValueError):
        kloosterman(1, 1, 0)


def test_mod_inverse():
    assert (mod_inverse(3, 7) * 3) % 7 == 1
    with pytest.raises(ValueError):
        mod_inverse(2, 4)


def test_euler_phi():
    assert [euler_phi(n) for n in range(1, 11)] == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4]


def test_bessel_zero():
    assert bessel_j(1, 0.0) == 0.0


def test_bessel_order_11_at_one():
    # 50-term series in plain floats; no cancellation at x = 1
    ref = sum((-1) ** j * 0.5 ** (11 + 2 * j) / (math.factorial(j) * math.factorial(11 + j))
              for j in range(50))
    assert bessel_j(11, 1.0) == pytest.approx(ref, rel=1e-15)


def test_bessel_bound_at_4pi():
    x = 4 * math.pi
    bound = (x / 2) ** 11 / math.factorial(11)
    assert bessel_bound(11, x) == pytest.approx(bound)
    assert abs(bessel_j(11, x)) <= bound


@pytest.mark.parametrize("order", [1, 11, 23, 59, 119, 200])
@pytest.mark.parametrize("x", [0.3, 4.0, 12.566370614359172, 35.5, 80.0, 100.0])
def test_bessel_matches_scipy(order, x):
    ref = jv(order, x)
    assert bessel_j(order, x) == pytest.approx(ref, rel=1e-12, abs=1e-15)


def test_bessel_envelope():
    with pytest.raises(ValueError):
        bessel_j(201, 1.0)
    with pytest.raises(ValueError):
        bessel_j(3, 100.5)
    with pytest.raises(ValueError):
        bessel_j(0, 1.0)


def test_grid_nodes_inside():
    for dim in (1, 3):
        g = QuadratureGrid(dim, 8)
        pts = g.points()
        assert pts.shape == (8**dim, dim)
        assert np.all(np.abs(pts) < 0.5)
        assert g.weight * len(pts) == pytest.approx(1.0, abs=1e-15)


def test_grid_validation():
    with pytest.raises(ValueError):
        QuadratureGrid(2, 8)
    with pytest.raises(ValueError):
        QuadratureGrid(1, 12)


def test_quadrature_constant():
    assert cube_quadrature(lambda x: e(0 * x), QuadratureGrid(1, 8)) == pytest.approx(1)


def test_quadrature_character_1d():
    val = cube_quadrature(lambda x: e((1 - 2) * x), QuadratureGrid(1, 8))
    assert abs(val) < 1e-15


def test_quadrature_character_3d():
    val = cube_quadrature(lambda a, b, c: e(a + 2 * b + 3 * c), QuadratureGrid(3, 8))
    assert abs(val) < 1e-14


def test_quadrature_exact_below_nyquist():
    # a character of frequency 3 integrates to zero once N exceeds 6
    for n in (8, 16, 32):
        assert abs(cube_quadrature(lambda x: e(3 * x), QuadratureGrid(1, n))) < 1e-14


def test_tree_sum_matches_fsum():
    rng = np.random.default_rng(0)
    v = rng.normal(size=1001)
    assert tree_sum(v) == pytest.approx(math.fsum(v), abs=1e-12)
    m = rng.normal(size=(7, 5))
    np.testing.assert_allclose(tree_sum(m, axis=0), m.sum(axis=0), atol=1e-14)
    assert tree_sum(np.zeros(0)) == 0
