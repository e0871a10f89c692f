import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from poincare.quadform import (IDENTITY, HalfIntegralForm, act, aut_group, generators,
                               is_equivalent, is_group, is_reduced, is_unimodular, orbit_count,
                               reduce, representations)

I = HalfIntegralForm(1, 0, 1)
HEX = HalfIntegralForm(1, 1, 1)
D12 = HalfIntegralForm.diag(1, 2)
SWAP = ((0, 1), (1, 0))


def brute_aut(s, bound=2):
    r = range(-bound, bound + 1)
    out = []
    for p, q, u, v in itertools.product(r, repeat=4):
        m = np.array([[p, q], [u, v]])
        if abs(p * v - q * u) == 1 and np.allclose(m.T @ s.matrix @ m, s.matrix):
            out.append(((p, q), (u, v)))
    return sorted(out)


unimodular = st.lists(st.sampled_from([((1, 1), (0, 1)), ((1, -1), (0, 1)), SWAP, ((1, 0), (0, -1)),
                                       ((1, 0), (2, 1))]), min_size=0, max_size=6)


def word(steps):
    u = IDENTITY
    for m in steps:
        u = tuple(tuple(sum(u[i][k] * m[k][j] for k in range(2)) for j in range(2)) for i in range(2))
    return u


forms = st.builds(lambda a, c, b: (a, b, c), st.integers(1, 8), st.integers(1, 8),
                  st.integers(-10, 10)).filter(lambda t: 4 * t[0] * t[2] - t[1] ** 2 > 0).map(
    lambda t: HalfIntegralForm(*t))


def test_parse_and_print():
    s = HalfIntegralForm.parse("5, 4,1")
    assert s == HalfIntegralForm(5, 4, 1) and str(s) == "5,4,1"
    with pytest.raises(ValueError):
        HalfIntegralForm.parse("1,2")
    with pytest.raises(ValueError):
        HalfIntegralForm(1, 2, 1)  # degenerate
    with pytest.raises(ValueError):
        HalfIntegralForm(-1, 0, -1)


def test_act_examples():
    assert act(IDENTITY, HEX) == HEX
    assert act(SWAP, D12) == HalfIntegralForm.diag(2, 1)


@settings(max_examples=100, deadline=None)
@given(unimodular, forms)
def test_act_preserves_det(steps, s):
    u = word(steps)
    assert is_unimodular(u)
    t = act(u, s)
    assert t.det == s.det
    np.testing.assert_allclose(np.array(u).T @ s.matrix @ np.array(u), t.matrix)


def test_reduce_examples():
    assert reduce(I) == (I, IDENTITY)
    shear = ((1, 2), (0, 1))
    s = act(shear, I)
    assert (s.a, s.b, s.c) == (1, 4, 5)
    assert reduce(s)[0] == I
    red, u = reduce(HalfIntegralForm(5, 4, 1))
    assert red == I and act(u, HalfIntegralForm(5, 4, 1)) == I


@settings(max_examples=200, deadline=None)
@given(forms)
def test_reduce_properties(s):
    red, u = reduce(s)
    assert is_reduced(red) and is_unimodular(u) and act(u, s) == red
    assert reduce(red)[0] == red


@settings(max_examples=100, deadline=None)
@given(unimodular, forms)
def test_reduced_form_is_class_invariant(steps, s):
    assert reduce(act(word(steps), s))[0] == reduce(s)[0]


def test_equivalence():
    assert is_equivalent(HEX, HEX)
    assert not is_equivalent(I, HEX)
    assert is_equivalent(HalfIntegralForm(5, 4, 1), I)


@pytest.mark.parametrize("s,order", [(D12, 4), (I, 8), (HEX, 12)])
def test_aut_orders(s, order):
    group = aut_group(s)
    assert len(group) == order
    assert sorted(group) == brute_aut(s)
    assert is_group(group)
    assert IDENTITY in group and ((-1, 0), (0, -1)) in group


def test_aut_conjugation_invariant():
    rng = np.random.default_rng(3)
    gens = [((1, 1), (0, 1)), SWAP, ((1, 0), (0, -1))]
    for s in (D12, I, HEX, HalfIntegralForm(2, 1, 3)):
        u = word([gens[i] for i in rng.integers(3, size=5)])
        assert len(aut_group(act(u, s))) == len(aut_group(s))


def test_torsor():
    s = HEX
    t = act(((2, 1), (1, 1)), s)
    assert len(representations(s, t)) == len(aut_group(s))


def test_orbit_counts():
    assert orbit_count(I, I) == 4
    assert orbit_count(I, D12) == 0
    assert orbit_count(HEX, HEX) == 6
    assert orbit_count(D12, D12) == 2


def test_generators_span():
    for s in (D12, I, HEX):
        group = aut_group(s)
        gens = generators(group)
        span = {IDENTITY}
        frontier = [IDENTITY]
        while frontier:
            new = []
            for h in frontier:
                for g in gens:
                    x = tuple(tuple(sum(h[i][k] * g[k][j] for k in range(2)) for j in range(2))
                              for i in range(2))
                    if x not in span:
                        span.add(x)
                        new.append(x)
            frontier = new
        assert span == set(group)


def test_pairing_is_trace():
    s = HalfIntegralForm(2, 3, 5)
    x = np.array([[0.3, -0.2], [-0.2, 0.7]])
    assert s.pairing(0.3, -0.2, 0.7) == pytest.approx(np.trace(s.matrix @ x))
