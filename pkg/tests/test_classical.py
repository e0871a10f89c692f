import numpy as np
import pytest

from poincare.classical import (ClassicalParams, QuadratureError, coeff_kloosterman,
                                coeff_kloosterman_auto, coeff_quadrature_adaptive,
                                coeff_quadrature_g1, delta, eval_poincare_g1, level_limit_scan,
                                majorant_g1, petersson_delta, weight_limit_scan)
from poincare.hecke import delta_series
from poincare.modgroup import g1_coset_arrays
from poincare.numerics import e

Z = 0.3 + 1.1j

# p_{1,12}(1) from the Kloosterman expansion; quadrature agrees to 1e-15
P_1_12_1 = 2.8402873751675


def test_params_validation():
    with pytest.raises(ValueError):
        ClassicalParams(k=11, m=1)
    with pytest.raises(ValueError):
        ClassicalParams(k=2, m=1)
    with pytest.raises(ValueError):
        ClassicalParams(k=12, m=1, y0=1.0)
    with pytest.raises(ValueError):
        ClassicalParams(k=12, m=1, N=48)


def test_series_tends_to_exponential():
    # the gap is led by the coset (c, d) = (1, 0): z^{-k} e(-1/z)
    gaps = []
    for k in (40, 60, 80):
        gap = abs(eval_poincare_g1(Z, ClassicalParams(k=k, m=1, B=30)) - e(Z))
        lead = abs(Z ** -k * e(-1 / Z))
        assert gap == pytest.approx(lead, rel=0.05)
        gaps.append(gap)
    assert gaps[0] == pytest.approx(2.5611e-5, rel=1e-4)
    assert gaps[0] > gaps[1] > gaps[2] and gaps[2] < 1e-6


def test_large_level_keeps_only_identity():
    p = ClassicalParams(k=12, m=1, q=10**6, B=30)
    assert eval_poincare_g1(Z, p) == e(Z)


def test_series_below_majorant():
    for k in (4, 12, 24):
        p = ClassicalParams(k=k, m=2, B=20)
        assert abs(eval_poincare_g1(Z, p)) <= majorant_g1(Z, p)


def test_rejects_lower_half_plane():
    with pytest.raises(ValueError):
        eval_poincare_g1(0.1 - 1j, ClassicalParams(k=12, m=1))


def test_quadrature_matches_kloosterman_k12():
    p = ClassicalParams(k=12, m=1, n=1)
    assert coeff_quadrature_g1(p) == pytest.approx(coeff_kloosterman(p)[0], abs=1e-6)


def test_frozen_value_k12():
    val, tail = coeff_kloosterman(ClassicalParams(k=12, m=1, n=1), c_max=50)
    assert val == pytest.approx(P_1_12_1, abs=1e-12)
    assert tail < 1e-10
    assert coeff_quadrature_adaptive(ClassicalParams(k=12, m=1, n=1))[0] == pytest.approx(P_1_12_1, abs=1e-9)


def test_off_diagonal_k12_and_tail():
    val, tail = coeff_kloosterman(ClassicalParams(k=12, m=1, n=2), c_max=100)
    # p_{1,12}(2) = 2^{11/2} times the symmetric form
    sym, _ = petersson_delta(1, 2, 12)
    assert val == pytest.approx(2**5.5 * sym, rel=1e-13)
    assert val == pytest.approx(-68.16689700402, abs=1e-9)
    assert tail < 1e-8


def test_symmetric_form_ratio_is_tau():
    # one cusp form in weight 12: Delta(2,1)/Delta(1,1) = tau(2)/2^{11/2}
    tau2 = float(delta_series(3)[2])
    ratio = petersson_delta(2, 1, 12)[0] / petersson_delta(1, 1, 12)[0]
    assert ratio == pytest.approx(tau2 / 2**5.5, rel=1e-12)


def test_symmetric_form_is_symmetric():
    for k in (12, 20):
        assert petersson_delta(2, 3, k)[0] == pytest.approx(petersson_delta(3, 2, k)[0], rel=1e-12)


def test_level_25_only_multiples():
    val, _ = coeff_kloosterman(ClassicalParams(k=12, m=1, n=1, q=25), c_max=100)
    assert abs(val - 1) < 0.01


def test_weight_60_limits():
    assert abs(coeff_quadrature_g1(ClassicalParams(k=60, m=1, n=2))) < 0.02
    assert abs(coeff_quadrature_g1(ClassicalParams(k=60, m=1, n=1)) - 1) < 0.02


@pytest.mark.parametrize("m,n", [(1, 1), (2, 3), (3, 1)])
@pytest.mark.parametrize("k", [12, 16, 20])
def test_two_routes_agree(m, n, k):
    p = ClassicalParams(k=k, m=m, n=n)
    quad, est = coeff_quadrature_adaptive(p)
    kl, tail = coeff_kloosterman_auto(p)
    assert abs(quad - kl) < 1e-6 + tail + est


def test_error_estimate_covers_refinement():
    p = ClassicalParams(k=16, m=2, n=1, B=15, N=32)
    val, est = coeff_quadrature_adaptive(p, tol=1e-6)
    kl, tail = coeff_kloosterman_auto(p)
    assert abs(val - kl) <= max(est, 1e-12) * 10 + tail


def test_imaginary_part_vanishes_by_symmetry():
    # cosets and nodes are both symmetric under x -> -x, even when badly truncated
    for B, N in ((1, 1), (1, 2), (2, 4)):
        p = ClassicalParams(k=4, m=3, n=1, y0=1.01, B=B, N=N)
        coeff_quadrature_g1(p, imag_tol=1e-12)


def test_imaginary_check_fires(monkeypatch):
    import poincare.classical as cl
    real_terms = cl._terms
    monkeypatch.setattr(cl, "_terms", lambda z, p: real_terms(z, p) + 1e-3j * e(p.n * z))
    with pytest.raises(QuadratureError):
        coeff_quadrature_g1(ClassicalParams(k=12, m=1, n=1, N=4))


def test_weight_scan_converges():
    rep = weight_limit_scan(1, 1, range(12, 61, 4))
    vals = [r.value for r in rep.rows]
    assert all(r.target == 1 for r in rep.rows)
    assert abs(vals[-1] - 1) < 1e-6 and abs(vals[-1] - 1) < abs(vals[0] - 1)
    rep = weight_limit_scan(2, 3, range(12, 61, 4))
    assert abs(rep.rows[-1].value) < 0.02 and all(r.target == 0 for r in rep.rows)


def test_level_scan():
    rep = level_limit_scan(1, 1, 12, range(1, 51))
    assert max(abs(r.value - 1) for r in rep.rows if r.params[3] >= 20) < 0.01
    q1 = weight_limit_scan(1, 1, [12]).rows[0].value
    assert rep.rows[0].value == q1
    rep = level_limit_scan(1, 2, 12, [40, 80])
    assert max(abs(r.value) for r in rep.rows) < 0.01


def test_level_scan_by_quadrature():
    rep = level_limit_scan(1, 1, 12, [1, 3], method="quadrature")
    for row in rep.rows:
        kl = coeff_kloosterman_auto(ClassicalParams(k=12, m=1, n=1, q=row.params[3]))[0]
        assert row.value == pytest.approx(kl, abs=1e-6)


def test_unknown_method():
    with pytest.raises(ValueError):
        weight_limit_scan(1, 1, [12], method="magic")


def test_cusp_height_bound():
    a, b, c, d = g1_coset_arrays(30)
    y0 = 1.1
    x = np.linspace(-0.5, 0.5, 41)[:, None]
    j2 = np.abs(c * (x + 1j * y0) + d) ** 2
    assert np.all(j2 >= (c * y0) ** 2 * (1 - 1e-15))
    nonid = (c != 0)
    assert np.all(j2[:, nonid] > 1)


def test_terms_decrease_with_weight():
    a, b, c, d = g1_coset_arrays(20)
    z = np.linspace(-0.5, 0.5, 11) + 1.1j
    mag = np.abs(c[:, None] * z + d[:, None])
    for k in range(4, 40, 2):
        assert np.all(mag[c != 0] ** -(k + 2) <= mag[c != 0] ** -k)


def test_completion_change_invariance():
    a, b, c, d = (v.astype(float) for v in g1_coset_arrays(10))
    for s in (1, -2, 5):
        for k in (12, 20):
            t1 = (c * Z + d) ** -k * e((a * Z + b) / (c * Z + d))
            a2, b2 = a + s * c, b + s * d
            t2 = (c * Z + d) ** -k * e((a2 * Z + b2) / (c * Z + d))
            np.testing.assert_allclose(t1, t2, rtol=1e-12, atol=1e-15)


def test_delta():
    assert delta(3, 3) == 1 and delta(2, 3) == 0
