"""Fourier coefficients of classical Poincare series as the weight grows.

p_{m,k}(n) is computed two ways, by summing the series on a horizontal
segment and by the Kloosterman/Bessel expansion, and both drift to the
Kronecker delta as k increases.
"""

from poincare.classical import ClassicalParams, coeff_kloosterman_auto, coeff_quadrature_adaptive

# First the two routes side by side at a modest weight.
for m, n in [(1, 1), (1, 2), (2, 3)]:
    p = ClassicalParams(k=12, m=m, n=n)
    quad, est = coeff_quadrature_adaptive(p)
    kl, tail = coeff_kloosterman_auto(p)
    print(f"k=12 (m,n)=({m},{n})  quadrature {quad: .10f}  Kloosterman {kl: .10f}  gap {abs(quad - kl):.1e}")

# Off-diagonal coefficients start large (they carry a factor (n/m)^{(k-1)/2})
# but the Bessel factor J_{k-1}(4 pi sqrt(mn)/c) eventually wins.
print("\n   k    p_{1,k}(1)        p_{1,k}(2)        p_{2,k}(3)")
for k in range(12, 61, 8):
    row = [coeff_kloosterman_auto(ClassicalParams(k=k, m=m, n=n))[0] for m, n in [(1, 1), (1, 2), (2, 3)]]
    print(f"{k:4d}  " + "  ".join(f"{v: .6e}" for v in row))
