"""Hecke eigenvalues, Petersson weights and Weyl sums in level 1.

sum_f omega_f prod_p U_{n(p)}(lambda_f(p)) equals the (normalized) Poincare
coefficient at m = prod p^{n(p)}, and tends to delta(m, 1) as k grows:
the eigenvalues equidistribute with respect to the Sato-Tate-like measure.
The decay in k only sets in once k - 1 passes 4 pi sqrt(m), the turning
point of J_{k-1}(4 pi sqrt(m)); for m = 12 that is k of about 45.
"""

from poincare.classical import petersson_delta
from poincare.hecke import estimate_weights, miller_basis, weyl_sum

delta = miller_basis(12, 6)[0]
print("Delta =", " + ".join(f"({c})q^{i}" for i, c in enumerate(delta.coeffs) if c))

print("\n  k  dim  sum omega    W(2)         Kloosterman(2)  W(2^2 3)     Kloosterman(12)")
for k in (12, 16, 20, 24, 32, 40, 48, 60):
    fit = estimate_weights(k)
    w2 = weyl_sum(k, {2: 1}, fit)
    w12 = weyl_sum(k, {2: 2, 3: 1}, fit)
    print(f"{k:3d} {len(fit.forms):4d}  {weyl_sum(k, {}, fit):.8f}  {w2: .4e}  "
          f"{petersson_delta(2, 1, k, 1, 200)[0]: .4e}    {w12: .4e}  {petersson_delta(12, 1, k, 1, 200)[0]: .4e}")

fit = estimate_weights(36)
print("\nk=36 eigenvalues lambda(2):", [round(f.lam(2), 6) for f in fit.forms])
print("k=36 weights omega:", [round(w.omega, 6) for w in fit.weights])
