"""Restricting the Poincare series to Gamma_0(q).

Only cosets with q | c survive, so once q is larger than the arguments at
which J_{k-1} is appreciable, p_{m,q}(n) is just delta(m, n).
"""

import numpy as np

from poincare.classical import ClassicalParams, coeff_kloosterman_auto, eval_poincare_g1
from poincare.numerics import e

qs = [1, 2, 3, 5, 10, 20, 50, 100]
for m, n in [(1, 1), (1, 2)]:
    vals = [coeff_kloosterman_auto(ClassicalParams(k=12, m=m, n=n, q=q))[0] for q in qs]
    print(f"(m,n)=({m},{n})")
    for q, v in zip(qs, vals):
        print(f"  q={q:4d}  p = {v: .3e}")

# For huge q the series itself collapses to its identity term.
z = 0.3 + 1.1j
p = ClassicalParams(k=12, m=1, q=10**6)
print("\nP(z) - e(z) at q = 10^6:", abs(eval_poincare_g1(z, p) - e(z)))
print("P(z) - e(z) at q = 1:", np.abs(eval_poincare_g1(z, ClassicalParams(k=12, m=1)) - e(z)))
