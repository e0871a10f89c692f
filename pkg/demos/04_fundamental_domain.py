"""The genus-2 fundamental domain and the choice of y0.

For every Gottschling pair with c != 0 we need |det(c z + d)| > 1 on the box
x in [-1/2, 1/2]^3, y = y0 I.  Grid minimization says how small y0 can go.
"""

import numpy as np

from poincare.fund_domain import certify_y0, det_alpha_polynomial, gottschling_set, search_y0
from poincare.numerics import QuadratureGrid

pairs = gottschling_set()
print(f"{len(pairs)} pairs, ranks of c: {[p.rank_c for p in pairs]}")

grid = QuadratureGrid(3, 32)
for y0 in (1.0, 1.001, 1.01, 1.05, 1.3):
    cert = certify_y0(y0, grid)
    worst = int(np.argmin(cert.minima))
    print(f"y0={y0:<6} margin {cert.margin: .5f}  passed={cert.passed}  tightest pair #{worst}")

print("\nsmallest certified y0 (bisection, tol 1e-3):", round(search_y0(1e-3, grid), 5))

# |det(c(x + i a) + d)|^2 is a polynomial in a^2 of degree rank(c)
x = np.array([[0.1, -0.3], [-0.3, 0.2]])
for p in pairs[:3] + pairs[4:6]:
    print(p.rank_c, np.round(det_alpha_polynomial(p.c, p.d, x), 6))
