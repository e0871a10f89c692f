"""Genus-2 Poincare series: p_{s,k}(t) approaches the number of GL(2,Z)/+-1 maps s -> t.

A cheap configuration (coset height 1, 16 points per axis) already shows the
limits; the acceptance suite repeats this at height 2 with 16 points.
"""

from poincare.quadform import HalfIntegralForm, aut_group, orbit_count
from poincare.siegel import siegel_coeff_table

I = HalfIntegralForm(1, 0, 1)
HEX = HalfIntegralForm(1, 1, 1)
D12 = HalfIntegralForm.diag(1, 2)

for s in (I, HEX):
    print(f"s = ({s}):  |Aut(s)| = {len(aut_group(s))}")

weights = (12, 20, 28, 36, 44)
table = siegel_coeff_table(I, [I, D12, HEX], weights, 1.05, 1, 16)
print("\n  k   p(I,I)        p(I,diag(1,2))   p(I,hex)")
for k, row in zip(weights, table.real):
    print(f"{k:3d}  " + "  ".join(f"{v: .6f}" for v in row))
print("targets:", [orbit_count(I, t) for t in (I, D12, HEX)])
