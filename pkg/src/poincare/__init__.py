"""Fourier coefficients of classical and genus-2 Siegel Poincare series.

Modules:
    numerics     Kloosterman sums, Bessel J, 2x2 complex algebra, midpoint quadrature
    modgroup     coset representatives for SL(2,Z) and Sp(4,Z)
    classical    genus-1 series, coefficients by quadrature and by Kloosterman sums
    quadform     binary half-integral forms: reduction, automorphisms, orbit counts
    siegel       genus-2 series, majorant and coefficients by 3-D quadrature
    fund_domain  Gottschling pairs, Minkowski reduction, y0 certificates
    hecke        level-1 eigenforms, Petersson weights, Weyl sums
    cli          the ``poincare`` command
"""

from .classical import ClassicalParams, coeff_kloosterman, coeff_quadrature_g1, petersson_delta
from .quadform import HalfIntegralForm
from .modgroup import SiegelPoint
from .siegel import SiegelParams, siegel_coeff

__all__ = [
    "ClassicalParams", "coeff_kloosterman", "coeff_quadrature_g1", "petersson_delta",
    "HalfIntegralForm", "SiegelPoint", "SiegelParams", "siegel_coeff",
]
__version__ = "0.1.0"
