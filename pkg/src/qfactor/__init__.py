"""Exact verification of the factorized q-difference equation for Rogers polynomials.

The exact layer works with Laurent polynomials in z = e^{i theta} over the
rationals; numerics are confined to :mod:`qfactor.numerics`.
"""

from .exact import LaurentPoly, NonZeroRemainder, RationalExpr, TruncatedSeries, exact_divide
from .families import chebyshev, gegenbauer, gf_series, q_hermite, to_x_basis, ultraspherical
from .qkernel import QContext, lambda_n, mu_n, q_binomial, q_pochhammer
from .verify import VerificationReport, run_suite

__all__ = [
    "LaurentPoly",
    "NonZeroRemainder",
    "RationalExpr",
    "TruncatedSeries",
    "exact_divide",
    "chebyshev",
    "gegenbauer",
    "gf_series",
    "q_hermite",
    "to_x_basis",
    "ultraspherical",
    "QContext",
    "lambda_n",
    "mu_n",
    "q_binomial",
    "q_pochhammer",
    "VerificationReport",
    "run_suite",
]
__version__ = "0.1.0"
