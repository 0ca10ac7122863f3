"""Polynomial families in the Laurent z-basis and the generating-function oracle."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Dict, List, Optional, Sequence

from .exact import LaurentPoly, Scalar, TruncatedSeries
from .qkernel import QContext, q_binomial, q_pochhammer

FAMILIES = ("q_hermite", "ultraspherical", "gegenbauer", "chebyshev_T", "chebyshev_U")


def _symmetric_sum(n: int, coeff: Callable[[int], Fraction]) -> LaurentPoly:
    # sum_{k=0}^n coeff(k) z^{n-2k}
    return LaurentPoly((n - 2 * k, coeff(k)) for k in range(n + 1))


def q_hermite(n: int, ctx: QContext) -> LaurentPoly:
    """Continuous q-Hermite H_n(x|q): coefficient of z^(n-2k) is [n k]_q."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _symmetric_sum(n, lambda k: q_binomial(n, k, ctx.q))


def ultraspherical(n: int, ctx: QContext) -> LaurentPoly:
    """Rogers polynomial C_n(x; beta|q) by direct summation."""
    if n < 0:
        raise ValueError("n must be non-negative")
    b, q = ctx.beta, ctx.q
    bp = [q_pochhammer(b, q, k) for k in range(n + 1)]
    qp = [q_pochhammer(q, q, k) for k in range(n + 1)]
    return _symmetric_sum(n, lambda k: bp[k] * bp[n - k] / (qp[k] * qp[n - k]))


def rising(a: Scalar, k: int) -> Fraction:
    """Pochhammer rising factorial (a)_k."""
    a = Fraction(a)
    out = Fraction(1)
    for j in range(k):
        out *= a + j
    return out


def gegenbauer(n: int, gamma: Scalar) -> LaurentPoly:
    """Gegenbauer C_n^(gamma)(x) in z-form."""
    if n < 0:
        raise ValueError("n must be non-negative")
    g = [rising(gamma, k) / factorial(k) for k in range(n + 1)]
    return _symmetric_sum(n, lambda k: g[k] * g[n - k])


def chebyshev(kind: str, n: int) -> LaurentPoly:
    """Chebyshev T_n = cos(n theta) or U_n = sin((n+1)theta)/sin(theta)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if kind == "T":
        if n == 0:
            return LaurentPoly.one()
        return LaurentPoly({n: Fraction(1, 2), -n: Fraction(1, 2)})
    if kind == "U":
        return _symmetric_sum(n, lambda k: Fraction(1))
    raise ValueError(f"unknown Chebyshev kind {kind!r}")


@dataclass(frozen=True)
class PolySpec:
    family: str
    n: int
    ctx: Optional[QContext] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.n < 0:
            raise ValueError("n must be non-negative")
        if self.family in ("q_hermite", "ultraspherical") and self.ctx is None:
            raise ValueError(f"{self.family} needs a QContext")
        if self.family == "gegenbauer" and (self.ctx is None or self.ctx.gamma is None):
            raise ValueError("gegenbauer needs a context with gamma set")

    def build(self) -> LaurentPoly:
        if self.family == "q_hermite":
            return q_hermite(self.n, self.ctx)
        if self.family == "ultraspherical":
            return ultraspherical(self.n, self.ctx)
        if self.family == "gegenbauer":
            return gegenbauer(self.n, self.ctx.gamma)
        return chebyshev(self.family[-1], self.n)


# generating function

def _euler_product_series(c: Fraction, e: int, q: Fraction, order: int) -> TruncatedSeries:
    """(c t z^e; q)_inf = sum_k (-1)^k q^{k(k-1)/2} (c z^e)^k t^k / (q;q)_k, truncated."""
    coeffs = []
    for k in range(order + 1):
        a = (-1) ** k * q ** (k * (k - 1) // 2) * c**k / q_pochhammer(q, q, k)
        coeffs.append(LaurentPoly.monomial(e * k, a))
    return TruncatedSeries(order, coeffs)


def gf_series(ctx: QContext, t_order: int) -> TruncatedSeries:
    """Expand (beta t z, beta t/z; q)_inf / (t z, t/z; q)_inf in powers of t.

    Each infinite product is expanded with Euler's identity; its t-series is
    exact once truncated at ``t_order``.  The denominators are inverted as
    series.
    """
    if t_order < 1:
        raise ValueError("t_order must be >= 1")
    if ctx.formal:
        raise ValueError("the product expansion needs 0 < q < 1")
    q, b = ctx.q, ctx.beta
    num = _euler_product_series(b, 1, q, t_order) * _euler_product_series(b, -1, q, t_order)
    den = _euler_product_series(Fraction(1), 1, q, t_order) * _euler_product_series(Fraction(1), -1, q, t_order)
    return num * den.reciprocal()


# x-power basis

def from_x_basis(coeffs: Sequence[Scalar]) -> LaurentPoly:
    """sum_k c_k x^k with x = (z + 1/z)/2."""
    x = LaurentPoly.x()
    out = LaurentPoly.zero()
    power = LaurentPoly.one()
    for c in coeffs:
        if c:
            out = out + power * c
        power = power * x
    return out


def to_x_basis(f: LaurentPoly) -> List[Fraction]:
    """Coefficients c_k with f = sum_k c_k x^k; f must be symmetric."""
    if not f.is_symmetric():
        raise ValueError("only symmetric Laurent polynomials are polynomials in x")
    if f.is_zero():
        return [Fraction(0)]
    d = f.max_deg
    x = LaurentPoly.x()
    powers = [LaurentPoly.one()]
    for _ in range(d):
        powers.append(powers[-1] * x)
    out = [Fraction(0)] * (d + 1)
    rest = f
    for k in range(d, -1, -1):
        c = rest.coeff(k) * 2**k
        if c:
            out[k] = c
            rest = rest - powers[k] * c
    assert rest.is_zero()
    return out


# dense x-polynomials (low-to-high) for the differential-equation checks

def xpoly_deriv(p: Sequence[Fraction]) -> List[Fraction]:
    return [k * c for k, c in enumerate(p)][1:] or [Fraction(0)]


def xpoly_add(*ps: Sequence[Fraction]) -> List[Fraction]:
    out = [Fraction(0)] * max(len(p) for p in ps)
    for p in ps:
        for k, c in enumerate(p):
            out[k] += c
    return out


def xpoly_mul(p: Sequence[Fraction], r: Sequence[Fraction]) -> List[Fraction]:
    out = [Fraction(0)] * (len(p) + len(r) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(r):
            out[i + j] += a * b
    return out


def gegenbauer_ode_residual(n: int, gamma: Scalar) -> List[Fraction]:
    """[(1-x^2) D^2 - (2 gamma + 1) x D + n(n + 2 gamma)] C_n^(gamma), as x-coefficients."""
    gamma = Fraction(gamma)
    c = to_x_basis(gegenbauer(n, gamma))
    d1 = xpoly_deriv(c)
    d2 = xpoly_deriv(d1)
    return xpoly_add(
        xpoly_mul([1, 0, -1], d2),
        xpoly_mul([0, -(2 * gamma + 1)], d1),
        [n * (n + 2 * gamma) * a for a in c],
    )

