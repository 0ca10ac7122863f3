"""Floating-point checks: weights, quadrature orthogonality, weighted equations, limits.

Everything here runs in complex double precision.  Polynomials come from the
exact layer and are only evaluated here; the shift operators are re-derived
in closed form, so that the exact and numeric pipelines stay independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import chebyshev as npcheb

from .exact import LaurentPoly, Scalar
from .families import chebyshev, gegenbauer, ultraspherical
from .qkernel import QContext

ArrayLike = Union[complex, np.ndarray]

RESIDUAL_THETAS = tuple(round(0.1 * k, 1) for k in range(1, 18))
ILL_CONDITIONED = 1e-13


@dataclass(frozen=True)
class ProductTruncation:
    epsilon: float = 1e-14

    def terms(self, a_abs: float, q: float) -> int:
        """Smallest K with |a| q^K / (1 - q) < epsilon."""
        if not 0 < q < 1:
            raise ValueError(f"infinite products need 0 < q < 1, got q={q}")
        if a_abs == 0:
            return 0
        bound = self.epsilon * (1 - q) / a_abs
        if bound >= 1:
            return 0
        return max(0, math.ceil(math.log(bound) / math.log(q)))


@dataclass(frozen=True)
class QuadratureGrid:
    """Midpoint-offset composite trapezoid rule on [0, pi]."""

    nodes: int = 512
    theta: np.ndarray = field(init=False, repr=False, compare=False)
    weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.nodes < 1:
            raise ValueError("need at least one node")
        object.__setattr__(self, "theta", np.pi * (np.arange(self.nodes) + 0.5) / self.nodes)
        object.__setattr__(self, "weights", np.full(self.nodes, np.pi / self.nodes))


def _qf(ctx_or_q) -> float:
    return float(ctx_or_q.q) if isinstance(ctx_or_q, QContext) else float(ctx_or_q)


def qpoch_inf(a: ArrayLike, q: float, trunc: ProductTruncation = ProductTruncation()) -> ArrayLike:
    """(a; q)_inf truncated at the first K factors with a tail below epsilon."""
    a = np.asarray(a, dtype=complex)
    amax = float(np.max(np.abs(a))) if a.size else 0.0
    out = np.ones_like(a)
    qk = 1.0
    for _ in range(trunc.terms(amax, q)):
        out = out * (1 - a * qk)
        qk *= q
    return out if out.ndim else complex(out)


def near_product_zero(a: ArrayLike, q: float, trunc: ProductTruncation = ProductTruncation()) -> np.ndarray:
    """True where some factor 1 - a q^k of (a; q)_inf is smaller than 1e-13."""
    a = np.asarray(a, dtype=complex)
    bad = np.zeros(a.shape, dtype=bool)
    qk = 1.0
    for _ in range(max(trunc.terms(float(np.max(np.abs(a))) if a.size else 0.0, q), 1)):
        bad |= np.abs(1 - a * qk) < ILL_CONDITIONED
        qk *= q
    return bad


def laurent_eval(f: LaurentPoly, z: ArrayLike) -> ArrayLike:
    z = np.asarray(z, dtype=complex)
    out = np.zeros_like(z)
    for k, c in f.items():
        out = out + float(c) * z**k
    return out if out.ndim else complex(out)


def weight_tilde_z(z: ArrayLike, q: float, beta: float, trunc: ProductTruncation = ProductTruncation()) -> ArrayLike:
    """Analytic continuation of the Rogers weight in z (1/sin theta -> 2i/(z - 1/z))."""
    z = np.asarray(z, dtype=complex)
    z2 = z * z
    num = qpoch_inf(z2, q, trunc) * qpoch_inf(1 / z2, q, trunc)
    if beta:
        den = qpoch_inf(beta * z2, q, trunc) * qpoch_inf(beta / z2, q, trunc)
    else:
        den = 1.0
    return 2j / (z - 1 / z) * num / den


def weight_tilde(theta, ctx, trunc: ProductTruncation = ProductTruncation(), beta: Optional[float] = None):
    """w~(x; beta|q) at x = cos(theta); real and positive for |beta| < 1."""
    th = np.asarray(theta, dtype=float)
    if np.any(np.isclose(np.sin(th), 0.0, atol=1e-15)):
        raise ValueError("theta must lie strictly inside (0, pi)")
    b = float(ctx.beta) if beta is None else beta
    val = weight_tilde_z(np.exp(1j * th), _qf(ctx), b, trunc)
    out = np.real(val)
    return float(out) if np.ndim(out) == 0 else out


def hermite_weight(theta, q, trunc: ProductTruncation = ProductTruncation()):
    """(1/sin theta) (e^{2i theta}, e^{-2i theta}; q)_inf."""
    th = np.asarray(theta, dtype=float)
    z2 = np.exp(2j * th)
    val = np.real(qpoch_inf(z2, _qf(q), trunc) * qpoch_inf(1 / z2, _qf(q), trunc)) / np.sin(th)
    return float(val) if np.ndim(val) == 0 else val


def _rel(a, b) -> float:
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale else 0.0


def weight_recurrence_residual(ctx, theta: float, trunc: ProductTruncation = ProductTruncation()) -> float:
    """Relative residual of w~(x; beta q) = [(1 + beta)^2 - 4 beta x^2] w~(x; beta)."""
    q, b = _qf(ctx), float(ctx.beta)
    x = math.cos(theta)
    lhs = weight_tilde(theta, ctx, trunc, beta=b * q)
    rhs = ((1 + b) ** 2 - 4 * b * x * x) * weight_tilde(theta, ctx, trunc, beta=b)
    return _rel(lhs, rhs)


def weight_shift_check(ctx, theta: float, trunc: ProductTruncation = ProductTruncation()) -> Dict[str, Optional[float]]:
    """Residuals of E+- w~(x; beta q) = s^-1 (1 - b z^-+2)(b q - z^+-2) w~(x; beta).

    E+ sends z to z/s, E- to z s.  A branch whose shifted products come
    within 1e-13 of a zero is reported as None (skipped).
    """
    q, b = _qf(ctx), float(ctx.beta)
    s = math.sqrt(q)
    z = complex(math.cos(theta), math.sin(theta))
    out: Dict[str, Optional[float]] = {}
    for name, w, sign in (("plus", z / s, 1), ("minus", z * s, -1)):
        w2 = w * w
        args = np.array([w2, 1 / w2, b * q * w2, b * q / w2])
        if np.any(near_product_zero(args, q, trunc)):
            out[name] = None
            continue
        lhs = weight_tilde_z(w, q, b * q, trunc)
        rhs = (1 / s) * (1 - b * z ** (-2 * sign)) * (b * q - z ** (2 * sign)) * weight_tilde_z(z, q, b, trunc)
        out[name] = _rel(lhs, rhs)
    return out


def hermite_weight_shift_check(q, theta: float, trunc: ProductTruncation = ProductTruncation()) -> Dict[str, float]:
    """Residuals of E+- w~(x|q) = -(e^{+-2i theta}/sqrt q) w~(x|q)."""
    q = _qf(q)
    s = math.sqrt(q)
    z = complex(math.cos(theta), math.sin(theta))
    w0 = weight_tilde_z(z, q, 0.0, trunc)
    return {
        "plus": _rel(weight_tilde_z(z / s, q, 0.0, trunc), -(z**2) / s * w0),
        "minus": _rel(weight_tilde_z(z * s, q, 0.0, trunc), -(z**-2) / s * w0),
    }


# orthogonality

def norm_inverse(n: int, ctx, trunc: ProductTruncation = ProductTruncation()) -> float:
    """1/d_n(beta; q) for the Rogers polynomials."""
    q, b = _qf(ctx), float(ctx.beta)
    if not abs(b) < 1:
        raise ValueError("orthogonality needs |beta| < 1")
    qq = np.prod([1 - q ** (j + 1) for j in range(n)]) if n else 1.0
    bb = np.prod([1 - b * b * q**j for j in range(n)]) if n else 1.0
    inf = (qpoch_inf(b * b, q, trunc) * qpoch_inf(q, q, trunc)) / (qpoch_inf(b, q, trunc) * qpoch_inf(b * q, q, trunc))
    d = (1 - b * q**n) / (1 - b) * qq / bb * inf.real
    return 1.0 / d


def _weight_times_sine(grid: QuadratureGrid, q: float, b: float, trunc: ProductTruncation) -> np.ndarray:
    z2 = np.exp(2j * grid.theta)
    num = qpoch_inf(z2, q, trunc) * qpoch_inf(1 / z2, q, trunc)
    den = qpoch_inf(b * z2, q, trunc) * qpoch_inf(b / z2, q, trunc)
    return np.real(num / den)


def _check_ortho_ctx(ctx) -> Tuple[float, float]:
    q, b = _qf(ctx), float(ctx.beta)
    if not (0 < q < 1 and abs(b) < 1):
        raise ValueError("orthogonality needs 0 < q < 1 and |beta| < 1")
    return q, b


def inner_product(
    m: int,
    n: int,
    ctx: QContext,
    grid: QuadratureGrid = QuadratureGrid(),
    trunc: ProductTruncation = ProductTruncation(),
) -> float:
    """(1/2pi) int_{-1}^{1} C_m C_n w~ dx via theta-substitution and the trapezoid rule."""
    q, b = _check_ortho_ctx(ctx)
    z = np.exp(1j * grid.theta)
    cm = np.real(laurent_eval(ultraspherical(m, ctx), z))
    cn = cm if m == n else np.real(laurent_eval(ultraspherical(n, ctx), z))
    vals = cm * cn * _weight_times_sine(grid, q, b, trunc)
    return float(np.dot(grid.weights, vals) / (2 * np.pi))


def gram_matrix(
    n_max: int,
    ctx: QContext,
    grid: QuadratureGrid = QuadratureGrid(),
    trunc: ProductTruncation = ProductTruncation(),
) -> np.ndarray:
    """All inner products <C_m, C_n> for m, n <= n_max."""
    q, b = _check_ortho_ctx(ctx)
    z = np.exp(1j * grid.theta)
    polys = np.array([np.real(laurent_eval(ultraspherical(k, ctx), z)) for k in range(n_max + 1)])
    w = _weight_times_sine(grid, q, b, trunc) * grid.weights / (2 * np.pi)
    return (polys * w) @ polys.T


# weighted second-order equation

def _aw_numeric(g, z: complex, s: float) -> complex:
    """Askey-Wilson divided difference of a function of z, evaluated at z."""
    q = s * s
    return 2 * s / (1 - q) * (g(z / s) - g(z * s)) / (z - 1 / z)


def sl_selfadjoint_residual(
    n: int,
    ctx: QContext,
    theta: float,
    trunc: ProductTruncation = ProductTruncation(),
) -> Optional[float]:
    """Residual of D_q[w~(x; beta q) D_q C_n] = lambda_n C_n w~(x; beta) at one node.

    Returns the absolute residual for n = 0 and the relative one otherwise;
    None if the node is ill-conditioned.
    """
    q, b = _qf(ctx), float(ctx.beta)
    s = math.sqrt(q)
    cn = ultraspherical(n, ctx)
    z = complex(math.cos(theta), math.sin(theta))
    probes = np.array([(z / s) ** 2, (z * s) ** 2])
    if np.any(near_product_zero(np.concatenate([probes, 1 / probes, b * q * probes, b * q / probes]), q, trunc)):
        return None

    def inner(w):
        return _aw_numeric(lambda u: laurent_eval(cn, u), w, s)

    def weighted(w):
        return weight_tilde_z(w, q, b * q, trunc) * inner(w)

    lhs = _aw_numeric(weighted, z, s)
    lam = 4 * q * (1 - q ** (-n)) * (1 - b * b * q**n) / (1 - q) ** 2
    rhs = lam * laurent_eval(cn, z) * weight_tilde_z(z, q, b, trunc)
    if n == 0:
        return abs(lhs - rhs)
    return _rel(lhs, rhs)


# numeric first-order operator and limits

def dx_beta_q_numeric(f, z: ArrayLike, s: float, beta: float) -> ArrayLike:
    """((1 - b z^-2)/(1 - z^-2)) f(z/s) + ((1 - b z^2)/(1 - z^2)) f(z s), in floating point."""
    z = np.asarray(z, dtype=complex)
    z2 = z * z
    return (1 - beta / z2) / (1 - 1 / z2) * f(z / s) + (1 - beta * z2) / (1 - z2) * f(z * s)


@dataclass
class LimitTable:
    h: List[float]
    error: List[float]

    @property
    def orders(self) -> List[float]:
        """Observed orders log(e_i/e_{i+1}) / log(h_i/h_{i+1})."""
        return [
            math.log(self.error[i] / self.error[i + 1]) / math.log(self.h[i] / self.h[i + 1])
            for i in range(len(self.h) - 1)
            if self.error[i] > 0 and self.error[i + 1] > 0
        ]

    @property
    def monotone(self) -> bool:
        return all(b < a for a, b in zip(self.error, self.error[1:]))

    def rows(self) -> List[Tuple[float, float]]:
        return list(zip(self.h, self.error))


DEFAULT_H_SEQUENCE = (1e-1, 5e-2, 2.5e-2, 1.25e-2)


def limit_q_to_1(
    gamma: Scalar,
    test_fn_degree: int,
    h_sequence: Sequence[float] = DEFAULT_H_SEQUENCE,
    x_grid: Optional[np.ndarray] = None,
) -> LimitTable:
    """Error of (1/ln^2 q)[(1 + q^g) I - D^{q^g, q}] against (1/4)[(1-x^2) d2 - (2g+1) x d] on T_k.

    q = 1 - h; the error is the maximum over k <= test_fn_degree and an
    11-point x-grid in [-0.9, 0.9].
    """
    g = float(gamma)
    xs = np.linspace(-0.9, 0.9, 11) if x_grid is None else np.asarray(x_grid, dtype=float)
    z = np.exp(1j * np.arccos(xs))
    errors = []
    for h in h_sequence:
        if not 0 < h < 1:
            raise ValueError("h must lie in (0, 1)")
        q = 1 - h
        s = math.sqrt(q)
        b = q**g
        worst = 0.0
        for k in range(test_fn_degree + 1):
            tk = chebyshev("T", k)

            def f(u, tk=tk):
                return laurent_eval(tk, u)

            lhs = ((1 + b) * f(z) - dx_beta_q_numeric(f, z, s, b)) / math.log(q) ** 2
            coef = npcheb.Chebyshev.basis(k)
            rhs = 0.25 * ((1 - xs**2) * coef.deriv(2)(xs) - (2 * g + 1) * xs * coef.deriv(1)(xs))
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        errors.append(worst)
    return LimitTable(list(h_sequence), errors)


def _one_minus_q_pow(q: float, a: float) -> float:
    # 1 - q^a without cancellation for q near 1
    return -math.expm1(a * math.log(q))


def ultraspherical_coeffs_q_gamma(n: int, gamma: float, q: float) -> List[float]:
    """z^(n-2k) coefficients of C_n(x; q^gamma|q) in floating point, k = 0..n."""
    def ratio(k):
        # (q^g; q)_k / (q; q)_k
        r = 1.0
        for j in range(k):
            r *= _one_minus_q_pow(q, gamma + j) / _one_minus_q_pow(q, j + 1)
        return r

    rs = [ratio(k) for k in range(n + 1)]
    return [rs[k] * rs[n - k] for k in range(n + 1)]


def gegenbauer_limit_deviation(n: int, gamma: Scalar, h: float = 1e-4) -> float:
    """Max relative coefficient deviation of C_n(x; q^g|q) from C_n^(g)(x) at q = 1 - h."""
    approx = ultraspherical_coeffs_q_gamma(n, float(gamma), 1 - h)
    exact = gegenbauer(n, Fraction(gamma))
    dev = 0.0
    for k, a in enumerate(approx):
        e = float(exact.coeff(n - 2 * k))
        dev = max(dev, abs(a - e) / abs(e) if e else abs(a))
    return dev


def limit_beta_to_1(n: int, ctx_base: QContext, delta: float) -> float:
    """Max z-coefficient deviation of (1 - q^n)/(2(1 - beta)) C_n(x; beta|q) from T_n, beta = 1 - delta.

    The scaled polynomial is formed in exact arithmetic with delta read as
    its shortest decimal representation.
    """
    if n < 1:
        raise ValueError("the limit holds for n >= 1")
    d = Fraction(repr(float(delta)))
    ctx = ctx_base.with_beta(1 - d)
    scaled = ultraspherical(n, ctx) * ((1 - ctx.q**n) / (2 * d))
    diff = scaled - chebyshev("T", n)
    return max((abs(float(c)) for _, c in diff.items()), default=0.0)


def gegenbauer_weight_identity(gamma: Scalar, x: float, step: float = 1e-6) -> float:
    """Residual of d/dx[(1-x^2) w] = -(2g+1) x w with w = (1-x^2)^(g - 1/2).

    Relative where the right side is not ~0, absolute otherwise.
    """
    g = float(gamma)
    if not abs(x) < 1:
        raise ValueError("|x| < 1 required")
    if not g > -0.5:
        raise ValueError("gamma > -1/2 required")

    def flux(t):
        return (1 - t * t) ** (g + 0.5)

    lhs = (flux(x + step) - flux(x - step)) / (2 * step)
    rhs = -(2 * g + 1) * x * (1 - x * x) ** (g - 0.5)
    err = abs(lhs - rhs)
    return err / abs(rhs) if abs(rhs) > 1e-12 else err
