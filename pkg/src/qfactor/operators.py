"""q-difference operators as composable exact linear maps on rational functions of z.

Shift conventions, with s = q^{1/2}:

* ``shift(ctx, "plus")``  is exp(+i ln q^{1/2} d/dtheta):  f(z) -> f(z/s)
* ``shift(ctx, "minus")`` is exp(-i ln q^{1/2} d/dtheta):  f(z) -> f(z s)
* ``full_shift`` uses q instead of s (exp(+-i ln q d/dtheta)).

Every trigonometric factor is written in z; 1/(i sin theta) becomes
2/(z - 1/z), so no complex constants appear.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, List, Tuple, Union

from .exact import LaurentPoly, NonZeroRemainder, RationalExpr, Scalar
from .qkernel import QContext

Operand = Union[RationalExpr, LaurentPoly, int, Fraction]

Z = LaurentPoly.monomial(1)
ZINV = LaurentPoly.monomial(-1)
ONE = LaurentPoly.one()


class QOperator:
    """Base class; subclasses implement :meth:`_apply` on a RationalExpr."""

    def _apply(self, f: RationalExpr) -> RationalExpr:  # pragma: no cover - abstract
        raise NotImplementedError

    def apply(self, f: Operand) -> RationalExpr:
        return self._apply(RationalExpr.of(f))

    __call__ = apply

    def apply_poly(self, f: Operand) -> LaurentPoly:
        """Apply and certify that every pole cancelled."""
        return self.apply(f).to_poly()

    def __add__(self, other: "QOperator") -> "QOperator":
        if not isinstance(other, QOperator):
            other = Identity() * other
        return Sum([self, other])

    def __radd__(self, other: Scalar) -> "QOperator":
        return Identity() * other + self

    def __neg__(self) -> "QOperator":
        return Scaled(Fraction(-1), self)

    def __sub__(self, other: "QOperator") -> "QOperator":
        if not isinstance(other, QOperator):
            other = Identity() * other
        return Sum([self, -other])

    def __rsub__(self, other: Scalar) -> "QOperator":
        return Identity() * other - self

    def __mul__(self, other: Union["QOperator", Scalar]) -> "QOperator":
        """Composition ``A * B`` = A after B; a scalar right factor scales."""
        if isinstance(other, QOperator):
            return Compose([self, other])
        return Scaled(Fraction(other), self)

    def __rmul__(self, other: Scalar) -> "QOperator":
        return Scaled(Fraction(other), self)

    def __pow__(self, e: int) -> "QOperator":
        if e < 0:
            raise ValueError("negative operator powers are not supported")
        if e == 0:
            return Identity()
        return Compose([self] * e)


class Identity(QOperator):
    def _apply(self, f):
        return f

    def __repr__(self):
        return "I"


class Multiply(QOperator):
    def __init__(self, factor: Operand, label: str = ""):
        self.factor = RationalExpr.of(factor)
        self.label = label

    def _apply(self, f):
        return self.factor * f

    def __repr__(self):
        return self.label or f"M[{self.factor!r}]"


class Rescale(QOperator):
    """f(z) -> f(c z)."""

    def __init__(self, c: Scalar, label: str = ""):
        c = Fraction(c)
        if not c:
            raise ValueError("rescale factor must be nonzero")
        self.c = c
        self.label = label

    def _apply(self, f):
        return f.rescale(self.c)

    def __repr__(self):
        return self.label or f"R[{self.c}]"


class Scaled(QOperator):
    def __init__(self, c: Fraction, op: QOperator):
        self.c = c
        self.op = op

    def _apply(self, f):
        return self.op._apply(f) * self.c

    def __repr__(self):
        return f"{self.c}*{self.op!r}"


class Sum(QOperator):
    def __init__(self, terms: Iterable[QOperator]):
        flat: List[QOperator] = []
        for t in terms:
            flat.extend(t.terms if isinstance(t, Sum) else [t])
        self.terms = flat

    def _apply(self, f):
        out = RationalExpr(0)
        for t in self.terms:
            out = out + t._apply(f)
        return out.canonical()

    def __repr__(self):
        return "(" + " + ".join(map(repr, self.terms)) + ")"


class Compose(QOperator):
    """Product ops[0] * ops[1] * ... ; the last factor acts first."""

    def __init__(self, ops: Iterable[QOperator]):
        flat: List[QOperator] = []
        for o in ops:
            flat.extend(o.ops if isinstance(o, Compose) else [o])
        self.ops = flat

    def _apply(self, f):
        for op in reversed(self.ops):
            f = op._apply(f)
        return f.canonical()

    def __repr__(self):
        return "".join(map(repr, self.ops))


# rational factors in z

def ratio(num: LaurentPoly, den: LaurentPoly) -> RationalExpr:
    return RationalExpr(num, den)


def z_power(k: int) -> LaurentPoly:
    return LaurentPoly.monomial(k)


def one_minus(c: Scalar, k: int) -> LaurentPoly:
    """1 - c z^k."""
    return ONE - LaurentPoly.monomial(k, c)


# primitive shifts

def shift(ctx: QContext, direction: str) -> QOperator:
    s = ctx.require_s()
    if direction == "plus":
        return Rescale(1 / s, "E+")
    if direction == "minus":
        return Rescale(s, "E-")
    raise ValueError(f"direction must be 'plus' or 'minus', got {direction!r}")


def full_shift(ctx: QContext, direction: str) -> QOperator:
    if direction == "plus":
        return Rescale(1 / ctx.q, "Q+")
    if direction == "minus":
        return Rescale(ctx.q, "Q-")
    raise ValueError(f"direction must be 'plus' or 'minus', got {direction!r}")


def averaging_Aq(ctx: QContext) -> QOperator:
    """Half-sum of the two half-step shifts."""
    return Fraction(1, 2) * (shift(ctx, "plus") + shift(ctx, "minus"))


def askey_wilson_Dq(ctx: QContext) -> QOperator:
    """Askey-Wilson divided difference: (2s/(1-q)) (f(z/s) - f(zs)) / (z - 1/z)."""
    s, q = ctx.require_s(), ctx.q
    if q == 1:
        raise ZeroDivisionError("D_q is undefined at q = 1")
    pref = Multiply(ratio(LaurentPoly.const(2 * s / (1 - q)), Z - ZINV), "2s/((1-q)(z-1/z))")
    return pref * (shift(ctx, "plus") - shift(ctx, "minus"))


def multiply_x() -> QOperator:
    return Multiply(LaurentPoly.x(), "x")


def dx_beta_q(ctx: QContext, beta_minus: Scalar = None, beta_plus: Scalar = None) -> QOperator:
    """First-order operator whose eigenfunctions are the Rogers polynomials.

    f -> ((1 - b z^-2)/(1 - z^-2)) f(z/s) + ((1 - b z^2)/(1 - z^2)) f(z s).
    ``beta_minus`` / ``beta_plus`` override beta in the z^-2 / z^2 factor;
    they exist for falsification runs only.
    """
    bm = ctx.beta if beta_minus is None else Fraction(beta_minus)
    bp = ctx.beta if beta_plus is None else Fraction(beta_plus)
    left = Multiply(ratio(one_minus(bm, -2), one_minus(1, -2)), "F-")
    right = Multiply(ratio(one_minus(bp, 2), one_minus(1, 2)), "F+")
    return left * shift(ctx, "plus") + right * shift(ctx, "minus")


def dx_q(ctx: QContext) -> QOperator:
    """The beta = 0 member: 1/(1 - z^-2) E+ + 1/(1 - z^2) E-."""
    return dx_beta_q(ctx.with_beta(0))


def dx_q_reversed(ctx: QContext) -> QOperator:
    """dx_q with the two shifts exchanged (the q -> 1/q member)."""
    left = Multiply(ratio(ONE, one_minus(1, -2)))
    right = Multiply(ratio(ONE, one_minus(1, 2)))
    return left * shift(ctx, "minus") + right * shift(ctx, "plus")


def dx_beta_q_sine_form(ctx: QContext) -> QOperator:
    """(1/(2i sin theta)) [(z - b/z) E+ - (1/z - b z) E-]; beta = 0 gives the dx_q sine form."""
    b = ctx.beta
    pref = Multiply(ratio(ONE, Z - ZINV))
    plus = Multiply(Z - ZINV * b) * shift(ctx, "plus")
    minus = Multiply(ZINV - Z * b) * shift(ctx, "minus")
    return pref * (plus - minus)


def dx_beta_q_aw_form(ctx: QContext) -> QOperator:
    """(1 + b) A_q + ((1 - q)/(2s)) (1 - b) x D_q."""
    s, q, b = ctx.require_s(), ctx.q, ctx.beta
    return (1 + b) * averaging_Aq(ctx) + ((1 - q) / (2 * s) * (1 - b)) * (multiply_x() * askey_wilson_Dq(ctx))


# weight-free second-order operators

def _p_factor(ctx: QContext, sign: int) -> RationalExpr:
    # (1 - b z^{2 sign})(1 - b q z^{2 sign}) / (1 - q z^{2 sign})
    b, q = ctx.beta, ctx.q
    e = 2 * sign
    return ratio(one_minus(b, e) * one_minus(b * q, e), one_minus(q, e))


def sl_weightfree_operator(ctx: QContext) -> QOperator:
    """Left side of the weight-free second-order equation for C_n(x; beta|q).

    (1/(i sin theta)) [ z P-(z) (Q+ - 1) + z^-1 P+(z) (1 - Q-) ] with
    P-+ = (1 - b z^-+2)(1 - b q z^-+2)/(1 - q z^-+2) and full q-shifts Q+-.
    """
    pref = Multiply(ratio(LaurentPoly.const(2), Z - ZINV), "1/(i sin)")
    first = Multiply(_p_factor(ctx, -1) * Z) * (full_shift(ctx, "plus") - Identity())
    second = Multiply(_p_factor(ctx, 1) * ZINV) * (Identity() - full_shift(ctx, "minus"))
    return pref * (first + second)


def hermite_weightfree_operator(ctx: QContext) -> QOperator:
    """Weight-free q-Hermite operator, normalized with 1/(2i sin theta)."""
    q = ctx.q
    pref = Multiply(ratio(ONE, Z - ZINV), "1/(2i sin)")
    first = Multiply(ratio(Z, one_minus(q, -2))) * (full_shift(ctx, "plus") - Identity())
    second = Multiply(ratio(ZINV, one_minus(q, 2))) * (Identity() - full_shift(ctx, "minus"))
    return pref * (first + second)


def _q_factor(ctx: QContext, sign: int) -> RationalExpr:
    # (1 - b z^e)(1 - b q z^e) / ((1 - z^e)(1 - q z^e)), e = 2 sign
    b, q = ctx.beta, ctx.q
    e = 2 * sign
    return ratio(one_minus(b, e) * one_minus(b * q, e), one_minus(1, e) * one_minus(q, e))


def sl_sine_free_form(ctx: QContext) -> QOperator:
    """The weight-free operator after e^{+-i theta}/(i sin theta) = +-2/(1 - e^{-+2i theta})."""
    qm, qp = Multiply(_q_factor(ctx, -1)), Multiply(_q_factor(ctx, 1))
    return 2 * (qm * (full_shift(ctx, "plus") - Identity()) - qp * (Identity() - full_shift(ctx, "minus")))


def sl_expanded_form(ctx: QContext) -> QOperator:
    """Same operator with shift terms and multiplication terms separated."""
    qm, qp = Multiply(_q_factor(ctx, -1)), Multiply(_q_factor(ctx, 1))
    return 2 * (qm * full_shift(ctx, "plus") + qp * full_shift(ctx, "minus") - qm - qp)


def _half_step_squares(ctx: QContext) -> Tuple[QOperator, QOperator]:
    fm = Multiply(ratio(one_minus(ctx.beta, -2), one_minus(1, -2)), "F-")
    fp = Multiply(ratio(one_minus(ctx.beta, 2), one_minus(1, 2)), "F+")
    ep, em = shift(ctx, "plus"), shift(ctx, "minus")
    return fm * ep * fm * ep, fp * em * fp * em


def sl_commuted_form(ctx: QContext) -> QOperator:
    """Full shifts rewritten as products of half-step factors via the commutation rule."""
    sq_minus, sq_plus = _half_step_squares(ctx)
    qm, qp = Multiply(_q_factor(ctx, -1)), Multiply(_q_factor(ctx, 1))
    return 2 * (sq_minus + sq_plus - qm - qp)


def sl_collected_form(ctx: QContext) -> QOperator:
    """Multiplication terms collected into -(1+q)(1-b)(b-q)/((1+q)^2 - 4 q x^2) - 1 - b^2."""
    b, q = ctx.beta, ctx.q
    sq_minus, sq_plus = _half_step_squares(ctx)
    x = LaurentPoly.x()
    pot = ratio(LaurentPoly.const((1 + q) * (1 - b) * (b - q)), LaurentPoly.const((1 + q) ** 2) - x * x * (4 * q))
    return 2 * (sq_minus - Multiply(pot) + sq_plus - Multiply(LaurentPoly.const(1 + b * b)))


def sl_factorized_form(ctx: QContext) -> QOperator:
    """2 (D + 1 + b)(D - 1 - b) with D = dx_beta_q."""
    d = dx_beta_q(ctx)
    c = 1 + ctx.beta
    return 2 * ((d + c) * (d - c))


def sl_square_form(ctx: QContext) -> QOperator:
    """2 [D^2 - (1 + b)^2 I]."""
    d = dx_beta_q(ctx)
    return 2 * (d * d - (1 + ctx.beta) ** 2)


# deciding identities

def symmetric_basis(k: int) -> LaurentPoly:
    """z^k + z^-k for k >= 1, and 1 for k = 0."""
    if k == 0:
        return ONE
    return LaurentPoly({k: 1, -k: 1})


def operator_equal(a: QOperator, b: QOperator, degree_cap: int, certify: bool = False) -> bool:
    """Exact agreement of two operators on {z^k + z^-k : k <= degree_cap}.

    By linearity this decides equality on all symmetric Laurent polynomials
    of degree <= degree_cap.  With ``certify`` each image must be a Laurent
    polynomial (NonZeroRemainder propagates otherwise).
    """
    if degree_cap < 0:
        raise ValueError("degree_cap must be >= 0")
    return first_disagreement(a, b, degree_cap, certify) is None


def first_disagreement(a: QOperator, b: QOperator, degree_cap: int, certify: bool = False):
    """Smallest basis index k on which a and b differ, or None."""
    for k in range(degree_cap + 1):
        e = symmetric_basis(k)
        if certify:
            if a.apply_poly(e) != b.apply_poly(e):
                return k
        elif a.apply(e) != b.apply(e):
            return k
    return None


def shift_commutation(ctx: QContext, test_exponent: int) -> bool:
    """((1 - b q z^-+2)/(1 - q z^-+2)) E+- == E+- ((1 - b z^-+2)/(1 - z^-+2)) on z^k, both signs."""
    b, q = ctx.beta, ctx.q
    f = LaurentPoly.monomial(test_exponent)
    for direction, e in (("plus", -2), ("minus", 2)):
        lhs = Multiply(ratio(one_minus(b * q, e), one_minus(q, e))) * shift(ctx, direction)
        rhs = shift(ctx, direction) * Multiply(ratio(one_minus(b, e), one_minus(1, e)))
        if lhs.apply(f) != rhs.apply(f):
            return False
    return True


def eigen_residual(op: QOperator, f: LaurentPoly, eigenvalue: Fraction) -> LaurentPoly:
    """op f - eigenvalue * f, certified; raises NonZeroRemainder on uncancelled poles."""
    return op.apply_poly(f) - f * eigenvalue


__all__ = [
    "QOperator",
    "Identity",
    "Multiply",
    "Rescale",
    "Scaled",
    "Sum",
    "Compose",
    "NonZeroRemainder",
    "shift",
    "full_shift",
    "averaging_Aq",
    "askey_wilson_Dq",
    "multiply_x",
    "dx_beta_q",
    "dx_q",
    "dx_q_reversed",
    "dx_beta_q_sine_form",
    "dx_beta_q_aw_form",
    "sl_weightfree_operator",
    "hermite_weightfree_operator",
    "sl_sine_free_form",
    "sl_expanded_form",
    "sl_commuted_form",
    "sl_collected_form",
    "sl_factorized_form",
    "sl_square_form",
    "symmetric_basis",
    "operator_equal",
    "first_disagreement",
    "shift_commutation",
    "eigen_residual",
]
