"""Exact Laurent-polynomial and rational-function algebra in z = e^{i theta}.

Coefficients are :class:`fractions.Fraction` throughout.  A polynomial in
x = cos(theta) is carried as a Laurent polynomial in z that is invariant
under z -> 1/z, since x = (z + 1/z)/2.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple, Union

BigRational = Fraction
Scalar = Union[int, Fraction]


class NonZeroRemainder(ArithmeticError):
    """Raised when an exact division leaves a remainder.

    Inside this package that means a pole failed to cancel, i.e. an identity
    that should hold does not.
    """

    def __init__(self, dividend: "LaurentPoly", divisor: "LaurentPoly", remainder: "LaurentPoly"):
        self.dividend = dividend
        self.divisor = divisor
        self.remainder = remainder
        super().__init__(
            f"division leaves remainder of degree {remainder.max_deg}: {remainder}"
        )

    @property
    def remainder_degree(self) -> int:
        return self.remainder.max_deg


class LaurentPoly:
    """Immutable, finitely supported Laurent polynomial sum_k c_k z^k."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Union[Mapping[int, Scalar], Iterable[Tuple[int, Scalar]], None] = None):
        items = coeffs.items() if isinstance(coeffs, Mapping) else (coeffs or ())
        c: Dict[int, Fraction] = {}
        for k, v in items:
            v = Fraction(v)
            if v:
                c[int(k)] = c.get(int(k), Fraction(0)) + v
        self._c = {k: v for k, v in sorted(c.items()) if v}
        self._hash = None

    # construction helpers
    @classmethod
    def _raw(cls, c: Dict[int, Fraction]) -> "LaurentPoly":
        # trusted: no zero entries, keys sorted
        obj = cls.__new__(cls)
        obj._c = c
        obj._hash = None
        return obj

    @classmethod
    def const(cls, value: Scalar) -> "LaurentPoly":
        return cls({0: value})

    @classmethod
    def monomial(cls, k: int, value: Scalar = 1) -> "LaurentPoly":
        return cls({k: value})

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls._raw({})

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls._raw({0: Fraction(1)})

    @classmethod
    def x(cls) -> "LaurentPoly":
        """x = (z + 1/z)/2."""
        half = Fraction(1, 2)
        return cls._raw({-1: half, 1: half})

    # inspection
    def coeff(self, k: int) -> Fraction:
        return self._c.get(k, Fraction(0))

    def items(self) -> Iterator[Tuple[int, Fraction]]:
        return iter(self._c.items())

    def to_dict(self) -> Dict[int, Fraction]:
        return dict(self._c)

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def is_constant(self) -> bool:
        return not self._c or tuple(self._c) == (0,)

    @property
    def min_deg(self) -> int:
        if not self._c:
            raise ValueError("zero polynomial has no degree")
        return next(iter(self._c))

    @property
    def max_deg(self) -> int:
        if not self._c:
            raise ValueError("zero polynomial has no degree")
        return next(reversed(self._c))

    def is_symmetric(self) -> bool:
        """True iff f(z) = f(1/z), i.e. f is a polynomial in x = cos(theta)."""
        return all(self._c.get(-k) == v for k, v in self._c.items())

    def x_degree(self) -> int:
        """Degree in x of a symmetric polynomial (-1 for zero)."""
        return self.max_deg if self._c else -1

    # arithmetic
    def __add__(self, other: Union["LaurentPoly", Scalar]) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.const(other)
        c = dict(self._c)
        for k, v in other._c.items():
            s = c.get(k, 0) + v
            if s:
                c[k] = s
            else:
                c.pop(k, None)
        return LaurentPoly._raw(dict(sorted(c.items())))

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw({k: -v for k, v in self._c.items()})

    def __sub__(self, other: Union["LaurentPoly", Scalar]) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.const(other)
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "LaurentPoly":
        return LaurentPoly.const(other) - self

    def __mul__(self, other: Union["LaurentPoly", Scalar]) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            other = Fraction(other)
            if not other:
                return LaurentPoly.zero()
            return LaurentPoly._raw({k: v * other for k, v in self._c.items()})
        c: Dict[int, Fraction] = {}
        for i, a in self._c.items():
            for j, b in other._c.items():
                c[i + j] = c.get(i + j, 0) + a * b
        return LaurentPoly._raw({k: v for k, v in sorted(c.items()) if v})

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "LaurentPoly":
        if e < 0:
            raise ValueError("negative powers are not Laurent polynomials in general")
        out = LaurentPoly.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def shift(self, m: int) -> "LaurentPoly":
        """Multiply by z^m."""
        return LaurentPoly._raw({k + m: v for k, v in self._c.items()})

    def rescale(self, c: Scalar) -> "LaurentPoly":
        """f(z) -> f(c z): coefficient of z^k multiplied by c^k."""
        c = Fraction(c)
        if not c:
            raise ValueError("rescale factor must be nonzero")
        if c == 1:
            return self
        return LaurentPoly._raw({k: v * c**k for k, v in self._c.items()})

    def reflect(self) -> "LaurentPoly":
        """f(z) -> f(1/z)."""
        return LaurentPoly._raw({-k: v for k, v in reversed(self._c.items())})

    def evaluate(self, z: complex) -> complex:
        return sum(float(v) * z**k for k, v in self._c.items()) if self._c else 0j

    # comparison / display
    def __eq__(self, other: object) -> bool:
        if isinstance(other, LaurentPoly):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == LaurentPoly.const(other)._c
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._c.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._c)

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts: List[str] = []
        for k, v in reversed(self._c.items()):
            if k == 0:
                mono = ""
            elif k == 1:
                mono = "z"
            else:
                mono = f"z^{k}"
            if not mono:
                term = str(abs(v))
            elif abs(v) == 1:
                term = mono
            else:
                term = f"{abs(v)}*{mono}"
            sign = "-" if v < 0 else "+"
            parts.append(f"{sign} {term}")
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def laurent_arith(a: LaurentPoly, b: LaurentPoly, op: str) -> LaurentPoly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def rescale_z(f: LaurentPoly, c: Scalar) -> LaurentPoly:
    return f.rescale(c)


# ordinary polynomial helpers on low-to-high coefficient lists

def _to_dense(f: LaurentPoly) -> Tuple[int, List[Fraction]]:
    lo = f.min_deg
    dense = [Fraction(0)] * (f.max_deg - lo + 1)
    for k, v in f.items():
        dense[k - lo] = v
    return lo, dense


def _from_dense(lo: int, dense: Sequence[Fraction]) -> LaurentPoly:
    return LaurentPoly._raw({lo + i: v for i, v in enumerate(dense) if v})


def _trim(a: List[Fraction]) -> List[Fraction]:
    while a and not a[-1]:
        a.pop()
    return a


def _divmod_dense(p: List[Fraction], q: List[Fraction]) -> Tuple[List[Fraction], List[Fraction]]:
    p = _trim(list(p))
    q = _trim(list(q))
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    if len(p) < len(q):
        return [], p
    lead = q[-1]
    quot = [Fraction(0)] * (len(p) - len(q) + 1)
    r = list(p)
    for i in range(len(quot) - 1, -1, -1):
        c = r[i + len(q) - 1] / lead
        quot[i] = c
        if c:
            for j, qj in enumerate(q):
                r[i + j] -= c * qj
    return quot, _trim(r[: len(q) - 1])


def _gcd_dense(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    a = _trim(list(a))
    b = _trim(list(b))
    while b:
        _, r = _divmod_dense(a, b)
        a, b = b, r
    if not a:
        return [Fraction(1)]
    lead = a[-1]
    return [c / lead for c in a]


def exact_divide(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Return r with r*q == p, or raise :class:`NonZeroRemainder`.

    Both operands are brought to ordinary polynomials by factoring out their
    lowest power of z; the divisor then has a nonzero constant term, so
    Laurent divisibility coincides with ordinary divisibility.  The quotient
    is certified by re-multiplication.
    """
    if q.is_zero():
        raise ZeroDivisionError("division by the zero Laurent polynomial")
    if p.is_zero():
        return LaurentPoly.zero()
    plo, pd = _to_dense(p)
    qlo, qd = _to_dense(q)
    quot, rem = _divmod_dense(pd, qd)
    if rem:
        raise NonZeroRemainder(p, q, _from_dense(plo, rem))
    r = _from_dense(plo - qlo, quot)
    if r * q != p:  # pragma: no cover - certification of the division step
        raise NonZeroRemainder(p, q, p - r * q)
    return r


class RationalExpr:
    """Quotient num/den of Laurent polynomials.

    The stored form is normalized so that den is monic with lowest exponent 0.
    ``canonical()`` additionally strips the polynomial gcd.  Equality is
    semantic (cross-multiplication).
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Union[LaurentPoly, Scalar], den: Union[LaurentPoly, Scalar] = 1):
        if not isinstance(num, LaurentPoly):
            num = LaurentPoly.const(num)
        if not isinstance(den, LaurentPoly):
            den = LaurentPoly.const(den)
        if den.is_zero():
            raise ZeroDivisionError("RationalExpr with zero denominator")
        lo = den.min_deg
        lead = den.coeff(den.max_deg)
        if lo or lead != 1:
            inv = 1 / lead
            num = num.shift(-lo) * inv
            den = den.shift(-lo) * inv
        self.num = num
        self.den = den

    @classmethod
    def of(cls, value: Union["RationalExpr", LaurentPoly, Scalar]) -> "RationalExpr":
        return value if isinstance(value, RationalExpr) else cls(value)

    def is_polynomial(self) -> bool:
        return self.den == 1

    def canonical(self) -> "RationalExpr":
        """Cancel the polynomial gcd of numerator and denominator."""
        if self.den.is_constant():
            return self
        if self.num.is_zero():
            return RationalExpr(LaurentPoly.zero())
        try:
            return RationalExpr(exact_divide(self.num, self.den))
        except NonZeroRemainder:
            pass
        nlo, nd = _to_dense(self.num)
        dlo, dd = _to_dense(self.den)
        g = _gcd_dense(nd, dd)
        if len(g) == 1:
            return self
        gp = _from_dense(0, g)
        return RationalExpr(exact_divide(self.num, gp), exact_divide(self.den, gp))

    def to_poly(self) -> LaurentPoly:
        """Certified conversion; raises NonZeroRemainder if poles remain."""
        if self.den == 1:
            return self.num
        return exact_divide(self.num, self.den)

    # arithmetic
    def __add__(self, other) -> "RationalExpr":
        other = RationalExpr.of(other)
        if self.den == other.den:
            return RationalExpr(self.num + other.num, self.den)
        return RationalExpr(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalExpr":
        return RationalExpr(-self.num, self.den)

    def __sub__(self, other) -> "RationalExpr":
        return self + (-RationalExpr.of(other))

    def __rsub__(self, other) -> "RationalExpr":
        return RationalExpr.of(other) - self

    def __mul__(self, other) -> "RationalExpr":
        if isinstance(other, (int, Fraction)):
            return RationalExpr(self.num * other, self.den)
        other = RationalExpr.of(other)
        return RationalExpr(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalExpr":
        if isinstance(other, (int, Fraction)):
            return RationalExpr(self.num, self.den * other)
        other = RationalExpr.of(other)
        return RationalExpr(self.num * other.den, self.den * other.num)

    def rescale(self, c: Scalar) -> "RationalExpr":
        return RationalExpr(self.num.rescale(c), self.den.rescale(c))

    def reflect(self) -> "RationalExpr":
        return RationalExpr(self.num.reflect(), self.den.reflect())

    def evaluate(self, z: complex) -> complex:
        return self.num.evaluate(z) / self.den.evaluate(z)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (LaurentPoly, int, Fraction)):
            other = RationalExpr(other)
        if not isinstance(other, RationalExpr):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        if self.den == 1:
            return f"RationalExpr({self.num})"
        return f"RationalExpr(({self.num}) / ({self.den}))"


class TruncatedSeries:
    """Power series sum_n a_n t^n in t with LaurentPoly coefficients, mod t^(order+1)."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Sequence[Union[LaurentPoly, Scalar]] = ()):
        if order < 0:
            raise ValueError("order must be non-negative")
        cs = [c if isinstance(c, LaurentPoly) else LaurentPoly.const(c) for c in coeffs[: order + 1]]
        cs += [LaurentPoly.zero()] * (order + 1 - len(cs))
        self.order = order
        self.coeffs: Tuple[LaurentPoly, ...] = tuple(cs)

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls(order, [1])

    def __getitem__(self, n: int) -> LaurentPoly:
        return self.coeffs[n]

    def _check(self, other: "TruncatedSeries") -> int:
        return min(self.order, other.order)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = self._check(other)
        return TruncatedSeries(n, [a + b for a, b in zip(self.coeffs[: n + 1], other.coeffs)])

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = self._check(other)
        return TruncatedSeries(n, [a - b for a, b in zip(self.coeffs[: n + 1], other.coeffs)])

    def __mul__(self, other: Union["TruncatedSeries", Scalar]) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries(self.order, [a * other for a in self.coeffs])
        n = self._check(other)
        out = []
        for m in range(n + 1):
            acc = LaurentPoly.zero()
            for k in range(m + 1):
                a, b = self.coeffs[k], other.coeffs[m - k]
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return TruncatedSeries(n, out)

    __rmul__ = __mul__

    def reciprocal(self) -> "TruncatedSeries":
        a0 = self.coeffs[0]
        if not a0.is_constant() or a0.is_zero():
            raise ZeroDivisionError("reciprocal needs a nonzero scalar constant term")
        inv = 1 / a0.coeff(0)
        out = [LaurentPoly.const(inv)]
        for m in range(1, self.order + 1):
            acc = LaurentPoly.zero()
            for k in range(1, m + 1):
                if self.coeffs[k]:
                    acc = acc + self.coeffs[k] * out[m - k]
            out.append(acc * (-inv))
        return TruncatedSeries(self.order, out)

    def rescale_t(self, c: Scalar) -> "TruncatedSeries":
        """a(t) -> a(c t)."""
        c = Fraction(c)
        return TruncatedSeries(self.order, [a * c**n for n, a in enumerate(self.coeffs)])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"TruncatedSeries(order={self.order}, coeffs={list(map(str, self.coeffs))})"


def series_arith(a: TruncatedSeries, b: TruncatedSeries = None, op: str = "add") -> TruncatedSeries:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "reciprocal":
        return a.reciprocal()
    raise ValueError(f"unknown op {op!r}")


def parse_rational(text: Union[str, Scalar]) -> Fraction:
    """Parse "p/q", an integer or a finite decimal string into a Fraction."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc
