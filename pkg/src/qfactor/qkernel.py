"""Parameter contexts, q-Pochhammer / q-binomial primitives and eigenvalues."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import product
from typing import List, Optional, Sequence

from .exact import Scalar, parse_rational

DEFAULT_N_MAX = 20
DEFAULT_S_GRID = (Fraction(1, 2), Fraction(1, 3), Fraction(3, 5))
DEFAULT_BETA_GRID = (Fraction(0), Fraction(1, 2), Fraction(-1, 3), Fraction(7, 8))


def _exact_sqrt(r: Fraction) -> Optional[Fraction]:
    if r < 0:
        return None
    a, b = math.isqrt(r.numerator), math.isqrt(r.denominator)
    if a * a == r.numerator and b * b == r.denominator:
        return Fraction(a, b)
    return None


@dataclass(frozen=True)
class QContext:
    """A parameter point (q, beta, gamma) with q = s**2.

    ``s`` is the positive square root of q when it is rational; it is filled
    in automatically where possible.  Operators built from half-step shifts
    need it (see :meth:`require_s`); routines that only use q do not.
    Contexts with q outside (0, 1) are allowed and reported as ``formal``.
    """

    q: Fraction
    beta: Fraction = Fraction(0)
    gamma: Optional[Fraction] = None
    s: Optional[Fraction] = None

    def __post_init__(self):
        object.__setattr__(self, "q", Fraction(self.q))
        object.__setattr__(self, "beta", Fraction(self.beta))
        if self.gamma is not None:
            object.__setattr__(self, "gamma", Fraction(self.gamma))
        if self.q <= 0:
            raise ValueError(f"q must be positive, got {self.q}")
        if self.s is None:
            object.__setattr__(self, "s", _exact_sqrt(self.q))
        else:
            s = Fraction(self.s)
            if s <= 0 or s * s != self.q:
                raise ValueError(f"s={s} is not the positive square root of q={self.q}")
            object.__setattr__(self, "s", s)

    @classmethod
    def from_s(cls, s: Scalar, beta: Scalar = 0, gamma: Optional[Scalar] = None) -> "QContext":
        s = Fraction(s)
        return cls(q=s * s, beta=Fraction(beta), gamma=gamma, s=s)

    @classmethod
    def parse(cls, *, s=None, q=None, beta="0", gamma=None) -> "QContext":
        """Build a context from CLI-style strings; exactly one of s, q."""
        if (s is None) == (q is None):
            raise ValueError("give exactly one of s or q")
        g = None if gamma is None else parse_rational(gamma)
        if s is not None:
            return cls.from_s(parse_rational(s), parse_rational(beta), g)
        return cls(q=parse_rational(q), beta=parse_rational(beta), gamma=g)

    def require_s(self) -> Fraction:
        if self.s is None:
            raise ValueError(f"q={self.q} has no rational square root; half-step shifts need s")
        return self.s

    @property
    def formal(self) -> bool:
        """True outside the regime 0 < q < 1 (e.g. the q -> 1/q context)."""
        return not (0 < self.q < 1)

    @property
    def orthogonality_regime(self) -> bool:
        return not self.formal and abs(self.beta) < 1

    def inverted(self) -> "QContext":
        """The context (1/q, 1/beta); s -> 1/s."""
        if self.beta == 0:
            raise ZeroDivisionError("beta = 0 has no inverse")
        return QContext(
            q=1 / self.q,
            beta=1 / self.beta,
            gamma=self.gamma,
            s=None if self.s is None else 1 / self.s,
        )

    def with_beta(self, beta: Scalar) -> "QContext":
        return replace(self, beta=Fraction(beta))

    def params(self) -> dict:
        out = {"q": str(self.q), "beta": str(self.beta)}
        if self.s is not None:
            out["s"] = str(self.s)
        if self.gamma is not None:
            out["gamma"] = str(self.gamma)
        return out

    def __str__(self) -> str:
        head = f"s={self.s}" if self.s is not None else f"q={self.q}"
        tail = f", gamma={self.gamma}" if self.gamma is not None else ""
        return f"QContext({head}, beta={self.beta}{tail})"


def default_grid(
    s_values: Sequence[Scalar] = DEFAULT_S_GRID,
    beta_values: Sequence[Scalar] = DEFAULT_BETA_GRID,
) -> List[QContext]:
    """The 12-point (s, beta) grid used by the exact campaigns."""
    return [QContext.from_s(s, b) for s, b in product(s_values, beta_values)]


def q_pochhammer(a: Scalar, q: Scalar, k: int) -> Fraction:
    """(a; q)_k = prod_{j<k} (1 - a q^j)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    a, q = Fraction(a), Fraction(q)
    out = Fraction(1)
    qj = Fraction(1)
    for _ in range(k):
        out *= 1 - a * qj
        qj *= q
    return out


def q_binomial(n: int, k: int, q: Scalar) -> Fraction:
    """Gaussian binomial [n k]_q; zero for k outside [0, n]."""
    if k < 0 or k > n or n < 0:
        return Fraction(0)
    q = Fraction(q)
    return q_pochhammer(q, q, n) / (q_pochhammer(q, q, k) * q_pochhammer(q, q, n - k))


def mu_n(ctx: QContext, n: int) -> Fraction:
    """First-order eigenvalue q^{-n/2} + beta q^{n/2} = s^-n + beta s^n."""
    s = ctx.require_s()
    return s ** (-n) + ctx.beta * s**n


def lambda_n(ctx: QContext, n: int) -> Fraction:
    """Sturm-Liouville eigenvalue 4q(1 - q^-n)(1 - beta^2 q^n)/(1 - q)^2."""
    q, b = ctx.q, ctx.beta
    if q == 1:
        raise ZeroDivisionError("lambda_n is undefined at q = 1")
    return 4 * q * (1 - q ** (-n)) * (1 - b * b * q**n) / (1 - q) ** 2


def weightfree_eigenvalue(ctx: QContext, n: int) -> Fraction:
    """Eigenvalue 2(q^-n - 1)(1 - beta^2 q^n) of the weight-free equation."""
    q, b = ctx.q, ctx.beta
    return 2 * (q ** (-n) - 1) * (1 - b * b * q**n)


def eigenvalue_identity(ctx: QContext, n: int) -> bool:
    """Exact truth of mu_n^2 - (1 + beta)^2 == (q^-n - 1)(1 - beta^2 q^n)."""
    q, b = ctx.q, ctx.beta
    return mu_n(ctx, n) ** 2 - (1 + b) ** 2 == (q ** (-n) - 1) * (1 - b * b * q**n)

