"""Check catalog, suite runner and report / table emission."""

from __future__ import annotations

import csv
import fnmatch
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from . import numerics as num
from . import operators as ops
from .exact import NonZeroRemainder, parse_rational
from .families import (
    gegenbauer_ode_residual,
    gf_series,
    q_hermite,
    ultraspherical,
    chebyshev,
)
from .qkernel import (
    DEFAULT_N_MAX,
    QContext,
    default_grid,
    eigenvalue_identity,
    lambda_n,
    mu_n,
    q_pochhammer,
    weightfree_eigenvalue,
)

CATALOG_VERSION = "1"

DEFAULT_GAMMAS = (Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2))
NUMERIC_N_MAX = 8
EIGEN_N_MAX = 30
SERIES_T_ORDER = 15
GEGENBAUER_LIMIT_N = 6
BETA_LIMIT_N = 6
MUTATION = Fraction(1, 7)

TOL_OFFDIAG = 1e-10
TOL_NORM = 1e-9
TOL_RESIDUAL = 1e-8
TOL_FD = 1e-6
TOL_GEGENBAUER_LIMIT = 1e-3
TOL_BETA_LIMIT = 1e-4

WEIGHT_IDENTITY_X = tuple(round(-0.9 + 0.2 * k, 1) for k in range(10))


class UsageError(ValueError):
    """Bad filter, grid or option; maps to exit code 2."""


@dataclass(frozen=True)
class Options:
    n_max: int = DEFAULT_N_MAX
    nodes: int = 512
    epsilon: float = 1e-14
    gammas: Tuple[Fraction, ...] = DEFAULT_GAMMAS
    mutate: bool = False

    @property
    def trunc(self) -> num.ProductTruncation:
        return num.ProductTruncation(self.epsilon)

    @property
    def grid_q(self) -> num.QuadratureGrid:
        return num.QuadratureGrid(self.nodes)


@dataclass
class Outcome:
    status: str
    residual: Optional[float] = None
    remainder_degree: Optional[int] = None
    note: Optional[str] = None


@dataclass(frozen=True)
class Check:
    check_id: str
    anchor: str
    mode: str  # "exact" | "numeric"
    cases: Callable[[Sequence[QContext], Options], List[dict]]
    run: Callable[[dict, Options], Outcome]
    tolerance: Optional[float] = None


@dataclass
class CaseRecord:
    check_id: str
    params: dict
    status: str
    residual: Optional[float]
    remainder_degree: Optional[int]
    ms: float
    note: Optional[str] = None

    def to_json(self) -> dict:
        out = {
            "check_id": self.check_id,
            "params": self.params,
            "status": self.status,
            "residual": self.residual,
            "remainder_degree": self.remainder_degree,
            "ms": self.ms,
        }
        if self.note is not None:
            out["note"] = self.note
        return out


@dataclass
class VerificationReport:
    cases: List[CaseRecord]
    anchors: Dict[str, str]
    options: dict = field(default_factory=dict)
    catalog_version: str = CATALOG_VERSION

    @property
    def summary(self) -> dict:
        counts = {"pass": 0, "fail": 0, "skipped": 0}
        by_check: Dict[str, Dict[str, int]] = {}
        for c in self.cases:
            counts[c.status] += 1
            slot = by_check.setdefault(c.check_id, {"pass": 0, "fail": 0, "skipped": 0})
            slot[c.status] += 1
        return {
            "total": len(self.cases),
            "passed": counts["pass"],
            "failed": counts["fail"],
            "skipped": counts["skipped"],
            "by_check": by_check,
        }

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.cases)

    def failures(self) -> List[CaseRecord]:
        return [c for c in self.cases if c.status == "fail"]

    def to_json(self) -> dict:
        return {
            "catalog_version": self.catalog_version,
            "anchors": self.anchors,
            "options": self.options,
            "cases": [c.to_json() for c in self.cases],
            "summary": self.summary,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"


# helpers

def _ctx(p: dict) -> QContext:
    gamma = p.get("gamma")
    if "s" in p:
        return QContext.from_s(parse_rational(p["s"]), parse_rational(p.get("beta", "0")), gamma and parse_rational(gamma))
    return QContext(q=parse_rational(p["q"]), beta=parse_rational(p.get("beta", "0")), gamma=gamma and parse_rational(gamma))


def _ctx_params(ctx: QContext, with_beta: bool = True) -> dict:
    p = {"s": str(ctx.s)} if ctx.s is not None else {"q": str(ctx.q)}
    if with_beta:
        p["beta"] = str(ctx.beta)
    return p


def _unique(items: Iterable[dict]) -> List[dict]:
    seen, out = set(), []
    for it in items:
        key = json.dumps(it, sort_keys=True)
        if key not in seen:
            seen.add(key)
            out.append(it)
    return out


def _exact_ctxs(grid: Sequence[QContext]) -> List[QContext]:
    return [c for c in grid if c.s is not None]


def _ortho_ctxs(grid: Sequence[QContext]) -> List[QContext]:
    return [c for c in grid if c.orthogonality_regime]


def _eigen(op: ops.QOperator, f, value) -> Outcome:
    try:
        r = op.apply_poly(f) - f * value
    except NonZeroRemainder as exc:
        return Outcome("fail", remainder_degree=exc.remainder_degree, note="pole did not cancel")
    if r.is_zero():
        return Outcome("pass", residual=0.0)
    return Outcome("fail", residual=float(max(abs(c) for _, c in r.items())), note="eigenvalue mismatch")


def _bool(ok: bool, note: Optional[str] = None) -> Outcome:
    return Outcome("pass" if ok else "fail", residual=0.0 if ok else 1.0, note=None if ok else note)


def _numeric(value: Optional[float], tol: float) -> Outcome:
    if value is None:
        return Outcome("skipped", note="ill-conditioned node")
    if not math.isfinite(value):
        return Outcome("fail", residual=None, note="non-finite value")
    return Outcome("pass" if value < tol else "fail", residual=float(value))


def _max_or_none(values: Iterable[Optional[float]]) -> Optional[float]:
    vals = [v for v in values if v is not None]
    return max(vals) if vals else None


def _dx_beta_q(ctx: QContext, opt: Options) -> ops.QOperator:
    if opt.mutate:
        return ops.dx_beta_q(ctx, beta_minus=ctx.beta + MUTATION)
    return ops.dx_beta_q(ctx)


# case generators

def _per_ctx_n(grid, opt, *, ctxs=None, n_max=None, with_beta=True):
    ctxs = _exact_ctxs(grid) if ctxs is None else ctxs
    n_max = opt.n_max if n_max is None else n_max
    return _unique({**_ctx_params(c, with_beta), "n": n} for c in ctxs for n in range(n_max + 1))


def _per_ctx(grid, opt, *, ctxs=None, with_beta=True, **extra):
    ctxs = _exact_ctxs(grid) if ctxs is None else ctxs
    return _unique({**_ctx_params(c, with_beta), **extra} for c in ctxs)


def _gammas(grid, opt) -> List[Fraction]:
    gs = [c.gamma for c in grid if c.gamma is not None]
    return sorted(set(gs)) if gs else list(opt.gammas)


# runners

def _run_hermite_reduction(p, opt):
    ctx = _ctx(p).with_beta(0)
    n = p["n"]
    lhs = ultraspherical(n, ctx) * q_pochhammer(ctx.q, ctx.q, n)
    return _bool(lhs == q_hermite(n, ctx), "(q;q)_n C_n(x;0|q) != H_n")


def _run_eq1_7(p, opt):
    ctx = _ctx(p)
    vals = [num.hermite_weight_shift_check(ctx.q, t, opt.trunc) for t in num.RESIDUAL_THETAS]
    return _numeric(_max_or_none(v for d in vals for v in d.values()), TOL_RESIDUAL)


def _run_eq1_8(p, opt):
    ctx = _ctx(p)
    n = p["n"]
    h = q_hermite(n, ctx)
    out = _eigen(ops.hermite_weightfree_operator(ctx), h, ctx.q ** (-n) - 1)
    if out.status == "pass" and n > 0:
        # measured normalization ratio against the beta = 0 member of the general weight-free operator
        general = ops.sl_weightfree_operator(ctx.with_beta(0)).apply_poly(h)
        own = ops.hermite_weightfree_operator(ctx).apply_poly(h)
        ratio = general.coeff(n) / own.coeff(n)
        if general != own * ratio:
            return Outcome("fail", note="operators are not proportional")
        out.note = f"general/hermite normalization ratio = {ratio}"
    return out


def _run_eq1_9(p, opt):
    ctx = _ctx(p).with_beta(0)
    n = p["n"]
    d = _dx_beta_q(ctx, opt)
    h = q_hermite(n, ctx)
    try:
        once = d.apply_poly(h)
        twice = d.apply_poly(once)
    except NonZeroRemainder as exc:
        return Outcome("fail", remainder_degree=exc.remainder_degree, note="pole did not cancel")
    return _bool(twice == h * ctx.q ** (-n), "eigenvalue mismatch")


def _run_eq1_11(p, opt):
    ctx = _ctx(p).with_beta(0)
    n = p["n"]
    h = q_hermite(n, ctx)
    out = _eigen(_dx_beta_q(ctx, opt), h, ctx.s ** (-n))
    if out.status == "pass":
        sine = ops.dx_beta_q_sine_form(ctx).apply_poly(h)
        if sine != h * ctx.s ** (-n):
            return Outcome("fail", note="sine form disagrees")
    return out


def _run_sl_numeric(p, opt):
    ctx = _ctx(p)
    vals = [num.sl_selfadjoint_residual(p["n"], ctx, t, opt.trunc) for t in num.RESIDUAL_THETAS]
    return _numeric(_max_or_none(vals), TOL_RESIDUAL)


def _run_eq2_2(p, opt):
    ctx = _ctx(p)
    m, n = p["m"], p["n"]
    val = num.inner_product(m, n, ctx, opt.grid_q, opt.trunc)
    if m != n:
        return _numeric(abs(val), TOL_OFFDIAG)
    ref = num.norm_inverse(n, ctx, opt.trunc)
    return _numeric(abs(val - ref) / abs(ref), TOL_NORM)


def _run_eq2_6(p, opt):
    ctx = _ctx(p)
    return _numeric(max(num.weight_recurrence_residual(ctx, t, opt.trunc) for t in num.RESIDUAL_THETAS), TOL_RESIDUAL)


def _run_eq2_9(p, opt):
    res = gegenbauer_ode_residual(p["n"], parse_rational(p["gamma"]))
    return _bool(all(c == 0 for c in res), "nonzero ODE residual")


def _run_eq2_10(p, opt):
    g = parse_rational(p["gamma"])
    return _numeric(max(num.gegenbauer_weight_identity(g, x) for x in WEIGHT_IDENTITY_X), TOL_FD)


def _run_eq3_1(p, opt):
    ctx = _ctx(p)
    vals = [num.weight_shift_check(ctx, t, opt.trunc) for t in num.RESIDUAL_THETAS]
    return _numeric(_max_or_none(v for d in vals for v in d.values()), TOL_RESIDUAL)


def _run_eq3_2(p, opt):
    ctx = _ctx(p)
    n = p["n"]
    return _eigen(ops.sl_weightfree_operator(ctx), ultraspherical(n, ctx), weightfree_eigenvalue(ctx, n))


def _run_eq3_4(p, opt):
    ctx = _ctx(p)
    k_max = p["k_max"]
    bad = [k for k in range(-k_max, k_max + 1) if not ops.shift_commutation(ctx, k)]
    return _bool(not bad, f"fails for exponents {bad}")


_CHAIN_FORMS: Dict[str, Callable[[QContext], ops.QOperator]] = {
    "weightfree": ops.sl_weightfree_operator,
    "sine-free": ops.sl_sine_free_form,
    "expanded": ops.sl_expanded_form,
    "commuted": ops.sl_commuted_form,
    "collected": ops.sl_collected_form,
    "factorized": ops.sl_factorized_form,
}


def _operator_outcome(a: ops.QOperator, b: ops.QOperator, cap: int, certify: bool = False) -> Outcome:
    try:
        k = ops.first_disagreement(a, b, cap, certify)
    except NonZeroRemainder as exc:
        return Outcome("fail", remainder_degree=exc.remainder_degree, note="pole did not cancel")
    if k is None:
        return Outcome("pass", residual=0.0)
    return Outcome("fail", residual=1.0, note=f"operators differ on basis element {k}")


def _square_form(ctx, opt):
    d = _dx_beta_q(ctx, opt)
    return 2 * (d * d - (1 + ctx.beta) ** 2)


def _run_eq3_5(p, opt):
    ctx = _ctx(p)
    form = _CHAIN_FORMS[p["form"]](ctx)
    return _operator_outcome(form, _square_form(ctx, opt), p["degree_cap"])


def _run_eq3_7(p, opt):
    ctx = _ctx(p)
    n = p["n"]
    d = _dx_beta_q(ctx, opt)
    c = ultraspherical(n, ctx)
    try:
        twice = d.apply_poly(d.apply_poly(c))
    except NonZeroRemainder as exc:
        return Outcome("fail", remainder_degree=exc.remainder_degree, note="pole did not cancel")
    return _bool(twice == c * mu_n(ctx, n) ** 2, "eigenvalue mismatch")


def _run_eq3_9(p, opt):
    ctx = _ctx(p)
    n = p["n"]
    return _eigen(_dx_beta_q(ctx, opt), ultraspherical(n, ctx), mu_n(ctx, n))


def _run_eq3_10(p, opt):
    ctx = _ctx(p)
    d = _dx_beta_q(ctx, opt)
    other = {
        "averaging": ops.dx_beta_q_aw_form,
        "sine": ops.dx_beta_q_sine_form,
        "split": lambda c: ops.dx_q(c) + c.beta * ops.dx_q_reversed(c),
    }[p["form"]](ctx)
    return _operator_outcome(d, other, p["degree_cap"])


def _run_eq3_13(p, opt):
    ctx = _ctx(p)
    order = p["t_order"]
    series = gf_series(ctx, order)
    if p["part"] == "coefficients":
        bad = [n for n in range(order + 1) if series[n] != ultraspherical(n, ctx)]
        return _bool(not bad, f"coefficients differ at t^{bad[:1]}" if bad else None)
    d = _dx_beta_q(ctx, opt)
    s, b = ctx.s, ctx.beta
    # D G(t) = G(t/s) + b G(t s), coefficientwise mu_n C_n
    shifted = series.rescale_t(1 / s) + series.rescale_t(s) * b
    for n in range(order + 1):
        try:
            image = d.apply_poly(series[n])
        except NonZeroRemainder as exc:
            return Outcome("fail", remainder_degree=exc.remainder_degree, note=f"pole at t^{n}")
        if image != series[n] * mu_n(ctx, n) or image != shifted[n]:
            return Outcome("fail", residual=1.0, note=f"termwise image differs at t^{n}")
    return Outcome("pass", residual=0.0)


def _run_eq3_14(p, opt):
    ctx = _ctx(p)
    inv = ctx.inverted()
    if p["part"] == "polynomial":
        n = p["n"]
        # C_n(x; b | 1/q) = (b q)^n C_n(x; 1/b | q)
        lhs = ultraspherical(n, QContext(q=inv.q, beta=ctx.beta, s=inv.s))
        rhs = ultraspherical(n, QContext(q=ctx.q, beta=inv.beta, s=ctx.s)) * (ctx.beta * ctx.q) ** n
        return _bool(lhs == rhs, "transformation fails")
    d = _dx_beta_q(ctx, opt)
    return _operator_outcome(d, ctx.beta * ops.dx_beta_q(inv), p["degree_cap"])


def _run_limit_q1(p, opt):
    g = parse_rational(p["gamma"])
    if p["part"] == "operator":
        table = num.limit_q_to_1(g, p["degree"])
        orders = ", ".join(f"{o:.3f}" for o in table.orders)
        note = f"errors {[float(f'{e:.6g}') for e in table.error]}; observed orders [{orders}]"
        return Outcome("pass" if table.monotone else "fail", residual=table.error[-1], note=note)
    dev = num.gegenbauer_limit_deviation(p["n"], g, 1e-4)
    return _numeric(dev, TOL_GEGENBAUER_LIMIT)


def _run_eq4_1(p, opt):
    ctx = _ctx(p)
    n = p["n"]
    op = ops.shift(ctx, "plus") + ops.shift(ctx, "minus")
    return _eigen(op, chebyshev("T", n), ctx.s**n + ctx.s ** (-n))


def _run_limit_beta1(p, opt):
    ctx = _ctx(p)
    n = p["n"]
    delta = p["delta"]
    dev = num.limit_beta_to_1(n, ctx, delta)
    if p["part"] == "deviation":
        return _numeric(dev, TOL_BETA_LIMIT)
    half = num.limit_beta_to_1(n, ctx, delta / 2)
    ratio = dev / half if half else math.inf
    ok = 1.5 <= ratio <= 2.5
    return Outcome("pass" if ok else "fail", residual=ratio, note=f"deviation ratio delta vs delta/2 = {ratio:.6f}")


def _run_eigen_identity(p, opt):
    ctx = _ctx(p)
    n_max = p["n_max"]
    bad = [n for n in range(n_max + 1) if not eigenvalue_identity(ctx, n)]
    return _bool(not bad, f"fails for n in {bad}")


def _distinct_q(grid):
    seen, out = set(), []
    for c in grid:
        if c.q not in seen and 0 < c.q < 1:
            seen.add(c.q)
            out.append(c.with_beta(0))
    return out


def _numeric_n(opt):
    return min(opt.n_max, NUMERIC_N_MAX)


CATALOG: Dict[str, Check] = {}


def _register(check: Check) -> None:
    CATALOG[check.check_id] = check


_register(Check(
    "hermite-reduction", "q-Hermite as the scaled beta = 0 Rogers polynomial", "exact",
    lambda g, o: _per_ctx_n(g, o, ctxs=_distinct_q(g), with_beta=False), _run_hermite_reduction))
_register(Check(
    "eq1.5", "weighted q-Hermite equation", "numeric",
    lambda g, o: _per_ctx_n(g, o, ctxs=[c for c in _distinct_q(g) if c.s is not None], n_max=_numeric_n(o)),
    _run_sl_numeric, TOL_RESIDUAL))
_register(Check(
    "eq1.7", "half-step shifts of the q-Hermite weight", "numeric",
    lambda g, o: _per_ctx(g, o, ctxs=_distinct_q(g), with_beta=False), _run_eq1_7, TOL_RESIDUAL))
_register(Check(
    "eq1.8", "weight-free q-Hermite equation", "exact",
    lambda g, o: _per_ctx_n(g, o, ctxs=_distinct_q(g), with_beta=False), _run_eq1_8))
_register(Check(
    "eq1.9", "squared first-order q-Hermite equation", "exact",
    lambda g, o: _per_ctx_n(g, o, ctxs=[c for c in _distinct_q(g) if c.s is not None], with_beta=False),
    _run_eq1_9))
_register(Check(
    "eq1.11", "first-order q-Hermite equation", "exact",
    lambda g, o: _per_ctx_n(g, o, ctxs=[c for c in _distinct_q(g) if c.s is not None], with_beta=False),
    _run_eq1_11))
_register(Check(
    "eq2.2", "orthogonality and norms", "numeric",
    lambda g, o: [
        {**_ctx_params(c), "m": m, "n": n}
        for c in _ortho_ctxs(g)
        for n in range(_numeric_n(o) + 1)
        for m in range(n + 1)
    ],
    _run_eq2_2, TOL_NORM))
_register(Check(
    "eq2.4", "weighted Rogers equation", "numeric",
    lambda g, o: _per_ctx_n(g, o, ctxs=[c for c in _ortho_ctxs(g) if c.s is not None], n_max=_numeric_n(o)),
    _run_sl_numeric, TOL_RESIDUAL))
_register(Check(
    "eq2.6", "weight recurrence in beta", "numeric",
    lambda g, o: _per_ctx(g, o, ctxs=_ortho_ctxs(g)), _run_eq2_6, TOL_RESIDUAL))
_register(Check(
    "eq2.9", "Gegenbauer differential equation", "exact",
    lambda g, o: [{"gamma": str(gm), "n": n} for gm in _gammas(g, o) for n in range(o.n_max + 1)],
    _run_eq2_9))
_register(Check(
    "eq2.10", "weight identity, reduced scalar form", "numeric",
    lambda g, o: [{"gamma": str(gm)} for gm in _gammas(g, o) if gm > Fraction(-1, 2)], _run_eq2_10, TOL_FD))
_register(Check(
    "eq3.1", "half-step shifts of the Rogers weight", "numeric",
    lambda g, o: _per_ctx(g, o, ctxs=_ortho_ctxs(g)), _run_eq3_1, TOL_RESIDUAL))
_register(Check(
    "eq3.2", "weight-free Rogers equation", "exact", _per_ctx_n, _run_eq3_2))
_register(Check(
    "eq3.4", "commutation of factors and half-step shifts", "exact",
    lambda g, o: _per_ctx(g, o, k_max=o.n_max), _run_eq3_4))
_register(Check(
    "eq3.5-operator", "rewriting chain as operator identities", "exact",
    lambda g, o: [
        {**_ctx_params(c), "form": f, "degree_cap": o.n_max} for c in _exact_ctxs(g) for f in _CHAIN_FORMS
    ],
    _run_eq3_5))
_register(Check(
    "eq3.7", "factorized second-order equation", "exact", _per_ctx_n, _run_eq3_7))
_register(Check(
    "eq3.9", "first-order equation", "exact", _per_ctx_n, _run_eq3_9))
_register(Check(
    "eq3.10", "averaging decomposition and equivalent forms of the first-order operator", "exact",
    lambda g, o: [
        {**_ctx_params(c), "form": f, "degree_cap": o.n_max}
        for c in _exact_ctxs(g)
        for f in ("averaging", "sine", "split")
    ],
    _run_eq3_10))
_register(Check(
    "eq3.13", "generating function", "exact",
    lambda g, o: [
        {**_ctx_params(c), "part": part, "t_order": min(o.n_max, SERIES_T_ORDER) or 1}
        for c in _exact_ctxs(g)
        if not c.formal
        for part in ("coefficients", "termwise")
    ],
    _run_eq3_13))
_register(Check(
    "eq3.14", "q -> 1/q transformation and its operator form", "exact",
    lambda g, o: [
        {**_ctx_params(c), "part": "polynomial", "n": n}
        for c in _exact_ctxs(g) if c.beta != 0
        for n in range(o.n_max + 1)
    ] + [
        {**_ctx_params(c), "part": "operator", "degree_cap": min(o.n_max, 15)}
        for c in _exact_ctxs(g) if c.beta != 0
    ],
    _run_eq3_14))
_register(Check(
    "eigenvalue-identity", "mu_n^2 - (1+beta)^2 = (q^-n - 1)(1 - beta^2 q^n)", "exact",
    lambda g, o: _per_ctx(g, o, n_max=max(EIGEN_N_MAX, o.n_max)), _run_eigen_identity))
_register(Check(
    "sec3.limit-q1", "q -> 1 limits: operator and Gegenbauer coefficients", "numeric",
    lambda g, o: [
        {"gamma": str(gm), "part": "operator", "degree": min(o.n_max, 6)} for gm in _gammas(g, o)
    ] + [
        {"gamma": str(gm), "part": "coefficients", "n": n}
        for gm in _gammas(g, o)
        for n in range(min(o.n_max, GEGENBAUER_LIMIT_N) + 1)
    ],
    _run_limit_q1, TOL_GEGENBAUER_LIMIT))
_register(Check(
    "sec4.eq4.1", "Chebyshev-T difference equation", "exact",
    lambda g, o: _per_ctx_n(g, o, ctxs=[c for c in _distinct_q(g) if c.s is not None], with_beta=False),
    _run_eq4_1))
_register(Check(
    "sec4.limit-beta1", "beta -> 1 Chebyshev-T limit", "numeric",
    lambda g, o: [
        {**_ctx_params(c, with_beta=False), "n": n, "delta": 1e-6, "part": part}
        for c in _distinct_q(g)
        for n in range(1, min(o.n_max, BETA_LIMIT_N) + 1)
        for part in (("deviation", "linear-rate") if n > 1 else ("deviation",))
    ],
    _run_limit_beta1, TOL_BETA_LIMIT))


# runner

def select(pattern: str) -> List[str]:
    patterns = [p.strip() for p in pattern.split(",") if p.strip()] or ["*"]
    ids = sorted(cid for cid in CATALOG if any(fnmatch.fnmatchcase(cid, p) for p in patterns))
    if not ids:
        raise UsageError(f"filter {pattern!r} matches no check; known: {', '.join(sorted(CATALOG))}")
    return ids


def _sort_key(check_id: str, params: dict):
    def norm(v):
        if isinstance(v, (int, float)):
            return (0, Fraction(v), "")
        try:
            return (0, Fraction(v), "")
        except (TypeError, ValueError):
            return (1, Fraction(0), str(v))

    return check_id, tuple((k, norm(v)) for k, v in sorted(params.items()))


def execute_case(check_id: str, params: dict, opt: Options) -> CaseRecord:
    check = CATALOG[check_id]
    t0 = time.perf_counter()
    try:
        out = check.run(params, opt)
    except NonZeroRemainder as exc:
        out = Outcome("fail", remainder_degree=exc.remainder_degree, note="pole did not cancel")
    ms = (time.perf_counter() - t0) * 1e3
    return CaseRecord(check_id, params, out.status, out.residual, out.remainder_degree, round(ms, 3), out.note)


def _execute_packed(args):
    return execute_case(*args)


def thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("QFACTOR_THREADS", "1")))
    except ValueError:
        return 1


def run_suite(
    filter: str = "*",
    grid: Optional[Sequence[QContext]] = None,
    n_max: int = DEFAULT_N_MAX,
    *,
    nodes: int = 512,
    epsilon: float = 1e-14,
    gammas: Optional[Sequence[Fraction]] = None,
    mutate: bool = False,
    timing: bool = True,
    workers: Optional[int] = None,
) -> VerificationReport:
    """Run every case of every selected check and collect a sorted report."""
    if n_max < 0:
        raise UsageError("n_max must be >= 0")
    ids = select(filter)
    grid = default_grid() if grid is None else list(grid)
    opt = Options(
        n_max=n_max,
        nodes=nodes,
        epsilon=epsilon,
        gammas=tuple(gammas) if gammas else DEFAULT_GAMMAS,
        mutate=mutate,
    )
    jobs = []
    for cid in ids:
        for params in CATALOG[cid].cases(grid, opt):
            jobs.append((cid, params, opt))
    jobs.sort(key=lambda j: _sort_key(j[0], j[1]))
    workers = thread_cap() if workers is None else workers
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_execute_packed, jobs, chunksize=8))
    else:
        records = [execute_case(*j) for j in jobs]
    if not timing:
        for r in records:
            r.ms = 0.0
    options = {
        "filter": filter,
        "n_max": n_max,
        "nodes": nodes,
        "epsilon": epsilon,
        "gammas": [str(g) for g in opt.gammas],
        "grid": [c.params() for c in grid],
        "mutate": mutate,
    }
    return VerificationReport(records, {cid: CATALOG[cid].anchor for cid in ids}, options)


# tables

def _fmt_float(x: float) -> str:
    return format(x, ".17g")


def table_rows(kind: str, ctx: QContext, n_max: int, opt: Optional[Options] = None) -> Tuple[List[str], List[list]]:
    opt = opt or Options()
    if kind == "eigenvalues":
        header = ["n", "mu_n", "lambda_n", "weightfree_eigenvalue"]
        rows = [
            [n, str(mu_n(ctx, n)) if ctx.s is not None else "", str(lambda_n(ctx, n)), str(weightfree_eigenvalue(ctx, n))]
            for n in range(n_max + 1)
        ]
    elif kind == "coefficients":
        header = ["n", "power", "coefficient"]
        rows = [
            [n, k, str(c)]
            for n in range(n_max + 1)
            for k, c in sorted(ultraspherical(n, ctx).items(), reverse=True)
        ]
    elif kind == "norms":
        header = ["n", "norm_inverse", "quadrature"]
        gram = num.gram_matrix(n_max, ctx, opt.grid_q, opt.trunc)
        rows = [
            [n, _fmt_float(num.norm_inverse(n, ctx, opt.trunc)), _fmt_float(float(gram[n, n]))]
            for n in range(n_max + 1)
        ]
    else:
        raise UsageError(f"unknown table kind {kind!r}")
    return header, rows


def emit_table(kind: str, ctx: QContext, n_max: int, fmt: str = "csv", opt: Optional[Options] = None) -> str:
    header, rows = table_rows(kind, ctx, n_max, opt)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    if fmt == "json":
        doc = {"kind": kind, "context": ctx.params(), "rows": [dict(zip(header, r)) for r in rows]}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    raise UsageError(f"unknown format {fmt!r}")
