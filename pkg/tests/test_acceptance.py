"""Acceptance criteria, one test each, at their stated tolerances.

Every test prints a single PASS/FAIL line; the lines are also repeated in
the pytest terminal summary.
"""

import time
from fractions import Fraction as F

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from qfactor import numerics as nm
from qfactor import operators as ops
from qfactor.qkernel import QContext, default_grid
from qfactor.verify import run_suite

GRID = default_grid()
GAMMAS = [F(1, 2), F(1), F(3, 2), F(2)]
TWO_CONTEXTS = [QContext.from_s(F(1, 2), F(1, 2)), QContext.from_s(F(3, 5), F(-1, 3))]


def record(number, title, ok, detail):
    line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def suite_ok(report):
    s = report.summary
    return report.ok and s["total"] > 0, f"{s['passed']}/{s['total']} cases passed, {s['skipped']} skipped"


def test_criterion_1_first_order_equation():
    t0 = time.perf_counter()
    report = run_suite("eq3.9", GRID, 20, timing=False)
    elapsed = time.perf_counter() - t0
    ok, detail = suite_ok(report)
    record(1, "first-order equation, n <= 20, 12 contexts, exact", ok and elapsed < 60, f"{detail} in {elapsed:.1f}s (< 60s)")


def test_criterion_2_factorization():
    report = run_suite("eq3.7", GRID, 20, timing=False)
    ok, detail = suite_ok(report)
    mismatches = [
        str(ctx) for ctx in GRID
        if not ops.operator_equal(ops.sl_weightfree_operator(ctx), ops.sl_square_form(ctx), 20)
    ]
    record(
        2,
        "squared operator eigen-equation and L = 2[D^2 - (1+b)^2]",
        ok and not mismatches,
        f"{detail}; operator identity on degree <= 20: {len(GRID) - len(mismatches)}/{len(GRID)} contexts",
    )


def test_criterion_3_hermite_chain():
    report = run_suite("eq1.9,eq1.11,hermite-reduction", GRID, 20, timing=False)
    ok, detail = suite_ok(report)
    record(3, "q-Hermite chain and reduction at beta = 0", ok, detail)


def test_criterion_4_supporting_identities():
    report = run_suite("eq3.4,eq3.10,eq3.14,sec4.eq4.1,eq2.9,eigenvalue-identity", GRID, 20, gammas=GAMMAS, timing=False)
    ok, detail = suite_ok(report)
    record(4, "commutation, averaging, inversion, Chebyshev, Gegenbauer ODE, eigenvalue identity", ok, detail)


def test_criterion_5_generating_function():
    report = run_suite("eq3.13", TWO_CONTEXTS, 15, timing=False)
    ok, detail = suite_ok(report)
    t_orders = {c.params["t_order"] for c in report.cases}
    record(5, "generating function through t^15, 2 contexts", ok and t_orders == {15}, detail)


def test_criterion_6_orthogonality():
    ctx = QContext(q=F(1, 4), beta=F(1, 2))
    t0 = time.perf_counter()
    grid = nm.QuadratureGrid(512)
    trunc = nm.ProductTruncation(1e-14)
    off = diag = 0.0
    for n in range(9):
        for m in range(n + 1):
            v = nm.inner_product(m, n, ctx, grid, trunc)
            if m == n:
                diag = max(diag, abs(v / nm.norm_inverse(n, ctx, trunc) - 1))
            else:
                off = max(off, abs(v))
    elapsed = time.perf_counter() - t0
    ok = off < 1e-10 and diag < 1e-9 and elapsed < 10
    record(6, "orthogonality at q = 1/4, beta = 1/2, m, n <= 8", ok,
           f"max off-diagonal {off:.2e} (< 1e-10), max diagonal rel. error {diag:.2e} (< 1e-9), {elapsed:.2f}s (< 10s)")


def test_criterion_7_weighted_forms():
    report = run_suite("eq1.5,eq1.7,eq2.4,eq2.6,eq3.1", TWO_CONTEXTS, 8, timing=False)
    ok, detail = suite_ok(report)
    worst = max((c.residual for c in report.cases if c.residual is not None), default=float("nan"))
    record(7, "weighted second-order forms and weight relations", ok and worst < 1e-8, f"{detail}; max residual {worst:.2e} (< 1e-8)")


def test_criterion_8_limits():
    orders, monotone = [], True
    for g in GAMMAS:
        table = nm.limit_q_to_1(g, 6)
        monotone &= table.monotone
        orders.append(np.mean(table.orders))
    geg = max(nm.gegenbauer_limit_deviation(n, g, 1e-4) for g in GAMMAS for n in range(7))
    beta = max(nm.limit_beta_to_1(n, QContext(q=F(1, 2)), 1e-6) for n in range(1, 7))
    ok = monotone and geg < 1e-3 and beta < 1e-4
    record(8, "q -> 1 and beta -> 1 limits", ok,
           f"q->1 errors monotone={monotone}, observed orders {', '.join(f'{o:.2f}' for o in orders)}; "
           f"Gegenbauer deviation {geg:.2e} (< 1e-3); Chebyshev deviation {beta:.2e} (< 1e-4)")


def test_criterion_9_negative_control():
    report = run_suite("eq3.9", GRID, 20, mutate=True, timing=False)
    failed = [c for c in report.cases if c.status == "fail"]
    caught = [c for c in failed if c.remainder_degree is not None or c.note == "eigenvalue mismatch"]
    ok = len(failed) == len(report.cases) and len(caught) == len(failed)
    record(9, "mutated operator makes criterion 1 fail", ok,
           f"{len(failed)}/{len(report.cases)} cases fail ({len(caught)} by uncancelled pole or eigenvalue mismatch)")
