"""Command-line entry point: ``qfactor {verify,table,eval,series}``.

Exit codes: 0 success / all checks passed, 1 a check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from itertools import product
from pathlib import Path
from typing import List, Optional, Sequence

from . import operators as ops
from .exact import NonZeroRemainder, parse_rational
from .families import FAMILIES, PolySpec, gf_series, to_x_basis, ultraspherical
from .qkernel import DEFAULT_N_MAX, QContext, default_grid
from .verify import CATALOG, Options, UsageError, emit_table, run_suite

log = logging.getLogger("qfactor")

OPERATORS = {
    "dx_beta_q": ops.dx_beta_q,
    "dx_q": ops.dx_q,
    "averaging": ops.averaging_Aq,
    "askey_wilson": ops.askey_wilson_Dq,
    "weightfree": ops.sl_weightfree_operator,
    "hermite_weightfree": ops.hermite_weightfree_operator,
}


MAX_FAILURE_LINES = 10


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 2 with a short message, like argparse, but routable
        raise UsageError(message)


def _rational_list(text: str) -> List:
    return [parse_rational(t) for t in text.split(",") if t.strip()]


def _add_ctx_args(p: argparse.ArgumentParser, lists: bool = False) -> None:
    what = "comma-separated list of rationals" if lists else "rational p/q"
    p.add_argument("--s", help=f"square root of q ({what})")
    p.add_argument("--q", help=f"q itself ({what}); alternative to --s")
    p.add_argument("--beta", help=f"beta ({what})")
    p.add_argument("--gamma", help=f"gamma ({what})")


def _grid_from_args(args) -> Optional[List[QContext]]:
    if args.s is None and args.q is None and args.beta is None and args.gamma is None:
        return None
    if args.s is not None and args.q is not None:
        raise UsageError("give --s or --q, not both")
    betas = _rational_list(args.beta) if args.beta else [parse_rational(0)]
    gammas = _rational_list(args.gamma) if args.gamma else [None]
    if args.s is None and args.q is None:
        base = [(c.s, None) for c in default_grid(beta_values=[0])]
    elif args.s is not None:
        base = [(s, None) for s in _rational_list(args.s)]
    else:
        base = [(None, q) for q in _rational_list(args.q)]
    grid = []
    for (s, q), b, g in product(base, betas, gammas):
        grid.append(QContext.from_s(s, b, g) if s is not None else QContext(q=q, beta=b, gamma=g))
    return grid


def _single_ctx(args) -> QContext:
    grid = _grid_from_args(args)
    if not grid or len(grid) != 1:
        raise UsageError("this command needs exactly one context (--s or --q, optional --beta/--gamma)")
    return grid[0]


def _write(text: str, out: Optional[str]) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qfactor", description="Exact verification of the factorized q-difference equation for Rogers polynomials.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run the identity catalog and write a JSON report")
    _add_ctx_args(v, lists=True)
    v.add_argument("--filter", default="*", help="check-id glob(s), comma-separated (default: all)")
    v.add_argument("--n-max", type=int, default=DEFAULT_N_MAX)
    v.add_argument("--nodes", type=int, default=512, help="quadrature nodes")
    v.add_argument("--epsilon", type=float, default=1e-14, help="infinite-product tail tolerance")
    v.add_argument("--out", help="report path (default: stdout)")
    v.add_argument("--no-timing", action="store_true", help="zero the ms field for byte-stable reports")
    v.add_argument("--mutate", action="store_true", help="perturb one factor of the first-order operator (falsification run)")
    v.add_argument("--list", action="store_true", help="list catalog ids and exit")

    t = sub.add_parser("table", help="tabulate eigenvalues, coefficients or norms")
    t.add_argument("kind", choices=["eigenvalues", "coefficients", "norms"])
    _add_ctx_args(t)
    t.add_argument("--n-max", type=int, default=DEFAULT_N_MAX)
    t.add_argument("--format", choices=["csv", "json"], default="csv")
    t.add_argument("--nodes", type=int, default=512)
    t.add_argument("--epsilon", type=float, default=1e-14)
    t.add_argument("--out")

    e = sub.add_parser("eval", help="build one polynomial, optionally apply an operator")
    e.add_argument("family", choices=FAMILIES)
    e.add_argument("n", type=int)
    _add_ctx_args(e)
    e.add_argument("--operator", choices=sorted(OPERATORS))
    e.add_argument("--format", choices=["text", "json"], default="text")
    e.add_argument("--out")

    s = sub.add_parser("series", help="dump the generating-function expansion")
    _add_ctx_args(s)
    s.add_argument("--t-order", type=int, default=10)
    s.add_argument("--format", choices=["text", "json"], default="text")
    s.add_argument("--out")
    return parser


def _cmd_verify(args) -> int:
    if args.list:
        for cid in sorted(CATALOG):
            print(f"{cid}\t{CATALOG[cid].mode}\t{CATALOG[cid].anchor}")
        return 0
    grid = _grid_from_args(args)
    report = run_suite(
        args.filter,
        grid,
        args.n_max,
        nodes=args.nodes,
        epsilon=args.epsilon,
        mutate=args.mutate,
        timing=not args.no_timing,
    )
    _write(report.dumps(), args.out)
    summ = report.summary
    log.info("%d cases: %d passed, %d failed, %d skipped", summ["total"], summ["passed"], summ["failed"], summ["skipped"])
    failures = report.failures()
    for c in failures[:MAX_FAILURE_LINES]:
        log.warning("FAIL %s %s %s", c.check_id, json.dumps(c.params, sort_keys=True), c.note or "")
    if len(failures) > MAX_FAILURE_LINES:
        log.warning("... and %d more failures (see the report)", len(failures) - MAX_FAILURE_LINES)
    return 0 if report.ok else 1


def _cmd_table(args) -> int:
    ctx = _single_ctx(args)
    if args.kind == "eigenvalues" and ctx.s is None:
        raise UsageError("eigenvalue tables need a rational s")
    opt = Options(nodes=args.nodes, epsilon=args.epsilon)
    try:
        text = emit_table(args.kind, ctx, args.n_max, args.format, opt)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _write(text, args.out)
    return 0


def _cmd_eval(args) -> int:
    ctx = None
    if args.s is not None or args.q is not None:
        ctx = _single_ctx(args)
    if args.family == "gegenbauer":
        if args.gamma is None:
            raise UsageError("gegenbauer needs --gamma")
        gamma = parse_rational(args.gamma)
        ctx = ctx or QContext(q=parse_rational("1/4"), gamma=gamma)
        ctx = QContext(q=ctx.q, beta=ctx.beta, gamma=gamma, s=ctx.s)
    try:
        poly = PolySpec(args.family, args.n, ctx).build()
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    doc = {"family": args.family, "n": args.n, "z_form": str(poly), "x_coefficients": [str(c) for c in to_x_basis(poly)]}
    status = 0
    if args.operator:
        if ctx is None:
            raise UsageError("operators need a context")
        try:
            image = OPERATORS[args.operator](ctx).apply_poly(poly)
        except NonZeroRemainder as exc:
            doc["operator"] = args.operator
            doc["error"] = str(exc)
            status = 1
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        else:
            doc["operator"] = args.operator
            doc["image_z_form"] = str(image)
            lead = poly.coeff(poly.max_deg) if poly else 0
            if poly and image == poly * (image.coeff(poly.max_deg) / lead):
                doc["eigenvalue"] = str(image.coeff(poly.max_deg) / lead)
    if args.format == "json":
        _write(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    else:
        _write("".join(f"{k}: {v}\n" for k, v in doc.items()), args.out)
    return status


def _cmd_series(args) -> int:
    ctx = _single_ctx(args)
    try:
        series = gf_series(ctx, args.t_order)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rows = [
        {"n": n, "coefficient": str(series[n]), "matches_definition": series[n] == ultraspherical(n, ctx)}
        for n in range(args.t_order + 1)
    ]
    if args.format == "json":
        text = json.dumps({"context": ctx.params(), "t_order": args.t_order, "coefficients": rows}, indent=2, sort_keys=True) + "\n"
    else:
        text = "".join(f"t^{r['n']}: {r['coefficient']}{'' if r['matches_definition'] else '   [MISMATCH]'}\n" for r in rows)
    _write(text, args.out)
    return 0 if all(r["matches_definition"] for r in rows) else 1


COMMANDS = {"verify": _cmd_verify, "table": _cmd_table, "eval": _cmd_eval, "series": _cmd_series}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"qfactor: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"qfactor: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
