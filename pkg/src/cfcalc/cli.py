"""Command line front end; tabular output is CSV with 17 significant digits.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numerical
failure. Data goes to stdout (or ``--out``), diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from contextlib import contextmanager

import numpy as np

from . import catalog as cat
from .checks import SUITES, run_suite
from .errors import (
    CFError,
    CompatibilityViolation,
    EvalDomainError,
    ExprSyntaxError,
    NonConvergence,
    OracleDivergence,
    WindowViolation,
)
from .expr import as_function, estimate_lipschitz, parse
from .operators import FracOrder, SampledFunction, UniformGrid, cf_derivative
from .oracle import OracleSpec, default_grading, oracle_cf_derivative
from .solver import IVP, SolverConfig, segment_join_check, solve_global
from .special import mittag_leffler_1

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

FIGURE_ALPHAS = (0.3, 0.5, 0.7, 0.9, 0.99)

_STEP_RTOL = 1e-9


class UsageError(Exception):
    pass


def fmt(value: float) -> str:
    """17 significant digits; ``-0`` is written as ``0``."""
    return format(float(value) + 0.0, ".17g")


@contextmanager
def _sink(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="", encoding="ascii") as fh:
            yield fh


def write_csv(header, rows, path=None) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([c if isinstance(c, (int, np.integer)) else fmt(c) for c in row])
    with _sink(path) as out:
        out.write(buf.getvalue())


def parse_catalog(text: str) -> cat.CatalogFunction:
    """``power:B``, ``monomial:M``, ``exp[:C]``, ``sin``, ``cos``, ``const:C``."""
    name, _, param = text.partition(":")
    try:
        if name == "power":
            return cat.Power(float(param))
        if name == "monomial":
            return cat.Monomial(int(param))
        if name == "exp":
            return cat.Exponential(float(param) if param else 1.0)
        if name == "const":
            return cat.Constant(float(param) if param else 0.0)
        if name in ("sin", "cos") and not param:
            return cat.Sine() if name == "sin" else cat.Cosine()
    except (ValueError, CFError) as exc:
        raise UsageError(f"bad --func {text!r}: {exc}") from None
    raise UsageError(f"unknown --func {text!r}")


def _count(span: float, dt: float, what: str) -> int:
    n = round(span / dt)
    if n < 0 or abs(n * dt - span) > _STEP_RTOL * max(abs(span), dt):
        raise UsageError(f"--dt must divide {what}")
    return n


def cmd_ml(args) -> int:
    print(fmt(mittag_leffler_1(args.beta, args.z)))
    return EXIT_OK


def cmd_deriv(args) -> int:
    fn = parse_catalog(args.func)
    order = FracOrder(args.alpha)
    if not args.t1 > args.t0 >= args.a:
        raise UsageError("need t1 > t0 >= a")
    if not args.dt > 0:
        raise UsageError("--dt must be > 0")
    n_out = _count(args.t1 - args.t0, args.dt, "t1 - t0")
    if args.method == "grid":
        offset = _count(args.t0 - args.a, args.dt, "t0 - a")
        grid = UniformGrid(args.a, args.dt, offset + n_out)
        sampled = SampledFunction.from_callable(lambda t: fn.value(t, args.a), grid)
        d = cf_derivative(sampled, order)
        rows = zip(d.t[offset:], d.values[offset:])
    else:
        ts = args.t0 + args.dt * np.arange(n_out + 1)
        if args.method == "analytic":
            vals = [cat.cf_derivative_closed(fn, order, args.a, t) for t in ts]
        else:
            grading = default_grading(fn.beta if isinstance(fn, cat.Power) else None)
            vals = [
                oracle_cf_derivative(OracleSpec(lambda s: fn.prime(s, args.a), args.a, t,
                                                order.alpha, grading_exponent=grading))
                for t in ts
            ]
        rows = zip(ts, vals)
    write_csv(["t", "value"], rows, args.out)
    return EXIT_OK


def cmd_figure(args) -> int:
    fn = cat.Monomial(1) if args.which == 1 else cat.Sine()
    ts = np.linspace(0.0, 2 * math.pi, args.points)
    orders = [FracOrder(a) for a in FIGURE_ALPHAS]
    rows = ([t] + [cat.cf_derivative_closed(fn, o, 0.0, t) for o in orders] for t in ts)
    write_csv(["t"] + [f"alpha={a:g}" for a in FIGURE_ALPHAS], rows, args.out)
    return EXIT_OK


def cmd_solve(args) -> int:
    try:
        expr = parse(args.rhs)
    except ExprSyntaxError as exc:
        raise UsageError(f"--rhs: {exc}") from None
    if not args.t_end > args.a:
        raise UsageError("--t-end must exceed --a")
    L = args.lipschitz
    if L is None:
        radius = 10.0 * max(1.0, abs(args.a0))
        L = estimate_lipschitz(expr, (args.a, args.t_end), (args.a0 - radius, args.a0 + radius))
        print(f"warning: no --lipschitz given, estimated L = {L:.6g} on "
              f"x in [{args.a0 - radius:g}, {args.a0 + radius:g}]", file=sys.stderr)
    ivp = IVP(as_function(expr), args.a, args.a0, L, FracOrder(args.alpha))
    cfg = SolverConfig(
        dt_grid=args.dt,
        segment_fraction=args.segment_fraction,
        picard_tol=args.picard_tol,
        auto_correct=args.auto_correct,
    )
    traj = solve_global(ivp, args.t_end, cfg)
    if traj.note:
        print(f"note: {traj.note}", file=sys.stderr)
    write_csv(["t", "value", "segment"],
              zip(traj.t, traj.values, (int(s) for s in traj.segment)), args.out)
    print(
        f"segments={traj.n_segments} max_picard_iters={max(traj.picard_iters)} "
        f"max_residual={traj.max_residual:.3e} segment_join_check={segment_join_check(traj, ivp):.3e}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_suite(args.suite)
    for r in results:
        print(f"[{'PASS' if r.passed else 'FAIL'}] {r.suite}: {r.name} ({r.detail})")
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_OK if not failed else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cfcalc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    ml = sub.add_parser("ml", help="evaluate E_{1,beta}(z)")
    ml.add_argument("--beta", type=float, required=True)
    ml.add_argument("--z", type=float, required=True)
    ml.set_defaults(run=cmd_ml)

    d = sub.add_parser("deriv", help="CF derivative trace of a catalog function")
    d.add_argument("--func", required=True,
                   help="power:B | monomial:M | exp[:C] | sin | cos | const:C")
    d.add_argument("--alpha", type=float, required=True)
    d.add_argument("--a", type=float, default=0.0, help="lower limit")
    d.add_argument("--t0", type=float, required=True)
    d.add_argument("--t1", type=float, required=True)
    d.add_argument("--dt", type=float, required=True)
    d.add_argument("--method", choices=("analytic", "grid", "oracle"), default="analytic")
    d.add_argument("--out")
    d.set_defaults(run=cmd_deriv)

    f = sub.add_parser("figure", help="closed-form curves of D^alpha t (1) or D^alpha sin t (2)")
    f.add_argument("which", type=int, choices=(1, 2))
    f.add_argument("--points", type=int, default=201)
    f.add_argument("--out")
    f.set_defaults(run=cmd_figure)

    s = sub.add_parser("solve", help="solve D^alpha f = phi(t, f) globally in time")
    s.add_argument("--rhs", required=True, help="expression in t and x")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--a", type=float, default=0.0)
    s.add_argument("--a0", type=float, required=True)
    s.add_argument("--lipschitz", type=float)
    s.add_argument("--t-end", dest="t_end", type=float, required=True)
    s.add_argument("--dt", type=float, required=True)
    s.add_argument("--segment-fraction", dest="segment_fraction", type=float, default=0.5)
    s.add_argument("--picard-tol", dest="picard_tol", type=float, default=1e-12)
    s.add_argument("--auto-correct", dest="auto_correct", action="store_true")
    s.add_argument("--out")
    s.set_defaults(run=cmd_solve)

    v = sub.add_parser("verify", help="run the self-verification suites")
    v.add_argument("--suite", choices=tuple(SUITES) + ("all",), default="all")
    v.set_defaults(run=cmd_verify)
    return p


def _validate(parser, args):
    if args.command == "ml" and not args.beta > 0:
        parser.error("beta must be > 0")
    if getattr(args, "alpha", None) is not None and not 0.0 < args.alpha < 1.0:
        parser.error("alpha must be in (0, 1)")
    if args.command == "solve":
        if not args.dt > 0:
            parser.error("--dt must be > 0")
        if not 0.0 < args.segment_fraction < 1.0:
            parser.error("--segment-fraction must be in (0, 1)")
        if args.lipschitz is not None and args.lipschitz < 0:
            parser.error("--lipschitz must be >= 0")
    if args.command == "figure" and args.points < 2:
        parser.error("--points must be >= 2")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(parser, args)
    try:
        return args.run(args)
    except UsageError as exc:
        parser.error(str(exc))
    except WindowViolation as exc:
        print(f"error: window violation: {exc}", file=sys.stderr)
    except CompatibilityViolation as exc:
        print(f"error: compatibility violation: {exc}", file=sys.stderr)
    except NonConvergence as exc:
        print(f"error: no convergence: {exc}", file=sys.stderr)
    except OracleDivergence as exc:
        print(f"error: oracle divergence: {exc}", file=sys.stderr)
    except (EvalDomainError, CFError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
