"""Command-line verification harness.

Subcommands:

  verify [SELECTOR]    run registry checks (all, an id, or an id prefix)
  solve-bgg            polynomial solutions of the rank-k overdetermined
                       operator
  kernel               polynomial kernel of the Dirac operator
  divide               right division of built-in operators by the Dirac
                       operator
  report               re-render a saved JSONL report as a table

Configuration is a flat key=value file (keys: seed, workers,
kernel_ydeg, kernel_xdeg, bgg_margin), found via --config or the
SYMPDIRAC_CONFIG environment variable; command-line flags override file
values.  Exact rationals are rendered as p/q.  Exit codes: 0 all
verified, 1 any failed, 2 any inconclusive, 3 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .poly import Poly, Q
from .registry import RunConfig, exit_code, run

CONFIG_ENV = "SYMPDIRAC_CONFIG"
USAGE_ERROR = 3


def load_config(path=None):
    cfg = RunConfig()
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return cfg
    if not os.path.exists(path):
        raise FileNotFoundError("config file %s not found" % path)
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError("config lines must be key=value: %r" % line)
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key in ("seed", "workers", "kernel_ydeg", "kernel_xdeg", "bgg_margin"):
                setattr(cfg, key, int(value))
            else:
                raise ValueError("unknown config key %r" % key)
    return cfg


def q_str(x) -> str:
    x = Fraction(x)
    return "%d/%d" % (x.numerator, x.denominator) if x.denominator != 1 else str(x.numerator)


def poly_str(p: Poly) -> str:
    return str(p)


def render_table(records, out):
    width = max([len(r["id"]) for r in records] + [4])
    out.write("%-*s  %-14s  %s\n" % (width, "id", "status", "witness"))
    out.write("%s\n" % ("-" * (width + 40)))
    for r in records:
        out.write("%-*s  %-14s  %s\n" % (width, r["id"], r["status"], r["witness"]))
    counts = {}
    for r in records:
        counts[r["status"]] = counts.get(r["status"], 0) + 1
    out.write("%s\n" % ("-" * (width + 40)))
    out.write("totals: %s\n" % ", ".join("%s=%d" % kv for kv in sorted(counts.items())))


def cmd_verify(args):
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    if args.workers is not None:
        cfg.workers = args.workers
    try:
        reports = run(args.selector, cfg)
    except KeyError as exc:
        print("error: %s" % exc.args[0], file=sys.stderr)
        return USAGE_ERROR
    records = [r.record() for r in reports]
    if args.report:
        with open(args.report, "w") as fh:
            for r in records:
                fh.write(json.dumps(r, sort_keys=True) + "\n")
    if args.format == "jsonl":
        for r in records:
            print(json.dumps(r, sort_keys=True))
    else:
        render_table(records, sys.stdout)
    return exit_code(reports)


def cmd_solve_bgg(args):
    from .projective import solve_phi
    degcap = args.deg_cap if args.deg_cap is not None else 2 * args.k
    basis, dim = solve_phi(args.k, degcap)
    print("rank %d, degree cap %d: dimension %d" % (args.k, degcap, dim))
    for n, v in enumerate(basis):
        entries = ", ".join("%s: %s" % ("".join(map(str, ms)), poly_str(p))
                            for ms, p in sorted(v.entries.items()))
        print("  [%02d] {%s}" % (n, entries))
    return 0


def cmd_kernel(args):
    from .diffop import kernel_basis
    basis = kernel_basis(args.ydeg, args.xdeg)
    print("kernel basis (ydeg <= %d, xdeg <= %d): dimension %d"
          % (args.ydeg, args.xdeg, len(basis)))
    for n, f in enumerate(basis):
        print("  [%02d] %s" % (n, f))
    return 0


def _builtin_operator(name):
    from .diffop import DiffOp, compose, dirac
    from .spinor import W_MINUS_3_4, W_MINUS_9_4
    from .weyl import G2
    from . import symmetry as sym
    if name == "dirac":
        return dirac()
    if name == "gamma2-dirac":
        return compose(DiffOp.from_weyl(G2, W_MINUS_9_4, W_MINUS_9_4), dirac())
    if name == "identity":
        return DiffOp.identity(W_MINUS_3_4)
    if name.startswith("symmetry-product:"):
        i, j = (int(t) for t in name.split(":", 1)[1].split(","))
        svs = sym.first_order_ops()
        return compose(svs[i], svs[j])
    if name.startswith("main-relation:"):
        i, j = (int(t) for t in name.split(":", 1)[1].split(","))
        basis = sym.sl3_basis()
        si, sj = sym.first_order_ops()[i], sym.first_order_ops()[j]
        o = sym.cartan_op(i, j)
        sbr = sym.contract_field_opmatrix(sym.bracket(basis[i], basis[j]),
                                          sym._dd()).with_weights(W_MINUS_3_4, W_MINUS_3_4)
        pair = sym.killing_pairing(basis[i], basis[j])
        return compose(si, sj) - o - sbr.scale(Q(1, 2)) \
            + DiffOp.identity(W_MINUS_3_4).scale(Q(3, 16) * pair)
    raise KeyError(name)


def cmd_divide(args):
    from .diffop import right_divide
    try:
        op = _builtin_operator(args.op)
    except (KeyError, ValueError, IndexError):
        print("error: unknown operator %r" % args.op, file=sys.stderr)
        return USAGE_ERROR
    res = right_divide(op)
    print("caps:", {k: v for k, v in res.caps.items()})
    if res:
        print("status: divisible")
        print("quotient:", res.quotient)
        return 0
    print("status: %s" % res.status)
    print("detail: %s" % res.detail)
    return 2


def cmd_report(args):
    with open(args.input) as fh:
        records = [json.loads(line) for line in fh if line.strip()]
    render_table(records, sys.stdout)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sympdirac",
        description="exact verification harness for the symplectic Dirac "
                    "symmetry calculus on the plane")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("verify", help="run registry checks")
    p.add_argument("selector", nargs="?", default="all",
                   help="'all', a check id, or an id prefix")
    p.add_argument("--config", help="path to a key=value config file")
    p.add_argument("--seed", type=int, help="seed for randomized checks")
    p.add_argument("--workers", type=int, help="parallel worker count")
    p.add_argument("--report", help="write a JSONL report to this path")
    p.add_argument("--format", choices=("table", "jsonl"), default="table")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("solve-bgg", help="solve the rank-k operator")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--deg-cap", type=int, default=None)
    p.set_defaults(fn=cmd_solve_bgg)

    p = sub.add_parser("kernel", help="polynomial Dirac kernel")
    p.add_argument("--ydeg", type=int, required=True)
    p.add_argument("--xdeg", type=int, required=True)
    p.set_defaults(fn=cmd_kernel)

    p = sub.add_parser("divide", help="right-divide a built-in operator")
    p.add_argument("--op", required=True,
                   help="dirac | gamma2-dirac | identity | "
                        "symmetry-product:i,j | main-relation:i,j")
    p.set_defaults(fn=cmd_divide)

    p = sub.add_parser("report", help="render a saved JSONL report")
    p.add_argument("--input", required=True)
    p.set_defaults(fn=cmd_report)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "command", None):
        parser.print_help()
        return USAGE_ERROR
    try:
        return args.fn(args)
    except (FileNotFoundError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
