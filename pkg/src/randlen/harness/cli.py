"""
Command-line interface ``randlen``.

Exit codes for ``verify``: 0 pass, 2 fail, 1 configuration or hypothesis
error. Other subcommands return 0 on success and 1 on error.
"""

import argparse
import logging
import sys

from .. import estimators
from ..rv_core import alpha_chi, chi_upper, classify_regime
from .config import ConfigError, load_config
from .io import ExportError, export_paths, import_paths, write_json
from .scenario import run_scenario
from .verify import THEOREMS, HypothesisError, verify_theorem

EXIT_PASS, EXIT_ERROR, EXIT_FAIL = 0, 1, 2


def _seed_type(s):
    v = int(s, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {s}")
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--seed", type=_seed_type, default=argparse.SUPPRESS,
        help="override the configured master seed",
    )
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(
        prog="randlen", parents=[common],
        description="Monte Carlo checks of tail and extremal indices for weighted "
        "maxima and sums of a random number of heavy-tailed terms.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run one theorem scenario")
    v.add_argument("theorem_id", choices=THEOREMS)
    v.add_argument("--config", required=True)
    v.add_argument("--out", required=True)
    v.add_argument("--workers", type=int, default=None, help="replication threads")

    s = sub.add_parser("simulate", parents=[common], help="export aggregate paths as CSV")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--workers", type=int, default=None)

    e = sub.add_parser("estimate", parents=[common], help="run an estimator on a paths CSV")
    e.add_argument("method", choices=("hill", "theta-def", "theta-intervals", "theta-blocks"))
    e.add_argument("--input", required=True)
    e.add_argument("--out", required=True)
    e.add_argument("--k-order", type=int, default=None)
    e.add_argument("--u", type=float, default=None, help="threshold (theta estimators)")
    e.add_argument(
        "--block", type=int, default=None,
        help="block size (theta-blocks); sub-block length for theta-def",
    )
    e.add_argument("--column", choices=("y_star", "y_sum"), default="y_star")

    r = sub.add_parser("regime", parents=[common], help="classify alpha*chi and print chi0")
    r.add_argument("--alpha", type=float, required=True)
    r.add_argument("--chi", type=float, required=True)
    r.add_argument("--k1", type=float, default=None)
    r.add_argument("--k", type=float, default=None)
    return p


def _cmd_verify(args):
    try:
        cfg = load_config(args.config, seed=getattr(args, "seed", None))
        report = verify_theorem(args.theorem_id, cfg, workers=args.workers)
    except (ConfigError, HypothesisError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    write_json(report.to_dict(), args.out)
    for c in report.checks:
        mark = "info" if c.kind == "info" else ("ok" if c.passed else "FAIL")
        print(f"{mark:>4}  {c.name}: estimated {c.estimated:.4g}, predicted {c.predicted}")
    print(f"{args.theorem_id}: {'PASS' if report.passed else 'FAIL'} ({report.runtime:.1f} s)")
    return EXIT_PASS if report.passed else EXIT_FAIL


def _cmd_simulate(args):
    cfg = load_config(args.config, seed=getattr(args, "seed", None))
    res = run_scenario(cfg, workers=args.workers)
    export_paths(res, args.out)
    print(
        f"wrote {res.replications} x {res.n} rows to {args.out} "
        f"(cap frequency {res.cap_frequency:.3g})"
    )
    return EXIT_PASS


def _cmd_estimate(args):
    data = import_paths(args.input)
    paths = data[args.column]
    m = args.method
    if m == "hill":
        v = paths.ravel()
        rep = estimators.hill(v[v > 0], args.k_order)
    else:
        if args.u is None:
            raise ValueError(f"{m} needs --u")
        if m == "theta-def":
            rep = estimators.theta_from_paths(paths, args.u, args.block)
        elif m == "theta-intervals":
            rep = estimators.intervals_theta(paths, args.u)
        else:
            if args.block is None:
                raise ValueError("theta-blocks needs --block")
            rep = estimators.blocks_theta(paths, args.u, args.block)
    out = rep.to_dict()
    out["input"] = str(args.input)
    out["column"] = args.column
    write_json(out, args.out)
    print(f"{rep.method}: {rep.point:.6g} (stderr {rep.stderr:.3g})")
    return EXIT_PASS


def _cmd_regime(args):
    if (args.k1 is None) != (args.k is None):
        raise ValueError("--k1 and --k must be given together")
    label = classify_regime(args.alpha, args.chi)
    print(f"regime: {label} (alpha*chi = {alpha_chi(args.alpha, args.chi):.6g})")
    if args.k1 is not None:
        print(f"chi0: {chi_upper(args.k1, args.k):.6g}")
    return EXIT_PASS


_COMMANDS = {
    "verify": _cmd_verify,
    "simulate": _cmd_simulate,
    "estimate": _cmd_estimate,
    "regime": _cmd_regime,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, HypothesisError, ExportError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
