"""Command line entry point.

    tailstats figure <name> [flags]
    tailstats transition-scan | poisson-probe | saturation-probe | freeprob-check [flags]
    tailstats reference <density> [--lo --hi --points --param key=value]

Exit codes: 0 success, 2 configuration error, 3 numerical non-convergence.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import InvalidConfig, load_config, make_config
from .densities import DENSITIES
from .experiments import reference_csv, run_experiment, write_result
from .special import NonConvergence

log = logging.getLogger("tailstats")

FIGURES = ["macro", "softedge", "tail", "tail-individual", "spacing-sum-vs-direct",
           "cauchy-compare", "stable-density", "stable-spacing"]
PROBES = ["transition-scan", "poisson-probe", "saturation-probe", "freeprob-check"]

EXIT_OK, EXIT_CONFIG, EXIT_NONCONVERGENCE = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _global_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", type=Path, help="flat key=value config file")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--n", type=str, help="matrix dimension (comma list for N scans)")
    p.add_argument("--workers", type=int)
    p.add_argument("--out", type=str)
    p.add_argument("--no-cache", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tailstats", description="Heavy-tailed random matrix experiments")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    fig = sub.add_parser("figure", help="reproduce one figure-level experiment")
    fig.add_argument("name", choices=FIGURES)
    _global_flags(fig)
    for name in PROBES:
        _global_flags(sub.add_parser(name))
    ref = sub.add_parser("reference", help="emit an analytic curve as CSV")
    ref.add_argument("density", choices=sorted(DENSITIES))
    ref.add_argument("--lo", type=float, default=0.0)
    ref.add_argument("--hi", type=float, default=5.0)
    ref.add_argument("--points", type=int, default=201)
    ref.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                     help="density parameter such as M=2, L=3, alpha=1.5, c=0.8")
    ref.add_argument("--out", type=str, help="output file (default stdout)")
    return parser


def _overrides(args) -> dict:
    o = {"seed": args.seed, "trials": args.trials, "workers": args.workers, "out": args.out}
    if args.n is not None:
        try:
            o["n"] = [int(v) for v in args.n.split(",") if v]
        except ValueError as exc:
            raise InvalidConfig(f"--n: {exc}") from exc
    if args.no_cache:
        o["cache"] = False
    return o


def _reference_params(items) -> dict:
    out = {}
    for it in items:
        if "=" not in it:
            raise InvalidConfig(f"--param expects KEY=VALUE, got {it!r}")
        k, v = it.split("=", 1)
        out[k] = int(v) if k in ("M", "L") else float(v)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "reference":
            if args.points < 2 or not args.hi > args.lo:
                raise InvalidConfig("need hi > lo and at least two points")
            try:
                text = reference_csv(args.density, args.lo, args.hi, args.points, **_reference_params(args.param))
            except TypeError as exc:
                raise InvalidConfig(f"bad parameter for {args.density}: {exc}") from exc
            if args.out:
                Path(args.out).write_text(text)
            else:
                sys.stdout.write(text)
            return EXIT_OK
        experiment = args.name if args.command == "figure" else args.command
        file_values = load_config(args.config) if args.config else {}
        cfg = make_config(experiment, file_values, _overrides(args))
        log.info("running %s with %d trials on %d workers", experiment, cfg.trials, cfg.workers)
        result = run_experiment(cfg)
        for p in write_result(result, cfg.output_dir):
            log.info("wrote %s", p)
        return EXIT_OK
    except InvalidConfig as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NonConvergence as exc:
        print(f"numerical non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
