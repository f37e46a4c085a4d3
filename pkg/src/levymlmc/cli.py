"""Command line interface.

    levymlmc price --config FILE --eps EPS [--seed N] [--out PREFIX]
    levymlmc rates --config FILE --levels L --samples N [--out FILE]
    levymlmc dn    --config FILE --nlist 4,16,64,256 --paths N [--out FILE]
    levymlmc sweep --config FILE --eps-list 0.05,0.02,0.01,0.005 [--out FILE]
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from contextlib import contextmanager

from . import diagnostics as dg
from .config import load_config
from .mlmc import run_mlmc


def _floats(s):
    return [float(v) for v in s.split(",") if v.strip()]


def _ints(s):
    return [int(v) for v in s.split(",") if v.strip()]


@contextmanager
def _sink(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def cmd_price(args):
    exp = load_config(args.config)
    eps = args.eps if args.eps is not None else exp.eps
    if eps is None:
        raise SystemExit("no eps given on the command line or in [driver]")
    seed = exp.seed if args.seed is None else args.seed
    res = run_mlmc(exp.model, exp.option, eps, exp.driver, seed=seed, workers=args.workers)
    summary = dg.summary_json(res)
    if args.out:
        with open(args.out + ".json", "w") as fh:
            fh.write(summary + "\n")
        with open(args.out + "_levels.csv", "w", newline="") as fh:
            dg.write_levels_csv(res, fh)
    else:
        print(summary)
        dg.write_levels_csv(res, sys.stdout)
    return 0 if res.converged else 2


def cmd_rates(args):
    exp = load_config(args.config)
    seed = exp.seed if args.seed is None else args.seed
    rep = dg.measure_rates(
        exp.model, exp.option, args.levels, args.samples, M=exp.driver.M,
        fit_floor_level=exp.driver.fit_floor_level, seed=seed, workers=args.workers,
    )
    with _sink(args.out) as fh:
        dg.write_rates_csv([rep], fh)
    return 0


def cmd_dn(args):
    exp = load_config(args.config)
    seed = exp.seed if args.seed is None else args.seed
    rep = dg.measure_dn(exp.model, _ints(args.nlist), args.paths, args.ref_multiplier, seed=seed)
    with _sink(args.out) as fh:
        dg.write_dn_csv(rep, fh)
    return 0


def cmd_sweep(args):
    exp = load_config(args.config)
    seed = exp.seed if args.seed is None else args.seed
    pts = dg.complexity_sweep(exp.model, exp.option, _floats(args.eps_list), exp.driver,
                              seed=seed, workers=args.workers)
    with _sink(args.out) as fh:
        dg.write_sweep_csv(pts, fh)
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="levymlmc", description="MLMC for exponential Lévy models")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", required=True)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--out", default=None)

    sp = sub.add_parser("price", help="adaptive MLMC price")
    common(sp)
    sp.add_argument("--eps", type=float, default=None)
    sp.set_defaults(func=cmd_price)

    sp = sub.add_parser("rates", help="fixed-N level rates")
    common(sp)
    sp.add_argument("--levels", type=int, required=True)
    sp.add_argument("--samples", type=int, required=True)
    sp.set_defaults(func=cmd_rates)

    sp = sub.add_parser("dn", help="discrete monitoring gap moments")
    common(sp)
    sp.add_argument("--nlist", default="4,16,64,256")
    sp.add_argument("--paths", type=int, required=True)
    sp.add_argument("--ref-multiplier", type=int, default=64)
    sp.set_defaults(func=cmd_dn)

    sp = sub.add_parser("sweep", help="MLMC vs standard MC cost sweep")
    common(sp)
    sp.add_argument("--eps-list", default="0.05,0.02,0.01,0.005")
    sp.set_defaults(func=cmd_sweep)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
