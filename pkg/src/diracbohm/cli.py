"""Command line: ``diracbohm {eigensolve,run,export}``."""
from __future__ import annotations

import argparse
import sys

from .config import ConfigError, ExperimentConfig, load_config, parse_config
from .experiments import export_figures_data, run_experiment


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="diracbohm", description="Pilot-wave Dirac fermion simulations.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, helptext in (("eigensolve", "list box bound states and beta' values"),
                           ("run", "run the experiment described by a config file")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--config", required=(name == "run"), help="experiment config file")
        sp.add_argument("--workers", type=int, help="worker processes (default: DIRACBOHM_WORKERS or 1)")
        sp.add_argument("--out", help="output directory (overrides the config)")
        sp.add_argument("--lattice", type=int, help="lattice points per side (override)")
        sp.add_argument("--precision", type=float, help="backtracking precision (override)")
    sp = sub.add_parser("export", help="write per-figure data files for a finished run")
    sp.add_argument("--out", required=True, help="run directory to export")
    sp.add_argument("--config", help="ignored; accepted for symmetry")
    return ap


def _load(args) -> ExperimentConfig:
    if args.config:
        cfg = load_config(args.config)
    else:
        cfg = parse_config("experiment = eigensolve\noutput = eigensolve\n")
    if args.command == "eigensolve" and cfg.experiment != "eigensolve":
        # reuse the physical parameters of any box config
        cfg = ExperimentConfig("eigensolve", cfg.output, cfg.workers, cfg.seed, cfg.m, cfg.omega,
                               cfg.v0, cfg.r_prime, source=cfg.source)
    return cfg.with_overrides(args.lattice, args.precision, args.workers, args.out)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    log = lambda msg: print(msg, file=sys.stderr)  # noqa: E731
    try:
        if args.command == "export":
            for p in export_figures_data(args.out):
                print(p)
            return 0
        cfg = _load(args)
        res = run_experiment(cfg, log=log)
        if args.command == "eigensolve":
            for k, i, e, bp in res.summary["states"]:
                print(f"k={k:+g} n={i} E={e:.15f} beta'={bp:.15g}")
        return res.status
    except ConfigError as exc:
        for err in exc.errors:
            print(f"config error: {err}", file=sys.stderr)
        return 2
    except (OSError, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
