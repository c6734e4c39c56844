"""Command-line entry point.

Subcommands: run, sweep-conventions, compare, resume. Exit codes: 0 on
success or target reached, 1 when a run stops at the generation limit, 2 for
configuration errors, 3 for I/O errors.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import RunConfig, apply_overrides, parse_config
from .errors import ConfigurationError
from .harness import (
    compare_runs,
    convention_sweep,
    format_comparison,
    format_sweep,
    resume_experiment,
    run_experiment,
)
from .report import RunReport

EXIT_OK = 0
EXIT_GENERATION_LIMIT = 1
EXIT_CONFIG_ERROR = 2
EXIT_IO_ERROR = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isingsynth",
        description="Evolutionary synthesis of quantum circuits in the Ising gate model",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one evolution experiment")
    run_p.add_argument("--config", type=Path, help="key-value config file")
    run_p.add_argument("--seed", type=int)
    run_p.add_argument("--algo", choices=["qeqea", "ga"])
    run_p.add_argument("--target", help="target name (CNOT, Toffoli, Peres, CCCNOT) or file")
    run_p.add_argument("--max-generations", type=int, dest="max_generations")
    run_p.add_argument("--out", dest="out_dir")

    sub.add_parser("sweep-conventions", help="diagnose a reference CNOT circuit")

    cmp_p = sub.add_parser("compare", help="tabulate two or more run reports")
    cmp_p.add_argument("reports", nargs="+", type=Path, help="report.json files")

    res_p = sub.add_parser("resume", help="continue from a checkpoint")
    res_p.add_argument("checkpoint", type=Path)
    res_p.add_argument("--max-generations", type=int, dest="max_generations")

    return parser


def _cmd_run(args) -> int:
    cfg = parse_config(args.config) if args.config else RunConfig()
    cfg = apply_overrides(
        cfg,
        seed=args.seed,
        algo=args.algo,
        target=args.target,
        max_generations=args.max_generations,
        out_dir=args.out_dir,
    )
    report = run_experiment(cfg)
    print(
        f"{report.algorithm} on {report.target}: fitness {report.final_fitness:.6f} "
        f"after {len(report.records)} generations ({report.stop_reason})"
    )
    return EXIT_OK if report.stop_reason == "target-reached" else EXIT_GENERATION_LIMIT


def _cmd_compare(args) -> int:
    reports = [RunReport.load(p) for p in args.reports]
    print(format_comparison(compare_runs(reports)))
    return EXIT_OK


def _cmd_resume(args) -> int:
    report = resume_experiment(args.checkpoint, max_generations=args.max_generations)
    print(
        f"resumed {report.algorithm} on {report.target}: fitness "
        f"{report.final_fitness:.6f} after {len(report.records)} generations "
        f"({report.stop_reason})"
    )
    return EXIT_OK if report.stop_reason == "target-reached" else EXIT_GENERATION_LIMIT


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "sweep-conventions":
            print(format_sweep(convention_sweep()))
            return EXIT_OK
        if args.command == "compare":
            return _cmd_compare(args)
        if args.command == "resume":
            return _cmd_resume(args)
        raise AssertionError(f"unhandled command {args.command}")
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except (IOError, OSError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO_ERROR


if __name__ == "__main__":
    sys.exit(main())
