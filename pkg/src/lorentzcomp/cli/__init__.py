"""Command line entry point: ``lorentzcomp`` / ``python -m lorentzcomp``.

Exit codes: 0 when every non-skipped check passes, 1 when at least one check
fails, 2 on configuration or domain errors.
"""

import argparse
import sys

from .config import ConfigError, load_builtin, load_config
from .registry import CHECKS
from .runner import DomainError, emit_report, run_experiments

__all__ = ["main", "build_parser", "list_experiments", "catalog", "run", "CHECKS"]


def build_parser():
    p = argparse.ArgumentParser(
        prog="lorentzcomp",
        description="Numerical verification of Lorentzian comparison results.")
    p.add_argument("--config", metavar="PATH", help="TOML file with extra experiments")
    p.add_argument("--experiment", metavar="ID", action="append",
                   help="run only this experiment (repeatable)")
    p.add_argument("--seed", type=int, help="override every experiment seed")
    p.add_argument("--samples", type=int, help="override every sample count")
    p.add_argument("--fd-step", type=float, help="override the distance finite-difference step")
    p.add_argument("--tolerance", type=float, help="override the tolerance of every check")
    p.add_argument("--out", metavar="PATH", help="write the report here (default: stdout)")
    p.add_argument("--format", choices=["structured-record", "tabular"],
                   default="structured-record")
    p.add_argument("--verbose", action="store_true", help="include per-sample margins")
    p.add_argument("--list", action="store_true", help="list experiments and exit")
    return p


def catalog(config=None):
    """Built-in experiments followed by those of ``config`` (ids must be unique)."""
    specs = load_builtin()
    if config is not None:
        extra = load_config(config)
        ids = {s.id for s in specs}
        for s in extra:
            if s.id in ids:
                raise ConfigError(f"experiment '{s.id}'.id: duplicates a built-in experiment")
        specs = specs + extra
    return specs


def list_experiments(config=None):
    return "".join(f"{s.id}\t{s.description}\n" for s in catalog(config))


def _select(specs, config, ids):
    if ids:
        by_id = {s.id: s for s in specs}
        missing = [i for i in ids if i not in by_id]
        if missing:
            raise ConfigError(f"--experiment: unknown experiment id {missing[0]!r}")
        return [by_id[i] for i in ids]
    if config is not None:
        return [s for s in specs if s.source != "builtin"]
    return specs


def _validate_overrides(args):
    if args.samples is not None and args.samples < 1:
        raise ConfigError("--samples: expected an integer >= 1")
    if args.seed is not None and args.seed < 0:
        raise ConfigError("--seed: expected an integer >= 0")
    if args.fd_step is not None and not args.fd_step > 0:
        raise ConfigError("--fd-step: expected a positive number")
    if args.tolerance is not None and not args.tolerance >= 0:
        raise ConfigError("--tolerance: expected a non-negative number")


def run(argv=None):
    """Parse ``argv``, run, and return ``(exit_code, report_or_None)``."""
    args = build_parser().parse_args(argv)
    try:
        _validate_overrides(args)
        specs = catalog(args.config)
        if args.list:
            sys.stdout.write(list_experiments(args.config))
            return 0, None
        selected = _select(specs, args.config, args.experiment)
        overrides = {"seed": args.seed, "samples": args.samples, "fd_step": args.fd_step,
                     "tolerance": args.tolerance}
        report = run_experiments(selected, overrides, args.verbose)
        emit_report(report, args.format, args.out)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2, None
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 2, None
    except OSError as exc:
        print(f"cannot write report: {exc}", file=sys.stderr)
        return 2, None
    return (0 if report["summary"]["status"] == "pass" else 1), report


def main(argv=None):
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
