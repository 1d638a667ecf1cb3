"""Run experiments and emit reports."""

import csv
import io
import json
import sys
import time

from ..comparison import ComparisonDomainError
from ..geodesic import ConjugatePointError
from ..hypersurface import NonConstantMeanCurvatureError, NonSpacelikeError
from ..lorentz_distance import DomainMarginError, NotInFutureError
from ..reports import SKIP_STATUSES
from ..spacetime import ChartDomainError, PreconditionError, UnsupportedModelError
from .config import build_case
from .registry import Context, run_check

__all__ = ["DomainError", "DOMAIN_ERRORS", "run_experiments", "emit_report", "format_report",
           "TABULAR_HEADER"]

TABULAR_HEADER = ["experiment", "check", "samples", "worst_margin", "tolerance", "status"]

DOMAIN_ERRORS = (ChartDomainError, PreconditionError, UnsupportedModelError, NotInFutureError,
                 DomainMarginError, NonSpacelikeError, NonConstantMeanCurvatureError,
                 ComparisonDomainError, ConjugatePointError)


class DomainError(RuntimeError):
    """A check left the domain where its quantities are defined."""


def _case_tag(model, field, imm):
    parts = [model.label]
    if field is not None:
        parts.append(repr(field).split("(", 1)[0].replace("Distance", "").lower()
                     + (f"(t0={field.t0:g})" if field.kind == "slice" else ""))
    if imm is not None:
        parts.append(imm.label)
    return " / ".join(parts)


def _apply_overrides(spec, overrides):
    seed = spec.seed if overrides.get("seed") is None else overrides["seed"]
    samples = spec.samples if overrides.get("samples") is None else overrides["samples"]
    fd_step = spec.fd_step if overrides.get("fd_step") is None else overrides["fd_step"]
    return seed, samples, fd_step


def run_experiment(spec, overrides=None):
    """Run one experiment; returns ``(record, wall_time)``."""
    overrides = overrides or {}
    seed, samples, fd_step = _apply_overrides(spec, overrides)
    t0 = time.perf_counter()
    rows = []
    for j, case in enumerate(spec.cases):
        model, field, imm = build_case(case, fd_step)
        tag = _case_tag(model, field, imm)
        ctx = Context(model, field, imm, samples, seed)
        for check in case.checks:
            check = dict(check)
            if overrides.get("tolerance") is not None:
                check["tolerance"] = overrides["tolerance"]
            try:
                reports = run_check(check, ctx)
            except DOMAIN_ERRORS as exc:
                raise DomainError(f"experiment '{spec.id}', case {j} ({tag}), check "
                                  f"'{check['name']}': {type(exc).__name__}: {exc}") from exc
            for r in reports:
                rows.append((j, tag, r))
    wall = time.perf_counter() - t0
    return rows, wall


def _summary(checks):
    counts = {"pass": 0, "fail": 0, "skipped": 0}
    for c in checks:
        if c["status"] == "pass":
            counts["pass"] += 1
        elif c["status"] in SKIP_STATUSES:
            counts["skipped"] += 1
        else:
            counts["fail"] += 1
    counts["total"] = len(checks)
    counts["status"] = "fail" if counts["fail"] else "pass"
    return counts


def run_experiments(specs, overrides=None, verbose=False, log=sys.stderr):
    """Run experiments in declaration order and assemble the run report.

    Wall times go to ``log`` only, so the report itself is byte-stable.
    """
    from .. import __version__
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    experiments = []
    for spec in specs:
        rows, wall = run_experiment(spec, overrides)
        seed, samples, fd_step = _apply_overrides(spec, overrides)
        checks = []
        for j, tag, r in rows:
            d = r.to_dict(verbose)
            d["case"] = j
            d["case_label"] = tag
            checks.append(d)
        summary = _summary(checks)
        experiments.append({
            "id": spec.id,
            "description": spec.description,
            "seed": seed,
            "samples": samples,
            "fd_step": fd_step,
            "config": spec.record(),
            "checks": checks,
            "skipped": [f"{c['id']} [{c['case_label']}]: {c['status']}" for c in checks
                        if c["status"] in SKIP_STATUSES],
            "summary": summary,
        })
        if log is not None:
            print(f"{spec.id}: {summary['status']} ({summary['pass']} pass, "
                  f"{summary['fail']} fail, {summary['skipped']} skipped) in {wall:.2f} s",
                  file=log)
    total = _summary([c for e in experiments for c in e["checks"]])
    return {"tool": "lorentzcomp", "version": __version__, "overrides": overrides,
            "experiments": experiments, "summary": total}


def format_report(report, fmt="structured-record"):
    if fmt == "structured-record":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    if fmt == "tabular":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(TABULAR_HEADER)
        for e in report["experiments"]:
            for c in e["checks"]:
                worst = c["worst_margin"]
                worst = f"{worst:.6e}" if isinstance(worst, float) else worst
                w.writerow([e["id"], f"{c['id']} [{c['case_label']}]", c["samples"], worst,
                            f"{c['tolerance']:.1e}", c["status"]])
        return buf.getvalue()
    raise ValueError(f"unknown format {fmt!r}")


def emit_report(report, fmt="structured-record", path=None):
    """Write the report to ``path`` (stdout when ``None`` or ``'-'``)."""
    text = format_report(report, fmt)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text
