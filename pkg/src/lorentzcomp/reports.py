"""Signed-margin reports shared by every check."""

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = ["CheckReport", "MarginReport", "make_report", "STATUSES", "SKIP_STATUSES"]

STATUSES = ("pass", "fail", "hypothesis-violation", "one-sided-not-checkable", "domain-skip")
# conditional outcomes: neither pass nor fail
SKIP_STATUSES = ("hypothesis-violation", "one-sided-not-checkable", "domain-skip")


@dataclass
class CheckReport:
    """Outcome of one verification.

    A margin ``>= 0`` means the checked inequality holds at that sample; for
    equality checks the margin is ``-|residual|``.  ``status`` is ``'pass'``
    iff the worst margin is ``>= -tolerance``.
    """

    id: str
    kind: str
    margins: np.ndarray
    worst: float
    tolerance: float
    status: str
    metadata: dict = field(default_factory=dict)
    notes: str = ""

    @property
    def samples(self):
        return int(np.size(self.margins))

    @property
    def passed(self):
        return self.status == "pass"

    @property
    def skipped(self):
        return self.status in SKIP_STATUSES

    def to_dict(self, verbose=False):
        d = {
            "id": self.id,
            "kind": self.kind,
            "samples": self.samples,
            "worst_margin": _clean(self.worst),
            "tolerance": self.tolerance,
            "status": self.status,
            "metadata": _clean(self.metadata),
            "notes": self.notes,
        }
        if verbose:
            d["margins"] = _clean(np.asarray(self.margins, dtype=float).ravel().tolist())
        return d

    def __str__(self):
        return (f"{self.id}: {self.status} (worst margin {self.worst:.3e}, "
                f"tolerance {self.tolerance:.1e}, {self.samples} samples)")


MarginReport = CheckReport


def _clean(obj):
    """Make nested metadata JSON-friendly (numpy scalars, non-finite floats)."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def make_report(check_id, kind, margins, tolerance, status=None, metadata=None, notes=""):
    """Build a :class:`CheckReport`; ``status`` is derived unless given."""
    if kind not in ("inequality", "equality"):
        raise ValueError(f"unknown report kind {kind!r}")
    m = np.asarray(margins, dtype=float).ravel()
    worst = float(m.min()) if m.size else math.nan
    if status is None:
        if not m.size:
            status = "domain-skip"
        else:
            status = "pass" if np.all(np.isfinite(m)) and worst >= -tolerance else "fail"
    elif status not in STATUSES:
        raise ValueError(f"unknown status {status!r}")
    return CheckReport(check_id, kind, m, worst, float(tolerance), status,
                       dict(metadata or {}), notes)
