"""Experiment configuration: TOML files with an ``[[experiment]]`` array.

An experiment has an id, a seed, a sample count, an ``fd_step`` for the
distance derivatives and one or more cases.  A case names a model, an
optional distance field (``{kind = "point", p = [...]}`` or
``{kind = "slice", t0 = ...}``), an optional immersion from the catalog and
the list of checks to run.  Top-level ``model``/``field``/``immersion``/
``checks`` keys of an experiment act as defaults for its cases; without a
``case`` array they define a single case.
"""

import copy
import math
from dataclasses import dataclass, field as dc_field
from importlib import resources

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from ..hypersurface import make_immersion
from ..lorentz_distance import PointDistance, SliceDistance
from ..spacetime import model_from_config

__all__ = ["ConfigError", "CaseSpec", "ExperimentSpec", "load_config", "load_builtin",
           "parse_config", "build_case"]

EXPERIMENT_KEYS = {"id", "description", "seed", "samples", "fd_step", "model", "field",
                   "immersion", "checks", "case"}
CASE_KEYS = {"model", "field", "immersion", "checks"}


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending key."""


@dataclass
class CaseSpec:
    model: dict
    field: dict = None
    immersion: dict = None
    checks: list = dc_field(default_factory=list)


@dataclass
class ExperimentSpec:
    id: str
    description: str
    seed: int
    samples: int
    fd_step: float
    cases: list
    source: str = "builtin"

    def record(self):
        """Plain-data view recorded verbatim in reports."""
        return {"id": self.id, "description": self.description, "seed": self.seed,
                "samples": self.samples, "fd_step": self.fd_step, "source": self.source,
                "cases": [{"model": c.model, "field": c.field, "immersion": c.immersion,
                           "checks": c.checks} for c in self.cases]}


def _int(value, key, minimum):
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ConfigError(f"{key}: expected an integer >= {minimum}, got {value!r}")
    return value


def _positive(value, key):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or \
            not math.isfinite(value) or value <= 0:
        raise ConfigError(f"{key}: expected a positive number, got {value!r}")
    return float(value)


def _table(value, key, optional=False):
    if value is None and optional:
        return None
    if not isinstance(value, dict):
        raise ConfigError(f"{key}: expected a table")
    return copy.deepcopy(value)


def _checks(value, key):
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{key}: expected a non-empty array of check tables")
    out = []
    for i, c in enumerate(value):
        if isinstance(c, str):
            c = {"name": c}
        if not isinstance(c, dict) or "name" not in c:
            raise ConfigError(f"{key}[{i}]: each check needs a 'name'")
        out.append(copy.deepcopy(c))
    return out


def _experiment(raw, index, source):
    where = f"experiment[{index}]"
    if not isinstance(raw, dict):
        raise ConfigError(f"{where}: expected a table")
    unknown = sorted(set(raw) - EXPERIMENT_KEYS)
    if unknown:
        raise ConfigError(f"{where}.{unknown[0]}: unknown key")
    if "id" not in raw or not isinstance(raw["id"], str) or not raw["id"]:
        raise ConfigError(f"{where}.id: required non-empty string")
    where = f"experiment '{raw['id']}'"
    seed = _int(raw.get("seed", 0), f"{where}.seed", 0)
    samples = _int(raw.get("samples", 100), f"{where}.samples", 1)
    fd_step = _positive(raw.get("fd_step", 1e-4), f"{where}.fd_step")
    defaults = {k: raw.get(k) for k in ("model", "field", "immersion", "checks")}
    cases_raw = raw.get("case")
    if cases_raw is None:
        cases_raw = [{}]
    if not isinstance(cases_raw, list) or not cases_raw:
        raise ConfigError(f"{where}.case: expected a non-empty array of tables")
    cases = []
    for j, c in enumerate(cases_raw):
        cw = f"{where}.case[{j}]"
        if not isinstance(c, dict):
            raise ConfigError(f"{cw}: expected a table")
        unknown = sorted(set(c) - CASE_KEYS)
        if unknown:
            raise ConfigError(f"{cw}.{unknown[0]}: unknown key")
        merged = {k: c.get(k, defaults[k]) for k in CASE_KEYS}
        if merged["model"] is None:
            raise ConfigError(f"{cw}.model: required")
        if merged["checks"] is None:
            raise ConfigError(f"{cw}.checks: required")
        cases.append(CaseSpec(_table(merged["model"], f"{cw}.model"),
                              _table(merged["field"], f"{cw}.field", optional=True),
                              _table(merged["immersion"], f"{cw}.immersion", optional=True),
                              _checks(merged["checks"], f"{cw}.checks")))
    spec = ExperimentSpec(raw["id"], str(raw.get("description", "")), seed, samples, fd_step,
                          cases, source)
    for j, case in enumerate(spec.cases):
        _validate_case(case, f"{where}.case[{j}]", fd_step)
    return spec


def build_case(case, fd_step):
    """Instantiate ``(model, field, immersion)`` for a case."""
    model = model_from_config(case.model)
    dist = None
    if case.field is not None:
        f = dict(case.field)
        kind = f.pop("kind", None)
        if kind == "point":
            p = np.asarray(f.pop("p", np.zeros(model.dim)), dtype=float)
            if p.shape != (model.dim,):
                raise ValueError(f"p must have {model.dim} coordinates")
            dist = PointDistance(model, p, fd_step=fd_step, **f)
        elif kind == "slice":
            dist = SliceDistance(model, float(f.pop("t0", 0.0)), fd_step=fd_step, **f)
        else:
            raise ValueError(f"unknown field kind {kind!r}")
    imm = None
    if case.immersion is not None:
        params = dict(case.immersion)
        name = params.pop("name", None)
        if name is None:
            raise ValueError("immersion needs a 'name'")
        imm = make_immersion(model, name, **params)
    return model, dist, imm


def _validate_case(case, where, fd_step):
    from .registry import validate_check
    try:
        model_from_config(case.model)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{where}.model: {exc}") from None
    try:
        _, dist, imm = build_case(case, fd_step)
    except (ValueError, TypeError, NotImplementedError) as exc:
        key = "immersion" if case.immersion is not None else "field"
        raise ConfigError(f"{where}.{key}: {exc}") from None
    for i, check in enumerate(case.checks):
        validate_check(check, dist, imm, f"{where}.checks[{i}]")


def parse_config(data, source="builtin"):
    if not isinstance(data, dict):
        raise ConfigError("config: expected a table")
    unknown = sorted(set(data) - {"experiment"})
    if unknown:
        raise ConfigError(f"{unknown[0]}: unknown top-level key")
    raw = data.get("experiment", [])
    if not isinstance(raw, list):
        raise ConfigError("experiment: expected an array of tables")
    specs = [_experiment(r, i, source) for i, r in enumerate(raw)]
    seen = set()
    for s in specs:
        if s.id in seen:
            raise ConfigError(f"experiment '{s.id}'.id: duplicate id")
        seen.add(s.id)
    return specs


def load_config(path):
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc.strerror}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config: {path} is not valid TOML: {exc}") from None
    return parse_config(data, source=str(path))


def load_builtin():
    text = resources.files("lorentzcomp.cli").joinpath("builtin.toml").read_text()
    return parse_config(tomllib.loads(text), source="builtin")
