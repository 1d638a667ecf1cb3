import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from lorentzcomp.cli import catalog, main, run
from lorentzcomp.cli.config import ConfigError, load_builtin, parse_config
from lorentzcomp.cli.runner import TABULAR_HEADER, format_report

FIXTURES = Path(__file__).parent / "fixtures"
BUILTIN_IDS = [s.id for s in load_builtin()]


def _fx(name):
    return str(FIXTURES / name)


def test_list_shows_builtins(capsys):
    assert main(["--list"]) == 0
    out = capsys.readouterr().out
    ids = [line.split("\t")[0] for line in out.splitlines()]
    assert ids == BUILTIN_IDS
    assert "space-form-equalities" in ids


def test_list_with_config_appends_experiments(capsys):
    assert main(["--list", "--config", _fx("pass.toml")]) == 0
    ids = [line.split("\t")[0] for line in capsys.readouterr().out.splitlines()]
    assert ids == BUILTIN_IDS + ["small-pass"]


def test_empty_config_lists_only_builtins(capsys):
    assert main(["--list", "--config", _fx("empty.toml")]) == 0
    ids = [line.split("\t")[0] for line in capsys.readouterr().out.splitlines()]
    assert ids == BUILTIN_IDS


def test_exit_code_pass(tmp_path):
    out = tmp_path / "r.json"
    assert main(["--config", _fx("pass.toml"), "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert [e["id"] for e in rep["experiments"]] == ["small-pass"]
    assert rep["summary"]["status"] == "pass"
    assert rep["experiments"][0]["seed"] == 3


def test_exit_code_fail(tmp_path):
    assert main(["--config", _fx("fail.toml"), "--out", str(tmp_path / "r.json")]) == 1


@pytest.mark.parametrize("name,needle", [("negative_samples.toml", "samples"),
                                         ("unknown_key.toml", "curvature"),
                                         ("domain_error.toml", "future")])
def test_exit_code_errors(name, needle, tmp_path, capsys):
    assert main(["--config", _fx(name), "--out", str(tmp_path / "r.json")]) == 2
    assert needle in capsys.readouterr().err


def test_hypothesis_violation_is_skipped_not_failed(tmp_path):
    code, rep = run(["--config", _fx("wrong_bound.toml"), "--out", str(tmp_path / "r.json")])
    assert code == 0
    exp = rep["experiments"][0]
    assert exp["summary"]["skipped"] == 2 and exp["summary"]["fail"] == 0
    assert all(c["status"] == "hypothesis-violation" for c in exp["checks"])
    assert len(exp["skipped"]) == 2


def test_unknown_experiment_id(capsys):
    assert main(["--experiment", "nope"]) == 2
    assert "nope" in capsys.readouterr().err


def test_bad_overrides(capsys):
    assert main(["--samples", "0", "--experiment", "space-form-equalities"]) == 2
    assert "--samples" in capsys.readouterr().err


def test_determinism(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["--config", _fx("pass.toml"), "--seed", "11", "--verbose"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_seed_override_changes_samples(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["--config", _fx("pass.toml"), "--seed", "1", "--verbose", "--out", str(a)])
    main(["--config", _fx("pass.toml"), "--seed", "2", "--verbose", "--out", str(b)])
    assert a.read_bytes() != b.read_bytes()


def test_tabular_format(tmp_path):
    out = tmp_path / "r.csv"
    assert main(["--config", _fx("pass.toml"), "--format", "tabular", "--out", str(out)]) == 0
    rows = list(csv.reader(io.StringIO(out.read_text())))
    assert rows[0] == TABULAR_HEADER
    assert len(rows) == 1 + 3
    assert {r[-1] for r in rows[1:]} == {"pass"}


def test_verbose_includes_margins(tmp_path):
    quiet, loud = tmp_path / "q.json", tmp_path / "v.json"
    main(["--config", _fx("pass.toml"), "--out", str(quiet)])
    main(["--config", _fx("pass.toml"), "--verbose", "--out", str(loud)])
    q = json.loads(quiet.read_text())["experiments"][0]["checks"][0]
    v = json.loads(loud.read_text())["experiments"][0]["checks"][0]
    assert "margins" not in q
    assert len(v["margins"]) == v["samples"]


def test_samples_and_tolerance_overrides(tmp_path):
    code, rep = run(["--config", _fx("pass.toml"), "--samples", "7", "--tolerance", "0.5",
                     "--out", str(tmp_path / "r.json")])
    assert code == 0
    exp = rep["experiments"][0]
    assert exp["samples"] == 7
    assert rep["overrides"]["tolerance"] == 0.5


def test_config_errors_name_the_key():
    with pytest.raises(ConfigError, match=r"'x'\.samples"):
        parse_config({"experiment": [{"id": "x", "samples": 0,
                                      "model": {"kind": "minkowski", "n": 2},
                                      "checks": ["space-form-equalities"]}]})
    with pytest.raises(ConfigError, match=r"experiment\[0\]\.bogus"):
        parse_config({"experiment": [{"id": "x", "bogus": 1}]})
    with pytest.raises(ConfigError, match=r"checks\[0\]"):
        parse_config({"experiment": [{"id": "x", "model": {"kind": "minkowski", "n": 2},
                                      "field": {"kind": "point"},
                                      "checks": [{"name": "no-such-check"}]}]})
    with pytest.raises(ConfigError, match="duplicate"):
        parse_config({"experiment": [
            {"id": "x", "model": {"kind": "minkowski", "n": 2}, "field": {"kind": "point"},
             "checks": ["laplacian-lower"]}] * 2})


def test_duplicate_builtin_id_is_rejected(tmp_path):
    cfg = tmp_path / "dup.toml"
    cfg.write_text('[[experiment]]\nid = "hyperbolicity"\nmodel = { kind = "minkowski", n = 2 }\n'
                   'field = { kind = "point" }\nchecks = ["laplacian-lower"]\n')
    with pytest.raises(ConfigError, match="built-in"):
        catalog(str(cfg))


def test_invalid_toml(tmp_path, capsys):
    cfg = tmp_path / "bad.toml"
    cfg.write_text("[[experiment]\n")
    assert main(["--config", str(cfg)]) == 2
    assert "TOML" in capsys.readouterr().err


def test_format_report_round_trip():
    rep = {"tool": "lorentzcomp", "experiments": [], "summary": {"status": "pass"}}
    assert json.loads(format_report(rep)) == rep
    assert format_report(rep, "tabular").splitlines()[0] == ",".join(TABULAR_HEADER)


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "lorentzcomp", "--list"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.split("\t")[0] == BUILTIN_IDS[0]
