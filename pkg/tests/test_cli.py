import json

import pytest

from gaudin_sov.cli import main, parse_rationals
from gaudin_sov.classical import ConfigError
from gaudin_sov.suites import RunConfig, default_casimirs, prepare


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classical_diagram_exit_zero_and_deterministic(capsys):
    args = ("--suite", "classical-diagram", "--genus", "1", "--points", "0,1,2,3", "--seed", "7")
    code, first, _ = run(capsys, *args)
    assert code == 0
    _, second, _ = run(capsys, *args)
    assert first == second
    report = json.loads(first)
    names = [c["name"] for c in report["suites"][0]["checks"]]
    assert "diagram/worked-instance" in names
    assert names == sorted(names)
    assert all("elapsed_ms" not in c for c in report["suites"][0]["checks"])


def test_timings_flag(capsys):
    code, out, _ = run(capsys, "--suite", "hamiltonian-correspondence", "--points", "0,1,2,3", "--timings")
    assert code == 0
    assert all("elapsed_ms" in c for c in json.loads(out)["suites"][0]["checks"])


def test_separation_with_bad_casimirs_exits_two(capsys):
    code, out, err = run(capsys, "--suite", "sov", "--genus", "1", "--points", "0,1,2,3", "--casimirs", "1,1,1,1")
    assert code == 2
    assert "config error" in err and out == ""


def test_unknown_suite_exits_two(capsys):
    code, _, err = run(capsys, "--suite", "nope")
    assert code == 2 and "unknown suite" in err


def test_failing_suite_exits_one(capsys):
    code, out, _ = run(capsys, "--suite", "lambda", "--points", "0,1,2,3", "--format", "text")
    assert code == 1
    assert "fail generating-series/U-side/W-W-bracket" in out


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"genus": 1, "points": ["0", "1", "2", "3"], "suites": ["quantum-algebra"]}))
    code, out, _ = run(capsys, "--config", str(cfg))
    assert code == 0
    assert json.loads(out)["suites"][0]["config"]["points"] == ["0", "1", "2", "3"]
    cfg.write_text(json.dumps({"genus": 1, "colour": "red"}))
    assert run(capsys, "--config", str(cfg))[0] == 2


def test_out_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "--suite", "quantum-algebra", "--points", "0,1,2,3", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["status"] == "pass"


def test_parse_rationals():
    assert [str(x) for x in parse_rationals("1/2, 3,-4")] == ["1/2", "3", "-4"]
    with pytest.raises(ConfigError):
        parse_rationals("1,x")


def test_prepare_fills_default_casimirs():
    cfg, names = prepare(RunConfig(points=parse_rationals("0,1,2,3"), suites=["sov"]))
    assert names == ["sov"]
    assert [str(c) for c in cfg.casimirs] == ["3", "1", "1", "1"]
    assert cfg.casimir_hypothesis()
    assert default_casimirs(cfg) == cfg.casimirs


def test_prepare_rejects_bad_genus():
    with pytest.raises(ConfigError):
        prepare(RunConfig(genus=4))
