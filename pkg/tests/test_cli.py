import json
from fractions import Fraction
from unittest import mock

import pytest

from hahnheun import cli, heunhahn
from hahnheun.cli import UsageError, main, parse_config, read_config_file


def run_json(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_parse_flags():
    cfg = parse_config(["heun", "construct", "--kappa", "1/2", "--N", "5", "--r1", "-3"])
    assert (cfg.command, cfg.action) == ("heun", "construct")
    assert cfg.parameters == {"kappa": Fraction(1, 2), "N": 5, "r1": Fraction(-3)}
    assert cfg.format == "json"


def test_config_file_matches_flags(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# parameters\nalpha = 1/3\nbeta=2/5\nN = 6  # grid\nformat = text\n")
    from_file = parse_config(["hahn", "poly", "--config", str(path)])
    from_flags = parse_config(["hahn", "poly", "--alpha", "1/3", "--beta", "2/5", "--N", "6",
                               "--format", "text"])
    assert from_file == from_flags
    override = parse_config(["hahn", "poly", "--config", str(path), "--N", "4"])
    assert override.parameters["N"] == 4


def test_config_file_rejects_unknown_keys(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("gamma = 1\nlambda = 2\n")
    with pytest.raises(UsageError):
        read_config_file(path)


@pytest.mark.parametrize("argv", [
    [],
    ["heun"],
    ["heun", "nonsense"],
    ["heun", "construct", "--kappa", "1/0"],
    ["heun", "construct", "--kappa", "0.5"],
    ["heun", "construct", "--N", "0"],
    ["heun", "qes", "--N", "4", "--M", "4"],
    ["gevp", "verify", "--n", "9", "--N", "4"],
    ["algebra", "diffreal", "--q1", "1,2,3"],
    ["heun", "construct", "--format", "xml"],
])
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert "usage error" in capsys.readouterr().err


def test_report_schema(capsys):
    code, report = run_json(["hahn", "verify-eigen", "--alpha", "1/3", "--beta", "1/5",
                             "--N", "4"], capsys)
    assert code == 0
    assert report["schema"] == 1
    assert set(report) == {"schema", "command", "parameters", "checks", "summary", "result"}
    assert report["parameters"] == {"alpha": "1/3", "beta": "1/5", "N": 4}
    for c in report["checks"]:
        assert set(c) == {"name", "status", "expected", "observed", "reference", "details"}
    s = report["summary"]
    assert s["total"] == s["passed"] + s["failed"] + s["errors"]


def test_failed_check_exits_1(capsys):
    with mock.patch.object(heunhahn, "sigma3", lambda p, N, n: Fraction(1)):
        code, report = run_json(["heun", "tridiag-pochhammer", "--kappa", "1", "--mu0", "2",
                                 "--N", "4"], capsys)
    assert code == 1
    assert report["summary"]["failed"] >= 1


def test_qes_truncation_failure_is_reported(capsys):
    code, report = run_json(["heun", "qes", "--r1", "1", "--N", "5", "--M", "2"], capsys)
    assert code == 1
    assert report["summary"]["passed"] < report["summary"]["total"]


def test_output_file_and_text_format(tmp_path, capsys):
    out = tmp_path / "report.txt"
    code = main(["gevp", "verify", "--alpha", "1/2", "--beta", "1/3", "--N", "5",
                 "--format", "text", "--output", str(out)])
    assert code == 0
    assert capsys.readouterr().out == ""
    text = out.read_text()
    assert "passed" in text and "[PASS" in text


def test_verify_all_echoes_defaults():
    cfg = parse_config(["verify-all"])
    echoed = cfg.echo()
    for key, value in cli.DEFAULTS.items():
        assert key in echoed
    assert echoed["alpha"] == "1/3"


@pytest.mark.parametrize("argv", [
    ["heun", "construct", "--kappa", "1", "--N", "4"],
    ["heun", "verify-degree", "--kappa", "1", "--r1", "1", "--N", "4"],
    ["heun", "qes", "--engineer", "--N", "6", "--M", "2"],
    ["hahn", "poly", "--n", "2"],
    ["hahn", "algebra"],
    ["hahn", "bilinear", "--tau1", "1", "--tau4", "2"],
    ["hahn", "tridiag", "--tau1", "1", "--tau2", "1/2"],
    ["algebra", "fit-yw", "--tau1", "1", "--tau3", "1"],
    ["algebra", "fit-xw", "--tau1", "1", "--tau2", "2"],
    ["algebra", "degenerate", "--tau1", "-1", "--tau2", "1", "--tau4", "1"],
    ["algebra", "triple", "--gamma", "1/2", "--epsilon", "1"],
    ["algebra", "diffreal", "--q1", "1,1", "--t1", "2,-1", "--tau1", "1"],
])
def test_subcommands_succeed(argv, capsys):
    code, report = run_json(argv, capsys)
    assert code == 0, report["checks"]
