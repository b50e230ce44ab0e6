import json

import pytest

from riskforge.cli import run

RULE_FILE = """\
riskmodel "rule" timeunit 1y
threat T
scenario A
incident B consequence 1
initiate T -> A frequency 3:1y
leadsto A -> B likelihood 0.8
"""


@pytest.fixture
def rule_path(tmp_path):
    path = tmp_path / "rule.riskdsl"
    path.write_text(RULE_FILE)
    return str(path)


def test_validate_ok(ehealth_path, capsys):
    assert run(["validate", ehealth_path]) == 0
    assert capsys.readouterr().out == ""


def test_validate_broken_model(tmp_path, capsys):
    bad = tmp_path / "bad.riskdsl"
    bad.write_text('riskmodel "x" timeunit 1y\nthreat A\nscenario A\n')
    assert run(["validate", str(bad)]) == 1
    assert "duplicate id" in capsys.readouterr().err


def test_missing_file(capsys):
    assert run(["validate", "/no/such/file.riskdsl"]) == 1
    assert "error:" in capsys.readouterr().err


def test_usage_error(capsys):
    assert run([]) == 2
    assert run(["analyze"]) == 2
    assert run(["frobnicate", "x"]) == 2


def test_propagate_table(ehealth_path, capsys):
    assert run(["propagate", ehealth_path, "--with", "IRN,EQS,IRH"]) == 0
    out = capsys.readouterr().out
    assert "freq [/10y]" in out
    assert "LMD" in out
    assert "5.0976" in out


def test_propagate_json(ehealth_path, capsys):
    assert run(["propagate", ehealth_path, "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["LMD"]["frequency"] == pytest.approx(26.4)
    assert doc["LMD"]["consequence"] == pytest.approx(5000.0)


def test_propagate_unknown_countermeasure(ehealth_path, capsys):
    assert run(["propagate", ehealth_path, "--with", "NOPE"]) == 1


def test_analyze_csv(ehealth_path, capsys):
    assert run(["analyze", ehealth_path, "--risk", "LMD"]) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[0] == "state,alternative,frequency,consequence"
    assert len(lines) == 9


def test_analyze_dot_to_file(ehealth_path, tmp_path, capsys):
    out = tmp_path / "diagram.dot"
    assert run(["analyze", ehealth_path, "--risk", "LMD", "--format", "dot", "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert out.read_text().startswith("digraph")


def test_analyze_json(ehealth_path, capsys):
    assert run(["analyze", ehealth_path, "--risk", "LMD", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc) == 8
    assert doc[0]["state"] == "S0"
    assert doc[0]["alternative"] == []
    assert doc[0]["frequency"] == pytest.approx(26.4)
    assert doc[0]["consequence"] == pytest.approx(5000.0)


def test_analyze_bad_risk(ehealth_path, capsys):
    assert run(["analyze", ehealth_path, "--risk", "NCD"]) == 1


def test_synergy_csv(ehealth_path, capsys):
    assert run(["synergy", ehealth_path]) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[0] == "rank,alternative,overall_cost,acceptable"
    assert lines[1].startswith("1,")


def test_synergy_json(ehealth_path, capsys):
    assert run(["synergy", ehealth_path, "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["outcome"] == "recommended"
    assert doc["best"]["countermeasures"] == ["IRH", "IRN"]


def test_synergy_infeasible_exit_code(tmp_path, ehealth_path, capsys):
    strict = tmp_path / "strict.riskdsl"
    text = open(ehealth_path).read().replace(
        "accept LMD frequency <= 10:10y", "accept LMD frequency <= 0.001:10y"
    )
    strict.write_text(text)
    assert run(["synergy", str(strict), "--format", "json"]) == 3
    captured = capsys.readouterr()
    assert json.loads(captured.out)["outcome"] == "no_feasible"
    assert "no_feasible" in captured.err


def test_synergy_over_budget(ehealth_path, capsys):
    assert run(["synergy", ehealth_path, "--budget", "1", "--format", "json"]) == 3
    assert json.loads(capsys.readouterr().out)["outcome"] == "over_budget"


def test_simulate(rule_path, capsys):
    args = ["simulate", rule_path, "--rule", "leads_to", "--runs", "10", "--horizon", "200", "--seed", "3"]
    assert run(args) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["calculus_value"] == pytest.approx(2.4)
    assert doc["pass"] is True
    assert doc["rng"] == "numpy-pcg64"


def test_export_roundtrip_via_cli(ehealth_path, tmp_path, capsys):
    assert run(["export", ehealth_path, "--to", "json"]) == 0
    as_json = capsys.readouterr().out
    json_file = tmp_path / "model.json"
    json_file.write_text(as_json)
    assert run(["export", str(json_file), "--to", "dsl"]) == 0
    as_dsl = capsys.readouterr().out
    assert run(["export", ehealth_path, "--to", "dsl"]) == 0
    assert capsys.readouterr().out == as_dsl


def test_repeat_runs_byte_identical(ehealth_path, capsys):
    run(["analyze", ehealth_path, "--risk", "LMD", "--format", "dot"])
    first = capsys.readouterr().out
    run(["analyze", ehealth_path, "--risk", "LMD", "--format", "dot"])
    assert capsys.readouterr().out == first


def test_coras_flag_rejects_hot_likelihood(tmp_path, capsys):
    hot = tmp_path / "hot.riskdsl"
    hot.write_text(
        'riskmodel "h" timeunit 1y\nthreat T\nscenario A\nincident R consequence 1\n'
        "initiate T -> A frequency 1:1y\nleadsto A -> R likelihood 1.5\n"
    )
    assert run(["validate", str(hot)]) == 0
    assert run(["--coras", "validate", str(hot)]) == 1


def test_threads_env_var_tolerated(ehealth_path, monkeypatch, capsys):
    monkeypatch.setenv("RISKFORGE_THREADS", "4")
    assert run(["validate", ehealth_path]) == 0
    monkeypatch.setenv("RISKFORGE_THREADS", "bogus")
    assert run(["validate", ehealth_path]) == 0
