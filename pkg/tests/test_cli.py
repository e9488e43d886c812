"""Configuration parsing and the command-line front end."""
import json
from pathlib import Path

import pytest
import yaml

from sdmono.cli import build_report, main
from sdmono.config import SUITE_NAMES, ConfigError, load_config, parse_config
from sdmono.suites import CATALOGUE, run

DEFAULT = Path(__file__).resolve().parents[1] / "configs" / "default.yaml"


def write(tmp_path, data, name="run.yaml"):
    p = tmp_path / name
    p.write_text(yaml.safe_dump(data))
    return str(p)


def test_default_config_loads():
    cfg = load_config(DEFAULT)
    assert cfg.seed == 7 and cfg.suites == SUITE_NAMES and cfg.lam == 1.75


@pytest.mark.parametrize(
    "data",
    [
        {},
        {"seed": 1.5},
        {"seed": 1, "lambda": 2.5},
        {"seed": 1, "suites": ["bogus"]},
        {"seed": 1, "monopoles": {"heights": [2.0, 1.0]}},
        {"seed": 1, "tolerances": {"tol_conf": -1}},
        {"seed": 1, "colour": "red"},
    ],
)
def test_bad_configs(data):
    with pytest.raises(ConfigError):
        parse_config(data)


def test_string_numbers():
    assert parse_config({"seed": 0, "tolerances": {"tol_span": "1e-9"}}).tolerances["tol_span"] == 1e-9


def test_lambda_only_checked_for_twistor_suites():
    assert parse_config({"seed": 0, "lambda": 2.5, "suites": ["curvature"]}).lam == 2.5


def test_usage_errors(tmp_path, capsys):
    assert main(["verify"]) == 2
    assert main(["verify", "--config", str(tmp_path / "missing.yaml")]) == 2
    assert main(["verify", "--config", write(tmp_path, {"seed": 0, "lambda": 2.5})]) == 2
    assert main(["verify", "--config", str(DEFAULT), "--suite", "bogus"]) == 2
    assert main([]) == 2


def test_failure_exit(tmp_path, capsys):
    cfg = write(tmp_path, {"seed": 0, "tolerances": {"tol_identity": 1e-30}})
    assert main(["verify", "--config", cfg, "--suite", "connection-identity"]) == 1
    report = json.loads(capsys.readouterr().out)
    check = report["suites"]["connection-identity"]["checks"]["identity-dual"]
    assert not check["passed"] and "witness" in check


def test_verify_report_file(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["verify", "--config", str(DEFAULT), "--suite", "involution-group", "--suite", "resolution-lift", "--report", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["passed"] and set(report["suites"]) == {"involution-group", "resolution-lift"}
    assert report["config"]["seed"] == 7


def test_report_is_deterministic():
    cfg = load_config(DEFAULT).with_suites(["conformality", "twistor-classification", "einstein-weyl"])
    a = json.dumps(build_report(cfg, run(cfg), timing=False), sort_keys=True)
    b = json.dumps(build_report(cfg, run(cfg), timing=False), sort_keys=True)
    assert a == b


def test_seed_override(tmp_path, capsys):
    assert main(["verify", "--config", str(DEFAULT), "--suite", "einstein-weyl", "--seed", "3"]) == 0
    assert json.loads(capsys.readouterr().out)["config"]["seed"] == 3


def test_asymmetric_config_skips(tmp_path, capsys):
    cfg = write(tmp_path, {"seed": 0, "monopoles": {"heights": [1.0, 2.0, 8.0]}})
    assert main(["verify", "--config", cfg, "--suite", "conformality", "--suite", "involution-group"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["suites"]["involution-group"]["checks"]["reflection-group"]["value"] == "Z2"
    assert "skipped" in report["suites"]["conformality"]["checks"]["extra-involution"]


def test_catalogue(capsys):
    assert main(["suites"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert "conformality:extra-involution → §3.2 / Theorem final" in lines
    assert len(lines) == sum(len(v) for v in CATALOGUE.values())
    assert main(["suites", "--machine"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert list(data) == list(SUITE_NAMES)
