"""CLI surface: simulate, metrics, compare, exit codes."""
import shutil

import pytest

from formationsim.cli import EXIT_CONFIG, EXIT_OK, main
from formationsim.scenario import preset_path


@pytest.fixture()
def short_config(tmp_path):
    # shrink the shipped scenario so CLI tests stay fast
    text = preset_path("scenario1").read_text()
    text = text.replace("duration: 20.0", "duration: 1.0")
    p = tmp_path / "short.yaml"
    p.write_text(text)
    return p


def test_simulate(short_config, tmp_path, capsys):
    out = tmp_path / "run"
    rc = main(["simulate", "--config", str(short_config), "--out", str(out),
               "--no-plots"])
    assert rc == EXIT_OK
    assert (out / "uav1.csv").exists()
    assert (out / "metrics.txt").exists()
    assert "scenario1" in capsys.readouterr().out


def test_simulate_quiet(short_config, tmp_path, capsys):
    rc = main(["simulate", "--config", str(short_config),
               "--out", str(tmp_path / "q"), "--quiet", "--no-plots"])
    assert rc == EXIT_OK
    assert capsys.readouterr().out == ""


def test_simulate_controller_override(short_config, tmp_path):
    rc = main(["simulate", "--config", str(short_config), "--controller", "smc",
               "--out", str(tmp_path / "smc"), "--quiet", "--no-plots"])
    assert rc == EXIT_OK


def test_simulate_missing_config(tmp_path):
    rc = main(["simulate", "--config", str(tmp_path / "nope.yaml")])
    assert rc == EXIT_CONFIG


def test_metrics_roundtrip(short_config, tmp_path, capsys):
    out = tmp_path / "run"
    main(["simulate", "--config", str(short_config), "--out", str(out),
          "--quiet", "--no-plots"])
    rc = main(["metrics", "--trace", str(out / "uav1.csv"), str(out / "uav2.csv")])
    assert rc == EXIT_OK
    stdout = capsys.readouterr().out
    assert "uav1" in stdout and "formation" in stdout


def test_metrics_bad_trace(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b,c\n1,2,3\n")
    rc = main(["metrics", "--trace", str(bad)])
    assert rc == EXIT_CONFIG


def test_compare(short_config, capsys):
    rc = main(["compare", "--config", str(short_config),
               "--controllers", "bsmc,smc"])
    assert rc == EXIT_OK
    stdout = capsys.readouterr().out
    assert "bsmc" in stdout and "smc" in stdout


def test_compare_empty_controllers(short_config):
    rc = main(["compare", "--config", str(short_config), "--controllers", " "])
    assert rc == EXIT_CONFIG


def test_determinism_across_processes(short_config, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        rc = main(["simulate", "--config", str(short_config), "--out", str(out),
                   "--quiet", "--no-plots"])
        assert rc == EXIT_OK
    for name in ("uav1.csv", "uav2.csv", "uav3.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
