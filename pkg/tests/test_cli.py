import json

from click.testing import CliRunner

from halfstokes.cli import main


def test_kernel_check_writes_artifact(tmp_path):
    out = tmp_path / "art"
    result = CliRunner().invoke(main, ["kernel-check", "--out", str(out)])
    assert result.exit_code == 0, result.output
    art = json.loads((out / "kernel.json").read_text())
    assert art["suite"] == "kernel"
    assert all(c["pass"] for c in art["checks"])


def test_kernel_check_deterministic(tmp_path):
    runner = CliRunner()
    for sub in ("a", "b"):
        res = runner.invoke(main, ["kernel-check", "--out",
                                   str(tmp_path / sub)])
        assert res.exit_code == 0
    assert (tmp_path / "a" / "kernel.json").read_bytes() \
        == (tmp_path / "b" / "kernel.json").read_bytes()


def test_verbose_emits_json_lines(tmp_path):
    result = CliRunner().invoke(
        main, ["kernel-check", "--out", str(tmp_path), "--verbose"])
    assert result.exit_code == 0
    events = [json.loads(line) for line in result.output.splitlines()
              if line.startswith("{")]
    kinds = {e["event"] for e in events}
    assert {"start", "check", "done"} <= kinds


def test_config_overrides(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nseed = 123\n\ntent_step = 0.03125\n")
    result = CliRunner().invoke(
        main, ["kernel-check", "--out", str(tmp_path / "o"),
               "--config", str(cfg), "--verbose"])
    assert result.exit_code == 0
    start = json.loads(result.output.splitlines()[0])
    assert start["seed"] == 123


def test_unknown_config_key_rejected(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("no_such_key = 1\n")
    result = CliRunner().invoke(
        main, ["kernel-check", "--out", str(tmp_path / "o"),
               "--config", str(cfg)])
    assert result.exit_code == 2
    assert "unknown key" in result.output


def test_malformed_config_rejected(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("just some words\n")
    result = CliRunner().invoke(
        main, ["kernel-check", "--out", str(tmp_path / "o"),
               "--config", str(cfg)])
    assert result.exit_code == 2


def test_unknown_command_exits_2():
    result = CliRunner().invoke(main, ["frobnicate"])
    assert result.exit_code == 2


def test_report_missing_artifacts(tmp_path):
    result = CliRunner().invoke(main, ["report", "--out", str(tmp_path)])
    assert result.exit_code == 1
    assert "missing suite artifacts" in result.output


def test_report_single_suite(tmp_path):
    runner = CliRunner()
    assert runner.invoke(main, ["kernel-check", "--out",
                                str(tmp_path)]).exit_code == 0
    result = runner.invoke(main, ["report", "--out", str(tmp_path),
                                  "--suite", "kernel"])
    assert result.exit_code == 0, result.output
    assert (tmp_path / "summary.md").exists()
    assert (tmp_path / "summary.csv").exists()
    lines = (tmp_path / "summary.csv").read_text().strip().splitlines()
    assert len(lines) == 2 and "pass" in lines[1]
