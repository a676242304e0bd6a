import pytest
from typer.testing import CliRunner

from qlab_cli import __version__
from qlab_cli.cli import app
from qlab_cli.utils import read_csv

runner = CliRunner()


def test_version():
    result = runner.invoke(app, ["version"])
    assert result.exit_code == 0
    assert __version__ in result.output


def test_invariants_writes_matching_rows(tmp_path):
    result = runner.invoke(app, ["invariants", "--split", "--level", "6", "--ell", "2", "--out", str(tmp_path)])
    assert result.exit_code == 0, result.output
    rows = read_csv(tmp_path / "invariants.csv")
    assert len(rows) == 1
    assert rows[0]["match"] == "true"
    assert (tmp_path / "manifest.json").exists()


def test_count_type2(tmp_path):
    result = runner.invoke(app, ["count", "type2", "--n", "1", "--T", "1.5", "--out", str(tmp_path)])
    assert result.exit_code == 0, result.output
    rows = read_csv(tmp_path / "counts.csv")
    assert rows[0]["kind"] == "type2"
    assert rows[0]["observed"] == "2"


def test_count_output_is_reproducible(tmp_path):
    args = ["count", "type1", "--T", "1.5", "--delta", "0.5"]
    first, second = tmp_path / "a", tmp_path / "b"
    assert runner.invoke(app, args + ["--out", str(first)]).exit_code == 0
    assert runner.invoke(app, args + ["--out", str(second)]).exit_code == 0
    assert (first / "counts.csv").read_bytes() == (second / "counts.csv").read_bytes()


def test_split_psi_is_a_usage_error():
    result = runner.invoke(app, ["count", "type1", "--shape", "Psi"])
    assert result.exit_code == 2


def test_malformed_determinant_is_a_usage_error():
    result = runner.invoke(app, ["count", "type2", "--n", "1/2"])
    assert result.exit_code == 2


def test_theta_eval():
    result = runner.invoke(app, ["theta", "eval", "--z", "i", "--s", "i"])
    assert result.exit_code == 0, result.output
    assert "1.3932039" in result.output


@pytest.mark.parametrize("args", [
    ["theta", "eval", "--family", "def_sph"],
    ["theta", "eval", "--family", "bogus"],
    ["theta", "check-pde", "--family", "bogus"],
    ["theta", "check-mod", "--gamma", "1,2,3"],
])
def test_theta_usage_errors(args):
    assert runner.invoke(app, args).exit_code == 2


def test_theta_check_pde(tmp_path):
    result = runner.invoke(app, ["theta", "check-pde", "--family", "def_hol", "--k", "2", "--out", str(tmp_path)])
    assert result.exit_code == 0, result.output
    assert len(read_csv(tmp_path / "theta_pde.csv")) == 3


def test_theta_check_al():
    result = runner.invoke(app, ["theta", "check-al", "--level", "2", "--ell", "2"])
    assert result.exit_code == 0, result.output


def test_checks(tmp_path):
    result = runner.invoke(app, ["checks", "--level", "2", "--ell", "2", "--out", str(tmp_path)])
    assert result.exit_code == 0, result.output
    rows = read_csv(tmp_path / "checks.csv")
    assert rows


def test_report_without_rows():
    result = runner.invoke(app, ["report"])
    assert result.exit_code == 0
    assert "No report rows" in result.output


def test_report_aggregates_counts(tmp_path):
    runner.invoke(app, ["count", "type1", "--out", str(tmp_path)])
    result = runner.invoke(app, ["report", str(tmp_path / "counts.csv"), "--out", str(tmp_path / "summary.json")])
    assert result.exit_code == 0, result.output
    assert (tmp_path / "summary.json").exists()


def test_report_exceeding_calibration_fails(tmp_path):
    runner.invoke(app, ["count", "type1", "--out", str(tmp_path)])
    result = runner.invoke(app, ["report", str(tmp_path / "counts.csv"), "--calibration", "1.5"])
    assert result.exit_code == 1


def test_report_rejects_other_csvs(tmp_path):
    runner.invoke(app, ["invariants", "--split", "--out", str(tmp_path)])
    result = runner.invoke(app, ["report", str(tmp_path / "invariants.csv")])
    assert result.exit_code == 2


def test_count_from_config(tmp_path):
    config = tmp_path / "experiment.json"
    config.write_text('{"name": "small", "grid": {"N": [1, 2], "n": ["1"]}}')
    out = tmp_path / "out"
    result = runner.invoke(app, ["count", "type2", "--config", str(config), "--out", str(out)])
    assert result.exit_code == 0, result.output
    rows = read_csv(out / "counts.csv")
    assert len(rows) == 3
    assert all(row["kind"].startswith("type2") for row in rows)
    assert len({row["config_hash"] for row in rows}) == 1
