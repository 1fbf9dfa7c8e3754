"""Tests for the bellnet command line"""

import json

import numpy as np
import pytest

import cli
import runner.experiments
from quantum import DegenerateInputError

CONFIG = """
experiment = "analytic-purification"
seed = 5

[sweep]
F = [0.7, 0.8]
"""


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "analytic.toml"
    path.write_text(CONFIG)
    return path


@pytest.fixture(autouse=True)
def _private_cache(isolated_cache):
    yield isolated_cache


class TestCli:
    def test_validate_config(self, config_file, capsys):
        assert cli.main(["validate-config", "--config", str(config_file)]) == cli.EXIT_OK
        assert "analytic-purification: OK" in capsys.readouterr().out

    def test_validate_rejects_unknown_key(self, tmp_path):
        path = tmp_path / "bad.toml"
        path.write_text(CONFIG + "typo_key = 1\n")
        assert cli.main(["validate-config", "--config", str(path)]) == cli.EXIT_CONFIG

    def test_run_writes_outputs(self, config_file, out_dir, capsys):
        code = cli.main(["run", "--config", str(config_file), "--out", str(out_dir)])
        assert code == cli.EXIT_OK
        run_dir = out_dir / "analytic-purification"
        assert (run_dir / "analytic-purification.csv").exists()
        assert (run_dir / "manifest.json").exists()
        assert "# Run: analytic-purification" in capsys.readouterr().out

    def test_seed_flag_overrides_config(self, config_file, out_dir):
        cli.main(["run", "--config", str(config_file), "--out", str(out_dir), "--seed", "42"])
        written = json.loads((out_dir / "analytic-purification" / "config.json").read_text())
        assert written["seed"] == 42

    def test_empty_sweep_exits_with_config_error(self, tmp_path, out_dir):
        path = tmp_path / "empty.toml"
        path.write_text('experiment = "analytic-purification"\nseed = 1\n[sweep]\nF = []\n')
        assert cli.main(["run", "--config", str(path), "--out", str(out_dir)]) == cli.EXIT_CONFIG
        assert list(out_dir.iterdir()) == []

    def test_sweep_subcommand(self, config_file, out_dir):
        code = cli.main(
            ["sweep", "--config", str(config_file), "--axis", "F", "--out", str(out_dir), "--threads", "2"]
        )
        assert code == cli.EXIT_OK
        assert (out_dir / "analytic-purification_F" / "analytic-purification_F.csv").exists()

    def test_sweep_undeclared_axis(self, config_file, out_dir):
        code = cli.main(["sweep", "--config", str(config_file), "--axis", "t_d_ns", "--out", str(out_dir)])
        assert code == cli.EXIT_CONFIG

    def test_report_after_run(self, config_file, out_dir, capsys):
        cli.main(["run", "--config", str(config_file), "--out", str(out_dir)])
        capsys.readouterr()
        assert cli.main(["report", str(out_dir / "analytic-purification")]) == cli.EXIT_OK
        assert "combined_ee_phase_error" in capsys.readouterr().out

    def test_report_missing_run(self, out_dir):
        assert cli.main(["report", str(out_dir / "nothing")]) == cli.EXIT_CONFIG

    def test_numeric_failure_exit_code(self, config_file, monkeypatch):
        def failing(*args, **kwargs):
            raise DegenerateInputError("rank-deficient design")

        monkeypatch.setattr(cli, "run_experiment", failing)
        assert cli.main(["run", "--config", str(config_file)]) == cli.EXIT_NUMERIC

    def test_failure_inside_point_exits_numeric(self, config_file, out_dir, monkeypatch):
        def singular(F):
            raise np.linalg.LinAlgError("Singular matrix")

        monkeypatch.setattr(runner.experiments, "analytic_purified_fidelity", singular)
        code = cli.main(["run", "--config", str(config_file), "--out", str(out_dir)])
        assert code == cli.EXIT_NUMERIC
        assert list(out_dir.iterdir()) == []

    def test_bad_parameter_exits_config(self, tmp_path, out_dir):
        path = tmp_path / "bad.toml"
        path.write_text('experiment = "purify-sweep"\nseed = 1\n[params]\nefficiency = 1.5\n')
        assert cli.main(["run", "--config", str(path), "--out", str(out_dir)]) == cli.EXIT_CONFIG

    def test_missing_subcommand(self):
        with pytest.raises(SystemExit):
            cli.main([])
