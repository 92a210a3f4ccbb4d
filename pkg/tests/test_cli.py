"""
Tests for the command-line interface and the experiment runner.
"""

import json

import pytest
from click.testing import CliRunner

from cr_discs import __version__
from cr_discs.cli import cli, run
from cr_discs.config import ExperimentConfig
from cr_discs.errors import ConfigurationError
from cr_discs.runner import ExperimentRunner


class TestCommandLine:
    """Tests for the cr-discs command group."""

    @classmethod
    def setup_class(cls):
        cls.runner = CliRunner()

    def invoke(self, *args):
        return self.runner.invoke(cli, ["--no-color", *args])

    def test_version(self, capsys):
        assert run(["version"]) == 0
        assert f"cr-discs version {__version__}" in capsys.readouterr().out

    def test_help_lists_subcommands(self):
        result = self.invoke("--help")
        assert result.exit_code == 0
        for name in ("bishop", "defect", "deform-rank", "wedge", "isotopy", "approx", "remove", "selftest", "scenarios"):
            assert name in result.output

    def test_bishop_writes_report(self, tmp_path):
        result = self.invoke("bishop", "--scenario", "quadric-c3", "--grid", "256", "--out", str(tmp_path))
        assert result.exit_code == 0, result.output
        report = json.loads((tmp_path / "bishop.json").read_text())
        assert report["status"] == "All checks passed"
        assert report["payload"]["closed_form_error"] < 1e-10
        assert report["manifest"]["grid"] == 256
        assert report["manifest"]["scenario"] == "quadric-c3"
        assert (tmp_path / "bishop_boundary.csv").read_text().startswith("theta,z1_re,z1_im")

    def test_reports_are_reproducible(self, tmp_path):
        first, second = tmp_path / "a", tmp_path / "b"
        for out in (first, second):
            result = self.invoke("bishop", "--scenario", "pole-c2", "--grid", "128", "--out", str(out))
            assert result.exit_code == 0, result.output
        assert (first / "bishop.json").read_bytes() == (second / "bishop.json").read_bytes()
        assert (first / "bishop_boundary.csv").read_bytes() == (second / "bishop_boundary.csv").read_bytes()

    def test_deform_rank_passes_cross_check(self, tmp_path):
        result = self.invoke("deform-rank", "--scenario", "quadric-c3", "--out", str(tmp_path))
        assert result.exit_code == 0, result.output
        report = json.loads((tmp_path / "deform-rank.json").read_text())
        derivative = report["payload"]["normal_derivative"]
        assert derivative["rank"] == 1
        assert derivative["discrepancy"] < 1e-6
        assert (tmp_path / "deform-rank_d_prime.csv").read_text().startswith("row,t1,check_t1")

    def test_approx_from_toml(self, tmp_path):
        config = tmp_path / "approx.toml"
        config.write_text(f'out = "{(tmp_path / "out").as_posix()}"\n\n[approx]\ntaus = [10.0, 40.0, 160.0]\n')
        result = self.invoke("approx", "--config", str(config))
        assert result.exit_code == 0, result.output
        report = json.loads((tmp_path / "out" / "approx.json").read_text())
        assert report["payload"]["table"]["monotone"] is True
        rows = (tmp_path / "out" / "approx_convergence.csv").read_text().splitlines()
        assert rows[0] == "tau,value_re,value_im,error,oracle_error"
        assert len(rows) == 4

    def test_unknown_scenario_exit_code(self, tmp_path):
        result = self.invoke("bishop", "--scenario", "nowhere", "--out", str(tmp_path))
        assert result.exit_code == 1
        report = json.loads((tmp_path / "bishop.json").read_text())
        assert report["payload"]["error"]["error"] == "ConfigurationError"

    def test_bad_grid_exit_code(self, tmp_path):
        result = self.invoke("bishop", "--grid", "100", "--out", str(tmp_path))
        assert result.exit_code == 1
        assert "power of two" in result.output

    def test_config_error_reports_line(self, tmp_path):
        config = tmp_path / "bad.json"
        config.write_text('{\n  "grid": 256,\n  "sead": 3\n}\n')
        result = self.invoke("bishop", "--config", str(config))
        assert result.exit_code == 1
        assert "line 3" in result.output

    def test_domain_error_exit_code(self, tmp_path):
        result = self.invoke("remove", "--scenario", "flat-c2", "--out", str(tmp_path))
        assert result.exit_code == 2
        report = json.loads((tmp_path / "remove.json").read_text())
        assert report["findings"][0]["stage"] == "good_disc"

    @pytest.mark.slow
    @pytest.mark.integration
    def test_selftest_passes(self, tmp_path):
        result = self.invoke("selftest", "--out", str(tmp_path))
        assert result.exit_code == 0, result.output
        report = json.loads((tmp_path / "selftest.json").read_text())
        assert report["payload"]["checks_failed"] == 0
        assert set(report["payload"]["scenarios"]) == {"quadric-c3", "pole-c2", "flat-c2"}

    def test_quiet_suppresses_summary(self, tmp_path):
        result = self.invoke("--quiet", "bishop", "--scenario", "pole-c2", "--grid", "128", "--out", str(tmp_path))
        assert result.exit_code == 0
        assert "All checks passed" not in result.output


class TestExperimentRunner:
    """Tests for running experiments without the command line."""

    def test_unknown_experiment(self):
        results = ExperimentRunner().run_all(["teleport"])
        assert results[0].payload["exit_code"] == 1
        assert results[0].has_failures()

    def test_failure_is_isolated(self):
        settings = ExperimentConfig(grid=128, scenario="pole-c2")
        results = ExperimentRunner(settings).run_all(["teleport", "bishop"])
        assert [r.name for r in results] == ["teleport", "bishop"]
        assert results[0].has_failures()
        assert not results[1].has_failures()

    def test_save_names_files_after_results(self, tmp_path):
        settings = ExperimentConfig(grid=128, scenario="pole-c2", out=str(tmp_path))
        runner = ExperimentRunner(settings)
        results = runner.run("bishop")
        results.name = "bishop:pole-c2"
        paths = runner.save(results)
        assert paths == [str(tmp_path / "bishop_pole-c2.json"), str(tmp_path / "bishop_pole-c2_boundary.csv")]

    @pytest.mark.slow
    def test_scenarios_run_every_bundled_file(self, tmp_path):
        settings = ExperimentConfig(grid=512, out=str(tmp_path))
        results = ExperimentRunner(settings).run_scenarios(names=["defect"])
        names = sorted(r.name for r in results)
        assert names == ["defect:flat-c2", "defect:pole-c2", "defect:quadric-c3"]
        assert not any(r.has_failures() for r in results)

    def test_scenarios_missing_directory(self, tmp_path):
        with pytest.raises(ConfigurationError, match="invalid scenario directory"):
            ExperimentRunner().run_scenarios(tmp_path / "absent")
