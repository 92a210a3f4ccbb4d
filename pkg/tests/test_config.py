"""
Tests for configuration and scenario loading.
"""

import json

import pytest

from cr_discs.config import ExperimentConfig, check_grid, find_line
from cr_discs.errors import ConfigurationError
from cr_discs.experiments import BishopExperiment
from cr_discs.extend.singular import EmptySet, SubmanifoldSet
from cr_discs.functions import ExponentialFunction, PoleFunction
from cr_discs.scenario import Scenario, bundled_scenarios, load_scenario


class TestExperimentConfig:
    """Tests for JSON and TOML configuration files."""

    def test_defaults(self):
        config = ExperimentConfig()
        assert config.grid == 512
        assert config.tol == 1e-11
        assert config.seed == 0
        assert config.out == "./cr_discs_out"

    def test_grid_not_power_of_two(self):
        for size in (100, 8, 0):
            with pytest.raises(ConfigurationError, match="size must be a power of two"):
                check_grid(size)
        assert check_grid(1024) == 1024

    def test_grid_in_file_reports_line(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{\n  "scenario": "quadric-c3",\n  "grid": 100\n}\n')
        with pytest.raises(ConfigurationError) as excinfo:
            ExperimentConfig.load(path)
        assert excinfo.value.line == 3
        assert excinfo.value.exit_code == 1
        assert "power of two" in excinfo.value.message

    def test_unknown_key_reports_line(self, tmp_path):
        path = tmp_path / "typo.json"
        path.write_text('{\n  "grid": 256,\n  "tolerance": 1e-9\n}\n')
        with pytest.raises(ConfigurationError, match="unknown key 'tolerance'") as excinfo:
            ExperimentConfig.load(path)
        assert excinfo.value.line == 3
        assert excinfo.value.message.startswith("line 3:")

    def test_unknown_key_in_block(self, tmp_path):
        path = tmp_path / "block.toml"
        path.write_text('grid = 256\n\n[bishop]\nc = 0.02\nstep = 3\n')
        config = ExperimentConfig.load(path)
        with pytest.raises(ConfigurationError, match="unknown key 'step'") as excinfo:
            BishopExperiment(config)
        assert excinfo.value.line == 5

    def test_toml_file(self, tmp_path):
        path = tmp_path / "run.toml"
        path.write_text(
            'scenario = "pole-c2"\ngrid = 1024\ntol = 1e-10\nseed = 7\n\n'
            '[tolerances]\nrank = 1e-7\n\n[defect]\ndisc = "constant"\n'
        )
        config = ExperimentConfig.load(path)
        assert config.scenario == "pole-c2"
        assert config.grid == 1024
        assert config.tol == 1e-10
        assert config.seed == 7
        assert config.tolerances == {"rank": 1e-7}
        assert config.block("defect", {"disc": "section", "c": 0.05}) == {"disc": "constant", "c": 0.05}
        assert config.base_dir == str(tmp_path.resolve())

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{\n  "grid": 256,\n}\n')
        with pytest.raises(ConfigurationError, match="invalid JSON") as excinfo:
            ExperimentConfig.load(path)
        assert excinfo.value.line == 3

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError, match="not found"):
            ExperimentConfig.load(tmp_path / "absent.json")

    def test_bad_values(self):
        with pytest.raises(ConfigurationError, match="tol must be a positive number"):
            ExperimentConfig.from_dict({"tol": -1.0})
        with pytest.raises(ConfigurationError, match="seed must be an integer"):
            ExperimentConfig.from_dict({"seed": 1.5})
        with pytest.raises(ConfigurationError, match="block 'approx' must be a table"):
            ExperimentConfig.from_dict({"approx": 3})

    def test_override(self):
        config = ExperimentConfig().override(grid=2048, seed=3)
        assert config.grid == 2048
        assert config.seed == 3
        with pytest.raises(ConfigurationError):
            config.override(grid=1000)

    def test_out_not_part_of_hash(self):
        first = BishopExperiment(ExperimentConfig(out="a")).manifest()
        second = BishopExperiment(ExperimentConfig(out="b")).manifest()
        third = BishopExperiment(ExperimentConfig(seed=1)).manifest()
        assert first["config_sha256"] == second["config_sha256"]
        assert first["config_sha256"] != third["config_sha256"]

    def test_find_line(self):
        text = '{\n  "grid": 2,\n  "bishop": {"c": 1}\n}'
        assert find_line(text, "grid") == 2
        assert find_line(text, "c") == 3
        assert find_line(text, "seed") is None
        assert find_line("[bishop]\nc = 1\n", "bishop") == 1


class TestScenarios:
    """Tests for scenario files."""

    def test_bundled_scenarios_load(self):
        names = {path.stem for path in bundled_scenarios()}
        assert {"quadric-c3", "pole-c2", "flat-c2"} <= names
        for path in bundled_scenarios():
            scenario = load_scenario(path)
            assert scenario.name == path.stem
            assert abs(scenario.manifold.eval_r(scenario.manifold.base_point)).max() < 1e-12

    def test_quadric_scenario(self):
        scenario = load_scenario("quadric-c3")
        assert (scenario.manifold.p, scenario.manifold.q) == (2, 1)
        assert scenario.removable is True
        assert scenario.expected_defect == 0
        assert scenario.submanifold.codim >= 2

    def test_pole_scenario(self):
        scenario = load_scenario("pole-c2")
        assert scenario.removable is False
        assert isinstance(scenario.function, PoleFunction)

    def test_flat_scenario(self):
        scenario = load_scenario("flat-c2")
        assert scenario.expected_defect == 1
        assert scenario.removable is None
        assert isinstance(scenario.function, ExponentialFunction)
        assert isinstance(scenario.singular, EmptySet)

    def test_default_m1_is_first_v_hyperplane(self):
        scenario = load_scenario("flat-c2")
        assert scenario.m1.codim == 1
        assert scenario.m1.name == "M1"

    def test_unknown_scenario(self):
        with pytest.raises(ConfigurationError, match="scenario not found: nowhere"):
            load_scenario("nowhere")

    def test_scenario_from_file(self, tmp_path):
        data = json.loads(json.dumps(load_scenario("flat-c2").to_dict()))
        data["name"] = "copy"
        data["singular"] = "N"
        path = tmp_path / "copy.json"
        path.write_text(json.dumps(data, indent=2))
        scenario = load_scenario("copy.json", str(tmp_path))
        assert scenario.name == "copy"
        assert isinstance(scenario.singular, SubmanifoldSet)

    def test_scenario_unknown_key(self):
        data = dict(load_scenario("flat-c2").to_dict())
        data["colour"] = "red"
        with pytest.raises(ConfigurationError, match="unknown key 'colour'"):
            Scenario.from_dict(data)

    def test_scenario_unknown_block_key(self):
        data = dict(load_scenario("flat-c2").to_dict())
        data["disc"] = {"c": 0.05, "radius": 1.0}
        with pytest.raises(ConfigurationError, match="unknown key 'radius'"):
            Scenario.from_dict(data)

    def test_scenario_missing_function(self):
        data = dict(load_scenario("flat-c2").to_dict())
        del data["function"]
        with pytest.raises(ConfigurationError, match="missing 'function'"):
            Scenario.from_dict(data)

    def test_scenario_bad_singular(self):
        data = dict(load_scenario("flat-c2").to_dict())
        data["singular"] = "everything"
        with pytest.raises(ConfigurationError, match="singular set"):
            Scenario.from_dict(data)

    def test_scenario_bad_grid(self):
        data = dict(load_scenario("flat-c2").to_dict())
        data["grid"] = 1000
        with pytest.raises(ConfigurationError, match="size must be a power of two"):
            Scenario.from_dict(data)

    def test_scenario_bad_manifold(self):
        data = dict(load_scenario("flat-c2").to_dict())
        data["manifold"] = {"p": 1, "q": 1, "h": [[[[1, 0, 0], 1.0]]]}
        with pytest.raises(ConfigurationError, match="scenario manifold"):
            Scenario.from_dict(data)
