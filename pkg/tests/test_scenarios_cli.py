import json

import numpy as np
import pytest

from asrcsim import (
    BUILTINS,
    ConfigurationError,
    builtin_config,
    run_scenario,
    scenario_from_config,
    scenario_to_config,
    validate_config,
)
from asrcsim.cli import ENV_OUTPUT_ROOT, main


def write_json(path, obj):
    path.write_text(json.dumps(obj, indent=1))
    return str(path)


def short_config(name="wmr-circle", horizon_s=2.0):
    config = builtin_config(name)
    config["sim"]["horizon_s"] = horizon_s
    return config


class TestValidateConfig:
    @pytest.mark.parametrize("name", sorted(BUILTINS))
    def test_builtins_are_clean(self, name):
        assert validate_config(builtin_config(name)) == []

    def test_missing_section(self):
        config = builtin_config("wmr-circle")
        del config["controller"]
        assert any("controller" in v for v in validate_config(config))

    def test_unknown_top_level_key(self):
        config = builtin_config("wmr-circle")
        config["extra_section"] = {}
        assert any("extra_section" in v for v in validate_config(config))

    def test_unknown_plant_kind(self):
        config = builtin_config("wmr-circle")
        config["plant"]["kind"] = "quadrotor"
        assert any("plant.kind" in v for v in validate_config(config))

    def test_non_pd_omega(self):
        config = builtin_config("wmr-circle")
        config["controller"]["omega"] = [[1.0, 0.0], [0.0, -1.0]]
        assert any("omega" in v for v in validate_config(config))

    def test_gamma_floor_strict(self):
        config = builtin_config("wmr-circle")
        config["asrc"]["gamma_init"] = config["asrc"]["beta"]
        assert any("gamma_init" in v for v in validate_config(config))

    def test_zero_substeps(self):
        config = builtin_config("wmr-circle")
        config["sim"]["substeps"] = 0
        assert any("substeps" in v for v in validate_config(config))

    def test_robust_margin_below_one(self):
        config = builtin_config("wmr-circle")
        config["robust"]["theta_margin"] = 0.9
        assert any("theta_margin" in v for v in validate_config(config))

    def test_bad_payload_window(self):
        config = builtin_config("wmr-circle")
        config["plant"]["payload_windows"][0]["t_off_s"] = 1.0
        assert any("payload_windows" in v for v in validate_config(config))

    def test_negative_friction(self):
        config = builtin_config("wmr-circle")
        config["plant"]["friction"]["viscous_nms"] = -0.1
        assert any("viscous" in v for v in validate_config(config))

    def test_negative_noise_std(self):
        config = builtin_config("wmr-circle")
        config["sim"]["noise_std"] = -0.01
        assert any("noise_std" in v for v in validate_config(config))

    def test_null_noise_std_allowed(self):
        config = builtin_config("wmr-circle")
        config["sim"]["noise_std"] = None
        assert validate_config(config) == []

    def test_bad_trajectory_kind(self):
        config = builtin_config("wmr-circle")
        config["trajectory"] = {"kind": "spline"}
        assert any("trajectory" in v for v in validate_config(config))

    def test_violations_name_dotted_paths(self):
        config = builtin_config("wmr-circle")
        config["sim"]["substeps"] = 0
        config["asrc"]["beta"] = -1.0
        violations = validate_config(config)
        assert len(violations) >= 2
        for violation in violations:
            path = violation.split(":", 1)[0]
            assert "." in path or path in ("name",)


class TestBuiltinRegistry:
    def test_four_builtins_listed(self):
        assert set(BUILTINS) == {
            "wmr-circle",
            "wmr-lowgain",
            "coriolis-track",
            "oracle-robust",
        }
        assert all(isinstance(v, str) and v for v in BUILTINS.values())

    def test_unknown_name_rejected(self):
        with pytest.raises(ConfigurationError):
            builtin_config("wmr-square")

    def test_returns_fresh_copies(self):
        a = builtin_config("wmr-circle")
        a["sim"]["horizon_s"] = 1.0
        assert builtin_config("wmr-circle")["sim"]["horizon_s"] == 40.0


class TestScenarioRoundTrip:
    @pytest.mark.parametrize("name", sorted(BUILTINS))
    def test_config_survives_round_trip(self, name):
        config = builtin_config(name)
        assert scenario_to_config(scenario_from_config(config)) == config

    def test_reparse_produces_identical_run(self):
        config = short_config()
        first = scenario_from_config(config)
        reparsed = scenario_from_config(scenario_to_config(first))
        assert run_scenario(first).to_csv_text() == run_scenario(reparsed).to_csv_text()

    def test_controller_override(self):
        config = builtin_config("wmr-circle")
        sc = scenario_from_config(config, controller_kind="asmc")
        assert sc.controller_kind == "asmc"
        back = scenario_to_config(sc)
        assert back["controller"]["kind"] == "asmc"
        back["controller"]["kind"] = "asrc"
        assert back == config

    def test_invalid_config_rejected_with_all_violations(self):
        config = builtin_config("wmr-circle")
        config["sim"]["substeps"] = 0
        with pytest.raises(ConfigurationError):
            scenario_from_config(config)

    def test_synthesized_bound_is_populated(self):
        sc = scenario_from_config(builtin_config("coriolis-track"))
        assert sc.theta_star is not None
        assert sc.theta_star.theta0 > 0.0
        assert sc.robust_theta is not None
        # margin 1.0 keeps the synthesized values
        assert sc.robust_theta.theta0 == pytest.approx(sc.theta_star.theta0)


class TestCliValidate:
    def test_valid_config(self, tmp_path, capsys):
        path = write_json(tmp_path / "ok.json", builtin_config("wmr-circle"))
        assert main(["validate", path]) == 0

    def test_violations_exit_one(self, tmp_path, capsys):
        config = builtin_config("wmr-circle")
        config["asrc"]["gamma_init"] = 0.05
        path = write_json(tmp_path / "bad.json", config)
        assert main(["validate", path]) == 1
        out = capsys.readouterr()
        assert "gamma_init" in out.out + out.err

    def test_malformed_json_exit_two(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text('{"name": "x",\n  "plant": }\n')
        assert main(["validate", str(path)]) == 2
        err = capsys.readouterr().err
        assert "broken.json:2:" in err


class TestCliListScenarios:
    def test_lists_all_builtins(self, capsys):
        assert main(["list-scenarios"]) == 0
        out = capsys.readouterr().out
        for name in BUILTINS:
            assert name in out


class TestCliRun:
    def manifest(self, tmp_path, config=None, **manifest_overrides):
        config_path = write_json(tmp_path / "scenario.json", config or short_config())
        manifest = {"scenario": config_path, "controllers": ["asrc"]}
        manifest.update(manifest_overrides)
        return write_json(tmp_path / "manifest.json", manifest)

    def test_smoke_run_writes_outputs(self, tmp_path, capsys, monkeypatch):
        monkeypatch.delenv(ENV_OUTPUT_ROOT, raising=False)
        out_root = tmp_path / "out"
        code = main(["run", self.manifest(tmp_path), "--output-dir", str(out_root)])
        assert code == 0
        run_dir = out_root / "wmr-circle" / "asrc"
        assert (run_dir / "trace.csv").is_file()
        assert (run_dir / "gains.csv").is_file()
        assert (run_dir / "summary.txt").is_file()
        metrics_csv = out_root / "wmr-circle" / "metrics.csv"
        assert metrics_csv.is_file()
        header, row = metrics_csv.read_text().strip().splitlines()
        assert header == "label,controller,parameter,value,rms_ep_m,rms_tau_nm,rms_e_rad,diverged"
        assert row.startswith("asrc,asrc,")

    def test_builtin_scenario_by_name(self, tmp_path, monkeypatch):
        monkeypatch.delenv(ENV_OUTPUT_ROOT, raising=False)
        config_path = write_json(tmp_path / "s.json", short_config("oracle-robust", 1.0))
        manifest = write_json(
            tmp_path / "m.json",
            {"scenario": config_path, "controllers": ["robust"]},
        )
        out_root = tmp_path / "out"
        assert main(["run", manifest, "--output-dir", str(out_root)]) == 0
        assert (out_root / "oracle-robust" / "robust" / "trace.csv").is_file()
        # fixed-gain runs have no adaptive gain trace
        assert not (out_root / "oracle-robust" / "robust" / "gains.csv").exists()

    def test_sweep_and_controller_grid(self, tmp_path, capsys, monkeypatch):
        monkeypatch.delenv(ENV_OUTPUT_ROOT, raising=False)
        manifest = self.manifest(
            tmp_path,
            controllers=["asrc", "asmc"],
            sweep={"parameter": "controller.boundary_layer", "values": [0.5, 0.3]},
        )
        out_root = tmp_path / "out"
        assert main(["run", manifest, "--output-dir", str(out_root)]) == 0
        labels = [
            "asrc_boundary_layer_0.5",
            "asrc_boundary_layer_0.3",
            "asmc_boundary_layer_0.5",
            "asmc_boundary_layer_0.3",
        ]
        for label in labels:
            assert (out_root / "wmr-circle" / label / "trace.csv").is_file()
        rows = (out_root / "wmr-circle" / "metrics.csv").read_text().strip().splitlines()[1:]
        assert len(rows) == 4
        assert {r.split(",")[0] for r in rows} == set(labels)

    def test_workers_pool_matches_serial(self, tmp_path, monkeypatch):
        monkeypatch.delenv(ENV_OUTPUT_ROOT, raising=False)
        manifest = self.manifest(
            tmp_path,
            sweep={"parameter": "controller.boundary_layer", "values": [0.5, 0.3]},
            workers=2,
        )
        out_root = tmp_path / "out"
        assert main(["run", manifest, "--output-dir", str(out_root)]) == 0
        assert (out_root / "wmr-circle" / "asrc_boundary_layer_0.3" / "trace.csv").is_file()

    def test_malformed_manifest_exit_two(self, tmp_path, capsys):
        path = tmp_path / "m.json"
        path.write_text("{\n  broken\n}\n")
        assert main(["run", str(path)]) == 2
        assert "m.json:2:" in capsys.readouterr().err

    def test_unknown_manifest_key_exit_two(self, tmp_path, capsys):
        manifest = self.manifest(tmp_path, typo_key=1)
        assert main(["run", manifest]) == 2
        assert "typo_key" in capsys.readouterr().err

    def test_unknown_sweep_field_exit_two(self, tmp_path, capsys):
        manifest = self.manifest(
            tmp_path, sweep={"parameter": "controller.no_such", "values": [1.0]}
        )
        assert main(["run", manifest]) == 2
        assert "no_such" in capsys.readouterr().err

    def test_unknown_controller_exit_two(self, tmp_path, capsys):
        manifest = self.manifest(tmp_path, controllers=["pid"])
        assert main(["run", manifest]) == 2
        assert "pid" in capsys.readouterr().err

    def test_missing_scenario_file_exit_two(self, tmp_path, capsys):
        manifest = write_json(
            tmp_path / "m.json", {"scenario": str(tmp_path / "nope.json")}
        )
        assert main(["run", manifest]) == 2

    def test_invalid_scenario_values_exit_two(self, tmp_path, capsys):
        config = short_config()
        config["asrc"]["gamma_init"] = 0.0
        manifest = self.manifest(tmp_path, config=config)
        assert main(["run", manifest]) == 2
        assert "gamma_init" in capsys.readouterr().err

    def test_divergence_exit_three_keeps_outputs(self, tmp_path, capsys, monkeypatch):
        monkeypatch.delenv(ENV_OUTPUT_ROOT, raising=False)
        config = short_config(horizon_s=5.0)
        config["plant"]["wheel_inertia_kgm2"] = 0.01
        manifest = self.manifest(tmp_path, config=config)
        out_root = tmp_path / "out"
        assert main(["run", manifest, "--output-dir", str(out_root)]) == 3
        assert "asrc" in capsys.readouterr().err
        assert (out_root / "wmr-circle" / "asrc" / "trace.csv").is_file()
        rows = (out_root / "wmr-circle" / "metrics.csv").read_text().strip().splitlines()[1:]
        assert rows[0].endswith(",1")

    def test_output_root_precedence(self, tmp_path, monkeypatch):
        manifest_dir = tmp_path / "from_manifest"
        env_dir = tmp_path / "from_env"
        flag_dir = tmp_path / "from_flag"
        manifest = self.manifest(tmp_path, output_dir=str(manifest_dir))

        monkeypatch.setenv(ENV_OUTPUT_ROOT, str(env_dir))
        assert main(["run", manifest, "--output-dir", str(flag_dir)]) == 0
        assert (flag_dir / "wmr-circle" / "asrc" / "trace.csv").is_file()
        assert not env_dir.exists()
        assert not manifest_dir.exists()

        assert main(["run", manifest]) == 0
        assert (env_dir / "wmr-circle" / "asrc" / "trace.csv").is_file()
        assert not manifest_dir.exists()

        monkeypatch.delenv(ENV_OUTPUT_ROOT)
        assert main(["run", manifest]) == 0
        assert (manifest_dir / "wmr-circle" / "asrc" / "trace.csv").is_file()

    def test_default_output_root_is_runs(self, tmp_path, monkeypatch):
        monkeypatch.delenv(ENV_OUTPUT_ROOT, raising=False)
        monkeypatch.chdir(tmp_path)
        assert main(["run", self.manifest(tmp_path)]) == 0
        assert (tmp_path / "runs" / "wmr-circle" / "asrc" / "trace.csv").is_file()
