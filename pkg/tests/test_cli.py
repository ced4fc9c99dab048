import json
import subprocess
import sys

import pytest

from simplexlearn.cli import OUT_ENV, main

LEARN_FAST = ["learn", "--n", "2", "--t1", "4000", "--t3", "4000", "--m", "12"]


def read_json(path):
    with open(path) as fh:
        return json.load(fh)


class TestLearnCommand:
    def test_complete_run_writes_report(self, tmp_path, capsys):
        out = str(tmp_path / "learn.json")
        code = main(LEARN_FAST + ["--seed", "0", "--out", out])
        assert code == 0
        report = read_json(out)
        assert report["command"] == "learn"
        assert report["complete"] is True
        assert report["schema_version"] == 1
        assert report["n"] == 2
        assert len(report["vertices"]) == 3
        assert len(report["per_vertex_match_error"]) == 3
        assert report["tv_estimate"] is not None
        assert report["tv_estimate"] <= 0.5
        assert report["cli_config"]["t1"] == 4000
        assert "wrote" in capsys.readouterr().out

    def test_incomplete_run_exits_two(self, tmp_path):
        out = str(tmp_path / "learn.json")
        code = main(["learn", "--n", "2", "--t1", "2000", "--t3", "2000", "--m", "1", "--seed", "0", "--out", out])
        assert code == 2
        report = read_json(out)
        assert report["complete"] is False
        assert report["tv_estimate"] is None

    def test_byte_determinism_modulo_wall_time(self, tmp_path):
        out = str(tmp_path / "learn.json")
        main(LEARN_FAST + ["--seed", "3", "--out", out])
        first = read_json(out)
        main(LEARN_FAST + ["--seed", "3", "--out", out])
        second = read_json(out)
        first.pop("wall_time_ms")
        second.pop("wall_time_ms")
        assert first == second

    def test_iteration_count_flag(self, tmp_path):
        out = str(tmp_path / "learn.json")
        code = main(LEARN_FAST + ["--r", "40", "--seed", "0", "--out", out])
        assert code == 0
        report = read_json(out)
        assert report["config"]["vertex_finder"]["iterations"] == 40


class TestReduceCommand:
    def test_simplex_problem(self, tmp_path):
        out = str(tmp_path / "reduce.json")
        code = main(["reduce", "--problem", "simplex", "--n", "2", "--t", "100000", "--seed", "0", "--out", out])
        assert code == 0
        report = read_json(out)
        assert report["problem"] == "simplex"
        assert len(report["matched_errors"]) == 3
        assert report["max_match_error"] <= 0.1
        assert report["separation_index"] <= 0.1
        assert report["c_pn"] is None and report["symdiff"] is None

    def test_lp_problem(self, tmp_path):
        out = str(tmp_path / "reduce.json")
        code = main(["reduce", "--problem", "lp", "--p", "1", "--n", "2", "--t", "100000", "--seed", "0", "--out", out])
        assert code == 0
        report = read_json(out)
        assert report["p"] == 1.0
        assert report["symdiff"] <= 0.2
        assert report["c_pn"]["value"] == pytest.approx(1.0 / 6.0**0.5, abs=0.01)
        assert report["matched_errors"] is None

    def test_lp_requires_p(self):
        assert main(["reduce", "--problem", "lp", "--n", "2"]) == 1

    def test_p_range_checked(self):
        assert main(["reduce", "--problem", "lp", "--p", "0.5", "--n", "2"]) == 1


class TestVerifyCommand:
    def test_landscape_single_dimension(self, tmp_path):
        out = str(tmp_path / "verify.json")
        code = main(["verify", "--suite", "landscape", "--n", "3", "--seed", "0", "--out", out])
        assert code == 0
        report = read_json(out)
        assert report["suite"] == "landscape"
        assert report["pass"] is True
        assert [c["name"] for c in report["checks"]] == ["landscape_n3"]

    def test_tv_suite(self, tmp_path):
        out = str(tmp_path / "verify.json")
        code = main(["verify", "--suite", "tv", "--seed", "0", "--out", out])
        assert code == 0
        assert read_json(out)["pass"] is True


class TestOutputRouting:
    def test_env_var_directory(self, tmp_path, monkeypatch):
        monkeypatch.setenv(OUT_ENV, str(tmp_path))
        code = main(["verify", "--suite", "landscape", "--n", "2", "--seed", "7"])
        assert code == 0
        report = read_json(tmp_path / "verify-seed7.json")
        assert report["cli_config"]["seed"] == 7

    def test_stdout_fallback(self, capsys, monkeypatch):
        monkeypatch.delenv(OUT_ENV, raising=False)
        code = main(["verify", "--suite", "landscape", "--n", "2", "--seed", "0"])
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["command"] == "verify"


class TestConfigFile:
    def test_config_supplies_values_flags_override(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"n": 2, "t1": 4000, "t3": 4000, "m": 12, "seed": 1}))
        out = str(tmp_path / "learn.json")
        code = main(["learn", "--config", str(cfg), "--seed", "4", "--out", out])
        assert code == 0
        report = read_json(out)
        assert report["cli_config"]["t1"] == 4000
        assert report["cli_config"]["seed"] == 4  # flag beats config file

    def test_unknown_field_rejected(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"bogus": 1}))
        assert main(["learn", "--config", str(cfg)]) == 1

    def test_malformed_json_rejected(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text("{not json")
        assert main(["learn", "--config", str(cfg)]) == 1


class TestValidation:
    def test_n_floor(self):
        assert main(["learn", "--n", "1"]) == 1
        assert main(["reduce", "--n", "0"]) == 1

    def test_positive_counts(self):
        assert main(["learn", "--t1", "0"]) == 1
        assert main(["reduce", "--t", "0"]) == 1

    def test_negative_seed(self):
        assert main(["learn", "--seed", "-1"]) == 1

    def test_bad_threads(self):
        assert main(["verify", "--suite", "tv", "--threads", "0"]) == 1


class TestConsoleScript:
    def test_module_entry_point(self, tmp_path):
        out = str(tmp_path / "verify.json")
        proc = subprocess.run(
            [sys.executable, "-m", "simplexlearn.cli", "verify", "--suite", "landscape", "--n", "2", "--out", out],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert read_json(out)["pass"] is True
