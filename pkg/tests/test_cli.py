"""CLI behaviour: modes, overrides, exit codes, reproducible outputs."""

from __future__ import annotations

import json

from qflow.cli import main


def write_config(tmp_path, **extra):
    cfg = {
        "algorithm": "greedy_dfs",
        "repetitions": 3,
        "workload": {"batch_size": 5, "tasks_per_group": 2},
        "topology": {"node_count": 4, "link_probability": 0.7},
        "measure_timing": False,
    }
    cfg.update(extra)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return path


class TestExitCodes:
    def test_success(self, tmp_path, capsys):
        cfg = write_config(tmp_path)
        assert main(["--config", str(cfg), "--out", str(tmp_path / "out")]) == 0
        assert (tmp_path / "out" / "results.csv").exists()
        assert "completion" in capsys.readouterr().out

    def test_missing_config_file_is_config_error(self, tmp_path, capsys):
        assert main(["--config", str(tmp_path / "nope.json")]) == 1
        assert "config error" in capsys.readouterr().err

    def test_bad_json_is_config_error(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert main(["--config", str(path)]) == 1

    def test_invalid_field_is_config_error(self, tmp_path, capsys):
        cfg = write_config(tmp_path, repetitions=0)
        assert main(["--config", str(cfg)]) == 1
        assert "repetitions" in capsys.readouterr().err

    def test_unknown_flag_is_config_error(self, capsys):
        assert main(["--frobnicate"]) == 1

    def test_runtime_failure_is_exit_two(self, tmp_path, capsys):
        cfg = write_config(tmp_path, profiles_path=str(tmp_path / "missing-profiles.json"))
        assert main(["--config", str(cfg)]) == 2
        assert "error" in capsys.readouterr().err


class TestOverrides:
    def test_flag_overrides_config(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "out"
        assert main(["--config", str(cfg), "--algo", "random_aware", "--reps", "2",
                     "--seed", "42", "--out", str(out)]) == 0
        rows = (out / "results.csv").read_text().splitlines()
        assert len(rows) == 1 + 2 + 2
        assert rows[1].startswith("random_aware,42,")

    def test_defaults_run_without_config_file(self, tmp_path):
        assert main(["--reps", "1", "--algo", "greedy_dfs", "--no-timing",
                     "--out", str(tmp_path / "o")]) == 0


class TestScenarioMode:
    def test_scenario_prints_table_row(self, capsys):
        assert main(["--scenario", "SP-MR", "--algo", "greedy_dfs", "--reps", "2",
                     "--no-timing"]) == 0
        out = capsys.readouterr().out
        assert "SP-MR" in out and "completion 100%" in out


class TestSweepMode:
    def test_sweep_writes_histogram_and_subdirs(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "sweep"
        assert main(["--config", str(cfg), "--sweep", "tasks_per_group=1,2",
                     "--out", str(out)]) == 0
        assert (out / "workload_tasks_per_group=1" / "results.csv").exists()
        assert (out / "workload_tasks_per_group=2" / "results.csv").exists()
        hist = (out / "failure_histogram.csv").read_text().splitlines()
        assert hist[0] == "algorithm,bin_lower_pct,bin_upper_pct,experiments"

    def test_sweep_requires_out(self, tmp_path):
        cfg = write_config(tmp_path)
        assert main(["--config", str(cfg), "--sweep", "tasks_per_group=1,2"]) == 1

    def test_sweep_rejects_bad_key(self, tmp_path):
        cfg = write_config(tmp_path)
        assert main(["--config", str(cfg), "--sweep", "nope=1",
                     "--out", str(tmp_path / "s")]) == 1


class TestReproducibility:
    def test_cli_outputs_byte_identical(self, tmp_path):
        cfg = write_config(tmp_path)
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(["--config", str(cfg), "--out", str(a)]) == 0
        assert main(["--config", str(cfg), "--out", str(b)]) == 0
        for name in ("results.csv", "qpu_shares.csv", "summary.json"):
            assert (a / name).read_bytes() == (b / name).read_bytes()
