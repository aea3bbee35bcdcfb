"""Tests for the iron-fi command line."""
from __future__ import annotations

import pytest
import yaml

import cli
from cli import apply_overrides, build_parser, main
from models.config import load_experiment_config


def make_small_config(tmp_path, experiments_dir, **overrides):
    raw = yaml.safe_load((experiments_dir / "quad_sim.yaml").read_text(encoding="utf-8"))
    raw["ensemble"].update({"n_particles": 10, "n_steps": 20, "seeds": [0]})
    raw["grids"]["alpha"] = [1.0, 10.0]
    raw.update(overrides)
    path = tmp_path / "small.yaml"
    path.write_text(yaml.safe_dump(raw), encoding="utf-8")
    return path


class TestParser:
    """Subcommands and flags."""

    def test_experiment_flags(self):
        """--config, --out, --threads and --seed parse into their destinations."""
        args = build_parser().parse_args(["quad-sim", "--config", "c.yaml", "--out", "o", "--threads", "3", "--seed", "5"])
        assert args.command == "quad-sim"
        assert args.config_path == "c.yaml"
        assert args.out_dir == "o"
        assert args.threads == 3
        assert args.seed == 5
        assert args.log_level is None

    def test_config_required(self):
        """Experiments need --config."""
        with pytest.raises(SystemExit):
            build_parser().parse_args(["logreg-sweep"])

    def test_selftest_flags(self):
        """selftest takes --instances and --seed."""
        args = build_parser().parse_args(["selftest", "--instances", "4", "--seed", "2"])
        assert (args.command, args.instances, args.seed) == ("selftest", 4, 2)

    def test_no_command(self, capsys):
        """No subcommand prints help and exits 1."""
        assert main([]) == 1


class TestOverrides:
    """--seed replaces both seed settings."""

    def test_seed_override(self, experiments_dir):
        """noise.seed and ensemble.seeds follow --seed."""
        cfg = apply_overrides(load_experiment_config(experiments_dir / "logreg_sweep.yaml"), 42)
        assert cfg.noise.seed == 42
        assert cfg.ensemble.seeds == [42]

    def test_no_override(self, experiments_dir):
        """Without --seed the config is unchanged."""
        cfg = load_experiment_config(experiments_dir / "quad_sim.yaml")
        assert apply_overrides(cfg, None) is cfg


class TestMain:
    """End-to-end invocations."""

    def test_quad_sim_small(self, tmp_path, experiments_dir):
        """A small quad-sim run exits 0 and writes its artifacts."""
        out = tmp_path / "out"
        code = main(["quad-sim", "--config", str(make_small_config(tmp_path, experiments_dir)), "--out", str(out), "--dotenv", str(tmp_path / ".env")])
        assert code == 0
        assert (out / "mse_decomposition.csv").exists()
        assert (out / "clouds.csv").exists()
        assert (out / "config.yaml").exists()

    def test_seed_written_to_snapshot(self, tmp_path, experiments_dir):
        """The config snapshot records the --seed override."""
        out = tmp_path / "out"
        main(["quad-sim", "--config", str(make_small_config(tmp_path, experiments_dir)), "--out", str(out), "--seed", "9"])
        snapshot = load_experiment_config(out / "config.yaml")
        assert snapshot.ensemble.seeds == [9]

    def test_bad_config_exits_1(self, tmp_path, capsys):
        """Invalid files report a configuration error and exit 1."""
        path = tmp_path / "bad.yaml"
        path.write_text("grids:\n  alpha: []\n", encoding="utf-8")
        assert main(["quad-sim", "--config", str(path)]) == 1
        assert "Invalid experiment configuration" in capsys.readouterr().err

    def test_wrong_objective_exits_1(self, tmp_path, experiments_dir):
        """quad-sim on a log-cosh file is a configuration error."""
        assert main(["quad-sim", "--config", str(experiments_dir / "logcosh_sim.yaml"), "--out", str(tmp_path)]) == 1

    def test_selftest_exit_codes(self, monkeypatch, capsys):
        """selftest exits 0 when every check passes and 1 otherwise."""
        assert main(["selftest", "--instances", "5"]) == 0
        assert "all checks passed" in capsys.readouterr().out

        from selftest.models import CheckResult, SelftestReport

        failing = SelftestReport(results=[CheckResult(name="x", passed=False)])
        monkeypatch.setattr(cli, "run_selftest", lambda **kwargs: failing)
        assert main(["selftest"]) == 1

    def test_dotenv_fills_threads(self, tmp_path, monkeypatch):
        """IRON_THREADS from the --dotenv file is used when --threads is absent."""
        # registers IRON_THREADS for removal at teardown, then clears it
        monkeypatch.setenv("IRON_THREADS", "1")
        monkeypatch.delenv("IRON_THREADS")
        env_file = tmp_path / ".env"
        env_file.write_text("IRON_THREADS=3\n", encoding="utf-8")
        seen = {}

        def fake_run(command, config_path, out_dir=None, threads=1, seed=None):
            seen["threads"] = threads
            return 0

        monkeypatch.setattr(cli, "run_experiment", fake_run)
        assert main(["quad-sim", "--config", "c.yaml", "--dotenv", str(env_file)]) == 0
        assert seen["threads"] == 3
