"""Tests for the movepat command line."""

import json
import logging

import pytest

from movepat import __version__
from movepat.cli import build_parser, configure_logging, main
from movepat.ingest import read_observations


@pytest.fixture
def synth_config(tmp_path):
    path = tmp_path / "synth.json"
    path.write_text(
        json.dumps(
            {
                "players_per_position": 3,
                "matches_per_player": 2,
                "sequence_length_range": [5, 10],
                "sequences_per_observation_range": [3, 5],
                "motifs": {"winger": [{"pattern": "GGGGSSSS", "rate": 50.0}]},
            }
        ),
        encoding="utf-8",
    )
    return path


# =============================================================================
# Parser
# =============================================================================


class TestParser:
    """Tests for argument parsing."""

    def test_help_exits_cleanly(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(["--help"])
        assert excinfo.value.code == 0
        assert "pipeline" in capsys.readouterr().out

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(["--version"])
        assert excinfo.value.code == 0
        assert __version__ in capsys.readouterr().out

    def test_unknown_flag(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["mine", "--algo", "lccspm", "--input", "x", "--output", "y", "--bogus"])
        assert excinfo.value.code == 2

    def test_unknown_algorithm(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["mine", "--algo", "prefixspan", "--input", "x", "--output", "y"])
        assert excinfo.value.code == 2

    def test_verbose_and_quiet_conflict(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["synth", "--config", "c", "--out-sequences", "s", "-v", "-q"])

    def test_threads_must_be_positive(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["synth", "--config", "c", "--out-sequences", "s", "--threads", "0"])


class TestConfigureLogging:
    """Tests for configure_logging."""

    def test_levels(self):
        configure_logging(verbose=True)
        assert logging.getLogger("movepat").level == logging.DEBUG
        configure_logging(quiet=True)
        assert logging.getLogger("movepat").level == logging.WARNING
        configure_logging()
        assert logging.getLogger("movepat").level == logging.INFO

    def test_one_handler(self):
        """Repeated calls replace the handler instead of stacking them."""
        configure_logging()
        before = len(logging.getLogger("movepat").handlers)
        configure_logging()
        assert len(logging.getLogger("movepat").handlers) == before


# =============================================================================
# Commands
# =============================================================================


class TestCommands:
    """Tests that chain the subcommands through their files."""

    def test_stage_by_stage(self, tmp_path, synth_config):
        """synth -> discretize -> mine -> compare -> featurize -> classify."""
        sequences = tmp_path / "cohort.jsonl"
        gps = tmp_path / "gps.csv"
        assert main(["synth", "--config", str(synth_config), "--out-sequences", str(sequences), "--out-gps", str(gps), "-q"]) == 0

        rediscretized = tmp_path / "sequences.jsonl"
        assert main(["discretize", "--input", str(gps), "--output", str(rediscretized), "-q"]) == 0
        assert [o.symbols for o in read_observations(rediscretized)] == [o.symbols for o in read_observations(sequences)]

        for algo in ("lccspm", "smp-lcs"):
            args = ["mine", "--algo", algo, "--input", str(rediscretized), "--output", str(tmp_path / f"{algo}.csv")]
            assert main(args + ["--support", "0.3", "--clusters", "3", "-q"]) == 0

        report = tmp_path / "compare.json"
        plot = tmp_path / "overlap.csv"
        assert main([
            "compare", "--a", str(tmp_path / "lccspm.csv"), "--b", str(tmp_path / "smp-lcs.csv"),
            "--output", str(report), "--sequences", str(rediscretized), "--plot-csv", str(plot), "-q",
        ]) == 0
        payload = json.loads(report.read_text(encoding="utf-8"))
        assert (payload["a"], payload["b"]) == ("lccspm", "smp-lcs")
        assert "positions" in payload
        assert plot.read_text(encoding="utf-8").startswith("end,pattern,freq_a,freq_b")

        matrix = tmp_path / "matrix_lccspm.csv"
        assert main([
            "featurize", "--patterns", str(tmp_path / "lccspm.csv"), "--sequences", str(rediscretized),
            "--output", str(matrix), "-q",
        ]) == 0

        cv = tmp_path / "cv.json"
        assert main([
            "classify", "--matrix", str(matrix), "--model", "cart", "--folds", "3", "--report", str(cv),
            "--importance", "5", "-q",
        ]) == 0
        result = json.loads(cv.read_text(encoding="utf-8"))
        assert result["model"] == "cart"
        assert result["algorithm"] == "matrix_lccspm"
        assert len(result["folds"]) == 3
        assert len(result["importance"]) <= 5

    def test_pipeline(self, tmp_path, synth_config):
        config = tmp_path / "run.json"
        config.write_text(
            json.dumps(
                {
                    "synth": json.loads(synth_config.read_text(encoding="utf-8")),
                    "algorithms": ["lccspm"],
                    "miner": {"min_support": 0.3},
                    "classify": {"models": ["logreg", "cart"], "cv": {"n_splits": 3}},
                }
            ),
            encoding="utf-8",
        )
        out = tmp_path / "out"
        assert main(["pipeline", "--config", str(config), "--output-dir", str(out), "--seed", "4", "-q"]) == 0
        summary = json.loads((out / "summary.json").read_text(encoding="utf-8"))
        assert summary["settings"]["seed"] == 4
        assert set(summary["results"]["lccspm"]) == {"logreg", "cart"}

    def test_empty_input_fails_in_discretize(self, tmp_path, capsys):
        """An empty sequence file stops the pipeline at its first stage with exit code 1."""
        sequences = tmp_path / "sequences.jsonl"
        sequences.write_text("\n", encoding="utf-8")
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"sequences": "sequences.jsonl", "output_dir": "out"}), encoding="utf-8")
        assert main(["pipeline", "--config", str(config), "-q"]) == 1
        assert "[discretize]" in capsys.readouterr().err

    def test_missing_input_file(self, tmp_path, capsys):
        code = main(["mine", "--algo", "lccspm", "--input", str(tmp_path / "nope.jsonl"), "--output", str(tmp_path / "p.csv"), "-q"])
        assert code == 1
        assert "movepat mine: error:" in capsys.readouterr().err

    def test_invalid_config(self, tmp_path, capsys):
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"synth": {}, "miner": {"max_len": 0}}), encoding="utf-8")
        assert main(["pipeline", "--config", str(config), "-q"]) == 1
        assert "miner.max_len" in capsys.readouterr().err
