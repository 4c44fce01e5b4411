"""Test suite for CLI commands using typer.testing."""

import json

import pytest
from typer.testing import CliRunner

from transversal.cli import app, parse_grid
from transversal.errors import InvalidInstance
from transversal.persistence import RunHistory, load_collection, read_metadata

runner = CliRunner()


@pytest.fixture
def k10(tmp_path):
    """Nine identical copies of K_10 written by `gen`."""
    path = tmp_path / "k10.txt"
    result = runner.invoke(app, ["gen", "identical", "--n", "10", "--m", "9", "-o", str(path)])
    assert result.exit_code == 0
    return path


def test_version_command():
    """Version command should display version."""
    result = runner.invoke(app, ["version"])
    assert result.exit_code == 0
    assert "transversal version 0.1.0" in result.stdout


def test_config_info_command():
    """Config info shows the pipeline constants and the history location."""
    result = runner.invoke(app, ["config-info"])
    assert result.exit_code == 0
    assert "alpha: 0.3" in result.stdout
    assert "retries: 20" in result.stdout
    assert "runs.jsonl" in result.stdout


class TestGen:
    """Instance generation."""

    def test_identical_writes_sidecar(self, k10):
        """Instance and metadata land side by side."""
        collection = load_collection(k10)
        assert (collection.n, collection.m) == (10, 9)
        metadata = read_metadata(k10)
        assert metadata.construction == "identical"
        assert metadata.min_degree == 9

    def test_bridgeless_lower_bound(self, tmp_path):
        """Two copies of C4 give eight vertices and eight colours."""
        path = tmp_path / "lb.txt"
        result = runner.invoke(app, ["gen", "bridgeless-lb", "--F", "C4", "--copies", "2", "-o", str(path)])
        assert result.exit_code == 0
        assert load_collection(path).n == 8

    def test_identical_needs_sizes(self, tmp_path):
        """Missing --m is a usage error."""
        result = runner.invoke(app, ["gen", "identical", "--n", "5", "-o", str(tmp_path / "x.txt")])
        assert result.exit_code == 2

    def test_unknown_construction(self, tmp_path):
        """Unknown constructions exit 2."""
        result = runner.invoke(app, ["gen", "lattice", "-o", str(tmp_path / "x.txt")])
        assert result.exit_code == 2


class TestOracle:
    """Exact decisions and verification."""

    def test_lower_bound_is_no(self, tmp_path):
        """The bridgeless construction has no rainbow C4-factor."""
        path = tmp_path / "lb.txt"
        runner.invoke(app, ["gen", "bridgeless-lb", "--F", "C4", "--copies", "2", "-o", str(path)])
        result = runner.invoke(app, ["oracle", "decide", "-i", str(path), "--mode", "factor", "--F", "C4"])
        assert result.exit_code == 1
        assert "no (" in result.output

    def test_hamilton_yes_then_verify(self, tmp_path):
        """A yes answer writes a witness that verify accepts."""
        inst = tmp_path / "k6.txt"
        witness = tmp_path / "cycle.json"
        runner.invoke(app, ["gen", "identical", "--n", "6", "--m", "6", "-o", str(inst)])
        decided = runner.invoke(app, ["oracle", "decide", "-i", str(inst), "--hamilton", "-o", str(witness)])
        assert decided.exit_code == 0
        assert "yes (" in decided.output
        verified = runner.invoke(app, ["oracle", "verify", "-i", str(inst), "-w", str(witness)])
        assert verified.exit_code == 0

    def test_rainbow_needs_template(self, k10):
        """Rainbow mode without a template is a usage error."""
        result = runner.invoke(app, ["oracle", "decide", "-i", str(k10)])
        assert result.exit_code == 2

    def test_malformed_instance(self, tmp_path):
        """Parse errors exit 2 and name the line."""
        path = tmp_path / "bad.txt"
        path.write_text("3 1\ncolour 0 1\n0 7\n")
        result = runner.invoke(app, ["oracle", "decide", "-i", str(path), "--hamilton"])
        assert result.exit_code == 2
        assert "line 3" in result.output

    def test_witness_for_other_instance(self, tmp_path, k10):
        """A witness built for a different n is rejected."""
        inst = tmp_path / "k6.txt"
        witness = tmp_path / "cycle.json"
        runner.invoke(app, ["gen", "identical", "--n", "6", "--m", "6", "-o", str(inst)])
        runner.invoke(app, ["oracle", "decide", "-i", str(inst), "--hamilton", "-o", str(witness)])
        result = runner.invoke(app, ["oracle", "verify", "-i", str(k10), "-w", str(witness)])
        assert result.exit_code == 1


class TestSolve:
    """Pipelines from the command line."""

    def test_tree_witness_verifies(self, tmp_path, k10):
        """solve tree then oracle verify."""
        witness = tmp_path / "tree.json"
        solved = runner.invoke(app, ["solve", "tree", "-i", str(k10), "-o", str(witness), "--seed", "3"])
        assert solved.exit_code == 0
        data = json.loads(witness.read_text())
        assert data["kind"] == "tree"
        assert data["seed"] == 3
        verified = runner.invoke(app, ["oracle", "verify", "-i", str(k10), "-w", str(witness)])
        assert verified.exit_code == 0

    def test_triangle_factor(self, tmp_path):
        """Two rainbow triangles in six copies of K6."""
        inst = tmp_path / "k6.txt"
        witness = tmp_path / "factor.json"
        runner.invoke(app, ["gen", "identical", "--n", "6", "--m", "6", "-o", str(inst)])
        solved = runner.invoke(app, ["solve", "factor", "-i", str(inst), "--F", "K3", "-o", str(witness)])
        assert solved.exit_code == 0
        verified = runner.invoke(app, ["oracle", "verify", "-i", str(inst), "-w", str(witness)])
        assert verified.exit_code == 0

    def test_failure_reports_stage(self, tmp_path):
        """The lower-bound instance fails in the direct stage with exit 1."""
        inst = tmp_path / "lb.txt"
        runner.invoke(app, ["gen", "bridgeless-lb", "--F", "C4", "--copies", "2", "-o", str(inst)])
        result = runner.invoke(app, ["solve", "factor", "-i", str(inst), "--F", "C4", "-o", str(tmp_path / "w.json")])
        assert result.exit_code == 1
        assert not (tmp_path / "w.json").exists()

    def test_unknown_kind(self, tmp_path, k10):
        """Only tree, factor and patterned are solvable."""
        result = runner.invoke(app, ["solve", "cycle", "-i", str(k10), "-o", str(tmp_path / "w.json")])
        assert result.exit_code == 2


class TestSweep:
    """Threshold sweeps."""

    def test_no_timing_is_byte_stable(self, tmp_path):
        """Same seed and --no-timing give identical CSV files."""
        args = ["sweep", "--n", "6", "--trials", "3", "--delta-grid", "0.3:0.6:0.3", "--seed", "1", "--no-timing"]
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        assert runner.invoke(app, args + ["-o", str(first)]).exit_code == 0
        assert runner.invoke(app, args + ["-o", str(second)]).exit_code == 0
        assert first.read_bytes() == second.read_bytes()
        lines = first.read_text().splitlines()
        assert lines[0] == "delta_over_n,trials,successes,mean_runtime_ms"
        assert len(lines) == 3
        assert all(line.endswith(",0.0") for line in lines[1:])

    @pytest.mark.slow
    def test_perfect_matching_threshold(self, tmp_path):
        """At n = 10 matchings are rare at δ/n = 0.3 and near certain at 0.6."""
        path = tmp_path / "pm.csv"
        args = ["sweep", "--n", "10", "--trials", "50", "--delta-grid", "0.3:0.6:0.3", "--no-timing", "-o", str(path)]
        assert runner.invoke(app, args).exit_code == 0
        rows = [line.split(",") for line in path.read_text().splitlines()[1:]]
        rates = {float(delta): int(hits) / int(trials) for delta, trials, hits, _ in rows}
        assert rates[0.3] <= 0.3
        assert rates[0.6] >= 0.9

    def test_odd_n_rejected(self, tmp_path):
        """Perfect matchings need even n."""
        result = runner.invoke(app, ["sweep", "--n", "7", "-o", str(tmp_path / "x.csv")])
        assert result.exit_code == 2

    def test_parse_grid(self):
        """Inclusive grid with rounding."""
        assert parse_grid("0.3:0.7:0.1") == [0.3, 0.4, 0.5, 0.6, 0.7]
        with pytest.raises(InvalidInstance):
            parse_grid("0.5:0.1:0.1")


class TestHistory:
    """Opt-in run history."""

    def test_disabled_by_default(self):
        """Without output.save_runs the command explains and exits 1."""
        result = runner.invoke(app, ["history"])
        assert result.exit_code == 1
        assert "disabled" in result.output

    def test_records_solves(self, tmp_path, k10, monkeypatch):
        """Enabled history records each solve and prints it as JSON."""
        monkeypatch.setenv("TRANSVERSAL_OUTPUT_SAVE_RUNS", "true")
        runner.invoke(app, ["solve", "tree", "-i", str(k10), "-o", str(tmp_path / "t.json")])
        records = RunHistory().load_all()
        assert [r.command for r in records] == ["solve"]
        assert records[0].outcome == "success"

        result = runner.invoke(app, ["history", "--json"])
        assert result.exit_code == 0
        assert json.loads(result.stdout)[0]["kind"] == "tree"

    def test_clear_history(self, tmp_path, k10, monkeypatch):
        """clear-history --yes removes every record."""
        monkeypatch.setenv("TRANSVERSAL_OUTPUT_SAVE_RUNS", "true")
        runner.invoke(app, ["solve", "tree", "-i", str(k10), "-o", str(tmp_path / "t.json")])
        result = runner.invoke(app, ["clear-history", "--yes"])
        assert result.exit_code == 0
        assert "Deleted 1 run(s)." in result.stdout
        assert RunHistory().load_all() == []
