"""Tests for file formats and run history persistence.

Covers the instance, tree and pattern text formats, JSON witnesses and
sidecars, and the graceful error handling of the JSONL run history.
All tests use temporary directories to avoid polluting user data.
"""

import io

import networkx as nx
import pytest

from transversal.core import GraphCollection
from transversal.errors import InvalidInstance, ParseError
from transversal.models import (
    ColouredEdge,
    ConstructionMetadata,
    OracleMode,
    RainbowEmbedding,
    RunRecord,
    Witness,
)
from transversal.persistence import (
    RunHistory,
    load_collection,
    load_witness,
    read_collection,
    read_metadata,
    read_patterns,
    read_tree,
    save_collection,
    save_witness,
    sidecar_path,
    write_collection,
    write_metadata,
    write_patterns,
    write_tree,
)


@pytest.fixture
def sample_record():
    return RunRecord(
        command="solve",
        kind="tree",
        instance="inst.txt",
        seed=7,
        outcome="success",
        runtime_ms=12.5,
        timestamp="2026-10-18T14:30:00Z",
    )


@pytest.fixture
def temp_history(tmp_path):
    """History instance with temporary path."""
    return RunHistory(config_override=tmp_path / "runs.jsonl")


class TestInstanceFormat:
    """The 'n m' / 'colour i e_i' text format."""

    def test_write_is_canonical(self, tiny_collection):
        """Edges come out sorted within each colour block."""
        out = io.StringIO()
        write_collection(tiny_collection, out)
        assert out.getvalue() == (
            "4 3\n"
            "colour 0 3\n0 1\n1 2\n2 3\n"
            "colour 1 3\n0 1\n0 2\n1 2\n"
            "colour 2 1\n2 3\n"
        )

    def test_read_back(self, tiny_collection):
        """Reading the written text gives an equal collection."""
        out = io.StringIO()
        write_collection(tiny_collection, out)
        assert read_collection(io.StringIO(out.getvalue())) == tiny_collection

    def test_blank_lines_and_empty_colours(self):
        """Blank lines are ignored; a colour may have no edges."""
        text = "3 2\n\ncolour 0 0\n\ncolour 1 1\n0 2\n\n"
        collection = read_collection(io.StringIO(text))
        assert collection.m == 2
        assert collection[0].number_of_edges() == 0
        assert collection.edge_lists()[1] == [(0, 2)]

    def test_files(self, tmp_path, complete_collection):
        """save_collection creates parent directories."""
        path = tmp_path / "nested" / "inst.txt"
        save_collection(complete_collection, path)
        assert load_collection(path) == complete_collection

    @pytest.mark.parametrize(
        "text, line, reason",
        [
            ("", 1, "malformed header"),
            ("3\n", 1, "malformed header"),
            ("3 x\n", 1, "malformed header"),
            ("3 1\ncolor 0 1\n0 1\n", 2, "malformed block header"),
            ("3 1\ncolour 1 1\n0 1\n", 2, "malformed block header"),
            ("3 1\ncolour 0 1\n0 3\n", 3, "vertex index out of range"),
            ("3 1\ncolour 0 1\n2 1\n", 3, "malformed edge"),
            ("3 1\ncolour 0 2\n0 1\n0 1\n", 4, "duplicate edge"),
            ("3 1\ncolour 0 2\n0 1\n", 4, "truncated block"),
            ("3 2\ncolour 0 1\n0 1\n", 4, "truncated block"),
            ("3 1\ncolour 0 1\n0 1\n1 2\n", 4, "trailing content"),
        ],
    )
    def test_parse_errors(self, text, line, reason):
        """Each malformed input names its line and reason."""
        with pytest.raises(ParseError) as info:
            read_collection(io.StringIO(text))
        assert info.value.line == line
        assert info.value.reason == reason
        assert isinstance(info.value, InvalidInstance)


class TestTreeAndPatterns:
    """Tree files and pattern files."""

    def test_tree_text(self):
        """Edges are written smaller endpoint first, in sorted order."""
        out = io.StringIO()
        write_tree(nx.Graph([(2, 1), (0, 1)]), out)
        assert out.getvalue() == "3\n0 1\n1 2\n"
        tree = read_tree(io.StringIO(out.getvalue()))
        assert sorted(tree.edges()) == [(0, 1), (1, 2)]

    def test_single_vertex_tree(self):
        """'1' alone is the one-vertex tree."""
        tree = read_tree(io.StringIO("1\n"))
        assert tree.number_of_nodes() == 1

    def test_not_a_tree(self):
        """Too few edges leave a forest."""
        with pytest.raises(ParseError, match="not a tree"):
            read_tree(io.StringIO("4\n0 1\n2 3\n"))

    def test_tree_self_loop(self):
        """Self-loops are out of range."""
        with pytest.raises(ParseError) as info:
            read_tree(io.StringIO("3\n0 1\n1 1\n"))
        assert info.value.line == 3

    def test_patterns(self):
        """One line per copy, checked against e(F)."""
        out = io.StringIO()
        write_patterns([[0, 1, 2], [3, 4, 5]], out)
        assert read_patterns(io.StringIO(out.getvalue()), edges_per_copy=3) == [
            [0, 1, 2],
            [3, 4, 5],
        ]

    def test_pattern_errors(self):
        """Wrong lengths and repeated colours are rejected with line numbers."""
        with pytest.raises(ParseError) as info:
            read_patterns(io.StringIO("0 1 2\n3 4\n"), edges_per_copy=3)
        assert info.value.line == 2
        with pytest.raises(ParseError, match="repeated colour"):
            read_patterns(io.StringIO("0 0 1\n"))


class TestJsonArtifacts:
    """Witnesses and construction sidecars."""

    def test_witness_file(self, tmp_path):
        """A saved witness loads back equal."""
        witness = Witness(
            kind="tree",
            mode=OracleMode.RAINBOW,
            n=4,
            m=3,
            template_order=4,
            template_edges=[(0, 1), (1, 2), (2, 3)],
            seed=7,
            embedding=RainbowEmbedding(
                vertex_map={0: 3, 1: 0, 2: 1, 3: 2},
                colour_map=[
                    ColouredEdge(u=0, v=1, colour=2),
                    ColouredEdge(u=2, v=1, colour=1),
                    ColouredEdge(u=2, v=3, colour=0),
                ],
            ),
        )
        path = tmp_path / "out" / "witness.json"
        save_witness(witness, path)
        loaded = load_witness(path)
        assert loaded == witness
        assert loaded.embedding.colour_of(1, 2) == 1

    def test_bad_witness(self, tmp_path):
        """Garbage is an invalid instance, not a crash."""
        path = tmp_path / "witness.json"
        path.write_text("{not json")
        with pytest.raises(InvalidInstance):
            load_witness(path)

    def test_sidecar(self, tmp_path):
        """Metadata sits next to the instance as <name>.meta.json."""
        instance = tmp_path / "inst.txt"
        assert sidecar_path(instance).name == "inst.txt.meta.json"
        assert read_metadata(instance) is None
        metadata = ConstructionMetadata(
            construction="bridgeless-lb", params={"F": "C4", "r": 2}, min_degree=3
        )
        written = write_metadata(metadata, instance)
        assert written.exists()
        assert read_metadata(instance) == metadata


def test_save_creates_file_and_parents(tmp_path, sample_record):
    """Saving creates the JSONL file and any missing directories."""
    history = RunHistory(config_override=tmp_path / "deep" / "runs.jsonl")
    assert history.save(sample_record) is True
    assert history.runs_path.exists()


def test_save_appends(temp_history, sample_record):
    """Each save adds one line."""
    temp_history.save(sample_record)
    temp_history.save(sample_record.model_copy(update={"seed": 8}))
    lines = temp_history.runs_path.read_text().strip().split("\n")
    assert len(lines) == 2
    assert [r.seed for r in temp_history.load_all()] == [7, 8]


def test_load_all_missing_file(temp_history):
    """No file means no records."""
    assert temp_history.load_all() == []


def test_load_all_skips_malformed_lines(temp_history, sample_record):
    """Broken lines are skipped, valid ones kept."""
    temp_history.save(sample_record)
    with open(temp_history.runs_path, "a") as f:
        f.write("{broken json\n")
        f.write('{"command": "solve"}\n')
        f.write("\n")
    temp_history.save(sample_record)
    assert len(temp_history.load_all()) == 2


def test_load_last(temp_history, sample_record):
    """The newest n records, oldest first."""
    for seed in range(5):
        temp_history.save(sample_record.model_copy(update={"seed": seed}))
    assert [r.seed for r in temp_history.load_last(2)] == [3, 4]
    assert temp_history.load_last(0) == []
    assert len(temp_history.load_last(10)) == 5


def test_clear_all(temp_history, sample_record):
    """Clearing removes the file and is idempotent."""
    temp_history.save(sample_record)
    assert temp_history.clear_all() is True
    assert not temp_history.runs_path.exists()
    assert temp_history.clear_all() is True


def test_save_failure_is_graceful(tmp_path, sample_record):
    """An unwritable location returns False instead of raising."""
    blocker = tmp_path / "file"
    blocker.write_text("not a directory")
    history = RunHistory(config_override=blocker / "runs.jsonl")
    assert history.save(sample_record) is False


def test_default_path_from_config(tmp_path):
    """Without override the path comes from TRANSVERSAL_OUTPUT_RUNS_DIR."""
    assert RunHistory().runs_path == tmp_path / "runs" / "runs.jsonl"
