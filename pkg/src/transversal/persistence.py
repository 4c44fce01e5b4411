"""File formats and run history for transversal.

Text formats (UTF-8, LF, blank lines ignored):

- Instance: line 1 "n m"; then m blocks, each "colour i e_i" followed by
  e_i lines "u v" with 0 <= u < v < n.
- Tree: line 1 "|T|", then |T|-1 lines "u v".
- Patterns: one line per copy of F, listing e(F) colour indices in F's
  lexicographic edge order.

JSON artifacts are pydantic models: witnesses (``Witness``), the construction
sidecar ``<instance>.meta.json`` (``ConstructionMetadata``) and the opt-in
append-only run history (``RunRecord`` per line).

Design principles for the history (carried over from the reading log it grew
out of): persistence failures never block a run, the file is append-only
JSONL, and it is opt-in via ``output.save_runs``.
"""

import json
import logging
from collections.abc import Iterator
from pathlib import Path
from typing import TextIO

import networkx as nx

from transversal.config import get_config
from transversal.core import GraphCollection
from transversal.errors import InvalidInstance, ParseError
from transversal.models import ConstructionMetadata, RunRecord, Witness

logger = logging.getLogger(__name__)


def _content_lines(stream: TextIO) -> Iterator[tuple[int, list[str]]]:
    for line_num, raw in enumerate(stream, start=1):
        tokens = raw.split()
        if tokens:
            yield line_num, tokens


def _ints(tokens: list[str], line: int, reason: str) -> list[int]:
    try:
        return [int(tok) for tok in tokens]
    except ValueError:
        raise ParseError(line, reason, " ".join(tokens)) from None


def read_collection(stream: TextIO) -> GraphCollection:
    """Parse the instance text format.

    Raises:
        ParseError: With the offending line number and one of the reasons
            "malformed header", "malformed block header", "malformed edge",
            "vertex index out of range", "duplicate edge", "truncated block",
            "trailing content".
    """
    lines = _content_lines(stream)
    try:
        line, tokens = next(lines)
    except StopIteration:
        raise ParseError(1, "malformed header", "empty input") from None
    if len(tokens) != 2:
        raise ParseError(line, "malformed header", "expected 'n m'")
    n, m = _ints(tokens, line, "malformed header")
    if n < 0 or m < 0:
        raise ParseError(line, "malformed header", "negative size")

    edge_lists: list[list[tuple[int, int]]] = []
    last_line = line
    for colour in range(m):
        try:
            line, tokens = next(lines)
        except StopIteration:
            raise ParseError(last_line + 1, "truncated block", f"colour {colour} missing") from None
        if len(tokens) != 3 or tokens[0] != "colour":
            raise ParseError(line, "malformed block header", "expected 'colour i e_i'")
        index, count = _ints(tokens[1:], line, "malformed block header")
        if index != colour or count < 0:
            raise ParseError(line, "malformed block header", f"expected colour {colour}")
        seen: set[tuple[int, int]] = set()
        edges = []
        for _ in range(count):
            try:
                line, tokens = next(lines)
            except StopIteration:
                raise ParseError(line + 1, "truncated block", f"colour {colour}") from None
            if len(tokens) != 2:
                raise ParseError(line, "malformed edge", "expected 'u v'")
            u, v = _ints(tokens, line, "malformed edge")
            if u < 0 or v < 0 or u >= n or v >= n:
                raise ParseError(line, "vertex index out of range", f"n={n}")
            if u >= v:
                raise ParseError(line, "malformed edge", "require u < v")
            if (u, v) in seen:
                raise ParseError(line, "duplicate edge", f"({u}, {v}) in colour {colour}")
            seen.add((u, v))
            edges.append((u, v))
        edge_lists.append(edges)
        last_line = line
    for line, _ in lines:
        raise ParseError(line, "trailing content")
    return GraphCollection(n, edge_lists)


def write_collection(collection: GraphCollection, stream: TextIO) -> None:
    """Write the instance text format; edges sorted so output is canonical."""
    stream.write(f"{collection.n} {collection.m}\n")
    for colour, edges in enumerate(collection.edge_lists()):
        stream.write(f"colour {colour} {len(edges)}\n")
        for u, v in edges:
            stream.write(f"{u} {v}\n")


def load_collection(path: Path) -> GraphCollection:
    with open(path, "r", encoding="utf-8") as f:
        return read_collection(f)


def save_collection(collection: GraphCollection, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        write_collection(collection, f)


def read_tree(stream: TextIO) -> nx.Graph:
    """Parse the tree text format into a tree on {0..|T|-1}.

    Raises:
        ParseError: On malformed lines, out-of-range vertices, or if the edges
            do not form a tree.
    """
    lines = _content_lines(stream)
    try:
        line, tokens = next(lines)
    except StopIteration:
        raise ParseError(1, "malformed header", "empty input") from None
    if len(tokens) != 1:
        raise ParseError(line, "malformed header", "expected '|T|'")
    (order,) = _ints(tokens, line, "malformed header")
    if order < 1:
        raise ParseError(line, "malformed header", "tree needs a vertex")
    tree = nx.Graph()
    tree.add_nodes_from(range(order))
    for line, tokens in lines:
        if len(tokens) != 2:
            raise ParseError(line, "malformed edge", "expected 'u v'")
        u, v = _ints(tokens, line, "malformed edge")
        if not (0 <= u < order and 0 <= v < order) or u == v:
            raise ParseError(line, "vertex index out of range", f"|T|={order}")
        if tree.has_edge(u, v):
            raise ParseError(line, "duplicate edge", f"({u}, {v})")
        tree.add_edge(u, v)
    if not nx.is_tree(tree):
        raise ParseError(line, "not a tree", f"{tree.number_of_edges()} edges")
    return tree


def write_tree(tree: nx.Graph, stream: TextIO) -> None:
    stream.write(f"{tree.number_of_nodes()}\n")
    for u, v in sorted((min(e), max(e)) for e in tree.edges()):
        stream.write(f"{u} {v}\n")


def read_patterns(stream: TextIO, edges_per_copy: int | None = None) -> list[list[int]]:
    """Parse a pattern file: one line of colour indices per copy of F."""
    patterns = []
    for line, tokens in _content_lines(stream):
        colours = _ints(tokens, line, "malformed pattern")
        if edges_per_copy is not None and len(colours) != edges_per_copy:
            raise ParseError(line, "malformed pattern", f"expected {edges_per_copy} colours")
        if len(set(colours)) != len(colours):
            raise ParseError(line, "malformed pattern", "repeated colour")
        patterns.append(colours)
    return patterns


def write_patterns(patterns: list[list[int]], stream: TextIO) -> None:
    for pattern in patterns:
        stream.write(" ".join(str(c) for c in pattern) + "\n")


def save_witness(witness: Witness, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(witness.model_dump_json(indent=2) + "\n")


def load_witness(path: Path) -> Witness:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return Witness.model_validate_json(f.read())
    except ValueError as e:
        raise InvalidInstance(f"invalid witness file {path}: {e}") from e


def sidecar_path(instance_path: Path) -> Path:
    """``inst.txt`` -> ``inst.txt.meta.json``."""
    return instance_path.with_name(instance_path.name + ".meta.json")


def write_metadata(metadata: ConstructionMetadata, instance_path: Path) -> Path:
    path = sidecar_path(instance_path)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(metadata.model_dump_json(indent=2) + "\n")
    return path


def read_metadata(instance_path: Path) -> ConstructionMetadata | None:
    path = sidecar_path(instance_path)
    if not path.exists():
        return None
    with open(path, "r", encoding="utf-8") as f:
        return ConstructionMetadata.model_validate_json(f.read())


class RunHistory:
    """Manages the run history in append-only JSONL storage.

    All operations fail gracefully: a broken history file or unwritable
    directory is logged as a warning and never aborts a solver run.

    Storage location determined by Config.get_runs_path():
    - Linux: ~/.local/share/transversal/runs.jsonl
    - macOS: ~/Library/Application Support/transversal/runs.jsonl
    - Windows: C:\\Users\\<user>\\AppData\\Local\\transversal\\runs.jsonl

    Usage:
        >>> history = RunHistory()
        >>> history.save(record)
        >>> recent = history.load_last(5)
    """

    def __init__(self, config_override: Path | None = None):
        """Initialize with optional path override.

        Args:
            config_override: Optional path override for testing.
                If None, uses path from config system.
        """
        self.runs_path = config_override if config_override else get_config().get_runs_path()

    def save(self, record: RunRecord) -> bool:
        """Append one record. Returns False (and logs) on any failure."""
        try:
            self.runs_path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.runs_path, "a", encoding="utf-8") as f:
                f.write(record.model_dump_json() + "\n")
            return True
        except Exception as e:
            logger.warning("Failed to save run record: %s", e)
            return False

    def load_all(self) -> list[RunRecord]:
        """All valid records; malformed lines are skipped with a warning."""
        if not self.runs_path.exists():
            return []

        records = []
        try:
            with open(self.runs_path, "r", encoding="utf-8") as f:
                for line_num, line in enumerate(f, start=1):
                    line = line.strip()
                    if not line:
                        continue
                    try:
                        records.append(RunRecord.model_validate(json.loads(line)))
                    except (json.JSONDecodeError, ValueError) as e:
                        logger.warning("Skipping invalid run record at line %d: %s", line_num, e)
        except Exception as e:
            logger.warning("Error loading run history: %s", e)
            return []

        return records

    def load_last(self, n: int = 10) -> list[RunRecord]:
        records = self.load_all()
        return records[-n:] if records and n > 0 else []

    def clear_all(self) -> bool:
        """Delete the history file. True if it is gone afterwards."""
        try:
            if self.runs_path.exists():
                self.runs_path.unlink()
            return True
        except Exception as e:
            logger.warning("Failed to clear run history: %s", e)
            return False
