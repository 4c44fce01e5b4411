"""Tests for GraphCollection, colour masks and threshold graphs."""

from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transversal.core import (
    GraphCollection,
    bits,
    colour_mask,
    min_degree,
    threshold_degree_bound,
    threshold_graph,
)
from transversal.errors import InvalidInstance


@st.composite
def collections(draw, max_n=12, max_m=8):
    n = draw(st.integers(2, max_n))
    m = draw(st.integers(1, max_m))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    lists = [draw(st.lists(st.sampled_from(pairs), unique=True)) for _ in range(m)]
    return GraphCollection(n, lists)


class TestGraphCollection:
    """Construction, lookup and derived graphs."""

    def test_edge_masks_record_every_colour(self, tiny_collection):
        """edge_mask sets bit i exactly when the edge is in colour i."""
        assert tiny_collection.edge_mask(0, 1) == 0b011
        assert tiny_collection.edge_mask(2, 3) == 0b101
        assert tiny_collection.edge_mask(1, 0) == 0b011
        assert tiny_collection.edge_mask(0, 3) == 0

    def test_colours_containing_respects_allowed(self, tiny_collection):
        """Allowed colours filter the ascending colour list."""
        assert tiny_collection.colours_containing(1, 2) == [0, 1]
        assert tiny_collection.colours_containing(1, 2, allowed=[1, 2]) == [1]

    def test_degrees(self, tiny_collection):
        """Per-colour degrees, degrees into a subset and the minimum degree."""
        assert tiny_collection.degree(0, 1) == 2
        assert tiny_collection.degree_into(1, 0, {2}) == 1
        assert tiny_collection.min_degree() == 0
        assert min_degree(tiny_collection) == 0

    def test_union_and_intersection(self, tiny_collection):
        """Union has every edge; intersection only the edges in all colours."""
        assert tiny_collection.union_graph().number_of_edges() == 4
        assert tiny_collection.intersection_graph().number_of_edges() == 0
        assert tiny_collection.union_adjacency(2) == {0, 1, 3}

    def test_identical_copies(self):
        """identical() repeats one graph m times."""
        collection = GraphCollection.identical(nx.cycle_graph(5), 3)
        assert collection.m == 3
        assert all(g.number_of_edges() == 5 for g in collection)
        assert collection.min_degree() == 2

    def test_restrict_colours_reindexes(self, tiny_collection):
        """Restricted collections renumber the kept colours in order."""
        sub = tiny_collection.restrict_colours([2, 0])
        assert sub.m == 2
        assert sub.has_edge(0, 2, 3)
        assert sub.has_edge(1, 0, 1)

    def test_loops_and_range_rejected(self):
        """Loops, out-of-range vertices and duplicate edges are invalid."""
        with pytest.raises(InvalidInstance):
            GraphCollection(3, [[(1, 1)]])
        with pytest.raises(InvalidInstance):
            GraphCollection(3, [[(0, 3)]])
        with pytest.raises(InvalidInstance):
            GraphCollection(3, [[(0, 1), (1, 0)]])

    def test_min_degree_without_colours(self):
        """An empty collection has no minimum degree."""
        with pytest.raises(InvalidInstance, match="no colours"):
            GraphCollection(3, []).min_degree()

    def test_equality_ignores_edge_order(self):
        """Collections compare by their sorted edge lists."""
        a = GraphCollection(3, [[(0, 1), (1, 2)]])
        b = GraphCollection(3, [[(2, 1), (1, 0)]])
        assert a == b


class TestMasks:
    """Bitmask helpers."""

    def test_bits_roundtrip_ascending(self):
        """bits() lists set positions in increasing order."""
        assert bits(colour_mask([5, 0, 3])) == [0, 3, 5]
        assert bits(0) == []


class TestThresholdGraph:
    """Graphs of edges lying in many colours."""

    def test_threshold_counts_colours(self, tiny_collection):
        """Three edges lie in two colours; none lies in all three."""
        g = threshold_graph(tiny_collection, 2)
        assert sorted(g.edges()) == [(0, 1), (1, 2), (2, 3)]
        assert threshold_graph(tiny_collection, 3).number_of_edges() == 0

    def test_allowed_and_vertex_restriction(self, tiny_collection):
        """Only allowed colours count and only kept vertices appear."""
        g = threshold_graph(tiny_collection, 1, allowed=[2], vertices=[1, 2, 3])
        assert sorted(g.nodes()) == [1, 2, 3]
        assert sorted(g.edges()) == [(2, 3)]

    def test_min_count_out_of_range(self, tiny_collection):
        """min_count must lie between 1 and the number of counted colours."""
        with pytest.raises(InvalidInstance):
            threshold_graph(tiny_collection, 0)
        with pytest.raises(InvalidInstance):
            threshold_graph(tiny_collection, 2, allowed=[0])

    @given(collections(), st.data())
    @settings(max_examples=200, deadline=None)
    def test_degree_bound_holds(self, collection, data):
        """The threshold graph's minimum degree is at least δ - (n-1)·count/m, exactly."""
        count = data.draw(st.integers(1, collection.m))
        g = threshold_graph(collection, count)
        bound = threshold_degree_bound(collection, count)
        assert isinstance(bound, Fraction)
        assert min(d for _, d in g.degree()) >= bound
