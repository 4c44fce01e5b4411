"""Tests for vertex connectivity, highly connected subgraphs and path routing."""

from itertools import combinations

import networkx as nx
import pytest

from transversal.connectivity import (
    disjoint_paths,
    find_highly_connected_subgraph,
    minimum_vertex_cut,
    vertex_connectivity,
)
from transversal.errors import InvalidInstance, NoRouting, NotFound


def brute_force_connectivity(G: nx.Graph) -> int:
    """Smallest vertex set whose removal disconnects G (n - 1 when G is complete)."""
    nodes = list(G.nodes())
    n = len(nodes)
    for size in range(n - 1):
        for cut in combinations(nodes, size):
            rest = G.subgraph(set(nodes) - set(cut))
            if not nx.is_connected(rest):
                return size
    return n - 1


class TestVertexConnectivity:
    """Connectivity values and cuts."""

    @pytest.mark.parametrize(
        "G, kappa",
        [
            (nx.complete_graph(5), 4),
            (nx.cycle_graph(6), 2),
            (nx.path_graph(4), 1),
            (nx.empty_graph(3), 0),
            (nx.complete_bipartite_graph(3, 4), 3),
        ],
    )
    def test_known_values(self, G, kappa):
        """Textbook connectivities."""
        assert vertex_connectivity(G) == kappa

    @pytest.mark.parametrize("seed", range(12))
    def test_matches_brute_force(self, seed):
        """Agrees with exhaustive cut search on random graphs."""
        G = nx.gnp_random_graph(7, 0.6, seed=seed)
        assert vertex_connectivity(G) == brute_force_connectivity(G)

    def test_too_small(self):
        """A single vertex has no connectivity."""
        with pytest.raises(InvalidInstance):
            vertex_connectivity(nx.empty_graph(1))

    def test_minimum_cut(self):
        """The middle of a path is a cut; disconnected graphs need none."""
        assert minimum_vertex_cut(nx.path_graph(3)) == {1}
        assert minimum_vertex_cut(nx.empty_graph(3)) == set()
        with pytest.raises(NotFound):
            minimum_vertex_cut(nx.complete_graph(4))

    @pytest.mark.parametrize("seed", range(6))
    def test_cut_size_matches_connectivity(self, seed):
        """Removing the cut disconnects the graph and its size is the connectivity."""
        G = nx.gnp_random_graph(8, 0.5, seed=seed)
        if G.number_of_edges() == 28:
            pytest.skip("complete sample")
        cut = minimum_vertex_cut(G)
        assert len(cut) == vertex_connectivity(G)
        if cut:
            assert not nx.is_connected(G.subgraph(set(G) - cut))


class TestHighlyConnectedSubgraph:
    """Extraction of (k+1)-connected subgraphs."""

    def test_clique_with_tail(self):
        """Pruning drops the pendant path and keeps K6."""
        G = nx.complete_graph(6)
        nx.add_path(G, [5, 6, 7, 8])
        assert find_highly_connected_subgraph(G, 3) == set(range(6))

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_smallest_clique_is_found(self, k):
        """K_{k+2} is kept although its vertices have at most 2k neighbours in it."""
        G = nx.complete_graph(k + 2)
        G.add_edge(0, k + 2)
        assert find_highly_connected_subgraph(G, k) == set(range(k + 2))

    def test_split_along_cut(self):
        """Two K5 sharing a vertex: one side is returned."""
        G = nx.complete_graph(5)
        G.add_edges_from(combinations(range(4, 9), 2))
        found = find_highly_connected_subgraph(G, 3)
        assert found in (set(range(5)), set(range(4, 9)))
        assert vertex_connectivity(G.subgraph(found)) >= 4

    def test_trees_have_no_two_connected_part(self):
        """A path has no 2-connected subgraph."""
        with pytest.raises(NotFound):
            find_highly_connected_subgraph(nx.path_graph(10), 1)

    @pytest.mark.parametrize("seed", range(5))
    def test_dense_random(self, seed):
        """Dense random graphs have a 3-connected piece of at least 4 vertices."""
        G = nx.gnp_random_graph(30, 0.5, seed=seed)
        found = find_highly_connected_subgraph(G, 2)
        assert len(found) >= 4
        assert vertex_connectivity(G.subgraph(found)) >= 3

    def test_negative_k(self):
        """k must be non-negative."""
        with pytest.raises(InvalidInstance):
            find_highly_connected_subgraph(nx.complete_graph(3), -1)


class TestDisjointPaths:
    """Vertex-disjoint routing between endpoint sets."""

    def test_cycle_routes_two_paths(self):
        """Both ways round a cycle."""
        paths = disjoint_paths(nx.cycle_graph(6), {0, 1}, {3, 4}, 2)
        assert len(paths) == 2
        assert {p[0] for p in paths} == {0, 1}
        assert {p[-1] for p in paths} == {3, 4}
        assert not set(paths[0]) & set(paths[1])
        for p in paths:
            assert all(nx.cycle_graph(6).has_edge(a, b) for a, b in zip(p, p[1:]))

    def test_bottleneck(self):
        """A path graph routes only one path through its middle."""
        with pytest.raises(NoRouting, match="1 of 2"):
            disjoint_paths(nx.path_graph(5), {0, 1}, {3, 4}, 2)

    def test_single_shortest_path(self):
        """k = 1 returns a shortest A-B path."""
        assert disjoint_paths(nx.path_graph(5), {0}, {4}, 1) == [[0, 1, 2, 3, 4]]

    def test_verify_connectivity(self):
        """With verify, a graph below k-connectivity is refused up front."""
        with pytest.raises(NoRouting, match="connected"):
            disjoint_paths(nx.path_graph(6), {0, 1}, {4, 5}, 2, verify=True)

    def test_endpoint_sets(self):
        """Endpoint sets must be disjoint and of size k."""
        with pytest.raises(InvalidInstance):
            disjoint_paths(nx.cycle_graph(5), {0, 1}, {1, 2}, 2)
        with pytest.raises(InvalidInstance):
            disjoint_paths(nx.cycle_graph(5), {0}, {2, 3}, 2)
        assert disjoint_paths(nx.cycle_graph(5), set(), set(), 0) == []
