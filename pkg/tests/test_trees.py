"""Tests for tree splitting, the tree embedders and the spanning tree pipeline."""

import networkx as nx
import pytest

from transversal.constructions import random_collection
from transversal.core import GraphCollection
from transversal.errors import (
    HypothesisViolated,
    InvalidInstance,
    NotFound,
    PipelineStageError,
)
from transversal.models import PipelineConfig
from transversal.oracle import TransversalTemplate, verify_transversal
from transversal.trees import (
    all_trees,
    check_tree,
    decompose_tree,
    embed_tree_rainbow_few_surplus,
    embed_tree_rainbow_surplus,
    embed_tree_rooted,
    greedy_colour_cover_tree,
    rainbow_spanning_tree,
    random_tree,
    split_four,
    split_tree,
)


def edge_set(T: nx.Graph) -> set[frozenset]:
    return {frozenset(e) for e in T.edges()}


def identical(n: int, m: int) -> GraphCollection:
    return GraphCollection.identical(nx.complete_graph(n), m)


class TestTrees:
    """Validation and generation."""

    def test_check_tree(self):
        """Trees on 0..n-1 pass; cycles, gaps and empty graphs do not."""
        check_tree(nx.path_graph(4))
        with pytest.raises(InvalidInstance, match="not a tree"):
            check_tree(nx.cycle_graph(4))
        with pytest.raises(InvalidInstance, match="vertices must be"):
            check_tree(nx.relabel_nodes(nx.path_graph(3), {2: 7}))
        with pytest.raises(InvalidInstance, match="empty"):
            check_tree(nx.Graph())

    @pytest.mark.parametrize("seed", range(5))
    def test_random_tree_degree_cap(self, seed):
        """Random trees respect the degree cap and the seed."""
        T = random_tree(25, max_degree=3, seed=seed)
        check_tree(T)
        assert max(d for _, d in T.degree()) <= 3
        assert edge_set(T) == edge_set(random_tree(25, max_degree=3, seed=seed))

    def test_random_tree_small(self):
        """One and two vertices are special-cased; degree 1 caps are impossible."""
        assert random_tree(1).number_of_nodes() == 1
        assert random_tree(2).number_of_edges() == 1
        with pytest.raises(InvalidInstance):
            random_tree(5, max_degree=1)

    def test_all_trees(self):
        """There are six trees on six vertices."""
        trees = all_trees(6)
        assert len(trees) == 6
        for T in trees:
            check_tree(T)


class TestSplitting:
    """Edge-disjoint subtree splits."""

    @pytest.mark.parametrize("seed", range(6))
    @pytest.mark.parametrize("m", [1, 3, 7])
    def test_split_tree(self, seed, m):
        """T1 holds t, T2 has m..3m vertices, the two share one vertex and all edges."""
        T = random_tree(24, seed=seed)
        T1, T2 = split_tree(T, 0, m)
        assert 0 in T1
        assert m <= T2.number_of_nodes() <= 3 * m
        assert len(set(T1) & set(T2)) == 1
        assert edge_set(T1) | edge_set(T2) == edge_set(T)
        assert not edge_set(T1) & edge_set(T2)
        assert nx.is_tree(T1) and nx.is_tree(T2)

    def test_split_tree_bad_m(self):
        """m must be between 1 and |T|/3."""
        with pytest.raises(InvalidInstance):
            split_tree(nx.path_graph(6), 0, 3)
        with pytest.raises(InvalidInstance):
            split_tree(nx.path_graph(6), 9, 1)

    @pytest.mark.parametrize("seed", range(4))
    def test_decompose_tree(self, seed):
        """Pieces cover the edges once, stay within m..4m and every prefix is a tree."""
        T = random_tree(60, max_degree=4, seed=seed)
        pieces = decompose_tree(T, 5)
        assert sum(p.number_of_edges() for p in pieces) == 59
        union = set()
        for piece in pieces:
            assert 5 <= piece.number_of_nodes() <= 20
            assert not edge_set(piece) & union
            union |= edge_set(piece)
        for i in range(1, len(pieces) + 1):
            assert nx.is_tree(nx.compose_all(pieces[:i]))

    def test_split_four(self):
        """Four pieces whose running unions are trees, joined at the reported joints."""
        T = random_tree(100, max_degree=3, seed=11)
        split = split_four(T, 5, 3, 4)
        T1, T2, T3, T4 = split.pieces
        assert 5 <= T1.number_of_nodes() <= 15
        assert 3 <= T3.number_of_nodes() <= 9
        assert 4 <= T4.number_of_nodes() <= 12
        assert sum(p.number_of_edges() for p in split.pieces) == 99
        assert nx.is_tree(nx.compose(T1, T2))
        assert nx.is_tree(nx.compose_all([T1, T2, T3]))
        j2, j3, j4 = split.joints
        assert j2 in T1 and j2 in T2
        assert j3 in T3
        assert j4 in T4

    def test_split_four_sizes(self):
        """Piece sizes above |T|/10 are rejected."""
        with pytest.raises(InvalidInstance):
            split_four(random_tree(30), 5, 1, 1)


class TestEmbedders:
    """Rooted and rainbow tree embeddings."""

    def test_rooted_in_complete_graph(self):
        """The root goes where asked and edges land on edges."""
        T = random_tree(12, seed=2)
        G = nx.complete_graph(15)
        mapping = embed_tree_rooted(G, T, 0, 9)
        assert mapping[0] == 9
        assert len(set(mapping.values())) == 12
        assert all(G.has_edge(mapping[a], mapping[b]) for a, b in T.edges())

    def test_rooted_grid(self):
        """A binary tree fits in a grid when rooted at the centre."""
        G = nx.convert_node_labels_to_integers(nx.grid_2d_graph(5, 5), ordering="sorted")
        T = nx.balanced_tree(2, 2)
        mapping = embed_tree_rooted(G, T, 0, 12)
        assert all(G.has_edge(mapping[a], mapping[b]) for a, b in T.edges())

    def test_rooted_long_path(self):
        """A path of 1500 vertices embeds into itself end to end."""
        G = nx.path_graph(1500)
        mapping = embed_tree_rooted(G, nx.path_graph(1500), 0, 0)
        assert mapping == {i: i for i in range(1500)}

    def test_rooted_impossible(self):
        """A path has no vertex of degree three."""
        with pytest.raises(NotFound):
            embed_tree_rooted(nx.path_graph(8), nx.star_graph(3), 0, 3)

    def test_surplus(self, complete_collection, config):
        """Plenty of colours give a rainbow path."""
        T = nx.path_graph(5)
        emb = embed_tree_rainbow_surplus(complete_collection, T, 0, 3, config)
        assert emb.vertex_map[0] == 3
        assert verify_transversal(complete_collection, emb, TransversalTemplate.rainbow(T)).ok

    def test_surplus_too_few_colours(self, complete_collection, config):
        """Nine edges cannot take three colours."""
        with pytest.raises(InvalidInstance):
            embed_tree_rainbow_surplus(
                complete_collection, nx.path_graph(10), 0, 0, config, allowed_colours=[0, 1, 2]
            )

    def test_few_surplus(self, config):
        """Blocks are embedded in disjoint parts with fresh colours."""
        collection = identical(30, 29)
        T = random_tree(20, max_degree=3, seed=4)
        emb = embed_tree_rainbow_few_surplus(collection, T, 0, 5, config)
        assert emb.vertex_map[0] == 5
        assert verify_transversal(collection, emb, TransversalTemplate.rainbow(T)).ok

    def test_few_surplus_root_outside_pool(self, config):
        """The root image must be available."""
        with pytest.raises(InvalidInstance):
            embed_tree_rainbow_few_surplus(identical(10, 9), nx.path_graph(3), 0, 9, config, vertices=range(5))

    def test_greedy_cover_uses_every_colour(self, complete_collection):
        """Each of the nine colours appears exactly once."""
        T = random_tree(10, seed=8)
        emb = greedy_colour_cover_tree(complete_collection, T, 0, 0)
        assert sorted(emb.colours()) == list(range(9))
        assert verify_transversal(complete_collection, emb, TransversalTemplate.rainbow(T)).ok

    def test_greedy_cover_reports_colour(self):
        """An empty colour breaks the degree hypothesis and is named."""
        collection = GraphCollection(4, [[], [(0, 1), (1, 2), (2, 3), (0, 3)]])
        with pytest.raises(HypothesisViolated) as info:
            greedy_colour_cover_tree(collection, nx.path_graph(3), 0, 0)
        assert info.value.colour == 0
        assert info.value.vertex == 0

    def test_greedy_cover_colour_count(self, complete_collection):
        """Exactly e(T) colours are required."""
        with pytest.raises(InvalidInstance, match="exactly"):
            greedy_colour_cover_tree(complete_collection, nx.path_graph(4), 0, 0)


class TestSpanningTree:
    """The spanning tree pipeline."""

    def test_small_instance_solved_directly(self, config):
        """Below the pipeline size the exact oracle answers."""
        collection = identical(6, 5)
        T = nx.star_graph(5)
        emb = rainbow_spanning_tree(collection, T, config)
        assert verify_transversal(collection, emb, TransversalTemplate.rainbow(T)).ok

    def test_direct_failure_names_stage(self, config):
        """Paths contain no star, so the direct stage fails."""
        collection = GraphCollection.identical(nx.path_graph(5), 4)
        with pytest.raises(PipelineStageError) as info:
            rainbow_spanning_tree(collection, nx.star_graph(4), config)
        assert info.value.stage == "direct"

    def test_wrong_sizes(self, config):
        """The tree spans the collection and there are n - 1 colours."""
        with pytest.raises(InvalidInstance, match="n-1"):
            rainbow_spanning_tree(identical(5, 5), nx.path_graph(5), config)
        with pytest.raises(InvalidInstance, match="vertices"):
            rainbow_spanning_tree(identical(5, 4), nx.path_graph(4), config)

    def test_single_vertex(self, config):
        """The one-vertex tree needs no colours."""
        collection = GraphCollection(1, [])
        assert rainbow_spanning_tree(collection, random_tree(1), config).vertex_map == {0: 0}

    @pytest.mark.slow
    def test_pipeline_on_complete_copies(self, config):
        """Forty vertices run all five steps and use every colour once."""
        collection = identical(40, 39)
        T = random_tree(40, max_degree=3, seed=5)
        emb = rainbow_spanning_tree(collection, T, config)
        assert sorted(emb.colours()) == list(range(39))
        assert verify_transversal(collection, emb, TransversalTemplate.rainbow(T)).ok

    @pytest.mark.slow
    def test_pipeline_on_dense_random_collections(self):
        """n = 60, δ >= 0.8n, Δ(T) <= 4: at least 40 of 50 seeds succeed and every success verifies."""
        successes = 0
        for seed in range(50):
            collection = random_collection(
                60, 59, "min_degree_conditioned", {"p": 0.92, "target": 0.8, "retries": 200}, seed=seed
            ).collection
            assert collection.min_degree() >= 48
            T = random_tree(60, max_degree=4, seed=seed)
            try:
                emb = rainbow_spanning_tree(collection, T, PipelineConfig(rng_seed=seed))
            except PipelineStageError:
                continue
            assert verify_transversal(collection, emb, TransversalTemplate.rainbow(T)).ok
            successes += 1
        assert successes >= 40
