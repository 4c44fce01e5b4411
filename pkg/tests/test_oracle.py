"""Tests for the exact oracle: verification rules, decisions and subgraph search."""

from itertools import permutations, product

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transversal.constructions import round_robin_one_factorization
from transversal.core import GraphCollection
from transversal.errors import InvalidInstance, NotFound
from transversal.models import ColouredEdge, Outcome, RainbowEmbedding
from transversal.oracle import (
    TransversalTemplate,
    exists_transversal_exact,
    find_subgraph,
    iter_factors,
    iter_subgraphs,
    twin_classes,
    verify_transversal,
)


def brute_force_rainbow(collection: GraphCollection, H: nx.Graph) -> bool:
    """Try every injective placement and every colour choice."""
    edges = sorted(H.edges())
    for images in permutations(range(collection.n), H.number_of_nodes()):
        choices = [collection.colours_containing(images[a], images[b]) for a, b in edges]
        for pick in product(*choices):
            if len(set(pick)) == len(pick):
                return True
    return False


@st.composite
def small_collections(draw):
    n = draw(st.integers(3, 6))
    m = draw(st.integers(1, 4))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    return GraphCollection(n, [draw(st.lists(st.sampled_from(pairs), unique=True)) for _ in range(m)])


@pytest.fixture
def path_witness():
    """A decided rainbow P4 in three copies of K4, with its template."""
    collection = GraphCollection.identical(nx.complete_graph(4), 3)
    template = TransversalTemplate.rainbow(nx.path_graph(4))
    decision = exists_transversal_exact(collection, template)
    assert decision.outcome == Outcome.YES
    return collection, template, decision.witness


class TestTemplates:
    """Template constructors."""

    def test_factor_template_blocks(self):
        """Factor templates lay copies on consecutive vertex blocks."""
        template = TransversalTemplate.factor(nx.cycle_graph(3), 3, 2)
        assert template.order == 6
        assert template.block == 3
        assert (3, 4) in template.edges()

    def test_factor_rejects_other_t(self):
        """Only t = 1 and t = e(F) are supported."""
        with pytest.raises(InvalidInstance, match="t must be 1 or e"):
            TransversalTemplate.factor(nx.cycle_graph(4), 2, 1)

    def test_perfect_matching_needs_even_order(self):
        """Odd vertex counts have no perfect matching."""
        with pytest.raises(InvalidInstance):
            TransversalTemplate.perfect_matching(5)

    def test_patterned_checks_pattern_length(self):
        """Each pattern names one colour per edge of F."""
        with pytest.raises(InvalidInstance, match="pattern 0"):
            TransversalTemplate.patterned(nx.path_graph(3), [[0]])


class TestVerify:
    """verify_transversal reports the first broken rule."""

    def test_decided_witness_passes(self, path_witness):
        """A witness produced by the oracle verifies."""
        collection, template, witness = path_witness
        assert verify_transversal(collection, witness, template).ok

    def test_unmapped_vertex(self, path_witness):
        """Dropping a template vertex breaks vertex coverage."""
        collection, template, witness = path_witness
        vmap = dict(witness.vertex_map)
        del vmap[3]
        broken = RainbowEmbedding(vertex_map=vmap, colour_map=witness.colour_map)
        report = verify_transversal(collection, broken, template)
        assert report.violation.rule == "vertex_coverage"
        assert report.violation.vertex == 3

    def test_non_injective(self, path_witness):
        """Two template vertices on one host vertex are caught."""
        collection, template, witness = path_witness
        vmap = dict(witness.vertex_map)
        vmap[1] = vmap[0]
        broken = RainbowEmbedding(vertex_map=vmap, colour_map=witness.colour_map)
        assert verify_transversal(collection, broken, template).violation.rule == "vertex_injective"

    def test_repeated_colour(self, path_witness):
        """All edges in colour 0 is not rainbow."""
        collection, template, witness = path_witness
        colours = [ColouredEdge(u=e.u, v=e.v, colour=0) for e in witness.colour_map]
        broken = RainbowEmbedding(vertex_map=witness.vertex_map, colour_map=colours)
        report = verify_transversal(collection, broken, template)
        assert report.violation.rule == "rainbow"
        assert report.violation.colour == 0

    def test_colour_out_of_range(self, path_witness):
        """Colours must exist in the collection."""
        collection, template, witness = path_witness
        colours = [ColouredEdge(u=e.u, v=e.v, colour=e.colour) for e in witness.colour_map]
        colours[0] = ColouredEdge(u=colours[0].u, v=colours[0].v, colour=5)
        broken = RainbowEmbedding(vertex_map=witness.vertex_map, colour_map=colours)
        assert verify_transversal(collection, broken, template).violation.rule == "colour_range"

    def test_missing_edge(self, path_witness):
        """An uncoloured template edge breaks edge coverage."""
        collection, template, witness = path_witness
        broken = RainbowEmbedding(vertex_map=witness.vertex_map, colour_map=witness.colour_map[1:])
        assert verify_transversal(collection, broken, template).violation.rule == "edge_coverage"

    def test_colour_membership(self, tiny_collection):
        """The image pair must be an edge of its colour."""
        template = TransversalTemplate.rainbow(nx.complete_graph(2))
        embedding = RainbowEmbedding(
            vertex_map={0: 0, 1: 3}, colour_map=[ColouredEdge(u=0, v=1, colour=0)]
        )
        report = verify_transversal(tiny_collection, embedding, template)
        assert report.violation.rule == "colour_membership"
        assert report.violation.edge == (0, 1)


class TestExistsTransversal:
    """Exact decisions."""

    def test_hamilton_cycle_in_complete_copies(self):
        """Five copies of K5 contain a rainbow Hamilton cycle."""
        collection = GraphCollection.identical(nx.complete_graph(5), 5)
        template = TransversalTemplate.hamilton_cycle(5)
        decision = exists_transversal_exact(collection, template)
        assert decision.outcome == Outcome.YES
        assert verify_transversal(collection, decision.witness, template).ok

    def test_too_few_colours(self):
        """Four colours cannot colour five edges distinctly."""
        collection = GraphCollection.identical(nx.complete_graph(5), 4)
        decision = exists_transversal_exact(collection, TransversalTemplate.hamilton_cycle(5))
        assert decision.outcome == Outcome.NO

    def test_template_larger_than_host(self, tiny_collection):
        """A template with more vertices than n is a plain NO."""
        decision = exists_transversal_exact(tiny_collection, TransversalTemplate.hamilton_cycle(5))
        assert decision.outcome == Outcome.NO

    def test_one_factorization_has_no_transversal_matching(self):
        """Colouring K4 by its three perfect matchings leaves no rainbow perfect matching."""
        matchings = round_robin_one_factorization(4)
        collection = GraphCollection(4, matchings)
        decision = exists_transversal_exact(collection, TransversalTemplate.perfect_matching(4))
        assert decision.outcome == Outcome.NO

    def test_perfect_matching_in_complete_copies(self):
        """Two copies of K4 give a perfect matching with distinct colours."""
        collection = GraphCollection.identical(nx.complete_graph(4), 2)
        template = TransversalTemplate.perfect_matching(4)
        decision = exists_transversal_exact(collection, template)
        assert decision.outcome == Outcome.YES
        assert verify_transversal(collection, decision.witness, template).ok

    def test_rainbow_triangle_factor(self):
        """Six copies of K6 hold two rainbow triangles with disjoint colour sets."""
        collection = GraphCollection.identical(nx.complete_graph(6), 6)
        template = TransversalTemplate.factor(nx.complete_graph(3), 3, 2)
        decision = exists_transversal_exact(collection, template)
        assert decision.outcome == Outcome.YES
        assert verify_transversal(collection, decision.witness, template).ok

    @pytest.mark.parametrize("n,m", [(4, 2), (6, 3), (8, 4)])
    def test_perfect_matching_in_many_identical_copies(self, n, m):
        """n/2 copies of K_n always hold a perfect matching in distinct colours."""
        collection = GraphCollection.identical(nx.complete_graph(n), m)
        template = TransversalTemplate.perfect_matching(n)
        decision = exists_transversal_exact(collection, template)
        assert decision.outcome == Outcome.YES
        assert verify_transversal(collection, decision.witness, template).ok

    def test_path_factor_in_identical_copies(self):
        """Three rainbow P3s with disjoint colours in six copies of K9."""
        collection = GraphCollection.identical(nx.complete_graph(9), 6)
        template = TransversalTemplate.factor(nx.path_graph(3), 2, 3)
        decision = exists_transversal_exact(collection, template)
        assert decision.outcome == Outcome.YES
        assert verify_transversal(collection, decision.witness, template).ok

    def test_factor_mode_needs_spanning_template(self):
        """Factor templates must cover every vertex."""
        collection = GraphCollection.identical(nx.complete_graph(5), 4)
        with pytest.raises(InvalidInstance, match="spanning"):
            exists_transversal_exact(collection, TransversalTemplate.perfect_matching(4))

    def test_patterned(self, tiny_collection):
        """Prescribed colours are honoured, and impossible patterns are refused."""
        path = nx.path_graph(3)
        template = TransversalTemplate.patterned(path, [[1, 0]])
        decision = exists_transversal_exact(tiny_collection, template)
        assert decision.outcome == Outcome.YES
        assert verify_transversal(tiny_collection, decision.witness, template).ok
        impossible = TransversalTemplate.patterned(path, [[2, 2]])
        assert exists_transversal_exact(tiny_collection, impossible).outcome == Outcome.NO

    def test_budget_exhausted(self):
        """A one-node budget cannot place an 8-cycle."""
        collection = GraphCollection.identical(nx.complete_graph(8), 8)
        decision = exists_transversal_exact(collection, TransversalTemplate.hamilton_cycle(8), budget=1)
        assert decision.outcome == Outcome.BUDGET_EXHAUSTED
        assert decision.witness is None

    @pytest.mark.parametrize("H", [nx.path_graph(3), nx.path_graph(4), nx.cycle_graph(3)])
    @given(collection=small_collections())
    @settings(max_examples=60, deadline=None)
    def test_matches_brute_force(self, H, collection):
        """Decisions agree with exhaustive enumeration on small collections."""
        decision = exists_transversal_exact(collection, TransversalTemplate.rainbow(H))
        assert (decision.outcome == Outcome.YES) == brute_force_rainbow(collection, H)


class TestSearch:
    """Subgraph and factor enumeration."""

    def test_twin_classes_of_identical_triangle(self):
        """All vertices of identical complete copies are twins."""
        collection = GraphCollection.identical(nx.complete_graph(3), 2)
        assert twin_classes(collection) == {1: [0], 2: [0, 1]}

    def test_find_subgraph_not_found(self):
        """A path graph has no triangle."""
        with pytest.raises(NotFound):
            find_subgraph(nx.path_graph(5), nx.complete_graph(3))

    def test_find_subgraph_respects_pins(self):
        """Pinned vertices keep their images."""
        found = find_subgraph(nx.cycle_graph(6), nx.path_graph(3), pins={0: 4})
        assert found[0] == 4
        assert nx.cycle_graph(6).has_edge(found[0], found[1])

    def test_twins_outside_allowed_do_not_block(self):
        """A lower twin that may not be used counts as taken."""
        twins = {1: [0], 2: [0, 1], 3: [0, 1, 2]}
        search = iter_subgraphs(
            nx.complete_graph(4), nx.complete_graph(2), {0: 1}, allowed={1, 2, 3}, lower_twins=twins
        )
        found = list(search)
        assert found == [{0: 1, 1: 2}]

    def test_long_path_search(self):
        """Patterns far longer than the interpreter's recursion limit still embed."""
        G = nx.path_graph(1500)
        found = find_subgraph(G, nx.path_graph(1500), pins={0: 0})
        assert found == {i: i for i in range(1500)}

    def test_iter_factors_of_four_cycle(self):
        """C4 has exactly two perfect matchings."""
        factors = list(iter_factors(nx.cycle_graph(4), nx.complete_graph(2), range(4)))
        found = {frozenset(frozenset(copy) for copy in f) for f in factors}
        assert found == {
            frozenset({frozenset({0, 1}), frozenset({2, 3})}),
            frozenset({frozenset({0, 3}), frozenset({1, 2})}),
        }

    def test_iter_factors_indivisible(self):
        """No factors when r does not divide the vertex count."""
        assert list(iter_factors(nx.complete_graph(5), nx.complete_graph(2), range(5))) == []
