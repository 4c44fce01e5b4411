"""Graph collections: an ordered list of graphs on {0..n-1}, one per colour.

The collection is immutable once built. Each colour is stored as a frozen
``networkx.Graph`` (constant-time adjacency queries), and every edge that
appears in any colour is indexed by a bitmask of the colours containing it,
so "which colours contain uv" and "in how many colours is uv" are a dict
lookup plus a popcount.

Example:
    >>> c = GraphCollection(3, [[(0, 1)], [(0, 1), (1, 2)]])
    >>> c.m, min_degree(c)
    (2, 0)
    >>> sorted(threshold_graph(c, 2).edges())
    [(0, 1)]
"""

from collections.abc import Iterable, Sequence
from fractions import Fraction

import networkx as nx

from transversal.errors import InvalidInstance

Edge = tuple[int, int]


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class GraphCollection:
    """Ordered list of simple graphs on a common vertex set {0..n-1}.

    Attributes:
        n: Number of vertices.
        colours: Tuple of frozen graphs; position i is colour i.
    """

    __slots__ = ("n", "colours", "_masks", "_union")

    def __init__(self, n: int, edge_lists: Iterable[Iterable[Edge]]):
        if n < 0:
            raise InvalidInstance("vertex count must be non-negative")
        self.n = n
        graphs = []
        masks: dict[Edge, int] = {}
        for colour, edges in enumerate(edge_lists):
            g = nx.Graph()
            g.add_nodes_from(range(n))
            for u, v in edges:
                if u == v:
                    raise InvalidInstance(f"loop at vertex {u} in colour {colour}")
                if not (0 <= u < n and 0 <= v < n):
                    raise InvalidInstance(f"edge ({u}, {v}) outside 0..{n - 1}")
                if g.has_edge(u, v):
                    raise InvalidInstance(f"duplicate edge ({u}, {v}) in colour {colour}")
                g.add_edge(u, v)
                key = _norm(u, v)
                masks[key] = masks.get(key, 0) | (1 << colour)
            graphs.append(nx.freeze(g))
        self.colours: tuple[nx.Graph, ...] = tuple(graphs)
        self._masks = masks
        union: dict[int, set[int]] = {v: set() for v in range(n)}
        for u, v in masks:
            union[u].add(v)
            union[v].add(u)
        self._union = union

    @classmethod
    def from_graphs(cls, n: int, graphs: Iterable[nx.Graph]) -> "GraphCollection":
        """Build from networkx graphs whose nodes are a subset of {0..n-1}."""
        return cls(n, ([_norm(u, v) for u, v in g.edges()] for g in graphs))

    @classmethod
    def identical(cls, graph: nx.Graph, m: int) -> "GraphCollection":
        """m copies of one graph on {0..|graph|-1}."""
        edges = [_norm(u, v) for u, v in graph.edges()]
        return cls(graph.number_of_nodes(), [edges] * m)

    @property
    def m(self) -> int:
        return len(self.colours)

    def __len__(self) -> int:
        return len(self.colours)

    def __getitem__(self, colour: int) -> nx.Graph:
        return self.colours[colour]

    def __iter__(self):
        return iter(self.colours)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GraphCollection):
            return NotImplemented
        return self.n == other.n and self.edge_lists() == other.edge_lists()

    def __repr__(self) -> str:
        return f"GraphCollection(n={self.n}, m={self.m})"

    def edge_lists(self) -> list[list[Edge]]:
        """Sorted (u < v) edge list of every colour."""
        return [sorted(_norm(u, v) for u, v in g.edges()) for g in self.colours]

    def has_edge(self, colour: int, u: int, v: int) -> bool:
        return v in self.colours[colour].adj[u]

    def edge_mask(self, u: int, v: int) -> int:
        """Bitmask of the colours containing uv (bit i set iff uv is in colour i)."""
        return self._masks.get(_norm(u, v), 0)

    def edge_count(self, u: int, v: int, allowed: int | None = None) -> int:
        """Number of colours (restricted to the ``allowed`` mask) containing uv."""
        mask = self.edge_mask(u, v)
        if allowed is not None:
            mask &= allowed
        return mask.bit_count()

    def colours_containing(
        self, u: int, v: int, allowed: Iterable[int] | None = None
    ) -> list[int]:
        """Colours containing uv, ascending, optionally restricted to ``allowed``."""
        mask = self.edge_mask(u, v)
        if allowed is not None:
            mask &= colour_mask(allowed)
        return bits(mask)

    def degree(self, colour: int, v: int) -> int:
        return len(self.colours[colour].adj[v])

    def degree_into(self, colour: int, v: int, subset: Iterable[int] | set[int]) -> int:
        """Number of neighbours of v in colour ``colour`` inside ``subset``."""
        subset = subset if isinstance(subset, (set, frozenset)) else set(subset)
        return sum(1 for w in self.colours[colour].adj[v] if w in subset)

    def min_degree(self) -> int:
        if not self.colours:
            raise InvalidInstance("no colours")
        if self.n == 0:
            return 0
        return min(d for g in self.colours for _, d in g.degree())

    def union_graph(self) -> nx.Graph:
        return threshold_graph(self, 1)

    def intersection_graph(self) -> nx.Graph:
        return threshold_graph(self, self.m)

    def restrict_colours(self, colours: Sequence[int]) -> "GraphCollection":
        """Sub-collection with the given colours, re-indexed 0..len-1 in order."""
        lists = self.edge_lists()
        return GraphCollection(self.n, [lists[c] for c in colours])

    def union_adjacency(self, v: int) -> set[int]:
        """Vertices joined to v in at least one colour (do not mutate)."""
        return self._union[v]

    def all_edges(self) -> Iterable[tuple[Edge, int]]:
        """(edge, colour mask) for every edge present in some colour."""
        return self._masks.items()


def colour_mask(colours: Iterable[int]) -> int:
    mask = 0
    for c in colours:
        mask |= 1 << c
    return mask


def bits(mask: int) -> list[int]:
    """Indices of set bits, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def min_degree(collection: GraphCollection) -> int:
    """Minimum over colours and vertices of the vertex degree.

    Raises:
        InvalidInstance: If the collection has no colours.
    """
    return collection.min_degree()


def threshold_graph(
    collection: GraphCollection,
    min_count: int,
    allowed: Iterable[int] | None = None,
    vertices: Iterable[int] | None = None,
) -> nx.Graph:
    """Graph of the edges that lie in at least ``min_count`` colours.

    Args:
        collection: The graph collection.
        min_count: Threshold, 1 <= min_count <= number of counted colours.
        allowed: Only count these colours (default: all).
        vertices: Restrict the output to this vertex subset (default: all).

    Returns:
        nx.Graph on ``vertices`` (or {0..n-1}). With all colours counted its
        minimum degree is at least ``min_degree - (n-1) * min_count / m``.

    Raises:
        InvalidInstance: If min_count is out of range.
    """
    mask = (1 << collection.m) - 1 if allowed is None else colour_mask(allowed)
    counted = mask.bit_count()
    if not 1 <= min_count <= max(counted, 1) or counted == 0:
        raise InvalidInstance(f"min_count {min_count} outside 1..{counted}")
    keep = set(range(collection.n)) if vertices is None else set(vertices)
    g = nx.Graph()
    g.add_nodes_from(sorted(keep))
    for (u, v), edge_mask in collection.all_edges():
        if u in keep and v in keep and (edge_mask & mask).bit_count() >= min_count:
            g.add_edge(u, v)
    return g


def threshold_degree_bound(collection: GraphCollection, min_count: int) -> Fraction:
    """Exact lower bound on the threshold graph's minimum degree, by averaging."""
    return Fraction(collection.min_degree()) - Fraction(
        (collection.n - 1) * min_count, collection.m
    )
