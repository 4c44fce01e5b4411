"""Vertex connectivity, highly connected subgraphs and disjoint path routing.

All three rest on networkx's unit-capacity flow machinery: connectivity and
minimum vertex cuts come from the vertex-split flow network, and disjoint
paths are read off a maximum flow between a super source and a super sink.
"""

import logging
from collections.abc import Iterable

import networkx as nx

from transversal.errors import InvalidInstance, InvariantViolation, NoRouting, NotFound

logger = logging.getLogger(__name__)

_SOURCE = ("source",)
_SINK = ("sink",)


def vertex_connectivity(G: nx.Graph) -> int:
    """Exact vertex connectivity; n-1 for complete graphs, 0 if disconnected."""
    if G.number_of_nodes() < 2:
        raise InvalidInstance("vertex connectivity needs at least 2 vertices")
    return nx.node_connectivity(G)


def minimum_vertex_cut(G: nx.Graph) -> set:
    """A minimum vertex cut; empty if G is disconnected.

    Raises:
        NotFound: If G is complete (no vertex cut exists).
    """
    n = G.number_of_nodes()
    if n < 2:
        raise InvalidInstance("vertex cuts need at least 2 vertices")
    if G.number_of_edges() == n * (n - 1) // 2:
        raise NotFound("complete graphs have no vertex cut")
    if not nx.is_connected(G):
        return set()
    return set(nx.minimum_node_cut(G))


def _peel(G: nx.Graph, vertices: set, min_keep: int) -> set:
    """Repeatedly drop vertices with fewer than ``min_keep`` neighbours inside."""
    H = set(vertices)
    queue = [v for v in H if sum(1 for w in G.adj[v] if w in H) < min_keep]
    while queue:
        v = queue.pop()
        if v not in H:
            continue
        H.discard(v)
        for w in G.adj[v]:
            if w in H and sum(1 for x in G.adj[w] if x in H) < min_keep:
                queue.append(w)
    return H


def _edges_in(G: nx.Graph, vertices: set) -> int:
    return G.subgraph(vertices).number_of_edges()


def find_highly_connected_subgraph(G: nx.Graph, k: int, verify: bool = True) -> set:
    """Vertex set H with G[H] (k+1)-connected and |H| >= k+2.

    Prune vertices with at most k neighbours left, stop if the residue is
    (k+1)-connected, otherwise split along a minimum vertex cut S (|S| <= k)
    into the sides C + S and recurse, trying sides with the largest surplus
    e - 2k|side| first. A (k+1)-connected subgraph has minimum degree k+1,
    so it survives pruning and lies inside one side; the search fails only
    when G has no such subgraph. The counting argument for average degree
    4k prunes degree <= 2k instead, which would throw away K_{k+2} and is
    not used here.

    Args:
        G: Host graph.
        k: Target connectivity minus one (k >= 0).
        verify: Re-check the result with vertex_connectivity.

    Raises:
        NotFound: G has no (k+1)-connected subgraph. Never raised when the
            average degree is at least 4k.
    """
    if k < 0:
        raise InvalidInstance("k must be non-negative")
    result = _search(G, set(G.nodes()), k)
    if result is None:
        raise NotFound(f"no {k + 1}-connected subgraph in graph of order {G.number_of_nodes()}")
    if verify and vertex_connectivity(G.subgraph(result)) < k + 1:
        raise InvariantViolation(f"extracted subgraph is not {k + 1}-connected")
    return result


def _search(G: nx.Graph, vertices: set, k: int) -> set | None:
    H = _peel(G, vertices, k + 1)
    if len(H) < k + 2:
        return None
    sub = G.subgraph(H)
    if not nx.is_connected(sub):
        sides = [set(c) for c in nx.connected_components(sub)]
    else:
        n = len(H)
        if sub.number_of_edges() == n * (n - 1) // 2 or nx.node_connectivity(sub) >= k + 1:
            return H
        cut = set(nx.minimum_node_cut(sub))
        rest = sub.subgraph(H - cut)
        sides = [set(c) | cut for c in nx.connected_components(rest)]
    sides.sort(key=lambda side: _edges_in(G, side) - 2 * k * len(side), reverse=True)
    logger.debug("splitting %d vertices into sides %s", len(H), [len(s) for s in sides])
    for side in sides:
        found = _search(G, side, k)
        if found is not None:
            return found
    return None


def disjoint_paths(
    G: nx.Graph,
    A: Iterable,
    B: Iterable,
    k: int,
    verify: bool = False,
) -> list[list]:
    """k pairwise vertex-disjoint paths, each from a distinct A-vertex to a distinct B-vertex.

    Args:
        G: Host graph.
        A, B: Disjoint endpoint sets with |A| = |B| = k.
        k: Number of paths.
        verify: Check that G is k-connected first.

    Returns:
        Paths as vertex lists starting in A and ending in B. For k=1 the path
        is a shortest A-B path.

    Raises:
        NoRouting: Fewer than k disjoint paths exist.
    """
    A, B = set(A), set(B)
    if A & B:
        raise InvalidInstance("endpoint sets must be disjoint")
    if len(A) != k or len(B) != k:
        raise InvalidInstance(f"need |A| = |B| = {k}")
    if k == 0:
        return []
    if verify and vertex_connectivity(G) < k:
        raise NoRouting(f"graph is not {k}-connected")

    H = nx.Graph(G)
    H.add_edges_from((_SOURCE, a) for a in A)
    H.add_edges_from((b, _SINK) for b in B)
    try:
        if k == 1:
            raw = [nx.shortest_path(H, _SOURCE, _SINK)]
        else:
            raw = list(nx.node_disjoint_paths(H, _SOURCE, _SINK))
    except nx.NetworkXNoPath:
        raw = []
    if len(raw) < k:
        raise NoRouting(f"only {len(raw)} of {k} disjoint paths exist")
    paths = [path[1:-1] for path in raw[:k]]
    # endpoints are exactly the super source and sink neighbours
    for path in paths:
        if path[0] not in A or path[-1] not in B:
            raise InvariantViolation(f"routed path {path} has wrong endpoints")
    return paths
