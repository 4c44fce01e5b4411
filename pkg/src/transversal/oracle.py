"""Exact verifiers and decision procedures: the ground truth for everything else.

- verify_transversal checks a claimed embedding rule by rule and reports the
  first violation with coordinates.
- exists_transversal_exact decides whether a transversal copy of a template
  exists, by backtracking over vertex placements with an incremental colour
  matching (Hall pruning after every placement).
- find_subgraph / iter_subgraphs / iter_factors are the generic pinned
  subgraph searches used by the constructive modules.

Searches count expanded nodes against a NodeBudget and raise
BudgetExhausted when it runs out; exists_transversal_exact turns that into a
``budget_exhausted`` decision instead.
"""

import logging
from collections.abc import Callable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field

import networkx as nx

from transversal.core import GraphCollection, bits
from transversal.errors import BudgetExhausted, InvalidInstance, NotFound
from transversal.models import (
    ColouredEdge,
    Decision,
    OracleMode,
    Outcome,
    RainbowEmbedding,
    VerificationReport,
)

logger = logging.getLogger(__name__)

Edge = tuple[int, int]
EdgeFilter = Callable[[Edge, Edge], bool]
VertexFilter = Callable[[int, int], bool]

DEFAULT_BUDGET = 2_000_000


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class TransversalTemplate:
    """What the oracle looks for.

    Attributes:
        graph: Template graph on {0..h-1}.
        mode: rainbow (all edge colours distinct), factor (copies of F on
            consecutive blocks of ``block`` vertices, each with exactly ``t``
            colours, colour sets disjoint) or patterned (prescribed colours).
        block: Vertices per copy of F in factor and patterned modes.
        t: Colours per copy in factor mode (1 or e(F)).
        colouring: Prescribed colour of each template edge in patterned mode.
    """

    graph: nx.Graph
    mode: OracleMode
    block: int = 0
    t: int | None = None
    colouring: Mapping[Edge, int] | None = None
    name: str = field(default="", compare=False)

    @classmethod
    def rainbow(cls, graph: nx.Graph, name: str = "") -> "TransversalTemplate":
        return cls(graph=_relabel(graph), mode=OracleMode.RAINBOW, name=name)

    @classmethod
    def hamilton_cycle(cls, n: int) -> "TransversalTemplate":
        return cls.rainbow(nx.cycle_graph(n), name=f"C{n}")

    @classmethod
    def factor(cls, F: nx.Graph, t: int, copies: int, name: str = "") -> "TransversalTemplate":
        F = _relabel(F)
        if t not in (1, F.number_of_edges()):
            raise InvalidInstance(f"t must be 1 or e(F)={F.number_of_edges()}")
        return cls(
            graph=disjoint_copies(F, copies),
            mode=OracleMode.FACTOR,
            block=F.number_of_nodes(),
            t=t,
            name=name,
        )

    @classmethod
    def perfect_matching(cls, n: int) -> "TransversalTemplate":
        if n % 2:
            raise InvalidInstance("perfect matchings need an even vertex count")
        return cls.factor(nx.complete_graph(2), 1, n // 2, name="K2")

    @classmethod
    def patterned(
        cls, F: nx.Graph, patterns: Sequence[Sequence[int]], name: str = ""
    ) -> "TransversalTemplate":
        """Disjoint copies of F; copy i's j-th edge (lexicographic) gets patterns[i][j]."""
        F = _relabel(F)
        r = F.number_of_nodes()
        f_edges = sorted(_norm(u, v) for u, v in F.edges())
        colouring: dict[Edge, int] = {}
        for i, pattern in enumerate(patterns):
            if len(pattern) != len(f_edges):
                raise InvalidInstance(f"pattern {i} has {len(pattern)} colours, F has {len(f_edges)} edges")
            for (a, b), colour in zip(f_edges, pattern):
                colouring[(i * r + a, i * r + b)] = colour
        return cls(
            graph=disjoint_copies(F, len(patterns)),
            mode=OracleMode.PATTERNED,
            block=r,
            colouring=colouring,
            name=name,
        )

    @property
    def order(self) -> int:
        return self.graph.number_of_nodes()

    def edges(self) -> list[Edge]:
        return sorted(_norm(u, v) for u, v in self.graph.edges())


def _relabel(graph: nx.Graph) -> nx.Graph:
    nodes = sorted(graph.nodes())
    if nodes == list(range(len(nodes))):
        return graph
    return nx.convert_node_labels_to_integers(graph, ordering="sorted")


def disjoint_copies(F: nx.Graph, copies: int) -> nx.Graph:
    """``copies`` disjoint copies of F; copy i uses vertices i*r .. i*r+r-1."""
    r = F.number_of_nodes()
    H = nx.Graph()
    H.add_nodes_from(range(r * copies))
    for i in range(copies):
        H.add_edges_from((i * r + u, i * r + v) for u, v in F.edges())
    return H


class NodeBudget:
    """Shared node counter for nested searches."""

    def __init__(self, limit: int | None):
        self.limit = limit
        self.nodes = 0

    def spend(self) -> None:
        self.nodes += 1
        if self.limit is not None and self.nodes > self.limit:
            raise BudgetExhausted(f"search budget of {self.limit} nodes exhausted", nodes=self.nodes)


def _as_budget(budget: "int | NodeBudget | None") -> NodeBudget:
    return budget if isinstance(budget, NodeBudget) else NodeBudget(budget)


def _adjacency(G: "nx.Graph | Mapping[int, set[int]]") -> Mapping[int, set[int]]:
    if isinstance(G, nx.Graph):
        return {v: set(G.adj[v]) for v in G.nodes()}
    return G


def search_order(pattern: nx.Graph, first: Sequence[int] = ()) -> list[int]:
    """Most-constrained-first static order: next is the vertex with most placed neighbours."""
    order = list(first)
    placed = set(order)
    rest = set(pattern.nodes()) - placed
    while rest:
        best = min(
            rest,
            key=lambda u: (
                -sum(1 for w in pattern.adj[u] if w in placed),
                -pattern.degree(u),
                u,
            ),
        )
        order.append(best)
        placed.add(best)
        rest.discard(best)
    return order


def iter_subgraphs(
    G: "nx.Graph | Mapping[int, set[int]]",
    pattern: nx.Graph,
    pins: Mapping[int, int] | None = None,
    edge_filter: EdgeFilter | None = None,
    vertex_filter: VertexFilter | None = None,
    allowed: "set[int] | None" = None,
    budget: "int | NodeBudget | None" = None,
    lower_twins: Mapping[int, Sequence[int]] | None = None,
) -> Iterator[dict[int, int]]:
    """Enumerate injective homomorphisms of ``pattern`` into G extending ``pins``.

    Candidates are tried in increasing host-vertex order, pattern vertices in
    most-constrained-first order, so the enumeration is deterministic.

    Args:
        G: Host graph (or a prebuilt vertex -> neighbour-set mapping).
        pattern: Graph to embed (not necessarily induced).
        pins: Pattern vertex -> host vertex assignments to extend.
        edge_filter: ``edge_filter((a, b), (x, y))`` must hold for every
            pattern edge a < b mapped to host pair (x, y) = (image a, image b).
        vertex_filter: ``vertex_filter(u, x)`` must hold to map u to x.
        allowed: Host vertices that may be used (pins included).
        budget: Node limit or a shared NodeBudget.
        lower_twins: Host vertex -> interchangeable lower-index vertices; a
            vertex is only tried once all its lower twins are in use. Sound
            for existence questions, drops symmetric duplicates.

    Raises:
        BudgetExhausted: The node budget ran out.
    """
    adj = _adjacency(G)
    host = set(adj) if allowed is None else set(allowed) & set(adj)
    pins = dict(pins or {})
    counter = _as_budget(budget)

    if len(set(pins.values())) != len(pins) or any(x not in host for x in pins.values()):
        return
    for a, b in pattern.edges():
        if a in pins and b in pins:
            x, y = pins[a], pins[b]
            if y not in adj[x]:
                return
            if edge_filter is not None and not _edge_ok(edge_filter, a, b, x, y):
                return
    if vertex_filter is not None and any(not vertex_filter(u, x) for u, x in pins.items()):
        return

    order = search_order(pattern, sorted(pins))
    free_order = order[len(pins):]
    degree = dict(pattern.degree())
    mapping = dict(pins)
    used = set(pins.values())

    def candidates(u: int) -> Iterator[int]:
        placed = [w for w in pattern.adj[u] if w in mapping]
        if placed:
            anchor = min(placed, key=lambda w: len(adj[mapping[w]]))
            pool = set(adj[mapping[anchor]])
            for w in placed:
                if w != anchor:
                    pool &= adj[mapping[w]]
            pool &= host
        else:
            pool = set(host)
        for x in sorted(pool - used):
            if len(adj[x]) < degree[u]:
                continue
            if lower_twins is not None and any(
                z not in used and z in host for z in lower_twins.get(x, ())
            ):
                continue
            if vertex_filter is not None and not vertex_filter(u, x):
                continue
            if edge_filter is not None and not all(
                _edge_ok(edge_filter, w, u, mapping[w], x) for w in placed
            ):
                continue
            yield x

    if not free_order:
        yield dict(mapping)
        return
    # one candidate iterator per placed pattern vertex; the top one is free_order[len(stack) - 1]
    stack = [candidates(free_order[0])]
    while stack:
        u = free_order[len(stack) - 1]
        if u in mapping:
            used.discard(mapping.pop(u))
        x = next(stack[-1], None)
        if x is None:
            stack.pop()
            continue
        counter.spend()
        mapping[u] = x
        used.add(x)
        if len(stack) == len(free_order):
            yield dict(mapping)
        else:
            stack.append(candidates(free_order[len(stack)]))


def _edge_ok(edge_filter: EdgeFilter, a: int, b: int, x: int, y: int) -> bool:
    if a < b:
        return edge_filter((a, b), (x, y))
    return edge_filter((b, a), (y, x))


def find_subgraph(
    G: "nx.Graph | Mapping[int, set[int]]",
    pattern: nx.Graph,
    pins: Mapping[int, int] | None = None,
    budget: "int | NodeBudget | None" = None,
    edge_filter: EdgeFilter | None = None,
    vertex_filter: VertexFilter | None = None,
    allowed: "set[int] | None" = None,
) -> dict[int, int]:
    """First embedding found by iter_subgraphs.

    Raises:
        NotFound: The search space was exhausted without a match.
        BudgetExhausted: The node budget ran out first.
    """
    adj = _adjacency(G)
    if pattern.number_of_nodes() > len(adj):
        raise NotFound("pattern has more vertices than the host")
    for found in iter_subgraphs(
        adj, pattern, pins, edge_filter, vertex_filter, allowed, budget
    ):
        return found
    raise NotFound(f"no copy of a {pattern.number_of_nodes()}-vertex pattern")


def iter_factors(
    G: "nx.Graph | Mapping[int, set[int]]",
    F: nx.Graph,
    vertices: "set[int] | Sequence[int]",
    part_of: Mapping[int, int] | None = None,
    edge_filter: EdgeFilter | None = None,
    limit: int | None = None,
    budget: "int | NodeBudget | None" = None,
) -> Iterator[list[tuple[int, ...]]]:
    """Enumerate F-factors of G[vertices] as lists of copies.

    Each copy is a tuple whose j-th entry is the image of F-vertex j. Copies
    are listed by increasing minimum vertex and copies with the same image
    edge set are reported once.

    Args:
        part_of: If given, F-vertex j may only map to vertices x with
            ``part_of[x] == j`` (partite factors).
        edge_filter: As in iter_subgraphs.
        limit: Stop after this many factors.
    """
    F = _relabel(F)
    r = F.number_of_nodes()
    adj = _adjacency(G)
    counter = _as_budget(budget)
    vertex_filter = None if part_of is None else (lambda u, x: part_of.get(x) == u)
    pool = set(vertices)
    if r == 0 or len(pool) % r:
        return
    produced = 0
    chosen: list[tuple[int, ...]] = []

    def rec(remaining: set[int]) -> Iterator[list[tuple[int, ...]]]:
        if not remaining:
            yield list(chosen)
            return
        w = min(remaining)
        starts = range(r) if part_of is None else [part_of.get(w, -1)]
        seen: set[frozenset] = set()
        for s in starts:
            if not 0 <= s < r:
                continue
            for mapping in iter_subgraphs(
                adj, F, {s: w}, edge_filter, vertex_filter, remaining, counter
            ):
                key = frozenset(_norm(mapping[a], mapping[b]) for a, b in F.edges()) | {
                    frozenset(mapping.values())
                }
                if key in seen:
                    continue
                seen.add(key)
                copy = tuple(mapping[j] for j in range(r))
                chosen.append(copy)
                yield from rec(remaining - set(copy))
                chosen.pop()

    for factor in rec(pool):
        yield factor
        produced += 1
        if limit is not None and produced >= limit:
            return


def twin_classes(collection: GraphCollection) -> dict[int, list[int]]:
    """Vertex -> lower-index vertices with the same neighbourhood in every colour.

    Twins x, y satisfy N_i(x) - {y} == N_i(y) - {x} for all colours i, so
    swapping them is an automorphism of the whole collection.
    """
    n = collection.n
    signature = {}
    for x in range(n):
        signature[x] = [collection.edge_mask(x, z) if z != x else 0 for z in range(n)]
    lower: dict[int, list[int]] = {}
    for y in range(n):
        for x in range(y):
            sx, sy = signature[x], signature[y]
            if all(sx[z] == sy[z] for z in range(n) if z not in (x, y)):
                lower.setdefault(y, []).append(x)
    return lower


class _ColourMatching:
    """Incremental matching of units (edges or copies) to distinct colours."""

    def __init__(self) -> None:
        self.masks: list[int] = []
        self.colour_of: list[int] = []
        self.owner: dict[int, int] = {}
        self._stack: list[tuple[list[int], dict[int, int]]] = []

    def push(self, mask: int) -> bool:
        """Add a unit; True iff all units still have distinct colours (Hall holds)."""
        self._stack.append((list(self.colour_of), dict(self.owner)))
        self.masks.append(mask)
        self.colour_of.append(-1)
        return self._augment(len(self.masks) - 1, set())

    def pop(self) -> None:
        self.masks.pop()
        self.colour_of, self.owner = self._stack.pop()

    def _augment(self, unit: int, seen: set[int]) -> bool:
        for colour in bits(self.masks[unit]):
            if colour in seen:
                continue
            seen.add(colour)
            other = self.owner.get(colour)
            if other is None or self._augment(other, seen):
                self.owner[colour] = unit
                self.colour_of[unit] = colour
                return True
        return False


def _union_adjacency(collection: GraphCollection) -> dict[int, set[int]]:
    return {v: set(collection.union_adjacency(v)) for v in range(collection.n)}


def exists_transversal_exact(
    collection: GraphCollection,
    template: TransversalTemplate,
    budget: int | None = DEFAULT_BUDGET,
) -> Decision:
    """Decide exhaustively whether the collection has a transversal copy of the template.

    Rainbow mode places template vertices one at a time; after each placement
    the new edges join an incremental colour matching and the branch is cut
    as soon as Hall's condition fails. Factor mode places whole copies of F,
    each containing the smallest uncovered vertex (copies ordered by minimum
    vertex). Patterned mode is a pinned-colour subgraph search. Vertices that
    are twins in every colour are tried lowest-first only.

    Args:
        collection: The graph collection.
        template: What to look for.
        budget: Node budget (None for unlimited).

    Returns:
        Decision: ``yes`` with a witness, ``no`` (exhaustive), or
        ``budget_exhausted``.
    """
    if template.order > collection.n:
        return Decision(outcome=Outcome.NO)
    counter = NodeBudget(budget)
    try:
        if template.mode == OracleMode.PATTERNED:
            witness = _decide_patterned(collection, template, counter)
        elif template.mode == OracleMode.FACTOR:
            witness = _decide_factor(collection, template, counter)
        else:
            witness = _decide_rainbow(collection, template, counter)
    except BudgetExhausted:
        logger.info("exact search gave up after %d nodes", counter.nodes)
        return Decision(outcome=Outcome.BUDGET_EXHAUSTED, nodes=counter.nodes)
    if witness is None:
        return Decision(outcome=Outcome.NO, nodes=counter.nodes)
    return Decision(outcome=Outcome.YES, witness=witness, nodes=counter.nodes)


def _decide_rainbow(
    collection: GraphCollection, template: TransversalTemplate, counter: NodeBudget
) -> RainbowEmbedding | None:
    H = template.graph
    if H.number_of_edges() > collection.m:
        return None
    adj = _union_adjacency(collection)
    twins = twin_classes(collection)
    order = search_order(H)
    position = {u: i for i, u in enumerate(order)}
    back_edges = {u: [w for w in H.adj[u] if position[w] < position[u]] for u in order}
    matching = _ColourMatching()
    units: list[Edge] = []
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def rec(idx: int) -> bool:
        if idx == len(order):
            return True
        u = order[idx]
        placed = back_edges[u]
        if placed:
            candidates = set(adj[mapping[placed[0]]])
            for w in placed[1:]:
                candidates &= adj[mapping[w]]
        else:
            candidates = set(range(collection.n))
        for x in sorted(candidates - used):
            if any(z not in used for z in twins.get(x, ())):
                continue
            counter.spend()
            pushed = 0
            ok = True
            for w in placed:
                matching_ok = matching.push(collection.edge_mask(mapping[w], x))
                pushed += 1
                units.append(_norm(w, u))
                if not matching_ok:
                    ok = False
                    break
            if ok:
                mapping[u] = x
                used.add(x)
                if rec(idx + 1):
                    return True
                del mapping[u]
                used.discard(x)
            for _ in range(pushed):
                matching.pop()
                units.pop()
        return False

    if not rec(0):
        return None
    return RainbowEmbedding(
        vertex_map=mapping,
        colour_map=[
            ColouredEdge(u=a, v=b, colour=matching.colour_of[i]) for i, (a, b) in enumerate(units)
        ],
    )


def _decide_factor(
    collection: GraphCollection, template: TransversalTemplate, counter: NodeBudget
) -> RainbowEmbedding | None:
    r = template.block
    copies = template.order // r
    if template.order != collection.n:
        raise InvalidInstance("factor mode needs a spanning template (r * copies == n)")
    F = template.graph.subgraph(range(r)).copy()
    f_edges = sorted(_norm(a, b) for a, b in F.edges())
    rainbow_copies = template.t == len(f_edges) and template.t != 1
    if len(f_edges) * copies and template.t * copies > collection.m:
        return None
    adj = _union_adjacency(collection)
    twins = twin_classes(collection)
    matching = _ColourMatching()
    chosen: list[tuple[int, ...]] = []

    def rec(remaining: set[int]) -> bool:
        if not remaining:
            return True
        w = min(remaining)
        seen: set[frozenset] = set()
        for s in range(r):
            for mapping in iter_subgraphs(
                adj, F, {s: w}, allowed=remaining, budget=counter, lower_twins=twins
            ):
                image = [collection.edge_mask(mapping[a], mapping[b]) for a, b in f_edges]
                key = frozenset(_norm(mapping[a], mapping[b]) for a, b in f_edges) | {
                    frozenset(mapping.values())
                }
                if key in seen:
                    continue
                seen.add(key)
                if rainbow_copies:
                    masks = image
                else:
                    common = (1 << collection.m) - 1
                    for mask in image:
                        common &= mask
                    masks = [common]
                pushed, ok = 0, True
                for mask in masks:
                    pushed += 1
                    if not matching.push(mask):
                        ok = False
                        break
                if ok:
                    copy = tuple(mapping[j] for j in range(r))
                    chosen.append(copy)
                    if rec(remaining - set(copy)):
                        return True
                    chosen.pop()
                for _ in range(pushed):
                    matching.pop()
        return False

    if not rec(set(range(collection.n))):
        return None
    vertex_map: dict[int, int] = {}
    colour_map: list[ColouredEdge] = []
    unit = 0
    for i, copy in enumerate(chosen):
        for j, x in enumerate(copy):
            vertex_map[i * r + j] = x
        for a, b in f_edges:
            colour_map.append(
                ColouredEdge(u=i * r + a, v=i * r + b, colour=matching.colour_of[unit])
            )
            if rainbow_copies:
                unit += 1
        if not rainbow_copies:
            unit += 1
    return RainbowEmbedding(vertex_map=vertex_map, colour_map=colour_map)


def _decide_patterned(
    collection: GraphCollection, template: TransversalTemplate, counter: NodeBudget
) -> RainbowEmbedding | None:
    colouring = template.colouring or {}
    if any(not 0 <= c < collection.m for c in colouring.values()):
        raise InvalidInstance("pattern colour outside the collection")

    def prescribed(edge: Edge, host: Edge) -> bool:
        return collection.has_edge(colouring[edge], *host)

    adj = _union_adjacency(collection)
    for mapping in iter_subgraphs(
        adj,
        template.graph,
        edge_filter=prescribed,
        budget=counter,
        lower_twins=twin_classes(collection),
    ):
        return RainbowEmbedding(
            vertex_map=mapping,
            colour_map=[ColouredEdge(u=a, v=b, colour=colouring[(a, b)]) for a, b in template.edges()],
        )
    return None


def verify_transversal(
    collection: GraphCollection,
    embedding: RainbowEmbedding,
    template: TransversalTemplate,
) -> VerificationReport:
    """Check an embedding against the template rule by rule.

    Order of checks: vertex coverage and range, injectivity, edge coverage,
    colour range and membership, then the mode rule (rainbow colours;
    exactly ``t`` colours per copy and disjoint colour sets; prescribed
    colours). The first failure is returned with its coordinates.
    """
    H = template.graph
    vmap = embedding.vertex_map
    for u in sorted(H.nodes()):
        if u not in vmap:
            return VerificationReport.failed("vertex_coverage", f"template vertex {u} unmapped", vertex=u)
    images: dict[int, int] = {}
    for u, x in vmap.items():
        if u not in H:
            return VerificationReport.failed("vertex_coverage", f"{u} is not a template vertex", vertex=u)
        if not 0 <= x < collection.n:
            return VerificationReport.failed("vertex_range", f"image {x} of {u} out of range", vertex=u)
        if x in images:
            return VerificationReport.failed(
                "vertex_injective", f"vertices {images[x]} and {u} both map to {x}", vertex=x
            )
        images[x] = u

    colour_of: dict[Edge, int] = {}
    for ce in embedding.colour_map:
        if not H.has_edge(ce.u, ce.v):
            return VerificationReport.failed("extra_edge", f"{ce.key} is not a template edge", edge=ce.key)
        if ce.key in colour_of:
            return VerificationReport.failed("edge_coverage", f"{ce.key} coloured twice", edge=ce.key)
        colour_of[ce.key] = ce.colour
    for edge in template.edges():
        if edge not in colour_of:
            return VerificationReport.failed("edge_coverage", f"template edge {edge} uncoloured", edge=edge)
        colour = colour_of[edge]
        if not 0 <= colour < collection.m:
            return VerificationReport.failed(
                "colour_range", f"colour {colour} out of range", edge=edge, colour=colour
            )
        x, y = vmap[edge[0]], vmap[edge[1]]
        if not collection.has_edge(colour, x, y):
            return VerificationReport.failed(
                "colour_membership",
                f"image ({x}, {y}) of {edge} is not an edge of colour {colour}",
                edge=edge,
                colour=colour,
            )

    if template.mode == OracleMode.RAINBOW:
        owner: dict[int, Edge] = {}
        for edge in template.edges():
            colour = colour_of[edge]
            if colour in owner:
                return VerificationReport.failed(
                    "rainbow", f"colour {colour} on {owner[colour]} and {edge}", edge=edge, colour=colour
                )
            owner[colour] = edge
    elif template.mode == OracleMode.FACTOR:
        r = template.block
        copy_colours: dict[int, set[int]] = {}
        for (a, b), colour in colour_of.items():
            copy_colours.setdefault(a // r, set()).add(colour)
        owner_copy: dict[int, int] = {}
        for i in sorted(copy_colours):
            found = copy_colours[i]
            if len(found) != template.t:
                return VerificationReport.failed(
                    "copy_colour_count",
                    f"copy {i} uses {len(found)} colours, expected {template.t}",
                    copy_index=i,
                )
            for colour in sorted(found):
                if colour in owner_copy:
                    return VerificationReport.failed(
                        "copy_colour_overlap",
                        f"colour {colour} used by copies {owner_copy[colour]} and {i}",
                        colour=colour,
                        copy_index=i,
                    )
                owner_copy[colour] = i
    else:
        colouring = template.colouring or {}
        for edge in template.edges():
            if colour_of[edge] != colouring.get(edge):
                return VerificationReport.failed(
                    "pattern",
                    f"edge {edge} has colour {colour_of[edge]}, prescribed {colouring.get(edge)}",
                    edge=edge,
                    colour=colour_of[edge],
                    copy_index=edge[0] // template.block if template.block else None,
                )
    return VerificationReport.passed()
