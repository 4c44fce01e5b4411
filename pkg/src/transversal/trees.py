"""Rainbow spanning trees.

Splitting utilities (split_tree, decompose_tree, split_four), a rooted
backtracking tree embedder, three rainbow embedders of increasing
delicacy (many spare colours, few spare colours, exactly the right colours)
and the five-step spanning tree pipeline built from them:

1. embed a small piece T1 as a colour absorber (fixed colours A, reservoir C)
2. embed the bulk T2 with the colours outside A and C, keeping a few spare
3. embed T3 using exactly the colours left outside A and C
4. embed T4 with colours from C
5. hand the unused colours of C to the absorber to colour T1

Trees are networkx graphs on {0..|T|-1}.
"""

import logging
import math
import random
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass

import networkx as nx
from networkx.algorithms.bipartite import hopcroft_karp_matching

from transversal.absorber import build_colour_absorber
from transversal.core import GraphCollection, threshold_graph
from transversal.errors import (
    EmbedFailed,
    HypothesisViolated,
    InvalidInstance,
    InvariantViolation,
    NotFound,
    PipelineStageError,
    RetriesExhausted,
    TransversalError,
)
from transversal.models import ColouredEdge, PipelineConfig, RainbowEmbedding
from transversal.oracle import NodeBudget, TransversalTemplate, exists_transversal_exact, verify_transversal
from transversal.partition import split_preserving_degrees

logger = logging.getLogger(__name__)


def check_tree(T: nx.Graph) -> None:
    """Raise InvalidInstance unless T is a tree on {0..|T|-1}."""
    n = T.number_of_nodes()
    if n == 0:
        raise InvalidInstance("empty tree")
    if sorted(T.nodes()) != list(range(n)):
        raise InvalidInstance("tree vertices must be 0..|T|-1")
    if not nx.is_tree(T):
        raise InvalidInstance("not a tree")


def random_tree(n: int, max_degree: int | None = None, seed: int = 0) -> nx.Graph:
    """Reproducible random tree on {0..n-1} with maximum degree at most ``max_degree``.

    Built from a Prüfer sequence in which no label appears more than
    ``max_degree - 1`` times.
    """
    if n < 1:
        raise InvalidInstance("trees need at least one vertex")
    if n == 1:
        T = nx.Graph()
        T.add_node(0)
        return T
    if n == 2:
        return nx.path_graph(2)
    cap = n - 1 if max_degree is None else max_degree - 1
    if cap < 1:
        raise InvalidInstance(f"no tree on {n} vertices has maximum degree {max_degree}")
    rng = random.Random(seed)
    counts = [0] * n
    sequence = []
    for _ in range(n - 2):
        label = rng.choice([x for x in range(n) if counts[x] < cap])
        counts[label] += 1
        sequence.append(label)
    return nx.from_prufer_sequence(sequence)


def all_trees(n: int) -> list[nx.Graph]:
    """Every tree on n vertices up to isomorphism."""
    if n == 1:
        return [random_tree(1)]
    return [nx.convert_node_labels_to_integers(T) for T in nx.nonisomorphic_trees(n)]


def _rooted(T: nx.Graph, root: int) -> tuple[dict[int, int | None], dict[int, list[int]], dict[int, int]]:
    """Parents, children (ascending) and subtree sizes of T rooted at ``root``."""
    parent: dict[int, int | None] = {root: None}
    order = [root]
    for u in order:
        for w in sorted(T.adj[u]):
            if w not in parent:
                parent[w] = u
                order.append(w)
    children: dict[int, list[int]] = {u: [] for u in order}
    for u in order[1:]:
        children[parent[u]].append(u)
    size = {u: 1 for u in order}
    for u in reversed(order[1:]):
        size[parent[u]] += size[u]
    return parent, children, size


def _descendants(children: Mapping[int, list[int]], u: int) -> set[int]:
    out = {u}
    stack = [u]
    while stack:
        for w in children[stack.pop()]:
            out.add(w)
            stack.append(w)
    return out


def split_tree(T: nx.Graph, t: int, m: int) -> tuple[nx.Graph, nx.Graph]:
    """Split T into edge-disjoint subtrees T1 (containing t) and T2 with m <= |T2| <= 3m.

    T2 is a vertex x together with some of the subtrees hanging below it
    (rooting T at t), where x is a deepest vertex whose subtree reaches the
    target size; T1 is the rest plus x, which the two pieces share.

    Raises:
        InvalidInstance: m is outside 1..|T|/3 or t is not a vertex of T.
    """
    n = T.number_of_nodes()
    if t not in T:
        raise InvalidInstance(f"{t} is not a vertex of the tree")
    if not 1 <= m <= n / 3:
        raise InvalidInstance(f"m={m} outside 1..{n}/3")
    target = max(m, 2)
    parent, children, size = _rooted(T, t)
    x = t
    while True:
        big = [w for w in children[x] if size[w] >= target]
        if not big:
            break
        x = big[0]
    taken: set[int] = {x}
    count = 0
    for w in children[x]:
        if count >= target - 1:
            break
        taken |= _descendants(children, w)
        count += size[w]
    rest = (set(T.nodes()) - taken) | {x}
    return T.subgraph(rest).copy(), T.subgraph(taken).copy()


def decompose_tree(T: nx.Graph, m: int, root: int | None = None) -> list[nx.Graph]:
    """Edge-disjoint subtrees covering E(T), each with m <= |T_i| <= 4m.

    The first piece contains ``root`` (default: smallest vertex) and every
    prefix of the list is a connected tree.
    """
    n = T.number_of_nodes()
    if not 1 <= m <= n:
        raise InvalidInstance(f"m={m} outside 1..{n}")
    root = min(T.nodes()) if root is None else root
    current = T
    peeled: list[nx.Graph] = []
    while current.number_of_nodes() > 4 * m:
        current, piece = split_tree(current, root, m)
        peeled.append(piece)
    return [current, *reversed(peeled)]


@dataclass(frozen=True)
class TreeSplit:
    """Four edge-disjoint pieces and the vertex each shares with the earlier ones.

    ``joints[0]`` joins T1 and T2, ``joints[1]`` joins T3 to T1+T2 and
    ``joints[2]`` joins T4 to T1+T2+T3.
    """

    pieces: tuple[nx.Graph, nx.Graph, nx.Graph, nx.Graph]
    joints: tuple[int, int, int]


def _shared(piece: nx.Graph, union: Iterable[int]) -> int:
    common = set(piece.nodes()) & set(union)
    if len(common) != 1:
        raise InvariantViolation(f"piece meets the rest in {len(common)} vertices")
    return next(iter(common))


def split_four(T: nx.Graph, m1: int, m3: int, m4: int, root: int | None = None) -> TreeSplit:
    """Split T into T1..T4 with m_i <= |T_i| <= 3m_i for i in {1, 3, 4}.

    T1+T2 and T1+T2+T3 are connected trees. T4 and T3 are peeled off first,
    then T1 is cut from what remains and T2 is the rest.
    """
    n = T.number_of_nodes()
    if not all(1 <= size <= n / 10 for size in (m1, m3, m4)):
        raise InvalidInstance(f"part sizes {(m1, m3, m4)} outside 1..{n}/10")
    root = min(T.nodes()) if root is None else root
    rest, T4 = split_tree(T, root, m4)
    rest, T3 = split_tree(rest, root, m3)
    T2, T1 = split_tree(rest, root, m1)
    j2 = _shared(T1, T2.nodes())
    j3 = _shared(T3, set(T1.nodes()) | set(T2.nodes()))
    j4 = _shared(T4, set(T1.nodes()) | set(T2.nodes()) | set(T3.nodes()))
    return TreeSplit(pieces=(T1, T2, T3, T4), joints=(j2, j3, j4))


def embed_tree_rooted(
    G: nx.Graph,
    T: nx.Graph,
    t: int,
    v: int,
    budget: int | None = None,
    rng: random.Random | None = None,
) -> dict[int, int]:
    """Injective homomorphism of T into G with t mapped to v.

    Backtracking over a depth-first order of T rooted at t, children with the
    largest subtrees first. A vertex with children goes to the free
    neighbour with most free neighbours, a leaf to the one with fewest; a
    candidate needs at least as many free neighbours as the vertex has
    children. ``rng`` randomizes ties.

    Raises:
        NotFound: No embedding exists (BudgetExhausted if the budget ran out).
    """
    if T.number_of_nodes() > G.number_of_nodes():
        raise NotFound("tree is larger than the host")
    if v not in G:
        raise InvalidInstance(f"{v} is not a host vertex")
    parent, children, size = _rooted(T, t)
    for u in children:
        children[u].sort(key=lambda w: (-size[w], w))
    order: list[int] = []
    stack = [t]
    while stack:
        u = stack.pop()
        order.append(u)
        stack.extend(reversed(children[u]))
    if len(children[t]) > G.degree(v):
        raise NotFound(f"root image {v} has too few neighbours")

    adj = {x: set(G.adj[x]) for x in G.nodes()}
    counter = NodeBudget(budget)
    mapping = {t: v}
    used = {v}

    def free_degree(x: int) -> int:
        return sum(1 for y in adj[x] if y not in used)

    def candidates(u: int) -> Iterator[int]:
        need = len(children[u])
        ranked = []
        for x in adj[mapping[parent[u]]]:
            if x in used:
                continue
            free = free_degree(x)
            if free < need:
                continue
            tie = rng.random() if rng is not None else x
            ranked.append(((-free if need else free), tie, x))
        ranked.sort()
        return iter([x for _, _, x in ranked])

    # stack[i] holds the untried images of order[i + 1]
    stack = [candidates(order[1])] if len(order) > 1 else []
    while stack:
        u = order[len(stack)]
        if u in mapping:
            used.discard(mapping.pop(u))
        x = next(stack[-1], None)
        if x is None:
            stack.pop()
            continue
        counter.spend()
        mapping[u] = x
        used.add(x)
        if len(stack) + 1 == len(order):
            return mapping
        stack.append(candidates(order[len(stack) + 1]))

    if len(order) > 1:
        raise NotFound(f"no copy of the {T.number_of_nodes()}-vertex tree with {t} at {v}")
    return mapping


def _assign_colours(
    collection: GraphCollection, host_edges: list[tuple[int, int]], allowed: Iterable[int]
) -> list[int] | None:
    """Distinct colours for the host edges, lowest first; None if Hall's condition fails."""
    allowed = sorted(set(allowed))
    used: set[int] = set()
    greedy: list[int] = []
    for x, y in host_edges:
        choice = next((c for c in collection.colours_containing(x, y, allowed) if c not in used), None)
        if choice is None:
            break
        used.add(choice)
        greedy.append(choice)
    else:
        return greedy

    B = nx.Graph()
    tops = [("edge", i) for i in range(len(host_edges))]
    B.add_nodes_from(tops)
    for i, (x, y) in enumerate(host_edges):
        B.add_edges_from((("edge", i), ("colour", c)) for c in collection.colours_containing(x, y, allowed))
    matching = hopcroft_karp_matching(B, top_nodes=tops)
    if any(top not in matching for top in tops):
        return None
    return [matching[top][1] for top in tops]


def _coloured(
    collection: GraphCollection,
    T: nx.Graph,
    mapping: Mapping[int, int],
    allowed: Iterable[int],
) -> RainbowEmbedding | None:
    edges = sorted((min(a, b), max(a, b)) for a, b in T.edges())
    colours = _assign_colours(collection, [(mapping[a], mapping[b]) for a, b in edges], allowed)
    if colours is None:
        return None
    return RainbowEmbedding(
        vertex_map=dict(mapping),
        colour_map=[ColouredEdge(u=a, v=b, colour=c) for (a, b), c in zip(edges, colours)],
    )


def embed_tree_rainbow_surplus(
    collection: GraphCollection,
    T: nx.Graph,
    t: int,
    v: int,
    config: PipelineConfig,
    min_count: int | None = None,
    allowed_colours: Iterable[int] | None = None,
    vertices: Iterable[int] | None = None,
    rng: random.Random | None = None,
) -> RainbowEmbedding:
    """Rainbow copy of T with t at v when colours are plentiful.

    T is embedded in the graph of edges lying in at least ``min_count``
    allowed colours (default e(T)) and each edge then takes a distinct
    colour containing it. With min_count >= e(T) the colouring cannot fail.

    Raises:
        EmbedFailed: No embedding, or (for min_count < e(T)) no colouring.
    """
    allowed = sorted(range(collection.m) if allowed_colours is None else set(allowed_colours))
    e = T.number_of_edges()
    if e == 0:
        return RainbowEmbedding(vertex_map={t: v})
    if len(allowed) < e:
        raise InvalidInstance(f"{len(allowed)} colours cannot colour {e} edges")
    if len(allowed) < config.C * T.number_of_nodes():
        logger.debug("surplus embedding with only %d colours for %d vertices", len(allowed), T.number_of_nodes())
    count = e if min_count is None else min_count
    G = threshold_graph(collection, min(count, len(allowed)), allowed, vertices)
    try:
        mapping = embed_tree_rooted(G, T, t, v, budget=config.embed_budget, rng=rng)
    except NotFound as exc:
        raise EmbedFailed(f"tree does not fit in the {count}-colour threshold graph: {exc}") from exc
    embedding = _coloured(collection, T, mapping, allowed)
    if embedding is None:
        raise EmbedFailed("embedded tree has no rainbow colouring from the allowed colours")
    return embedding


def _embed_block(
    collection: GraphCollection,
    piece: nx.Graph,
    joint: int,
    image: int,
    free: list[int],
    vertices: set[int],
    config: PipelineConfig,
    rng: random.Random,
) -> RainbowEmbedding:
    """Surplus embedding of one block, relaxing the colour threshold until it fits."""
    e = piece.number_of_edges()
    ladder = sorted({max(1, min(e, len(free))), max(1, 2 * e // 3), max(1, e // 3), 1}, reverse=True)
    last: Exception | None = None
    for count in ladder:
        for attempt in range(3):
            try:
                return embed_tree_rainbow_surplus(
                    collection,
                    piece,
                    joint,
                    image,
                    config,
                    min_count=count,
                    allowed_colours=free,
                    vertices=vertices,
                    rng=rng if attempt else None,
                )
            except EmbedFailed as exc:
                last = exc
                if isinstance(exc.__cause__, NotFound):
                    break
    raise EmbedFailed(f"block with {e} edges could not be embedded: {last}")


def _merge(*embeddings: RainbowEmbedding) -> RainbowEmbedding:
    vertex_map: dict[int, int] = {}
    colour_map: list[ColouredEdge] = []
    for emb in embeddings:
        vertex_map.update(emb.vertex_map)
        colour_map.extend(emb.colour_map)
    return RainbowEmbedding(vertex_map=vertex_map, colour_map=colour_map)


def embed_tree_rainbow_few_surplus(
    collection: GraphCollection,
    T: nx.Graph,
    t: int,
    v: int,
    config: PipelineConfig,
    allowed_colours: Iterable[int] | None = None,
    vertices: Iterable[int] | None = None,
    salt: int = 0,
) -> RainbowEmbedding:
    """Rainbow copy of T with t at v when only about eps*e(T) colours are spare.

    T is cut into blocks of about mu*|vertices| vertices, the vertices other
    than v are split at random into one part per block (keeping relative
    degrees), and blocks are embedded in order, each into its part plus the
    already placed vertex it shares, using colours no earlier block took.

    Raises:
        EmbedFailed: A block could not be embedded; ``block`` is its index.
    """
    allowed = sorted(range(collection.m) if allowed_colours is None else set(allowed_colours))
    pool = sorted(range(collection.n) if vertices is None else set(vertices))
    if v not in pool:
        raise InvalidInstance(f"{v} is not among the available vertices")
    if T.number_of_nodes() > len(pool):
        raise InvalidInstance("tree is larger than the vertex pool")
    e = T.number_of_edges()
    if e == 0:
        return RainbowEmbedding(vertex_map={t: v})
    if len(allowed) < e:
        raise InvalidInstance(f"{len(allowed)} colours cannot colour {e} edges")
    if len(allowed) < (1 + config.eps) * e:
        logger.info("few-surplus embedding with %d colours for %d edges", len(allowed), e)

    block = max(1, min(T.number_of_nodes(), round(config.mu * len(pool))))
    pieces = decompose_tree(T, block, root=t)
    ground = [x for x in pool if x != v]
    sizes = [piece.number_of_nodes() - 1 for piece in pieces]
    spare = len(ground) - sum(sizes)
    if spare:
        sizes.append(spare)
    try:
        plan = split_preserving_degrees(collection, ground, sizes, config.slack, config, salt)
        parts = plan.parts
    except RetriesExhausted as exc:
        logger.info("using best vertex split after %d attempts", exc.attempts)
        parts = exc.best
    rng = config.make_rng(salt + 1)

    placed = RainbowEmbedding(vertex_map={t: v})
    used: set[int] = set()
    for i, piece in enumerate(pieces):
        joint = t if i == 0 else _shared(piece, placed.vertex_map)
        image = placed.vertex_map[joint]
        free = [c for c in allowed if c not in used]
        try:
            part = _embed_block(
                collection, piece, joint, image, free, set(parts[i]) | {image}, config, rng
            )
        except EmbedFailed as exc:
            raise EmbedFailed(f"block {i}: {exc}", block=i) from exc
        used.update(part.colours())
        placed = _merge(placed, part)
        logger.debug("block %d embedded (%d edges)", i, piece.number_of_edges())
    return placed


def _leaf_order(T: nx.Graph, t: int) -> list[int]:
    """t, then the other vertices so every prefix induces a tree (reverse leaf removal)."""
    remaining = nx.Graph(T)
    removed: list[int] = []
    while remaining.number_of_nodes() > 1:
        leaf = min(u for u in remaining.nodes() if u != t and remaining.degree(u) <= 1)
        removed.append(leaf)
        remaining.remove_node(leaf)
    return [t, *reversed(removed)]


def greedy_colour_cover_tree(
    collection: GraphCollection,
    T: nx.Graph,
    t: int,
    v: int,
    colours: Iterable[int] | None = None,
    vertices: Iterable[int] | None = None,
) -> RainbowEmbedding:
    """Rainbow copy of T with t at v using every given colour exactly once.

    Requires e(T) colours whose graphs restricted to ``vertices`` all have
    minimum degree at least e(T). Vertices t_1..t_m are taken in reverse
    leaf-removal order and t_i goes to the lowest unused vertex joined to
    its parent's image in the i-th colour. Under the hypothesis this never
    gets stuck.

    Raises:
        HypothesisViolated: A pick failed, naming the colour and the parent
            image whose degree was too small.
    """
    colours = sorted(range(collection.m) if colours is None else set(colours))
    pool = set(range(collection.n) if vertices is None else vertices)
    m = T.number_of_edges()
    if len(colours) != m:
        raise InvalidInstance(f"need exactly e(T)={m} colours, got {len(colours)}")
    if m > len(pool) - 1:
        raise InvalidInstance("tree has more vertices than the pool")
    if v not in pool:
        raise InvalidInstance(f"{v} is not among the available vertices")

    order = _leaf_order(T, t)
    position = {u: i for i, u in enumerate(order)}
    mapping = {t: v}
    used = {v}
    colour_map = []
    for i, u in enumerate(order[1:]):
        colour = colours[i]
        parent = next(w for w in T.adj[u] if position[w] < position[u])
        x = mapping[parent]
        options = [y for y in collection[colour].adj[x] if y in pool and y not in used]
        if not options:
            degree = collection.degree_into(colour, x, pool)
            raise HypothesisViolated(
                f"vertex {x} has degree {degree} < {m} in colour {colour}",
                colour=colour,
                vertex=x,
            )
        y = min(options)
        mapping[u] = y
        used.add(y)
        colour_map.append(ColouredEdge(u=parent, v=u, colour=colour))
    return RainbowEmbedding(vertex_map=mapping, colour_map=colour_map)


def _partial(*parts: RainbowEmbedding | None) -> dict:
    present = [p for p in parts if p is not None]
    merged = _merge(*present) if present else RainbowEmbedding()
    return {
        "embedded_vertices": len(merged.vertex_map),
        "coloured_edges": len(merged.colour_map),
        "used_colours": sorted(merged.colours()),
    }


def rainbow_spanning_tree(
    collection: GraphCollection, T: nx.Graph, config: PipelineConfig
) -> RainbowEmbedding:
    """Rainbow copy of the spanning tree T using each of the n-1 colours once.

    Small instances (below ``min_pipeline_vertices``, or too small for the
    piece sizes) are decided by the exact oracle instead.

    Raises:
        PipelineStageError: Names the failing stage (absorber, split, bulk,
            cover, tail, absorb, direct) with a dump of the partial state.
    """
    check_tree(T)
    n, m = collection.n, collection.m
    if T.number_of_nodes() != n:
        raise InvalidInstance(f"tree has {T.number_of_nodes()} vertices, collection {n}")
    if m != n - 1:
        raise InvalidInstance(f"need n-1={n - 1} colours, got {m}")
    template = TransversalTemplate.rainbow(T)
    if n == 1:
        return RainbowEmbedding(vertex_map={0: 0})

    # the absorber core needs 2*ell slots, so T1 needs 2*ell + 1 edges
    ell = min(max(1, round(config.gamma * n)), (math.floor(n / 10) - 2) // 2)
    m1 = max(round(config.beta * n), 2 * ell + 2)
    m3 = max(1, round(config.gamma * n))
    m4 = max(1, round(config.beta * n))
    if n < config.min_pipeline_vertices or ell < 1 or max(m1, m3, m4) > n / 10:
        return _direct_tree(collection, template, config)

    split = split_four(T, m1, m3, m4)
    T1, T2, T3, T4 = split.pieces
    j2, j3, j4 = split.joints
    logger.info(
        "tree pieces: %d/%d/%d/%d vertices, absorbing %d colours",
        *(p.number_of_nodes() for p in split.pieces), ell,
    )
    ell = min(ell, T1.number_of_edges())

    try:
        absorber = build_colour_absorber(collection, T1, ell, config, salt=1)
        needed = T4.number_of_edges() + ell
        if len(absorber.reservoir) < needed:
            raise RetriesExhausted(
                f"reservoir has {len(absorber.reservoir)} colours, need {needed}",
                details={"reservoir": len(absorber.reservoir)},
            )
        rng = config.make_rng(2)
        C = set(rng.sample(sorted(absorber.reservoir), needed))
    except TransversalError as exc:
        raise PipelineStageError("absorber", exc, _partial()) from exc
    A = set(absorber.fixed)
    V1 = set(absorber.vertex_map.values())
    v1 = absorber.vertex_map[j2]

    try:
        rest = [x for x in range(n) if x not in V1]
        sizes = [T2.number_of_nodes() - 1, T3.number_of_nodes() + T4.number_of_nodes() - 2]
        try:
            parts = split_preserving_degrees(collection, rest, sizes, config.slack, config, salt=3).parts
        except RetriesExhausted as exc:
            if exc.best is None:
                raise
            logger.info("using best bulk/tail split after %d attempts", exc.attempts)
            parts = exc.best
        V2, V3 = set(parts[0]), set(parts[1])
    except TransversalError as exc:
        raise PipelineStageError("split", exc, _partial()) from exc

    outside = [c for c in range(m) if c not in A and c not in C]
    try:
        S2 = embed_tree_rainbow_few_surplus(
            collection, T2, j2, v1, config, allowed_colours=outside, vertices=V2 | {v1}, salt=4
        )
    except TransversalError as exc:
        raise PipelineStageError("bulk", exc, _partial()) from exc

    placed = {**absorber.vertex_map, **S2.vertex_map}
    B = [c for c in outside if c not in set(S2.colours())]
    try:
        v2 = placed[j3]
        S3 = greedy_colour_cover_tree(collection, T3, j3, v2, colours=B, vertices=V3 | {v2})
    except TransversalError as exc:
        raise PipelineStageError("cover", exc, _partial(S2)) from exc

    placed.update(S3.vertex_map)
    V4 = V3 - set(S3.vertex_map.values())
    try:
        v3 = placed[j4]
        S4 = embed_tree_rainbow_few_surplus(
            collection, T4, j4, v3, config, allowed_colours=C, vertices=V4 | {v3}, salt=5
        )
    except TransversalError as exc:
        raise PipelineStageError("tail", exc, _partial(S2, S3)) from exc

    leftover = C - set(S4.colours())
    try:
        S1 = absorber.colour(leftover, debug=config.debug)
    except TransversalError as exc:
        raise PipelineStageError("absorb", exc, _partial(S2, S3, S4)) from exc

    embedding = _merge(S1, S2, S3, S4)
    report = verify_transversal(collection, embedding, template)
    if not report or len(set(embedding.colours())) != m:
        message = report.violation.message if report.violation else "colours missing"
        raise InvariantViolation(f"assembled spanning tree fails verification: {message}")
    return embedding


def _direct_tree(
    collection: GraphCollection, template: TransversalTemplate, config: PipelineConfig
) -> RainbowEmbedding:
    logger.info("instance too small for the pipeline; using exact search")
    decision = exists_transversal_exact(collection, template, budget=config.search_budget)
    if decision.witness is None:
        raise PipelineStageError(
            "direct",
            NotFound(f"exact search answered {decision.outcome.value} after {decision.nodes} nodes"),
            {"nodes": decision.nodes},
        )
    return decision.witness

