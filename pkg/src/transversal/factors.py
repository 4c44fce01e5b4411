"""Transversal F-factors.

An (F, t)-factor is a set of vertex-disjoint copies of a small graph F
covering every vertex, each copy coloured with exactly t colours (t = 1 or
t = e(F)) and no colour shared between copies. A patterned factor instead
prescribes the colour of every edge: copy i must follow pattern i.

Both are built by one five-step engine over *labels*. A label is a colour
when colours are handed out (t per copy) and a pattern when patterns are
(one per copy). A copy fits a label when every edge lies in the colour the
label gives it, so the labels a copy fits form a bitmask: the AND over its
edges. The steps mirror the spanning tree pipeline:

1. a few copies fitting many labels become an absorber (fixed A, reservoir C)
2. most remaining vertices are tiled block by block with labels outside A and C
3. every label left outside A and C gets its own copy
4. the last vertices are tiled with labels from C
5. the absorber takes the labels of C that are still unused
"""

import logging
import math
import re
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, replace
from functools import cached_property

import networkx as nx

from transversal.absorber import absorb, build_absorber
from transversal.core import GraphCollection, bits, colour_mask, threshold_graph
from transversal.errors import (
    BudgetExhausted,
    InvalidInstance,
    InvariantViolation,
    NotFound,
    PipelineStageError,
    RetriesExhausted,
    TransversalError,
)
from transversal.models import FactorCopy, FtFactor, PipelineConfig, VerificationReport
from transversal.oracle import (
    NodeBudget,
    TransversalTemplate,
    exists_transversal_exact,
    find_subgraph,
    iter_subgraphs,
    verify_transversal,
)
from transversal.partition import good_partition, split_preserving_degrees

logger = logging.getLogger(__name__)


def chromatic_number(F: nx.Graph) -> int:
    """Exact chromatic number by backtracking (small graphs only)."""
    nodes = sorted(F.nodes(), key=lambda u: (-F.degree(u), u))
    if not nodes:
        return 0

    def colourable(k: int) -> bool:
        colour: dict[int, int] = {}

        def rec(i: int) -> bool:
            if i == len(nodes):
                return True
            u = nodes[i]
            taken = {colour[w] for w in F.adj[u] if w in colour}
            for c in range(min(k, max(colour.values(), default=-1) + 2)):
                if c not in taken:
                    colour[u] = c
                    if rec(i + 1):
                        return True
                    del colour[u]
            return False

        return rec(0)

    return next(k for k in range(1, len(nodes) + 1) if colourable(k))


@dataclass(frozen=True)
class FactorSpec:
    """F, the number of colours per copy and the degree thresholds used for it.

    ``delta_F`` is the minimum-degree threshold for F-factors in graphs and
    ``delta_p_F`` the one for partite F-factors; both are plug-in values.
    """

    name: str
    F: nx.Graph
    t: int
    delta_F: float
    delta_p_F: float

    def __post_init__(self):
        if self.F.number_of_edges() < 1:
            raise InvalidInstance("F needs at least one edge")
        if sorted(self.F.nodes()) != list(range(self.F.number_of_nodes())):
            raise InvalidInstance("F must have vertices 0..r-1")
        if self.t not in (1, self.F.number_of_edges()):
            raise InvalidInstance(f"t must be 1 or e(F)={self.F.number_of_edges()}")
        floor = 1 - 1 / (self.chi - 1) if self.chi > 1 else 0.0
        if self.delta_F < floor - 1e-12:
            raise InvalidInstance(f"delta_F={self.delta_F} below 1 - 1/(chi-1) = {floor}")

    @property
    def r(self) -> int:
        return self.F.number_of_nodes()

    @property
    def e(self) -> int:
        return self.F.number_of_edges()

    @cached_property
    def chi(self) -> int:
        return chromatic_number(self.F)

    @cached_property
    def has_bridge(self) -> bool:
        return nx.has_bridges(self.F)

    @cached_property
    def f_edges(self) -> list[tuple[int, int]]:
        """Edges of F in the fixed lexicographic order used by colours and patterns."""
        return sorted((min(a, b), max(a, b)) for a, b in self.F.edges())

    @property
    def delta_T_F(self) -> float:
        """Threshold for collections: delta_F, raised to 1/2 for bridgeless rainbow copies."""
        if self.t == 1 or self.has_bridge or self.delta_F >= 0.5:
            return self.delta_F
        return 0.5

    def with_t(self, t: int) -> "FactorSpec":
        return replace(self, t=t)

    @classmethod
    def from_graph(
        cls,
        F: nx.Graph,
        t: int | None = None,
        name: str = "F",
        delta_F: float | None = None,
        delta_p_F: float | None = None,
    ) -> "FactorSpec":
        """Spec for an arbitrary F; thresholds default to 1 - 1/chi(F)."""
        F = nx.convert_node_labels_to_integers(F, ordering="sorted")
        default = 1 - 1 / chromatic_number(F)
        delta_F = default if delta_F is None else delta_F
        return cls(
            name=name,
            F=F,
            t=F.number_of_edges() if t is None else t,
            delta_F=delta_F,
            delta_p_F=max(delta_F, default) if delta_p_F is None else delta_p_F,
        )


_BUILTIN = re.compile(r"^(?:(K)_?(\d+)|(C)_?(\d+)|(P)_?(\d+)|K_?\{?1,(\d+)\}?|(S)_?(\d+))$")


def builtin_spec(name: str, t: int | None = None) -> FactorSpec:
    """Spec for K_r (r <= 6), C_k (k <= 8), P_k (k <= 8 vertices) or K_{1,s} (s <= 5).

    Cliques use 1 - 1/r for both thresholds and cycles use (1 + 1/k)/2 for
    the partite one. The remaining values follow the critical chromatic
    number: (k+1)/(2k) for odd cycles, 1/2 for even cycles, (k-1)/(2k) for
    paths on an odd number k of vertices, 1/2 for even paths and 1/2 for
    stars except K_{1,2} (the path on three vertices).

    Args:
        name: e.g. "K3", "C4", "P5", "K1,3" or "S3".
        t: Colours per copy (default e(F)).

    Raises:
        InvalidInstance: Unknown or unsupported F.
    """
    match = _BUILTIN.match(name.replace(" ", ""))
    if not match:
        raise InvalidInstance(f"unsupported F: {name!r}")
    clique, cycle, path = match.group(2), match.group(4), match.group(6)
    star = match.group(7) or match.group(9)
    if clique is not None:
        r = int(clique)
        if not 2 <= r <= 6:
            raise InvalidInstance("cliques K_r need 2 <= r <= 6")
        F = nx.complete_graph(r)
        delta = 1 - 1 / r
        return FactorSpec(name=f"K{r}", F=F, t=_t(F, t), delta_F=delta, delta_p_F=delta)
    if cycle is not None:
        k = int(cycle)
        if not 3 <= k <= 8:
            raise InvalidInstance("cycles C_k need 3 <= k <= 8")
        F = nx.cycle_graph(k)
        delta = 0.5 if k % 2 == 0 else (k + 1) / (2 * k)
        return FactorSpec(name=f"C{k}", F=F, t=_t(F, t), delta_F=delta, delta_p_F=(1 + 1 / k) / 2)
    if path is not None:
        k = int(path)
        if not 2 <= k <= 8:
            raise InvalidInstance("paths P_k need 2 <= k <= 8 vertices")
        F = nx.path_graph(k)
        delta = 0.5 if k % 2 == 0 else (k - 1) / (2 * k)
        return FactorSpec(name=f"P{k}", F=F, t=_t(F, t), delta_F=delta, delta_p_F=(1 + 1 / k) / 2)
    s = int(star)
    if not 1 <= s <= 5:
        raise InvalidInstance("stars K_{1,s} need 1 <= s <= 5")
    F = nx.star_graph(s)
    delta = 1 / 3 if s == 2 else 0.5
    return FactorSpec(name=f"K1,{s}", F=F, t=_t(F, t), delta_F=delta, delta_p_F=(1 + 1 / (s + 1)) / 2)


def _t(F: nx.Graph, t: int | None) -> int:
    return F.number_of_edges() if t is None else t


class _Labels:
    """Colours (t per copy) or patterns (one per copy) handed out to copies of F."""

    def __init__(
        self,
        collection: GraphCollection,
        spec: FactorSpec,
        patterns: Sequence[Sequence[int]] | None = None,
    ):
        self.collection = collection
        self.spec = spec
        self.patterns = [list(p) for p in patterns] if patterns is not None else None
        self.f_edges = spec.f_edges
        self.f_index = {edge: i for i, edge in enumerate(self.f_edges)}
        if self.patterns is None:
            self.count = collection.m
            self.per_copy = spec.t
        else:
            self.count = len(self.patterns)
            self.per_copy = 1
            self._by_colour: list[dict[int, int]] = [{} for _ in self.f_edges]
            for p, pattern in enumerate(self.patterns):
                for f, colour in enumerate(pattern):
                    self._by_colour[f][colour] = self._by_colour[f].get(colour, 0) | (1 << p)
            self._pattern_colours = [colour_mask(p) for p in self.patterns]

    def edge_mask(self, f: int, x: int, y: int) -> int:
        """Labels under which host edge xy may carry F-edge number f."""
        mask = self.collection.edge_mask(x, y)
        if self.patterns is None:
            return mask
        out = 0
        for colour in bits(mask):
            out |= self._by_colour[f].get(colour, 0)
        return out

    def copy_support(self, copy: Sequence[int]) -> int:
        support = (1 << self.count) - 1
        for f, (a, b) in enumerate(self.f_edges):
            support &= self.edge_mask(f, copy[a], copy[b])
            if not support:
                break
        return support

    def colours_of(self, label_mask: int) -> int:
        """Colour mask used by the given labels."""
        if self.patterns is None:
            return label_mask
        out = 0
        for p in bits(label_mask):
            out |= self._pattern_colours[p]
        return out

    def copy_key(self, copy: Sequence[int]):
        if self.patterns is not None:
            return tuple(copy)
        return frozenset((min(copy[a], copy[b]), max(copy[a], copy[b])) for a, b in self.f_edges)

    def dress(self, copy: Sequence[int], labels: Sequence[int]) -> FactorCopy:
        """FactorCopy for a copy holding ``per_copy`` labels it fits."""
        if self.patterns is not None:
            return FactorCopy(vertices=list(copy), colours=list(self.patterns[labels[0]]), pattern=labels[0])
        if self.per_copy == 1:
            return FactorCopy(vertices=list(copy), colours=[labels[0]] * len(self.f_edges))
        return FactorCopy(vertices=list(copy), colours=list(labels))

    def adjacency(self, vertices: Iterable[int], label_mask: int) -> dict[int, set[int]]:
        pool = set(vertices)
        usable = self.colours_of(label_mask)
        adj: dict[int, set[int]] = {x: set() for x in pool}
        for x in pool:
            for y in self.collection.union_adjacency(x):
                if y in pool and self.collection.edge_mask(x, y) & usable:
                    adj[x].add(y)
        return adj


class _Done(Exception):
    pass


def _block_factor(
    labels: _Labels, part: Sequence[int], free_mask: int, need: int, budget: int
) -> tuple[list[tuple[int, ...]], int] | None:
    """F-factor of the block fitting the most free labels (at least ``need``).

    Branch and bound over factors whose copies contain the smallest
    uncovered vertex; a branch dies once fewer labels than the current
    bound fit all its copies.
    """
    F, r = labels.spec.F, labels.spec.r
    adj = labels.adjacency(part, free_mask)
    counter = NodeBudget(budget)
    best: list = [None, 0]
    floor = [need]
    chosen: list[tuple[int, ...]] = []

    def rec(remaining: set[int], running: int) -> None:
        if not remaining:
            best[0], best[1] = list(chosen), running
            floor[0] = running.bit_count() + 1
            if running == free_mask:
                raise _Done
            return
        w = min(remaining)
        seen = set()

        def fits(pe, he) -> bool:
            return (labels.edge_mask(labels.f_index[pe], *he) & running).bit_count() >= floor[0]

        for s in range(r):
            for mapping in iter_subgraphs(adj, F, {s: w}, edge_filter=fits, allowed=remaining, budget=counter):
                copy = tuple(mapping[j] for j in range(r))
                key = labels.copy_key(copy)
                if key in seen:
                    continue
                seen.add(key)
                mask = running & labels.copy_support(copy)
                if mask.bit_count() < floor[0]:
                    continue
                chosen.append(copy)
                rec(remaining - set(copy), mask)
                chosen.pop()

    try:
        rec(set(part), free_mask)
    except (_Done, BudgetExhausted):
        pass
    if best[0] is None:
        return None
    return best[0], best[1]


def _cover_block(
    labels: _Labels, part: list[int], free: set[int], config: PipelineConfig, rng
) -> list[FactorCopy] | None:
    """Tile a block; halve it (recursively) when no single factor fits enough labels."""
    r = labels.spec.r
    copies = len(part) // r
    need = labels.per_copy * copies
    found = _block_factor(labels, part, _mask(free), need, config.enumeration_cap)
    if found is not None:
        chosen, support = found
        handed = bits(support)[:need]
        step = labels.per_copy
        return [labels.dress(copy, handed[i * step:(i + 1) * step]) for i, copy in enumerate(chosen)]
    if copies == 1:
        return None
    shuffled = list(part)
    rng.shuffle(shuffled)
    half = (copies // 2) * r
    out: list[FactorCopy] = []
    remaining = set(free)
    for piece in (sorted(shuffled[:half]), sorted(shuffled[half:])):
        sub = _cover_block(labels, piece, remaining, config, rng)
        if sub is None:
            return None
        out.extend(sub)
        for copy in sub:
            remaining -= _labels_of(labels, copy)
    return out


def _mask(items: Iterable[int]) -> int:
    return colour_mask(items)


def _labels_of(labels: _Labels, copy: FactorCopy) -> set[int]:
    if labels.patterns is not None:
        return {copy.pattern}
    return set(copy.colours)


def _surplus(
    labels: _Labels,
    vertices: Iterable[int],
    allowed: Iterable[int],
    config: PipelineConfig,
    salt: int,
) -> list[FactorCopy]:
    pool = sorted(set(vertices))
    r = labels.spec.r
    if len(pool) % r:
        raise InvalidInstance(f"{len(pool)} vertices do not split into copies of a {r}-vertex F")
    total = len(pool) // r
    free = set(allowed)
    if total == 0:
        return []
    if len(free) < labels.per_copy * total:
        raise InvalidInstance(f"{len(free)} labels for {total} copies needing {labels.per_copy} each")
    k = max(1, min(config.k, total))
    blocks = max(1, total // k)
    base, extra = divmod(total, blocks)
    sizes = [r * (base + 1)] * extra + [r * base] * (blocks - extra)
    try:
        parts = good_partition(
            labels.collection, sizes, min(sizes), config.slack, config, ground_set=pool, salt=salt
        ).parts
    except RetriesExhausted as exc:
        logger.info("using best block partition after %d attempts", exc.attempts)
        parts = exc.best
    rng = config.make_rng(salt + 1)

    out: list[FactorCopy] = []
    for index, part in enumerate(parts):
        tiled = _cover_block(labels, list(part), free, config, rng)
        if tiled is None:
            raise RetriesExhausted(
                f"block {index} ({len(part)} vertices) has no factor fitting enough of {len(free)} labels",
                attempts=1,
                best=out,
                details={"block": index},
            )
        for copy in tiled:
            free -= _labels_of(labels, copy)
        out.extend(tiled)
        logger.debug("block %d tiled with %d copies", index, len(tiled))
    return out


def ft_factor_surplus(
    collection: GraphCollection,
    spec: FactorSpec,
    config: PipelineConfig,
    vertices: Iterable[int] | None = None,
    allowed_colours: Iterable[int] | None = None,
    salt: int = 0,
) -> FtFactor:
    """(F, t)-factor of ``vertices`` when colours are plentiful.

    The vertices are split into blocks of about k copies; each block gets an
    F-factor lying in at least t*(copies) unused colours, which are then
    handed out t per copy. Blocks that cannot be tiled this way are halved.

    Raises:
        RetriesExhausted: A block could not be tiled; ``details["block"]`` names it.
    """
    labels = _Labels(collection, spec)
    pool = range(collection.n) if vertices is None else vertices
    allowed = range(collection.m) if allowed_colours is None else allowed_colours
    return FtFactor(copies=_surplus(labels, pool, allowed, config, salt))


def _common_copy(
    labels: _Labels,
    forbidden: set[int],
    free: set[int],
    config: PipelineConfig,
    rng,
) -> tuple[tuple[int, ...], list[int]]:
    r = labels.spec.r
    available = sorted(set(range(labels.collection.n)) - forbidden)
    size = min(len(available), r * config.k)
    if size < r:
        raise InvalidInstance(f"only {len(available)} free vertices for a copy of F")
    target = max(labels.per_copy, math.ceil(config.beta_bar * labels.count))
    free_mask = _mask(free)
    best: tuple[int, tuple[int, ...], int] | None = None
    for attempt in range(1, config.retries + 1):
        sample = sorted(rng.sample(available, size))
        adj = labels.adjacency(sample, free_mask)
        try:
            for mapping in iter_subgraphs(adj, labels.spec.F, budget=config.enumeration_cap):
                copy = tuple(mapping[j] for j in range(r))
                support = labels.copy_support(copy) & free_mask
                if best is None or support.bit_count() > best[0]:
                    best = (support.bit_count(), copy, support)
                    if support == free_mask:
                        break
        except BudgetExhausted:
            pass
        if best is not None and best[0] >= target:
            logger.debug("copy fitting %d labels found on attempt %d", best[0], attempt)
            return best[1], bits(best[2])
    raise RetriesExhausted(
        f"no copy of F fits {target} labels",
        attempts=config.retries,
        best=best[1] if best else None,
        details={"best_support": best[0] if best else 0, "target": target},
    )


def common_colour_F_copy(
    collection: GraphCollection,
    spec: FactorSpec,
    forbidden_vertices: Iterable[int],
    forbidden_colours: Iterable[int],
    config: PipelineConfig,
    salt: int = 0,
) -> tuple[tuple[int, ...], list[int]]:
    """A copy of F contained in as many allowed colours as possible.

    Samples r*k allowed vertices, enumerates the copies of F among them and
    keeps the one lying in the most allowed colours; accepted once that is
    at least beta_bar*m colours.

    Returns:
        The copy (image of each F vertex) and every allowed colour containing it.

    Raises:
        RetriesExhausted: No sample reached beta_bar*m colours.
    """
    labels = _Labels(collection, spec)
    free = set(range(collection.m)) - set(forbidden_colours)
    return _common_copy(labels, set(forbidden_vertices), free, config, config.make_rng(salt))


def _fill_colours(
    collection: GraphCollection,
    host_edges: list[tuple[int, int]],
    allowed: Sequence[int],
) -> list[int] | None:
    used: set[int] = set()
    out = []
    for x, y in host_edges:
        choice = next((c for c in collection.colours_containing(x, y, allowed) if c not in used), None)
        if choice is None:
            return None
        used.add(choice)
        out.append(choice)
    return out


def t_copy_with_colour(
    collection: GraphCollection,
    spec: FactorSpec,
    target_colour: int,
    config: PipelineConfig,
    allowed_vertices: Iterable[int] | None = None,
    allowed_colours: Iterable[int] | None = None,
) -> FactorCopy:
    """A t-copy of F with at least one edge in ``target_colour``.

    For t = 1 the whole copy lies in the target colour. Otherwise an edge e
    of the target colour is pinned and F is completed through e in the graph
    of edges lying in at least t other allowed colours, whose edges then get
    distinct colours lowest first.

    Raises:
        NotFound: No such copy among the allowed vertices.
    """
    j = target_colour
    pool = set(range(collection.n) if allowed_vertices is None else allowed_vertices)
    F, f_edges = spec.F, spec.f_edges
    if spec.t == 1 or spec.e == 1:
        adj = {x: {y for y in collection[j].adj[x] if y in pool} for x in pool}
        mapping = find_subgraph(adj, F, budget=config.search_budget)
        return FactorCopy(vertices=[mapping[i] for i in range(spec.r)], colours=[j] * spec.e)

    others = sorted(set(range(collection.m) if allowed_colours is None else allowed_colours) - {j})
    if len(others) < spec.e - 1:
        raise NotFound(f"{len(others)} colours cannot complete a copy through colour {j}")
    G = threshold_graph(collection, min(spec.t, len(others)), others, pool)
    adj = {x: set(G.adj[x]) for x in G.nodes()}
    counter = NodeBudget(config.search_budget)
    target_edges = sorted(
        (min(x, y), max(x, y)) for x, y in collection[j].edges() if x in pool and y in pool
    )
    try:
        for f, (a, b) in enumerate(f_edges):
            for x0, y0 in target_edges:
                for x, y in ((x0, y0), (y0, x0)):
                    added = y not in adj[x]
                    adj[x].add(y)
                    adj[y].add(x)
                    try:
                        for mapping in iter_subgraphs(adj, F, {a: x, b: y}, budget=counter):
                            rest = [(mapping[p], mapping[q]) for p, q in f_edges if (p, q) != (a, b)]
                            fill = _fill_colours(collection, rest, others)
                            if fill is None:
                                continue
                            fill.insert(f, j)
                            return FactorCopy(vertices=[mapping[i] for i in range(spec.r)], colours=fill)
                    finally:
                        if added:
                            adj[x].discard(y)
                            adj[y].discard(x)
    except BudgetExhausted as exc:
        raise NotFound(f"search for a copy through colour {j} ran out of budget") from exc
    raise NotFound(f"no copy of {spec.name} uses colour {j}")


def colour_covering_factor(
    collection: GraphCollection,
    spec: FactorSpec,
    C: Iterable[int],
    config: PipelineConfig,
    allowed_vertices: Iterable[int] | None = None,
    allowed_colours: Iterable[int] | None = None,
) -> FtFactor:
    """Vertex-disjoint t-copies, one per colour of C, using every colour of C.

    Copies are found one colour at a time (ascending); their other colours
    come from ``allowed_colours`` minus C and are not reused.

    Raises:
        NotFound: Names the colour that could not be covered.
    """
    targets = sorted(set(C))
    pool = set(range(collection.n) if allowed_vertices is None else allowed_vertices)
    spare = set(range(collection.m) if allowed_colours is None else allowed_colours) - set(targets)
    if len(spare) + len(targets) < 2 * spec.t * len(targets):
        logger.info("covering %d colours with only %d spare colours", len(targets), len(spare))
    copies = []
    for j in targets:
        try:
            copy = t_copy_with_colour(collection, spec, j, config, pool, spare | {j})
        except NotFound as exc:
            raise NotFound(f"colour {j} could not be covered: {exc}") from exc
        pool -= set(copy.vertices)
        spare -= set(copy.colours)
        copies.append(copy)
    return FtFactor(copies=copies)


def _partite_copies(
    collection: GraphCollection,
    spec: FactorSpec,
    patterns: Sequence[Sequence[int]],
    parts: Sequence[Sequence[int]],
    budget: NodeBudget,
) -> list[tuple[int, tuple[int, ...]]] | None:
    """One copy of F per pattern with F-vertex s in parts[s] for every s.

    Only edges between parts s and s' with ss' in F are kept, and copy p
    must find each of them in the colour patterns[p] gives ss'. The
    smallest uncovered vertex of parts[0] is tried as vertex 0 under each
    unplaced pattern (equal patterns once), so for a single repeated
    pattern this is a partite F-factor search of the merged graph.

    Returns:
        (pattern index, copy) pairs, or None if no such copies exist.
    """
    r, f_index = spec.r, {edge: i for i, edge in enumerate(spec.f_edges)}
    part_of = {x: s for s in range(r) for x in parts[s]}
    adj = {
        x: {y for y in collection.union_adjacency(x) if y in part_of and spec.F.has_edge(s, part_of[y])}
        for x, s in part_of.items()
    }
    remaining = set(part_of)
    left = set(range(len(patterns)))
    chosen: list[tuple[int, tuple[int, ...]]] = []

    def in_part(u: int, x: int) -> bool:
        return part_of[x] == u

    def options() -> Iterator[tuple[int, tuple[int, ...]]]:
        w = min(x for x in remaining if part_of[x] == 0)
        tried = set()
        for p in sorted(left):
            pattern = tuple(patterns[p])
            if pattern in tried:
                continue
            tried.add(pattern)

            def fits(pe, he, pattern=pattern) -> bool:
                return collection.has_edge(pattern[f_index[pe]], *he)

            for mapping in iter_subgraphs(
                adj, spec.F, {0: w}, edge_filter=fits, vertex_filter=in_part, allowed=remaining, budget=budget
            ):
                yield p, tuple(mapping[j] for j in range(r))

    if not patterns:
        return []
    stack = [options()]
    while stack:
        if len(chosen) == len(stack):
            p, copy = chosen.pop()
            remaining.update(copy)
            left.add(p)
        item = next(stack[-1], None)
        if item is None:
            stack.pop()
            continue
        chosen.append(item)
        remaining.difference_update(item[1])
        left.discard(item[0])
        if len(chosen) == len(patterns):
            return chosen
        stack.append(options())
    return None


def _split_copies(
    collection: GraphCollection,
    spec: FactorSpec,
    patterns: Sequence[Sequence[int]],
    pool: Sequence[int],
    config: PipelineConfig,
    salt: int,
) -> list[tuple[int, tuple[int, ...]]]:
    """Disjoint copies, one per pattern, inside an r-part split of ``pool``.

    Each attempt splits ``pool`` into r parts of len(patterns) vertices
    (plus spares) keeping relative degrees, then runs _partite_copies.

    Raises:
        NotFound: No attempt found the copies.
    """
    count, r = len(patterns), spec.r
    spare = len(pool) - count * r
    sizes = [count] * r + ([spare] if spare else [])
    budget = NodeBudget(config.search_budget)
    for attempt in range(config.retries):
        try:
            parts = split_preserving_degrees(
                collection, pool, sizes, config.slack, config, salt + attempt
            ).parts
        except RetriesExhausted as exc:
            parts = exc.best
        try:
            found = _partite_copies(collection, spec, patterns, parts[:r], budget)
        except BudgetExhausted as exc:
            raise NotFound(f"partite search ran out of budget on split {attempt + 1}") from exc
        if found is not None:
            return found
        logger.debug("split %d admits no partite copies", attempt + 1)
    raise NotFound(f"no {count} disjoint copies following their patterns after {config.retries} splits")


def patterned_copies(
    collection: GraphCollection,
    spec: FactorSpec,
    pattern: Sequence[int],
    count: int,
    config: PipelineConfig,
    vertices: Iterable[int] | None = None,
    salt: int = 0,
) -> list[FactorCopy]:
    """``count`` vertex-disjoint copies of F, edge e of each in colour pattern[e].

    The vertices are split into r parts of ``count`` vertices (plus spares);
    F-vertex s may only go to part s and an edge between parts s and s' is
    kept when it lies in the colour the pattern gives edge ss'. A partite
    F-factor of that graph is the answer. A single copy is found directly.

    Raises:
        NotFound: No attempt found the copies.
    """
    pool = sorted(set(range(collection.n) if vertices is None else vertices))
    r, f_edges = spec.r, spec.f_edges
    if len(pattern) != len(f_edges):
        raise InvalidInstance(f"pattern has {len(pattern)} colours, F has {len(f_edges)} edges")
    if count * r > len(pool):
        raise InvalidInstance(f"{count} copies need {count * r} vertices, {len(pool)} available")
    if count == 0:
        return []

    if count == 1:
        f_index = {edge: i for i, edge in enumerate(f_edges)}
        pool_set = set(pool)
        adj = {x: {y for y in collection.union_adjacency(x) if y in pool_set} for x in pool}
        mapping = find_subgraph(
            adj,
            spec.F,
            budget=config.search_budget,
            edge_filter=lambda pe, he: collection.has_edge(pattern[f_index[pe]], *he),
        )
        return [FactorCopy(vertices=[mapping[i] for i in range(r)], colours=list(pattern))]

    found = _split_copies(collection, spec, [list(pattern)] * count, pool, config, salt)
    return [FactorCopy(vertices=list(copy), colours=list(pattern)) for _, copy in found]


def verify_factor(
    collection: GraphCollection,
    spec: FactorSpec,
    factor: FtFactor,
    vertices: Iterable[int] | None = None,
    patterns: Sequence[Sequence[int]] | None = None,
) -> VerificationReport:
    """Check a factor: disjoint copies covering ``vertices`` (default all), then the colour rules.

    With ``patterns`` each copy must follow ``patterns[copy.pattern]``;
    otherwise each copy needs exactly t colours and copies share none.
    """
    seen: dict[int, int] = {}
    for i, copy in enumerate(factor.copies):
        if len(copy.vertices) != spec.r or len(copy.colours) != spec.e:
            return VerificationReport.failed("copy_shape", f"copy {i} has the wrong size", copy_index=i)
        for x in copy.vertices:
            if x in seen:
                return VerificationReport.failed(
                    "vertex_disjoint", f"vertex {x} in copies {seen[x]} and {i}", vertex=x, copy_index=i
                )
            seen[x] = i
    expected = set(range(collection.n) if vertices is None else vertices)
    if set(seen) != expected:
        missing = sorted(expected - set(seen)) or sorted(set(seen) - expected)
        return VerificationReport.failed(
            "vertex_cover", f"vertex {missing[0]} covered incorrectly", vertex=missing[0]
        )
    relabel = {x: i for i, x in enumerate(sorted(expected))}
    local = GraphCollection(
        len(expected),
        [
            [(relabel[u], relabel[v]) for u, v in g.edges() if u in relabel and v in relabel]
            for g in collection
        ],
    )
    shifted = FtFactor(
        copies=[
            copy.model_copy(update={"vertices": [relabel[x] for x in copy.vertices]})
            for copy in factor.copies
        ]
    )
    if patterns is not None:
        if any(copy.pattern is None for copy in factor.copies):
            return VerificationReport.failed("pattern", "copy without a pattern index")
        template = TransversalTemplate.patterned(spec.F, [patterns[c.pattern] for c in factor.copies])
    else:
        template = TransversalTemplate.factor(spec.F, spec.t, len(factor.copies))
    return verify_transversal(local, shifted.to_embedding(spec.f_edges, spec.r), template)


@dataclass(frozen=True)
class _Sizes:
    n1: int
    n2: int
    n3: int
    n4: int
    ell: int


def _sizes(copies: int, per_copy: int, config: PipelineConfig) -> _Sizes | None:
    ell = max(1, round(config.gamma * copies))
    # the absorber needs 2*ell slots and a 2-connected core
    n1 = max(1, round(config.beta * copies / 2), math.ceil(max(2 * ell, ell + 1, 3) / per_copy))
    n3 = ell
    n4 = max(1, round(config.beta * copies))
    n2 = copies - n1 - n3 - n4
    if n2 < 1:
        return None
    return _Sizes(n1=n1, n2=n2, n3=n3, n4=n4, ell=ell)


def _partial(*groups: list[FactorCopy]) -> dict:
    copies = [c for group in groups for c in group]
    return {
        "copies": len(copies),
        "covered_vertices": sum(len(c.vertices) for c in copies),
        "used_colours": sorted({col for c in copies for col in c.colours}),
    }


def _five_steps(labels: _Labels, config: PipelineConfig) -> FtFactor:
    collection, spec = labels.collection, labels.spec
    r, per_copy = spec.r, labels.per_copy
    copies = collection.n // r
    sizes = _sizes(copies, per_copy, config)
    if collection.n < config.min_pipeline_vertices or sizes is None:
        return _direct(labels, config)
    ell = sizes.ell
    logger.info(
        "factor pipeline: %d absorber, %d bulk, %d cover, %d tail copies; absorbing %d labels",
        sizes.n1, sizes.n2, sizes.n3, sizes.n4, ell,
    )

    rng = config.make_rng(11)
    absorber_copies: list[tuple[int, ...]] = []
    try:
        used_vertices: set[int] = set()
        slot_labels: dict[tuple[int, int], list[int]] = {}
        for i in range(sizes.n1):
            copy, support = _common_copy(labels, used_vertices, set(range(labels.count)), config, rng)
            absorber_copies.append(copy)
            used_vertices |= set(copy)
            for s in range(per_copy):
                slot_labels[(i, s)] = support
        template = build_absorber(slot_labels, ell, config, colours=range(labels.count), salt=12)
        needed = per_copy * sizes.n4 + ell + (per_copy - 1) * sizes.n3
        if len(template.reservoir) < needed:
            raise RetriesExhausted(
                f"reservoir has {len(template.reservoir)} labels, need {needed}",
                details={"reservoir": len(template.reservoir)},
            )
        C = set(rng.sample(sorted(template.reservoir), needed))
    except TransversalError as exc:
        raise PipelineStageError("absorber", exc, _partial()) from exc
    A = set(template.fixed_colours)

    try:
        rest = [x for x in range(collection.n) if x not in used_vertices]
        try:
            parts = split_preserving_degrees(
                collection, rest, [r * sizes.n2, r * (sizes.n3 + sizes.n4)], config.slack, config, salt=13
            ).parts
        except RetriesExhausted as exc:
            if exc.best is None:
                raise
            logger.info("using best bulk/tail split after %d attempts", exc.attempts)
            parts = exc.best
        V2, V3 = parts
    except TransversalError as exc:
        raise PipelineStageError("split", exc, _partial()) from exc

    outside = [c for c in range(labels.count) if c not in A and c not in C]
    try:
        bulk = _surplus(labels, V2, outside, config, salt=14)
    except TransversalError as exc:
        raise PipelineStageError("bulk", exc, _partial()) from exc

    taken = set().union(*(_labels_of(labels, c) for c in bulk)) if bulk else set()
    B = [c for c in outside if c not in taken]
    try:
        cover = _cover(labels, B, C, V3, config)
    except TransversalError as exc:
        raise PipelineStageError("cover", exc, _partial(bulk)) from exc

    covered = {x for c in cover for x in c.vertices}
    V4 = [x for x in V3 if x not in covered]
    C_left = C - set().union(*(_labels_of(labels, c) for c in cover)) if cover else set(C)
    try:
        tail = _surplus(labels, V4, C_left, config, salt=15)
    except TransversalError as exc:
        raise PipelineStageError("tail", exc, _partial(bulk, cover)) from exc

    leftover = C_left - set().union(*(_labels_of(labels, c) for c in tail)) if tail else C_left
    try:
        assignment = absorb(template, leftover, debug=config.debug)
    except TransversalError as exc:
        raise PipelineStageError("absorb", exc, _partial(bulk, cover, tail)) from exc
    head = [
        labels.dress(copy, [assignment[(i, s)] for s in range(per_copy)])
        for i, copy in enumerate(absorber_copies)
    ]
    return FtFactor(copies=[*head, *bulk, *cover, *tail])


def _cover(
    labels: _Labels, B: list[int], C: set[int], vertices: list[int], config: PipelineConfig
) -> list[FactorCopy]:
    """One copy per label of B; colour copies borrow their other colours from C.

    Pattern copies come from one partite search over an r-part split of the
    vertices, or one at a time if that fails.
    """
    collection, spec = labels.collection, labels.spec
    if labels.patterns is None:
        return colour_covering_factor(
            collection, spec, B, config, allowed_vertices=vertices, allowed_colours=set(C) | set(B)
        ).copies
    if len(B) > 1 and len(B) * spec.r <= len(vertices):
        try:
            patterns = [labels.patterns[p] for p in B]
            found = _split_copies(collection, spec, patterns, sorted(vertices), config, salt=16)
        except NotFound as exc:
            logger.info("partite cover failed (%s); covering patterns one at a time", exc)
        else:
            return [labels.dress(copy, [B[i]]) for i, copy in found]
    pool = set(vertices)
    out = []
    for p in B:
        try:
            (copy,) = patterned_copies(collection, spec, labels.patterns[p], 1, config, pool)
        except NotFound as exc:
            raise NotFound(f"pattern {p} could not be covered: {exc}") from exc
        out.append(copy.model_copy(update={"pattern": p}))
        pool -= set(copy.vertices)
    return out


def _direct(labels: _Labels, config: PipelineConfig) -> FtFactor:
    """Small instances: try the surplus tiling on everything, then exact search."""
    collection, spec = labels.collection, labels.spec
    try:
        return FtFactor(copies=_surplus(labels, range(collection.n), range(labels.count), config, salt=21))
    except TransversalError as exc:
        logger.info("surplus tiling failed on a small instance (%s); using exact search", exc)
    copies = collection.n // spec.r
    if labels.patterns is not None:
        template = TransversalTemplate.patterned(spec.F, labels.patterns)
    else:
        template = TransversalTemplate.factor(spec.F, spec.t, copies)
    decision = exists_transversal_exact(collection, template, budget=config.search_budget)
    if decision.witness is None:
        raise PipelineStageError(
            "direct",
            NotFound(f"exact search answered {decision.outcome.value} after {decision.nodes} nodes"),
            {"nodes": decision.nodes},
        )
    emb = decision.witness
    out = []
    for i in range(copies):
        vertices = [emb.vertex_map[i * spec.r + j] for j in range(spec.r)]
        colours = [emb.colour_of(i * spec.r + a, i * spec.r + b) for a, b in spec.f_edges]
        out.append(
            FactorCopy(vertices=vertices, colours=colours, pattern=i if labels.patterns is not None else None)
        )
    return FtFactor(copies=out)


def _check_instance(collection: GraphCollection, spec: FactorSpec, labels_needed: int) -> int:
    if collection.n % spec.r:
        raise InvalidInstance(f"{collection.n} vertices are not a multiple of r={spec.r}")
    copies = collection.n // spec.r
    if labels_needed != copies:
        raise InvalidInstance(f"need one label per copy: {copies} copies, {labels_needed} labels")
    return copies


def ft_factor(collection: GraphCollection, spec: FactorSpec, config: PipelineConfig) -> FtFactor:
    """(F, t)-factor of a collection with exactly t*n colours on r*n vertices.

    Raises:
        PipelineStageError: Names the failing stage (absorber, split, bulk,
            cover, tail, absorb, direct) with a dump of the partial state.
    """
    if collection.m % spec.t:
        raise InvalidInstance(f"{collection.m} colours are not a multiple of t={spec.t}")
    _check_instance(collection, spec, collection.m // spec.t)
    factor = _five_steps(_Labels(collection, spec), config)
    report = verify_factor(collection, spec, factor)
    if not report:
        raise InvariantViolation(f"assembled factor fails verification: {report.violation.message}")
    return factor


def check_patterns(patterns: Sequence[Sequence[int]], spec: FactorSpec, m: int) -> None:
    """Raise InvalidInstance unless the patterns partition the m colours, e(F) each."""
    if any(len(p) != spec.e for p in patterns):
        raise InvalidInstance(f"every pattern needs e(F)={spec.e} colours")
    if sorted(c for p in patterns for c in p) != list(range(m)):
        raise InvalidInstance("patterns must partition the colours")


def patterned_factor(
    collection: GraphCollection,
    spec: FactorSpec,
    patterns: Sequence[Sequence[int]],
    config: PipelineConfig,
) -> FtFactor:
    """F-factor whose i-th copy follows patterns[i] (``copy.pattern`` records i).

    Runs the five-step engine with patterns in place of colours.

    Raises:
        PipelineStageError: As for ft_factor.
    """
    check_patterns(patterns, spec, collection.m)
    _check_instance(collection, spec, len(patterns))
    factor = _five_steps(_Labels(collection, spec, patterns), config)
    report = verify_factor(collection, spec, factor, patterns=patterns)
    if not report:
        raise InvariantViolation(f"assembled factor fails verification: {report.violation.message}")
    return factor
