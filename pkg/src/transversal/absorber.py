"""Colour absorption.

An absorber is a set of slots (template edges, or (copy, index) pairs for
factors), each adjacent to the colours it may receive. build_absorber fixes a
base colour b_i per slot and an auxiliary graph K on the slots (ij is an edge
when slot j accepts b_i and slot i accepts b_j), extracts a highly connected
core of K and a set of sink slots inside it. Afterwards any l colours U from
the reservoir can be absorbed: every slot gets a colour and together they use
exactly the fixed colours plus U.

Absorption routes l vertex-disjoint paths through the core, each from a slot
that takes a new colour u to a sink, and shifts base colours one step along
each path. The colour of the sink at the end of a path is the one released.
"""

import logging
import math
from collections.abc import Callable, Hashable, Iterable, Mapping
from dataclasses import dataclass

import networkx as nx
from networkx.algorithms.bipartite import hopcroft_karp_matching

from transversal.connectivity import disjoint_paths, find_highly_connected_subgraph, vertex_connectivity
from transversal.core import GraphCollection, threshold_graph
from transversal.errors import (
    EmbedFailed,
    InvalidInstance,
    InvariantViolation,
    NotFound,
    RetriesExhausted,
)
from transversal.models import ColouredEdge, PipelineConfig, RainbowEmbedding, VerificationReport
from transversal.oracle import find_subgraph

logger = logging.getLogger(__name__)

Embedder = Callable[[nx.Graph, nx.Graph, Mapping[int, int] | None], dict[int, int]]


@dataclass(frozen=True)
class AbsorberTemplate:
    """A built absorber. Slots are addressed by index into ``slots``.

    Attributes:
        slots: Slot identifiers.
        colour_adjacency: Colours each slot accepts.
        base_match: Base colour b_i of each slot (distinct, adjacent).
        aux_graph: Graph K on slot indices.
        core: Slot indices of the highly connected subgraph of K.
        sinks: The l core slots whose base colours may be released.
        fixed_colours: Base colours of the non-sink slots; always used.
        reservoir: Unused colours, each accepted by at least l core slots
            outside the sinks; any l of them can be absorbed.
        ell: Number of colours absorbed per call.
        connectivity: Verified vertex connectivity of the core.
    """

    slots: tuple[Hashable, ...]
    colour_adjacency: tuple[frozenset[int], ...]
    base_match: tuple[int, ...]
    aux_graph: nx.Graph
    core: frozenset[int]
    sinks: tuple[int, ...]
    fixed_colours: frozenset[int]
    reservoir: frozenset[int]
    ell: int
    connectivity: int

    def base_assignment(self) -> dict[Hashable, int]:
        return {slot: self.base_match[i] for i, slot in enumerate(self.slots)}


def _random_base(adjacency: list[frozenset[int]], rng) -> list[int] | None:
    """Sequential uniform choice of distinct adjacent colours; None if stuck."""
    used: set[int] = set()
    base = []
    for options in adjacency:
        free = sorted(options - used)
        if not free:
            return None
        choice = rng.choice(free)
        used.add(choice)
        base.append(choice)
    return base


def _densify(adjacency: list[frozenset[int]], base: list[int], rng) -> list[int]:
    """One round of re-choosing b_i to maximise the auxiliary degree of slot i."""
    base = list(base)
    used = set(base)
    order = list(range(len(base)))
    rng.shuffle(order)
    for i in order:
        # slots whose base colour slot i accepts
        partners = [j for j in range(len(base)) if j != i and base[j] in adjacency[i]]

        def gain(colour: int) -> int:
            return sum(1 for j in partners if colour in adjacency[j])

        current = base[i]
        best, best_gain = current, gain(current)
        for colour in sorted(adjacency[i] - used):
            value = gain(colour)
            if value > best_gain:
                best, best_gain = colour, value
        if best != current:
            used.discard(current)
            used.add(best)
            base[i] = best
    return base


def _aux_graph(adjacency: list[frozenset[int]], base: list[int]) -> nx.Graph:
    K = nx.Graph()
    K.add_nodes_from(range(len(base)))
    for i in range(len(base)):
        for j in range(i + 1, len(base)):
            if base[i] in adjacency[j] and base[j] in adjacency[i]:
                K.add_edge(i, j)
    return K


def build_absorber(
    slot_colours: Mapping[Hashable, Iterable[int]],
    ell: int,
    config: PipelineConfig,
    colours: Iterable[int] | None = None,
    salt: int = 0,
) -> AbsorberTemplate:
    """Build and verify an absorber for ``ell`` colours.

    Args:
        slot_colours: Slot -> colours it accepts. Insertion order fixes slot indices.
        ell: Number of reservoir colours each absorb() call takes, 0 <= ell <= slots.
        config: Seed, retries, densify rounds and the core size factor.
        colours: Colour universe (default: union of all adjacencies).
        salt: Separates independent calls that share one config.

    Returns:
        AbsorberTemplate passing verify_template, with at least ``ell``
        reservoir colours.

    Raises:
        RetriesExhausted: No attempt produced a large enough connected core
            and reservoir. ``details`` holds the best core connectivity and
            reservoir size reached.
    """
    slots = tuple(slot_colours)
    adjacency = [frozenset(slot_colours[slot]) for slot in slots]
    universe = set().union(*adjacency) if colours is None else set(colours)
    if any(not options <= universe for options in adjacency):
        raise InvalidInstance("slot adjacency uses colours outside the universe")
    if not 0 <= ell <= len(slots):
        raise InvalidInstance(f"ell={ell} outside 0..{len(slots)}")
    rng = config.make_rng(salt)
    need = max(ell, 2)
    floor = max(2 * ell, min(len(slots), math.ceil(config.core_size_factor * ell + 2)))
    best = {"core_connectivity": 0, "core_size": 0, "reservoir": 0}

    for attempt in range(1, config.retries + 1):
        base = _random_base(adjacency, rng)
        if base is None:
            continue
        for _ in range(config.densify_rounds):
            base = _densify(adjacency, base, rng)
        K = _aux_graph(adjacency, base)

        if ell == 0:
            template = AbsorberTemplate(
                slots=slots,
                colour_adjacency=tuple(adjacency),
                base_match=tuple(base),
                aux_graph=K,
                core=frozenset(range(len(slots))),
                sinks=(),
                fixed_colours=frozenset(base),
                reservoir=frozenset(universe - set(base)),
                ell=0,
                connectivity=0,
            )
            return template

        try:
            core = find_highly_connected_subgraph(K, need - 1)
        except NotFound:
            logger.debug("attempt %d: auxiliary graph has no %d-connected core", attempt, need)
            continue
        best["core_size"] = max(best["core_size"], len(core))
        best["core_connectivity"] = max(best["core_connectivity"], need)
        if len(core) < floor:
            logger.debug("attempt %d: core of %d slots below floor %d", attempt, len(core), floor)
            continue
        sinks = tuple(sorted(rng.sample(sorted(core), ell)))
        outside = core - set(sinks)
        reservoir = {
            c
            for c in universe - set(base)
            if sum(1 for i in outside if c in adjacency[i]) >= ell
        }
        best["reservoir"] = max(best["reservoir"], len(reservoir))
        if len(reservoir) < ell:
            logger.debug("attempt %d: reservoir of %d colours below %d", attempt, len(reservoir), ell)
            continue
        template = AbsorberTemplate(
            slots=slots,
            colour_adjacency=tuple(adjacency),
            base_match=tuple(base),
            aux_graph=K,
            core=frozenset(core),
            sinks=sinks,
            fixed_colours=frozenset(base[i] for i in range(len(slots)) if i not in sinks),
            reservoir=frozenset(reservoir),
            ell=ell,
            connectivity=vertex_connectivity(K.subgraph(core)),
        )
        report = verify_template(template)
        if not report:
            raise InvariantViolation(f"built absorber fails its own check: {report.violation.message}")
        logger.info(
            "absorber on %d slots: core %d, connectivity %d, reservoir %d (attempt %d)",
            len(slots), len(core), template.connectivity, len(reservoir), attempt,
        )
        return template

    raise RetriesExhausted(
        f"no absorber for ell={ell} on {len(slots)} slots after {config.retries} attempts",
        attempts=config.retries,
        details=best,
    )


def verify_template(template: AbsorberTemplate) -> VerificationReport:
    """Check every structural property of a template; first failure wins."""
    adjacency = template.colour_adjacency
    base = template.base_match
    for i, colour in enumerate(base):
        if colour not in adjacency[i]:
            return VerificationReport.failed(
                "base_adjacent", f"slot {i} does not accept its base colour {colour}", colour=colour
            )
    if len(set(base)) != len(base):
        return VerificationReport.failed("base_injective", "base colours repeat")
    sinks = set(template.sinks)
    if len(sinks) != template.ell or not sinks <= template.core:
        return VerificationReport.failed("sinks", f"need {template.ell} distinct sinks inside the core")
    fixed = {base[i] for i in range(len(base)) if i not in sinks}
    if fixed != set(template.fixed_colours):
        return VerificationReport.failed("fixed_colours", "fixed colours differ from non-sink base colours")
    if template.reservoir & set(base):
        colour = min(template.reservoir & set(base))
        return VerificationReport.failed(
            "reservoir_disjoint", f"reservoir colour {colour} is a base colour", colour=colour
        )
    outside = template.core - sinks
    for colour in sorted(template.reservoir):
        if sum(1 for i in outside if colour in adjacency[i]) < template.ell:
            return VerificationReport.failed(
                "reservoir_degree",
                f"reservoir colour {colour} has fewer than {template.ell} core slots",
                colour=colour,
            )
    if template.ell > 0:
        core_graph = template.aux_graph.subgraph(template.core)
        if len(template.core) < 2 or vertex_connectivity(core_graph) < template.ell:
            return VerificationReport.failed(
                "core_connectivity", f"core is not {template.ell}-connected"
            )
    return VerificationReport.passed()


def _check_assignment(template: AbsorberTemplate, assignment: list[int]) -> None:
    for i, colour in enumerate(assignment):
        if colour not in template.colour_adjacency[i]:
            raise InvariantViolation(f"slot {i} received colour {colour} it does not accept")
    if len(set(assignment)) != len(assignment):
        raise InvariantViolation("switching produced a repeated colour")


def absorb(
    template: AbsorberTemplate,
    U: Iterable[int],
    debug: bool = False,
    verify: bool = True,
) -> dict[Hashable, int]:
    """Assign every slot a colour so the colours used are exactly fixed + U.

    Args:
        template: A built absorber.
        U: ``ell`` reservoir colours to absorb.
        debug: Check injectivity and adjacency after every switched path.
        verify: Check the final assignment.

    Returns:
        Slot -> colour, injective and adjacency-respecting.

    Raises:
        InvalidInstance: U is not an ell-subset of the reservoir.
        NoRouting: The core could not route the switching paths (a broken
            template; never happens for verified templates).
    """
    U = sorted(set(U))
    if len(U) != template.ell or not set(U) <= template.reservoir:
        raise InvalidInstance(f"need {template.ell} colours from the reservoir, got {U}")
    assignment = list(template.base_match)
    if template.ell:
        outside = sorted(template.core - set(template.sinks))
        B = nx.Graph()
        tops = [("colour", u) for u in U]
        B.add_nodes_from(tops)
        B.add_nodes_from(("slot", i) for i in outside)
        for u in U:
            B.add_edges_from(
                (("colour", u), ("slot", i)) for i in outside if u in template.colour_adjacency[i]
            )
        matching = hopcroft_karp_matching(B, top_nodes=tops)
        if any(top not in matching for top in tops):
            raise InvariantViolation("reservoir colours cannot be matched to entry slots")
        entry = {matching[("colour", u)][1]: u for u in U}

        core_graph = template.aux_graph.subgraph(template.core)
        paths = disjoint_paths(core_graph, entry, template.sinks, template.ell)
        for path in paths:
            assignment[path[0]] = entry[path[0]]
            for prev, slot in zip(path, path[1:]):
                assignment[slot] = template.base_match[prev]
            if debug:
                _check_assignment(template, assignment)
                logger.debug("switched along %s", path)

    if verify:
        _check_assignment(template, assignment)
        if set(assignment) != set(template.fixed_colours) | set(U):
            raise InvariantViolation("absorbed colours differ from fixed colours plus U")
    return {slot: assignment[i] for i, slot in enumerate(template.slots)}


@dataclass(frozen=True)
class ColourAbsorber:
    """An uncoloured copy of a template graph that can absorb any ell reservoir colours.

    ``edges`` are the template edges (the absorber slots); ``vertex_map``
    places the template in the host.
    """

    vertex_map: dict[int, int]
    edges: tuple[tuple[int, int], ...]
    template: AbsorberTemplate

    @property
    def fixed(self) -> frozenset[int]:
        return self.template.fixed_colours

    @property
    def reservoir(self) -> frozenset[int]:
        return self.template.reservoir

    @property
    def ell(self) -> int:
        return self.template.ell

    def colour(self, extra: Iterable[int], debug: bool = False) -> RainbowEmbedding:
        """Rainbow colouring of the copy using the fixed colours plus ``extra``."""
        assignment = absorb(self.template, extra, debug=debug)
        return RainbowEmbedding(
            vertex_map=self.vertex_map,
            colour_map=[ColouredEdge(u=a, v=b, colour=assignment[(a, b)]) for a, b in self.edges],
        )


def build_colour_absorber(
    collection: GraphCollection,
    H: nx.Graph,
    ell: int,
    config: PipelineConfig,
    embedder: Embedder | None = None,
    allowed_colours: Iterable[int] | None = None,
    vertices: Iterable[int] | None = None,
    pins: Mapping[int, int] | None = None,
    salt: int = 0,
) -> ColourAbsorber:
    """Embed H where edges lie in many colours and build an absorber on its edges.

    H is placed in the threshold graph at ``ceil(alpha * |allowed|)`` colours,
    so every edge of the copy accepts at least that many colours.

    Args:
        collection: The graph collection.
        H: Template on {0..h-1}.
        ell: Colours the absorber must take on demand.
        config: Pipeline constants.
        embedder: ``embedder(G, H, pins) -> vertex map``; defaults to a
            budgeted oracle.find_subgraph.
        allowed_colours: Colours the absorber may use (default: all).
        vertices: Host vertices available for the copy.
        pins: Template vertex -> host vertex constraints.

    Raises:
        EmbedFailed: H could not be placed.
        RetriesExhausted: From build_absorber.
    """
    allowed = sorted(range(collection.m) if allowed_colours is None else set(allowed_colours))
    if not allowed:
        raise InvalidInstance("no colours to build an absorber from")
    min_count = max(1, math.ceil(config.alpha * len(allowed)))
    G = threshold_graph(collection, min_count, allowed, vertices)

    if embedder is None:

        def embedder(G, H, pins):
            return find_subgraph(G, H, pins, budget=config.search_budget)

    try:
        vertex_map = embedder(G, H, pins)
    except NotFound as exc:
        raise EmbedFailed(f"absorber template could not be embedded: {exc}") from exc

    edges = tuple(sorted((min(a, b), max(a, b)) for a, b in H.edges()))
    slot_colours = {
        (a, b): collection.colours_containing(vertex_map[a], vertex_map[b], allowed)
        for a, b in edges
    }
    template = build_absorber(slot_colours, ell, config, colours=allowed, salt=salt)
    return ColourAbsorber(vertex_map=dict(vertex_map), edges=edges, template=template)
