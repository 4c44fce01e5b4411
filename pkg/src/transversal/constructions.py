"""Instance generators.

Two extremal families and a set of random benchmark models:

- bridgeless_lower_bound: collections with minimum degree floor(rn/2) - 1
  and no rainbow F-factor, for every bridgeless F
- patterned_counterexample: dense collections with no copy of K_{t,t}
  following a fixed pattern
- random_collection: reproducible random collections for sweeps and tests

Every generator returns a ``Construction``: the collection, the metadata
written to the instance sidecar and, where relevant, the patterns.

Example:
    >>> built = random_collection(10, 9, "identical", {"base": "complete"}, seed=0)
    >>> built.collection.min_degree()
    9
"""

import itertools
import logging
import math
import random
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any

import networkx as nx

from transversal.core import GraphCollection
from transversal.errors import InvalidInstance, PropertyRUnattainable, RetriesExhausted
from transversal.factors import FactorSpec
from transversal.models import ConstructionMetadata, Outcome
from transversal.oracle import DEFAULT_BUDGET, TransversalTemplate, exists_transversal_exact

logger = logging.getLogger(__name__)

MODELS = ("iid_gnp", "shared_base_plus_noise", "min_degree_conditioned", "identical", "dirac_barrier")


@dataclass
class Construction:
    """A generated collection with its sidecar metadata (and patterns, if any)."""

    collection: GraphCollection
    metadata: ConstructionMetadata
    patterns: list[list[int]] | None = field(default=None)


def _clique_edges(vertices: Sequence[int]) -> list[tuple[int, int]]:
    return list(itertools.combinations(vertices, 2))


def bridgeless_lower_bound(spec: FactorSpec, copies: int) -> Construction:
    """Collection on rn vertices with no rainbow F-factor although δ = floor(rn/2) - 1.

    The vertices split into A (the first floor(rn/2)) and B. Every colour but
    the last is the union of the cliques on A and on B; the last colour is
    the complete bipartite graph (A, B). A rainbow factor must use the last
    colour, so some copy has an edge across (A, B); F has no bridge, so that
    copy has a second crossing edge, whose colour can only be the last one
    again.

    Raises:
        InvalidInstance: F has a bridge, t != e(F) or copies < 1.
    """
    if spec.has_bridge:
        raise InvalidInstance(f"{spec.name} has a bridge; the construction needs a bridgeless F")
    if spec.t != spec.e:
        raise InvalidInstance("the construction is for rainbow factors (t = e(F))")
    if copies < 1:
        raise InvalidInstance("need at least one copy")
    n = spec.r * copies
    m = spec.t * copies
    half = n // 2
    A, B = range(half), range(half, n)
    inside = _clique_edges(A) + _clique_edges(B)
    crossing = [(a, b) for a in A for b in B]
    collection = GraphCollection(n, [inside] * (m - 1) + [crossing])
    return Construction(
        collection=collection,
        metadata=ConstructionMetadata(
            construction="bridgeless-lb",
            params={"F": spec.name, "copies": copies, "t": spec.t},
            min_degree=collection.min_degree(),
            notes=[f"A = 0..{half - 1}", f"colour {m - 1} is the complete bipartite graph (A, B)"],
        ),
    )


def control_instance(lower_bound: Construction) -> Construction:
    """The lower-bound collection with its bipartite colour replaced by a copy of colour 0."""
    lists = lower_bound.collection.edge_lists()
    if len(lists) < 2:
        raise InvalidInstance("control instance needs at least two colours")
    collection = GraphCollection(lower_bound.collection.n, lists[:-1] + [lists[0]])
    meta = lower_bound.metadata
    return Construction(
        collection=collection,
        metadata=ConstructionMetadata(
            construction=f"{meta.construction}-control",
            params=dict(meta.params),
            seed=meta.seed,
            min_degree=collection.min_degree(),
            notes=["last colour replaced by a copy of colour 0"],
        ),
    )


def round_robin_one_factorization(v: int) -> list[list[tuple[int, int]]]:
    """Partition E(K_v) into v - 1 perfect matchings (circle method).

    Vertex v-1 stays fixed; in round i it meets vertex i and the others pair
    up symmetrically around i on a circle of v-1 positions.

    Raises:
        InvalidInstance: v is odd or not positive.
    """
    if v < 2 or v % 2:
        raise InvalidInstance(f"K_{v} has no 1-factorization (need even v >= 2)")
    ring = v - 1
    rounds = []
    for i in range(ring):
        matching = [(i, v - 1)]
        for j in range(1, v // 2):
            a, b = (i + j) % ring, (i - j) % ring
            matching.append((min(a, b), max(a, b)))
        rounds.append(sorted(matching))
    return rounds


def balanced_parts(n: int, parts: int) -> list[list[int]]:
    """Consecutive parts whose sizes differ by at most one, larger parts first."""
    base, extra = divmod(n, parts)
    out, start = [], 0
    for j in range(parts):
        size = base + (1 if j < extra else 0)
        out.append(list(range(start, start + size)))
        start += size
    return out


def covers_all_labels(psi: Sequence[Sequence[int]], k: int, floor: int) -> bool:
    """True iff every A' x B' with |A'|, |B'| >= floor sees all k labels.

    ``psi[a][b]`` is the label of edge ab. Only sets of size exactly
    ``floor`` need checking, since labels only grow with the sets.
    """
    t = len(psi)
    full = set(range(k))
    for rows in itertools.combinations(range(t), floor):
        for cols in itertools.combinations(range(t), floor):
            if {psi[a][b] for a in rows for b in cols} != full:
                return False
    return True


def _patterned_collection(
    psi: Sequence[Sequence[int]], k: int, n: int
) -> GraphCollection:
    t = len(psi)
    parts = balanced_parts(n, k + 1)
    part_of = {x: j for j, part in enumerate(parts) for x in part}
    matchings = round_robin_one_factorization(k + 1)
    removed = [set(m) for m in matchings]
    lists = []
    for a in range(t):
        for b in range(t):
            banned = removed[psi[a][b]]
            lists.append(
                [
                    (x, y)
                    for x, y in itertools.combinations(range(n), 2)
                    if part_of[x] != part_of[y]
                    and (min(part_of[x], part_of[y]), max(part_of[x], part_of[y])) not in banned
                ]
            )
    return GraphCollection(n, lists)


def patterned_counterexample(
    t: int,
    k: int,
    n: int,
    eps: float = 0.5,
    size_floor: int | None = None,
    verify: bool = False,
    seed: int = 0,
    retries: int = 20,
    budget: int | None = DEFAULT_BUDGET,
) -> Construction:
    """t² colours on n vertices, dense, with no K_{t,t} following the identity pattern.

    Edges of K_{t,t} get labels psi in [k]. The vertices split into k+1
    nearly balanced parts; colour i (the i-th edge ab of K_{t,t}) is the
    complete (k+1)-partite graph minus the part pairs matched in the
    psi(ab)-th perfect matching of K_{k+1}. Pattern 0 gives edge i colour i.

    The first candidate labelling is the cyclic one, (a + b) mod k; later
    candidates are uniform. A candidate is accepted once every pair of
    row/column sets of size ``size_floor`` sees all k labels, or, with
    ``verify``, once the exact oracle confirms there is no patterned copy.

    Raises:
        InvalidInstance: k even, t < 1 or n < k + 1.
        PropertyRUnattainable: No candidate was accepted.
    """
    if k < 1 or k % 2 == 0:
        raise InvalidInstance("k must be odd")
    if t < 1 or n < k + 1:
        raise InvalidInstance(f"need t >= 1 and n >= k + 1 = {k + 1}")
    floor = size_floor if size_floor is not None else max(1, math.ceil(t / (10 * k)))
    if not 1 <= floor <= t:
        raise InvalidInstance(f"size floor {floor} outside 1..{t}")
    rng = random.Random(seed)
    F = nx.complete_bipartite_graph(t, t)
    patterns = [list(range(t * t))]
    template = TransversalTemplate.patterned(F, patterns, name=f"K{t},{t}")

    for attempt in range(retries):
        if attempt == 0:
            psi = [[(a + b) % k for b in range(t)] for a in range(t)]
        else:
            psi = [[rng.randrange(k) for _ in range(t)] for _ in range(t)]
        covered = covers_all_labels(psi, k, floor)
        if not covered and not verify:
            continue
        collection = _patterned_collection(psi, k, n)
        notes = [f"labels cover every {floor}x{floor} block: {covered}"]
        if verify:
            decision = exists_transversal_exact(collection, template, budget=budget)
            logger.info("candidate %d: oracle answered %s", attempt, decision.outcome.value)
            if decision.outcome != Outcome.NO:
                continue
            notes.append(f"exact search found no patterned copy ({decision.nodes} nodes)")
        delta = collection.min_degree()
        notes.append(f"min degree {delta} {'>=' if delta >= (1 - eps) * n else '<'} (1 - eps) n")
        return Construction(
            collection=collection,
            patterns=patterns,
            metadata=ConstructionMetadata(
                construction="patterned-cx",
                params={"t": t, "k": k, "n": n, "eps": eps, "size_floor": floor, "psi": psi},
                seed=seed,
                min_degree=delta,
                notes=notes,
            ),
        )
    raise PropertyRUnattainable(
        f"no labelling of K_{t},{t} with {k} labels accepted after {retries} candidates",
        attempts=retries,
        details={"size_floor": floor, "verify": verify},
    )


def _gnp_edges(n: int, p: float, rng: random.Random) -> list[tuple[int, int]]:
    return sorted(nx.gnp_random_graph(n, p, seed=rng.randrange(2**32)).edges())


def _base_graph(n: int, base: str, p: float, rng: random.Random) -> list[tuple[int, int]]:
    if base == "complete":
        return _clique_edges(range(n))
    if base == "cycle":
        return sorted((min(u, v), max(u, v)) for u, v in nx.cycle_graph(n).edges())
    if base == "path":
        return sorted(nx.path_graph(n).edges())
    if base == "gnp":
        return _gnp_edges(n, p, rng)
    raise InvalidInstance(f"unknown base graph {base!r} (complete, cycle, path, gnp)")


def _noisy(edges: list[tuple[int, int]], n: int, noise: float, rng: random.Random) -> list[tuple[int, int]]:
    present = set(edges)
    out = []
    for pair in itertools.combinations(range(n), 2):
        keep = pair in present
        if rng.random() < noise:
            keep = not keep
        if keep:
            out.append(pair)
    return out


def _min_degree_target(n: int, target: Any) -> int:
    value = float(target)
    return math.ceil(value * n) if 0 < value < 1 else int(value)


def random_collection(
    n: int,
    m: int,
    model: str,
    params: dict[str, Any] | None = None,
    seed: int = 0,
) -> Construction:
    """Reproducible random collection.

    Models and their params:

    - ``iid_gnp``: independent G(n, p) per colour (``p``).
    - ``shared_base_plus_noise``: one G(n, p) base, each pair flipped with
      probability ``noise`` independently per colour.
    - ``min_degree_conditioned``: G(n, p) per colour, resampled until its
      minimum degree reaches ``target`` (a fraction of n, or an absolute
      degree), at most ``retries`` times per colour.
    - ``identical``: m copies of ``base`` (complete, cycle, path or gnp).
    - ``dirac_barrier``: a set S of ``d`` vertices joined to everything, the
      rest independent apart from noise edges (probability ``noise``); the
      minimum degree is d and, for d < n/2 and no noise, no perfect matching
      exists.

    Raises:
        InvalidInstance: Unknown model or bad parameters.
        RetriesExhausted: ``min_degree_conditioned`` missed its target.
    """
    params = dict(params or {})
    if n < 0 or m < 1:
        raise InvalidInstance("need n >= 0 and m >= 1")
    rng = random.Random(seed)
    p = float(params.get("p", 0.5))
    if not 0 <= p <= 1:
        raise InvalidInstance(f"p={p} outside [0, 1]")
    notes: list[str] = []

    if model == "iid_gnp":
        lists = [_gnp_edges(n, p, rng) for _ in range(m)]
    elif model == "shared_base_plus_noise":
        base = _gnp_edges(n, p, rng)
        noise = float(params.get("noise", 0.05))
        lists = [_noisy(base, n, noise, rng) for _ in range(m)]
    elif model == "min_degree_conditioned":
        target = _min_degree_target(n, params.get("target", 0.5))
        retries = int(params.get("retries", 20))
        lists = []
        for colour in range(m):
            for attempt in range(1, retries + 1):
                edges = _gnp_edges(n, p, rng)
                g = nx.Graph(edges)
                g.add_nodes_from(range(n))
                if n == 0 or min(d for _, d in g.degree()) >= target:
                    lists.append(edges)
                    break
            else:
                raise RetriesExhausted(
                    f"colour {colour} missed minimum degree {target} in {retries} samples",
                    attempts=retries,
                    details={"colour": colour, "target": target},
                )
        notes.append(f"minimum degree target {target}")
    elif model == "identical":
        base = str(params.get("base", "complete"))
        lists = [_base_graph(n, base, p, rng)] * m
    elif model == "dirac_barrier":
        d = _min_degree_target(n, params.get("d", params.get("target", n // 2)))
        if not 0 <= d <= n:
            raise InvalidInstance(f"barrier size {d} outside 0..{n}")
        noise = float(params.get("noise", 0.0))
        S = range(d)
        hub = _clique_edges(S) + [(s, x) for s in S for x in range(d, n)]
        lists = [sorted(hub + [e for e in _clique_edges(range(d, n)) if rng.random() < noise]) for _ in range(m)]
        notes.append(f"S = 0..{d - 1}")
    else:
        raise InvalidInstance(f"unknown model {model!r} (choose from {', '.join(MODELS)})")

    collection = GraphCollection(n, lists)
    return Construction(
        collection=collection,
        metadata=ConstructionMetadata(
            construction=model,
            params={"n": n, "m": m, **params},
            seed=seed,
            min_degree=collection.min_degree() if n else 0,
            notes=notes,
        ),
    )
