"""Degree-preserving random partitions, realized by sample-and-verify.

Every function here draws a uniformly random partition (or subset), recounts
the degree condition it promises exactly, and resamples up to
``config.retries`` times. Failure is reported with RetriesExhausted carrying
the best attempt and its worst violation (part, colour, vertex).
"""

import logging
import math
import random
from collections.abc import Iterable, Sequence

from transversal.core import GraphCollection
from transversal.errors import InvalidInstance, RetriesExhausted
from transversal.models import PartitionPlan, PipelineConfig, Violation

logger = logging.getLogger(__name__)

_TOL = 1e-9


def hypergeometric_tail(N: int, K: int, s: int, t: float) -> float:
    """Bound 2*exp(-2 t^2 / s) on P(|X - E X| >= t) for X ~ Hypergeometric(N, K, s).

    Used for retry-budget sizing and diagnostics only.

    Example:
        >>> round(hypergeometric_tail(100, 50, 10, 5), 5)
        0.01348
    """
    if not (0 <= K <= N and 0 <= s <= N):
        raise InvalidInstance("require 0 <= K <= N and 0 <= s <= N")
    if t <= 0:
        raise InvalidInstance("t must be positive")
    if s == 0:
        return 0.0
    return 2.0 * math.exp(-2.0 * t * t / s)


def _random_parts(rng: random.Random, ground: list[int], sizes: Sequence[int]) -> list[list[int]]:
    order = list(ground)
    rng.shuffle(order)
    parts, start = [], 0
    for size in sizes:
        parts.append(sorted(order[start : start + size]))
        start += size
    return parts


def _check_sizes(ground: Sequence[int], sizes: Sequence[int]) -> None:
    if any(s < 0 for s in sizes):
        raise InvalidInstance("part sizes must be non-negative")
    if sum(sizes) != len(ground):
        raise InvalidInstance(f"sizes sum to {sum(sizes)}, ground set has {len(ground)}")


def degree_violations(
    collection: GraphCollection,
    parts: Sequence[Sequence[int]],
    slack: float,
    ground_set: Iterable[int] | None = None,
) -> list[Violation]:
    """Every (part, colour, vertex) with d(v, V_i - v) < (d(v, ground)/|ground - v| - slack)|V_i - v|.

    A vertex is never its own neighbour, so it is left out of both the ground
    set and its own part when the ratio and the requirement are measured.
    Sorted by deficit, largest first. Vertices range over all of {0..n-1}.
    """
    ground = set(range(collection.n)) if ground_set is None else set(ground_set)
    if not ground:
        return []
    part_of = {v: i for i, part in enumerate(parts) for v in part}
    found: list[tuple[float, Violation]] = []
    for colour, g in enumerate(collection.colours):
        for v in range(collection.n):
            others = len(ground) - (v in ground)
            if others == 0:
                continue
            counts = [0] * len(parts)
            total = 0
            for w in g.adj[v]:
                if w in ground:
                    total += 1
                    counts[part_of[w]] += 1
            ratio = total / others
            own = part_of.get(v)
            for i, part in enumerate(parts):
                need = (ratio - slack) * (len(part) - (own == i))
                if counts[i] < need - _TOL:
                    deficit = need - counts[i]
                    found.append(
                        (
                            deficit,
                            Violation(
                                rule="degree",
                                message=f"d(v, V_{i}) = {counts[i]} < {need:.3f}",
                                part=i,
                                colour=colour,
                                vertex=v,
                            ),
                        )
                    )
    found.sort(key=lambda item: -item[0])
    return [violation for _, violation in found]


def split_preserving_degrees(
    collection: GraphCollection,
    ground_set: Iterable[int],
    sizes: Sequence[int],
    slack: float,
    config: PipelineConfig,
    salt: int = 0,
) -> PartitionPlan:
    """Uniformly random partition of ``ground_set`` that keeps relative degrees.

    For every part i, colour j and vertex v of the collection the returned
    plan satisfies d_j(v, V_i - v) >= (d_j(v, ground)/|ground - v| - slack)|V_i - v|.

    Args:
        collection: The graph collection.
        ground_set: Vertices to partition.
        sizes: Requested part sizes, summing to |ground_set|.
        slack: Allowed relative loss, in (0, 1).
        config: Supplies the seed and the retry budget.
        salt: Separates independent calls that share one config.

    Returns:
        PartitionPlan with empty bad_colours.

    Raises:
        RetriesExhausted: No attempt passed; ``best`` is the attempt with the
            fewest violations and ``worst`` its largest violation.
    """
    ground = sorted(set(ground_set))
    _check_sizes(ground, sizes)
    if not 0 < slack < 1:
        raise InvalidInstance("slack must lie in (0, 1)")
    rng = config.make_rng(salt)

    best: list[list[int]] | None = None
    best_violations: list[Violation] = []
    for attempt in range(1, config.retries + 1):
        parts = _random_parts(rng, ground, sizes)
        violations = degree_violations(collection, parts, slack, ground)
        if not violations:
            logger.debug("degree-preserving split found on attempt %d", attempt)
            return PartitionPlan(parts=parts, target_sizes=list(sizes), attempts=attempt)
        if best is None or len(violations) < len(best_violations):
            best, best_violations = parts, violations

    worst = best_violations[0]
    raise RetriesExhausted(
        f"no degree-preserving split of {len(ground)} vertices into {list(sizes)} "
        f"after {config.retries} attempts; worst: part {worst.part}, "
        f"colour {worst.colour}, vertex {worst.vertex}",
        attempts=config.retries,
        best=best,
        worst=worst,
    )


def _base_ratio(collection: GraphCollection, ground: set[int]) -> float:
    """min over colours j and v in ground of d_j(v, ground) / |ground|."""
    return min(
        collection.degree_into(j, v, ground) / len(ground)
        for j in range(collection.m)
        for v in ground
    )


def _bad_colours(
    collection: GraphCollection, part: Sequence[int], threshold: float
) -> list[int]:
    """Colours j with min induced degree of G_j[part] below threshold*|part|."""
    members = set(part)
    need = threshold * len(part) - _TOL
    bad = []
    for j in range(collection.m):
        if any(collection.degree_into(j, v, members) < need for v in part):
            bad.append(j)
    return bad


def _balanced_groups(sizes: Sequence[int], groups: int) -> list[list[int]]:
    """Split a list of block sizes into <= ``groups`` contiguous runs of similar total."""
    groups = min(groups, len(sizes))
    total = sum(sizes)
    out: list[list[int]] = [[] for _ in range(groups)]
    acc, g = 0, 0
    for idx, size in enumerate(sizes):
        remaining = len(sizes) - idx
        if (
            out[g]
            and g < groups - 1
            and (acc >= total * (g + 1) / groups or remaining <= groups - 1 - g)
        ):
            g += 1
        out[g].append(size)
        acc += size
    return [grp for grp in out if grp]


def good_partition(
    collection: GraphCollection,
    block_sizes: Sequence[int],
    k_min: int,
    slack: float,
    config: PipelineConfig,
    ground_set: Iterable[int] | None = None,
    recursive: bool = False,
    salt: int = 0,
) -> PartitionPlan:
    """Partition into blocks where few colours lose their scaled minimum degree.

    A colour j is bad for part V_i when delta(G_j[V_i]) < (delta - slack)|V_i|,
    where delta is the relative minimum degree of the collection on the ground
    set. The plan is accepted when every part has at most m / k_min^2 bad
    colours; bad colours are recorded per part.

    Args:
        collection: The graph collection.
        block_sizes: Sizes of the parts, each >= k_min, summing to |ground|.
        k_min: Smallest block size; sets the acceptance line m / k_min^2.
        slack: Allowed relative degree loss.
        config: Seed and retry budget.
        ground_set: Vertices to partition (default: all).
        recursive: Use the halving recursion (each round splits every part
            into at most four sub-parts) instead of direct sampling.
        salt: Separates independent calls that share one config.

    Raises:
        RetriesExhausted: No plan within the acceptance line was found.
    """
    ground = sorted(set(range(collection.n)) if ground_set is None else set(ground_set))
    _check_sizes(ground, block_sizes)
    if any(size < k_min for size in block_sizes):
        raise InvalidInstance(f"every block must have at least k_min={k_min} vertices")
    if not ground:
        return PartitionPlan(parts=[[] for _ in block_sizes], target_sizes=list(block_sizes))
    threshold = _base_ratio(collection, set(ground)) - slack
    limit = collection.m / (k_min * k_min)
    rng = config.make_rng(salt)

    def score(parts: list[list[int]]) -> tuple[int, list[list[int]]]:
        bad = [_bad_colours(collection, part, threshold) for part in parts]
        return max((len(b) for b in bad), default=0), bad

    if recursive:
        parts = _recursive_split(collection, ground, list(block_sizes), threshold, limit, rng, config)
        worst, bad = score(parts)
        if worst <= limit:
            return PartitionPlan(parts=parts, target_sizes=list(block_sizes), bad_colours=bad)
        raise RetriesExhausted(
            f"recursive partition left {worst} bad colours in a part (limit {limit:.2f})",
            attempts=config.retries,
            best=parts,
            worst={"bad_colours": worst, "limit": limit},
        )

    best: tuple[int, list[list[int]], list[list[int]]] | None = None
    for attempt in range(1, config.retries + 1):
        parts = _random_parts(rng, ground, block_sizes)
        worst, bad = score(parts)
        if worst <= limit:
            return PartitionPlan(
                parts=parts, target_sizes=list(block_sizes), bad_colours=bad, attempts=attempt
            )
        if best is None or worst < best[0]:
            best = (worst, parts, bad)
    assert best is not None
    part = max(range(len(best[2])), key=lambda i: len(best[2][i]))
    raise RetriesExhausted(
        f"every sampled partition had a part with more than {limit:.2f} bad colours",
        attempts=config.retries,
        best=best[1],
        worst=Violation(
            rule="bad_colours",
            message=f"part {part} has {best[0]} bad colours",
            part=part,
            colour=best[2][part][0] if best[2][part] else None,
        ),
    )


def _recursive_split(
    collection: GraphCollection,
    part: list[int],
    sizes: list[int],
    threshold: float,
    limit: float,
    rng: random.Random,
    config: PipelineConfig,
) -> list[list[int]]:
    if len(sizes) == 1:
        return [sorted(part)]
    groups = _balanced_groups(sizes, 4)
    group_totals = [sum(g) for g in groups]
    chosen: list[list[int]] | None = None
    chosen_score = math.inf
    for _ in range(config.retries):
        pieces = _random_parts(rng, part, group_totals)
        worst = max(len(_bad_colours(collection, p, threshold)) for p in pieces)
        if worst < chosen_score:
            chosen, chosen_score = pieces, worst
        if worst <= limit:
            break
    assert chosen is not None
    result: list[list[int]] = []
    for piece, group in zip(chosen, groups):
        result.extend(_recursive_split(collection, piece, group, threshold, limit, rng, config))
    return result


def sample_degree_preserving_subset(
    collection: GraphCollection,
    source_set: Iterable[int],
    size: int,
    pinned_vertex: int,
    slack: float,
    config: PipelineConfig,
    salt: int = 0,
) -> set[int]:
    """Random ``size``-subset A of the source such that {pinned} + A keeps its degree.

    With delta the relative minimum degree of the collection into the source
    set, the result satisfies delta(G_j[{pinned} + A]) >= (delta - slack)*size
    for every colour j.

    Raises:
        RetriesExhausted: No sampled subset passed.
    """
    source = sorted(set(source_set))
    if size > len(source) or size < 0:
        raise InvalidInstance(f"size {size} exceeds source set of {len(source)}")
    if not 0 <= pinned_vertex < collection.n:
        raise InvalidInstance(f"pinned vertex {pinned_vertex} outside 0..{collection.n - 1}")
    if not source:
        return set()
    base = min(
        collection.degree_into(j, v, source) / len(source)
        for j in range(collection.m)
        for v in set(source) | {pinned_vertex}
    )
    need = (base - slack) * size - _TOL
    rng = config.make_rng(salt)

    best: tuple[float, set[int]] | None = None
    for attempt in range(1, config.retries + 1):
        chosen = set(rng.sample(source, size))
        members = chosen | {pinned_vertex}
        low = min(
            collection.degree_into(j, v, members)
            for j in range(collection.m)
            for v in members
        )
        if low >= need:
            logger.debug("degree-preserving subset found on attempt %d", attempt)
            return chosen
        if best is None or low > best[0]:
            best = (low, chosen)
    raise RetriesExhausted(
        f"no {size}-subset kept minimum degree {need:.2f}",
        attempts=config.retries,
        best=best[1] if best else None,
        worst={"min_degree": best[0] if best else None, "required": need},
    )
