"""Data models for transversal embeddings.

This module defines the Pydantic models passed between the library, the
persistence layer and the CLI:

- PipelineConfig: hierarchy constants and budgets for the randomized pipelines
- ColouredEdge / RainbowEmbedding: a template mapped into a graph collection
  with one colour per template edge
- FactorCopy / FtFactor: copies of a small graph F, each with its colour list
- PartitionPlan: a vertex partition plus the colours that fail the degree
  condition in each part
- Violation / VerificationReport / Decision: oracle results
- Witness, RunRecord, ConstructionMetadata: on-disk artifacts

Everything that crosses a process or file boundary is one of these models, so
JSON output is validated on both sides and serialization is deterministic
(keys are emitted in field order, dict keys sorted on construction).

Example:
    >>> emb = RainbowEmbedding(
    ...     vertex_map={0: 3, 1: 5},
    ...     colour_map=[ColouredEdge(u=0, v=1, colour=2)],
    ... )
    >>> emb.colours()
    [2]
"""

import math
import random
from enum import Enum
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class SolveKind(str, Enum):
    """What a solver run or witness embeds."""

    TREE = "tree"
    FACTOR = "factor"
    PATTERNED = "patterned"


class OracleMode(str, Enum):
    """Transversal rules checked by the oracle."""

    RAINBOW = "rainbow"
    FACTOR = "factor"
    PATTERNED = "patterned"


class Outcome(str, Enum):
    """Result of an exact decision."""

    YES = "yes"
    NO = "no"
    BUDGET_EXHAUSTED = "budget_exhausted"


class PipelineConfig(BaseModel):
    """Constants of the randomized pipelines.

    The proofs only require ``1/n << gamma << beta << alpha``; at desk scale
    these are ordinary tunables. ``retries`` bounds every randomize-and-verify
    step and ``rng_seed`` makes every run reproducible.
    """

    alpha: float = Field(0.3, description="Minimum-degree slack above the threshold")
    beta: float = Field(0.1, description="Fraction of the template given to absorber and tail")
    beta_bar: float = Field(
        0.2, description="Fraction of colours a common-colour copy should lie in"
    )
    gamma: float = Field(0.05, description="Fraction of colours left for absorption")
    eps: float = Field(0.1, description="Colour surplus fraction")
    eta: float = Field(0.1, description="Colour surplus for factors with spare colours")
    mu: float = Field(0.15, description="Block size fraction when decomposing trees")
    k: int = Field(6, description="Block size (in copies) for factor partitions")
    C: float = Field(2.0, description="Surplus ratio: colours per template edge")
    retries: int = Field(20, description="Attempt budget per randomized step")
    slack: float = Field(0.15, description="Allowed relative degree loss when partitioning")
    rng_seed: int = Field(0, description="Seed of every random choice in a run")
    embed_budget: int = Field(200_000, description="Node budget of the tree embedder")
    search_budget: int = Field(200_000, description="Node budget of subgraph searches")
    enumeration_cap: int = Field(
        100_000, description="Maximum candidate F-factors enumerated per block"
    )
    core_size_factor: float = Field(
        2.0, description="Absorber core must have at least factor*l + 2 slots"
    )
    min_pipeline_vertices: int = Field(
        12, description="Below this size pipelines fall back to direct methods"
    )
    densify_rounds: int = Field(
        2, description="Local re-choices of base colours that add auxiliary edges"
    )
    debug: bool = Field(False, description="Check absorber switching step by step")

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_hierarchy(self) -> "PipelineConfig":
        for name in ("alpha", "beta", "beta_bar", "gamma", "eps", "eta", "mu", "C", "slack"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if not 0 < self.gamma < self.beta < self.alpha < 1:
            raise ValueError("require 0 < gamma < beta < alpha < 1")
        if self.retries < 1:
            raise ValueError("retries must be at least 1")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        return self

    def make_rng(self, salt: int = 0) -> random.Random:
        """Fresh generator for one step; ``salt`` separates independent steps."""
        return random.Random(self.rng_seed * 1_000_003 + salt)


class ColouredEdge(BaseModel):
    """One template edge and the colour assigned to its image."""

    u: int = Field(..., description="Template endpoint (smaller index)")
    v: int = Field(..., description="Template endpoint (larger index)")
    colour: int = Field(..., description="0-based colour index in the collection")

    @model_validator(mode="after")
    def _order(self) -> "ColouredEdge":
        if self.u > self.v:
            self.u, self.v = self.v, self.u
        return self

    @property
    def key(self) -> tuple[int, int]:
        return (self.u, self.v)


class RainbowEmbedding(BaseModel):
    """A template graph placed into a collection, one colour per edge."""

    vertex_map: dict[int, int] = Field(
        default_factory=dict, description="Template vertex -> vertex of the collection"
    )
    colour_map: list[ColouredEdge] = Field(
        default_factory=list, description="Colour of each covered template edge"
    )

    @field_validator("vertex_map")
    @classmethod
    def _sort_vertices(cls, value: dict[int, int]) -> dict[int, int]:
        return dict(sorted(value.items()))

    @field_validator("colour_map")
    @classmethod
    def _sort_edges(cls, value: list[ColouredEdge]) -> list[ColouredEdge]:
        return sorted(value, key=lambda e: (e.u, e.v))

    def colours(self) -> list[int]:
        """Colours in template-edge order."""
        return [e.colour for e in self.colour_map]

    def colour_of(self, u: int, v: int) -> int | None:
        key = (min(u, v), max(u, v))
        for edge in self.colour_map:
            if edge.key == key:
                return edge.colour
        return None

    def image_edges(self) -> list[tuple[int, int, int]]:
        """(x, y, colour) for every coloured template edge, x < y in the host."""
        out = []
        for e in self.colour_map:
            x, y = self.vertex_map[e.u], self.vertex_map[e.v]
            out.append((min(x, y), max(x, y), e.colour))
        return out


class FactorCopy(BaseModel):
    """One copy of F: ``vertices[i]`` is the image of F-vertex i.

    ``colours`` is aligned with F's edges in lexicographic (u, v) order.
    """

    vertices: list[int] = Field(..., description="Image of each F vertex")
    colours: list[int] = Field(..., description="Colour per F edge, lexicographic order")
    pattern: int | None = Field(None, description="Index of the prescribing pattern")

    def colour_set(self) -> set[int]:
        return set(self.colours)


class FtFactor(BaseModel):
    """Vertex-disjoint coloured copies of F."""

    copies: list[FactorCopy] = Field(default_factory=list)

    def vertices(self) -> set[int]:
        return {v for c in self.copies for v in c.vertices}

    def colours(self) -> set[int]:
        return {col for c in self.copies for col in c.colours}

    def extend(self, other: "FtFactor") -> "FtFactor":
        return FtFactor(copies=[*self.copies, *other.copies])

    def to_embedding(self, f_edges: list[tuple[int, int]], r: int) -> RainbowEmbedding:
        """Flatten into an embedding of ``len(copies)`` disjoint copies of F.

        Template vertex ``i*r + j`` is F-vertex j of copy i.
        """
        vertex_map: dict[int, int] = {}
        colour_map: list[ColouredEdge] = []
        for i, copy in enumerate(self.copies):
            for j, v in enumerate(copy.vertices):
                vertex_map[i * r + j] = v
            for (a, b), colour in zip(f_edges, copy.colours):
                colour_map.append(ColouredEdge(u=i * r + a, v=i * r + b, colour=colour))
        return RainbowEmbedding(vertex_map=vertex_map, colour_map=colour_map)


class PartitionPlan(BaseModel):
    """Disjoint vertex parts with requested sizes and their bad colours."""

    parts: list[list[int]] = Field(..., description="Disjoint vertex sets, each sorted")
    target_sizes: list[int] = Field(..., description="Requested size of each part")
    bad_colours: list[list[int]] = Field(
        default_factory=list,
        description="Per part, colours failing the degree condition inside it",
    )
    attempts: int = Field(1, description="Attempts used to find this plan")

    @model_validator(mode="after")
    def _check_parts(self) -> "PartitionPlan":
        if len(self.parts) != len(self.target_sizes):
            raise ValueError("one target size per part required")
        seen: set[int] = set()
        for part, size in zip(self.parts, self.target_sizes):
            if len(part) != size:
                raise ValueError(f"part has {len(part)} vertices, expected {size}")
            if seen.intersection(part):
                raise ValueError("parts overlap")
            seen.update(part)
        if not self.bad_colours:
            self.bad_colours = [[] for _ in self.parts]
        return self

    def ground_set(self) -> set[int]:
        return {v for part in self.parts for v in part}


class Violation(BaseModel):
    """First broken rule found by a verifier, with coordinates."""

    rule: str = Field(..., description="Identifier of the broken rule")
    message: str = Field(..., description="Human-readable explanation")
    edge: tuple[int, int] | None = None
    colour: int | None = None
    vertex: int | None = None
    part: int | None = None
    copy_index: int | None = None


class VerificationReport(BaseModel):
    ok: bool
    violation: Violation | None = None

    def __bool__(self) -> bool:
        return self.ok

    @classmethod
    def passed(cls) -> "VerificationReport":
        return cls(ok=True)

    @classmethod
    def failed(cls, rule: str, message: str, **coords: Any) -> "VerificationReport":
        return cls(ok=False, violation=Violation(rule=rule, message=message, **coords))


class Decision(BaseModel):
    """Answer of the exact oracle."""

    outcome: Outcome
    witness: RainbowEmbedding | None = None
    nodes: int = Field(0, description="Search nodes expanded")


class Witness(BaseModel):
    """Self-describing solver or oracle output file."""

    kind: str = Field(..., description="tree, factor, patterned or decide")
    mode: OracleMode = Field(..., description="Oracle mode that re-verifies this witness")
    n: int = Field(..., description="Vertex count of the instance")
    m: int = Field(..., description="Colour count of the instance")
    template_order: int = Field(..., description="Vertex count of the template")
    template_edges: list[tuple[int, int]] = Field(default_factory=list)
    factor: str | None = Field(None, description="Name of F for factor witnesses")
    t: int | None = Field(None, description="Colours per copy for factor witnesses")
    patterns: list[list[int]] | None = Field(None, description="Prescribed colours per copy")
    seed: int | None = None
    embedding: RainbowEmbedding
    ft_factor: FtFactor | None = None


class RunRecord(BaseModel):
    """One line of the run history."""

    command: str
    kind: str | None = None
    instance: str | None = None
    seed: int | None = None
    outcome: str
    stage: str | None = Field(None, description="Failing pipeline stage, if any")
    runtime_ms: float = 0.0
    timestamp: str = Field(..., description="ISO 8601 timestamp")

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "command": "solve",
                "kind": "tree",
                "instance": "inst.txt",
                "seed": 7,
                "outcome": "success",
                "runtime_ms": 812.5,
                "timestamp": "2026-10-18T14:30:00Z",
            }
        }
    )


class ConstructionMetadata(BaseModel):
    """JSON sidecar written next to every generated instance."""

    construction: str
    params: dict[str, Any] = Field(default_factory=dict)
    seed: int | None = None
    min_degree: int | None = None
    notes: list[str] = Field(default_factory=list)
