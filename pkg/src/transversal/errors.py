"""Exception hierarchy for transversal.

Library code raises these; only the CLI turns them into exit codes. Every
exception carries enough structured context (line numbers, failing part,
colour and vertex, pipeline stage) to be rendered without re-running the
failing computation.
"""

from typing import Any


class TransversalError(Exception):
    """Base class for all transversal errors."""


class InvalidInstance(TransversalError, ValueError):
    """Input violates a documented precondition (empty collection, bad sizes)."""


class ParseError(InvalidInstance):
    """Malformed instance, tree or pattern file.

    Attributes:
        line: 1-based line number where parsing failed.
        reason: Short machine-friendly reason (e.g. "malformed header").
    """

    def __init__(self, line: int, reason: str, detail: str = ""):
        self.line = line
        self.reason = reason
        self.detail = detail
        message = f"line {line}: {reason}"
        if detail:
            message += f" ({detail})"
        super().__init__(message)


class HypothesisViolated(InvalidInstance):
    """An exact routine's degree hypothesis failed; names the colour and vertex that broke it."""

    def __init__(self, message: str, colour: int | None = None, vertex: int | None = None):
        self.colour = colour
        self.vertex = vertex
        super().__init__(message)


class RetriesExhausted(TransversalError):
    """A randomize-and-verify step failed on every attempt.

    Attributes:
        attempts: Number of attempts made.
        best: Best attempt seen (object type depends on the raising step).
        worst: Description of the worst violation of the best attempt.
        details: Free-form diagnostics (e.g. achieved core connectivity).
    """

    def __init__(
        self,
        message: str,
        attempts: int = 0,
        best: Any = None,
        worst: Any = None,
        details: dict | None = None,
    ):
        self.attempts = attempts
        self.best = best
        self.worst = worst
        self.details = details or {}
        super().__init__(message)


class PropertyRUnattainable(RetriesExhausted):
    """No edge labelling with the requested covering property was sampled."""


class NotFound(TransversalError):
    """A search finished without finding the requested structure."""


class BudgetExhausted(NotFound):
    """A search hit its node budget before finishing."""

    def __init__(self, message: str, nodes: int = 0):
        self.nodes = nodes
        super().__init__(message)


class NoRouting(TransversalError):
    """Fewer vertex-disjoint paths exist than were requested."""


class EmbedFailed(TransversalError):
    """An embedding step failed. ``block`` names the failing block when staged."""

    def __init__(self, message: str, block: int | None = None):
        self.block = block
        super().__init__(message)


class PipelineStageError(TransversalError):
    """A multi-step pipeline failed at a named stage.

    Attributes:
        stage: Name of the failing step (e.g. "absorber", "bulk", "cover").
        cause: The underlying exception.
        partial: JSON-friendly dump of the partial state at failure.
    """

    def __init__(self, stage: str, cause: BaseException, partial: dict | None = None):
        self.stage = stage
        self.cause = cause
        self.partial = partial or {}
        super().__init__(f"stage '{stage}' failed: {cause}")


class InvariantViolation(TransversalError, AssertionError):
    """An internal self-check failed. Indicates a bug, not bad input."""
