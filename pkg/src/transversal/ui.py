"""Terminal rendering for transversal.

Rich output when stdout is a terminal, plain text otherwise, so results can
be redirected into files and diffed. Also installs the rich log handler used
by the CLI.

Main Functions:
- setup_logging(): RichHandler on the ``transversal`` logger
- display_witness(): summary of a solver or oracle witness
- display_stage_failure(): panel naming the failed pipeline stage
- display_violation(): first rule a witness breaks
- display_sweep(): table of sweep rows
- display_history(): recent runs
"""

import logging
import sys

from rich import box
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.table import Table
from rich.theme import Theme

from transversal.errors import PipelineStageError
from transversal.models import RunRecord, VerificationReport, Witness

transversal_theme = Theme(
    {
        "ok": "bold green",
        "fail": "bold red",
        "stage": "bold #FFD700",
        "muted": "#A8B5BF",
        "table.header": "bold #FFD700",
        "panel.border": "#AF00FF",
    }
)

console = Console(theme=transversal_theme)
err_console = Console(theme=transversal_theme, stderr=True)


def _is_terminal() -> bool:
    """Check if stdout is connected to a terminal (TTY)."""
    return sys.stdout.isatty()


def setup_logging(level: str = "WARNING") -> None:
    """Route ``transversal.*`` log records through a RichHandler on stderr."""
    logger = logging.getLogger("transversal")
    logger.handlers.clear()
    handler = RichHandler(console=err_console, show_path=False, rich_tracebacks=False)
    handler.setFormatter(logging.Formatter("%(message)s"))
    logger.addHandler(handler)
    logger.setLevel(level.upper())
    logger.propagate = False


def display_witness(witness: Witness, path: str | None = None) -> None:
    """Summarise a witness: what was embedded, its colours and where it was written."""
    colours = sorted(set(witness.embedding.colours()))
    what = witness.kind if witness.factor is None else f"{witness.kind} {witness.factor} (t={witness.t})"
    lines = [
        f"embedded: {what}",
        f"instance: n={witness.n}, m={witness.m}",
        f"template: {witness.template_order} vertices, {len(witness.template_edges)} edges",
        f"colours used: {len(colours)}",
    ]
    if witness.ft_factor is not None:
        lines.append(f"copies: {len(witness.ft_factor.copies)}")
    if witness.seed is not None:
        lines.append(f"seed: {witness.seed}")
    if path:
        lines.append(f"written to: {path}")

    if not _is_terminal():
        print("\n".join(lines))
        return
    console.print(Panel("\n".join(lines), title="[ok]success[/ok]", border_style="green", expand=False))


def display_stage_failure(exc: PipelineStageError) -> None:
    """Staged failure report on stderr: stage, cause and the partial state."""
    rows = [f"stage: {exc.stage}", f"cause: {type(exc.cause).__name__}: {exc.cause}"]
    rows += [f"{key}: {value}" for key, value in sorted(exc.partial.items())]
    if not _is_terminal():
        print("\n".join(["failure"] + rows), file=sys.stderr)
        return
    err_console.print(
        Panel("\n".join(rows), title="[fail]pipeline failed[/fail]", border_style="red", expand=False)
    )


def display_violation(report: VerificationReport) -> None:
    """Print the rule a witness breaks, with whatever coordinates were reported."""
    v = report.violation
    if v is None:
        console.print("[ok]ok[/ok]")
        return
    coords = {
        "edge": v.edge,
        "colour": v.colour,
        "vertex": v.vertex,
        "part": v.part,
        "copy": v.copy_index,
    }
    where = ", ".join(f"{k}={val}" for k, val in coords.items() if val is not None)
    err_console.print(f"[fail]{v.rule}[/fail]: {v.message}" + (f" ({where})" if where else ""))


def display_sweep(rows: list[dict]) -> None:
    """Table of sweep results (one row per grid point)."""
    if not _is_terminal():
        return
    table = Table(box=box.SIMPLE_HEAVY, header_style="table.header", title="Sweep")
    table.add_column("δ/n", justify="right")
    table.add_column("trials", justify="right")
    table.add_column("successes", justify="right")
    table.add_column("rate", justify="right")
    table.add_column("mean ms", justify="right", style="muted")
    for row in rows:
        rate = row["successes"] / row["trials"] if row["trials"] else 0.0
        table.add_row(
            f"{row['delta_over_n']:.3f}",
            str(row["trials"]),
            str(row["successes"]),
            f"{rate:.2f}",
            f"{row['mean_runtime_ms']:.1f}",
        )
    console.print(table)


def display_history(records: list[RunRecord]) -> None:
    """Recent runs, newest last."""
    table = Table(box=box.SIMPLE_HEAVY, header_style="table.header")
    for column in ("when", "command", "kind", "instance", "seed", "outcome", "stage", "ms"):
        table.add_column(column)
    for r in records:
        style = "ok" if r.outcome in ("success", "yes") else "fail"
        table.add_row(
            r.timestamp[:16].replace("T", " "),
            r.command,
            r.kind or "",
            r.instance or "",
            "" if r.seed is None else str(r.seed),
            f"[{style}]{r.outcome}[/{style}]",
            r.stage or "",
            f"{r.runtime_ms:.0f}",
        )
    console.print(table)
