"""Typer-based CLI commands and entry point for transversal.

Generates instances, runs the embedding pipelines, decides and verifies
with the exact oracle, and sweeps minimum-degree thresholds into CSV.

Commands:
    gen: Write an instance (plus metadata sidecar) from a construction
    solve: Run the tree, factor or patterned pipeline and write a witness
    oracle decide: Exact yes/no for small instances
    oracle verify: Re-check a witness against an instance
    sweep: Success rate against δ/n over random instances, as CSV
    history: View recent runs (requires output.save_runs)
    clear-history: Delete the run history
    version: Display current version
    config-info: Display current configuration

Exit codes: 0 success or "yes", 1 failure or "no" (including an exhausted
search budget), 2 usage error or malformed input, 3 internal invariant
violation.

Example:
    $ transversal gen random --model iid_gnp --n 40 --m 39 --p 0.9 --seed 7 -o inst.txt
    $ transversal solve tree -i inst.txt -o tree.json
    $ transversal oracle verify -i inst.txt -w tree.json
"""

import csv
import json
import time
from datetime import datetime, timezone
from multiprocessing import Pool
from pathlib import Path
from typing import Optional

import networkx as nx
import typer

from transversal import __version__
from transversal.config import get_config
from transversal.constructions import (
    MODELS,
    Construction,
    bridgeless_lower_bound,
    control_instance,
    patterned_counterexample,
    random_collection,
)
from transversal.core import GraphCollection
from transversal.errors import (
    InvalidInstance,
    InvariantViolation,
    PipelineStageError,
    RetriesExhausted,
    TransversalError,
)
from transversal.factors import builtin_spec, ft_factor, patterned_factor
from transversal.models import (
    OracleMode,
    Outcome,
    PipelineConfig,
    RunRecord,
    Witness,
)
from transversal.oracle import TransversalTemplate, exists_transversal_exact, verify_transversal
from transversal.persistence import (
    RunHistory,
    load_collection,
    load_witness,
    read_patterns,
    read_tree,
    save_collection,
    save_witness,
    write_metadata,
    write_patterns,
)
from transversal.trees import rainbow_spanning_tree, random_tree
from transversal.ui import (
    console,
    display_history,
    display_stage_failure,
    display_sweep,
    display_violation,
    display_witness,
    err_console,
    setup_logging,
)

app = typer.Typer(
    name="transversal",
    help="Rainbow spanning trees and F-factors in graph collections, with exact oracles",
    no_args_is_help=True,
)
oracle_app = typer.Typer(help="Exact decisions and witness verification", no_args_is_help=True)
app.add_typer(oracle_app, name="oracle")

CONSTRUCTIONS = ("identical", "random", "bridgeless-lb", "bridgeless-control", "patterned-cx")
SWEEP_MODES = ("perfect-matching", "hamilton", "tree", "factor")


def _fail(message: str, code: int) -> typer.Exit:
    err_console.print(f"[fail]error:[/fail] {message}")
    return typer.Exit(code)


def _load_instance(path: Path) -> GraphCollection:
    try:
        return load_collection(path)
    except OSError as e:
        raise _fail(f"cannot read {path}: {e}", 2)
    except InvalidInstance as e:
        raise _fail(f"{path}: {e}", 2)


def _read_file(path: Path, reader, *args):
    try:
        with open(path, "r", encoding="utf-8") as f:
            return reader(f, *args)
    except OSError as e:
        raise _fail(f"cannot read {path}: {e}", 2)
    except InvalidInstance as e:
        raise _fail(f"{path}: {e}", 2)


def _record(command: str, outcome: str, started: float, **fields) -> None:
    """Append to the run history when output.save_runs is enabled (never fails the run)."""
    if not get_config().get("output.save_runs", False):
        return
    RunHistory().save(
        RunRecord(
            command=command,
            outcome=outcome,
            runtime_ms=(time.perf_counter() - started) * 1000,
            timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
            **fields,
        )
    )


@app.callback()
def main_callback(
    verbose: int = typer.Option(0, "--verbose", "-v", count=True, help="-v for INFO, -vv for DEBUG logs"),
):
    """Rainbow embeddings in graph collections."""
    level = {0: get_config().get("logging.level", "WARNING"), 1: "INFO"}.get(verbose, "DEBUG")
    setup_logging(str(level))


@app.command()
def gen(
    construction: str = typer.Argument(..., help=f"One of: {', '.join(CONSTRUCTIONS)}"),
    output: Path = typer.Option(..., "--output", "-o", help="Instance file to write"),
    n: Optional[int] = typer.Option(None, "--n", help="Vertices (identical, random, patterned-cx)"),
    m: Optional[int] = typer.Option(None, "--m", help="Colours (identical, random)"),
    base: str = typer.Option("complete", "--base", help="identical: complete, cycle, path or gnp"),
    model: str = typer.Option("iid_gnp", "--model", help=f"random: {', '.join(MODELS)}"),
    p: float = typer.Option(0.5, "--p", help="Edge probability"),
    noise: float = typer.Option(0.0, "--noise", help="Noise probability"),
    target: Optional[float] = typer.Option(None, "--target", help="Minimum degree (fraction of n or absolute)"),
    d: Optional[int] = typer.Option(None, "--d", help="dirac_barrier: size of the hub set"),
    factor: str = typer.Option("C4", "--F", help="bridgeless-lb: the bridgeless graph F"),
    copies: int = typer.Option(2, "--copies", help="bridgeless-lb: number of copies of F"),
    t: int = typer.Option(3, "--t", help="patterned-cx: K_{t,t}"),
    k: int = typer.Option(3, "--k", help="patterned-cx: odd number of labels"),
    eps: float = typer.Option(0.5, "--eps", help="patterned-cx: density slack reported in the notes"),
    size_floor: Optional[int] = typer.Option(None, "--size-floor", help="patterned-cx: row/column set size"),
    verify: bool = typer.Option(False, "--verify", help="patterned-cx: confirm with the exact oracle"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Seed (default TRANSVERSAL_SEED)"),
):
    """Generate an instance and its metadata sidecar.

    Example:
        transversal gen identical --n 10 --m 9 --base complete -o k10.txt
        transversal gen bridgeless-lb --F C4 --copies 2 -o lb.txt
    """
    seed = get_config().get_seed() if seed is None else seed
    try:
        built = _construct(
            construction, n, m, base, model, p, noise, target, d, factor, copies, t, k, eps, size_floor, verify, seed
        )
    except InvalidInstance as e:
        raise _fail(str(e), 2)
    except RetriesExhausted as e:
        raise _fail(str(e), 1)

    save_collection(built.collection, output)
    sidecar = write_metadata(built.metadata, output)
    if built.patterns is not None:
        patterns_path = output.with_name(output.name + ".patterns")
        with open(patterns_path, "w", encoding="utf-8", newline="\n") as f:
            write_patterns(built.patterns, f)
        console.print(f"patterns: {patterns_path}")
    console.print(
        f"wrote {output} (n={built.collection.n}, m={built.collection.m}, "
        f"min degree {built.metadata.min_degree}); metadata in {sidecar}"
    )


def _construct(
    construction, n, m, base, model, p, noise, target, d, factor, copies, t, k, eps, size_floor, verify, seed
) -> Construction:
    if construction == "identical":
        if n is None or m is None:
            raise InvalidInstance("identical needs --n and --m")
        return random_collection(n, m, "identical", {"base": base, "p": p}, seed=seed)
    if construction == "random":
        if n is None or m is None:
            raise InvalidInstance("random needs --n and --m")
        params: dict = {"p": p}
        if noise:
            params["noise"] = noise
        if target is not None:
            params["target"] = target
        if d is not None:
            params["d"] = d
        return random_collection(n, m, model, params, seed=seed)
    if construction in ("bridgeless-lb", "bridgeless-control"):
        built = bridgeless_lower_bound(builtin_spec(factor), copies)
        return built if construction == "bridgeless-lb" else control_instance(built)
    if construction == "patterned-cx":
        if n is None:
            raise InvalidInstance("patterned-cx needs --n")
        return patterned_counterexample(t, k, n, eps=eps, size_floor=size_floor, verify=verify, seed=seed)
    raise InvalidInstance(f"unknown construction {construction!r} (choose from {', '.join(CONSTRUCTIONS)})")


@app.command()
def solve(
    kind: str = typer.Argument(..., help="tree, factor or patterned"),
    instance: Path = typer.Option(..., "--instance", "-i", help="Instance file"),
    output: Path = typer.Option(..., "--output", "-o", help="Witness file to write"),
    tree: Optional[Path] = typer.Option(None, "--tree", help="tree: tree file (default: random tree)"),
    max_degree: int = typer.Option(4, "--max-degree", help="tree: maximum degree of the random tree"),
    factor: str = typer.Option("K3", "--F", help="factor/patterned: K_r, C_k, P_k or K1,s"),
    t: Optional[int] = typer.Option(None, "--t", help="factor: colours per copy, 1 or e(F) (default e(F))"),
    patterns: Optional[Path] = typer.Option(None, "--patterns", help="patterned: pattern file"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Seed (default TRANSVERSAL_SEED)"),
):
    """Run a pipeline and write a witness that `oracle verify` accepts.

    Exit 0 with a witness on success; exit 1 with the failing stage otherwise.

    Example:
        transversal solve tree -i inst.txt -o tree.json --seed 3
        transversal solve factor -i inst.txt --F K3 --t 3 -o factor.json
    """
    started = time.perf_counter()
    config = get_config()
    pipeline = config.get_pipeline_config(seed)
    collection = _load_instance(instance)
    record = {"kind": kind, "instance": str(instance), "seed": pipeline.rng_seed}

    try:
        witness = _solve(kind, collection, pipeline, tree, max_degree, factor, t, patterns)
    except PipelineStageError as e:
        display_stage_failure(e)
        _record("solve", "failure", started, stage=e.stage, **record)
        raise typer.Exit(1)
    except InvariantViolation as e:
        _record("solve", "invariant_violation", started, **record)
        raise _fail(str(e), 3)
    except InvalidInstance as e:
        raise _fail(str(e), 2)
    except TransversalError as e:
        _record("solve", "failure", started, **record)
        raise _fail(str(e), 1)

    save_witness(witness, output)
    _record("solve", "success", started, **record)
    display_witness(witness, str(output))


def _solve(kind, collection, pipeline: PipelineConfig, tree, max_degree, factor, t, patterns) -> Witness:
    if kind == "tree":
        if tree is not None:
            T = _read_file(tree, read_tree)
        else:
            T = random_tree(collection.n, max_degree=max_degree, seed=pipeline.rng_seed)
        embedding = rainbow_spanning_tree(collection, T, pipeline)
        return Witness(
            kind="tree",
            mode=OracleMode.RAINBOW,
            n=collection.n,
            m=collection.m,
            template_order=T.number_of_nodes(),
            template_edges=sorted((min(e), max(e)) for e in T.edges()),
            seed=pipeline.rng_seed,
            embedding=embedding,
        )
    if kind not in ("factor", "patterned"):
        raise InvalidInstance(f"unknown kind {kind!r} (tree, factor, patterned)")

    spec = builtin_spec(factor, t)
    if kind == "factor":
        result = ft_factor(collection, spec, pipeline)
        ordered = None
    else:
        if patterns is None:
            raise InvalidInstance("patterned needs --patterns")
        given = _read_file(patterns, read_patterns, spec.e)
        result = patterned_factor(collection, spec, given, pipeline)
        ordered = [given[c.pattern] for c in result.copies]
    template = (
        TransversalTemplate.factor(spec.F, spec.t, len(result.copies))
        if ordered is None
        else TransversalTemplate.patterned(spec.F, ordered)
    )
    return Witness(
        kind=kind,
        mode=OracleMode.FACTOR if ordered is None else OracleMode.PATTERNED,
        n=collection.n,
        m=collection.m,
        template_order=template.order,
        template_edges=template.edges(),
        factor=spec.name,
        t=spec.t,
        patterns=ordered,
        seed=pipeline.rng_seed,
        embedding=result.to_embedding(spec.f_edges, spec.r),
        ft_factor=result,
    )


def _template(
    collection: GraphCollection,
    mode: OracleMode,
    template_file: Optional[Path],
    hamilton: bool,
    perfect_matching: bool,
    factor: Optional[str],
    t: Optional[int],
    patterns: Optional[Path],
) -> tuple[TransversalTemplate, Optional[str], Optional[int], Optional[list[list[int]]]]:
    if mode == OracleMode.RAINBOW:
        if hamilton:
            return TransversalTemplate.hamilton_cycle(collection.n), None, None, None
        if template_file is None:
            raise InvalidInstance("rainbow mode needs --template or --hamilton")
        return TransversalTemplate.rainbow(_read_file(template_file, read_tree)), None, None, None
    if mode == OracleMode.FACTOR:
        if perfect_matching:
            return TransversalTemplate.perfect_matching(collection.n), "K2", 1, None
        if factor is None:
            raise InvalidInstance("factor mode needs --F or --perfect-matching")
        spec = builtin_spec(factor, t)
        if collection.n % spec.r:
            raise InvalidInstance(f"{collection.n} vertices are not a multiple of {spec.r}")
        return TransversalTemplate.factor(spec.F, spec.t, collection.n // spec.r), spec.name, spec.t, None
    if factor is None or patterns is None:
        raise InvalidInstance("patterned mode needs --F and --patterns")
    spec = builtin_spec(factor)
    given = _read_file(patterns, read_patterns, spec.e)
    return TransversalTemplate.patterned(spec.F, given), spec.name, None, given


@oracle_app.command("decide")
def oracle_decide(
    instance: Path = typer.Option(..., "--instance", "-i", help="Instance file"),
    mode: OracleMode = typer.Option(OracleMode.RAINBOW, "--mode", help="rainbow, factor or patterned"),
    template_file: Optional[Path] = typer.Option(None, "--template", help="rainbow: template tree file"),
    hamilton: bool = typer.Option(False, "--hamilton", help="rainbow: Hamilton cycle"),
    perfect_matching: bool = typer.Option(False, "--perfect-matching", help="factor: perfect matching"),
    factor: Optional[str] = typer.Option(None, "--F", help="factor/patterned: F"),
    t: Optional[int] = typer.Option(None, "--t", help="factor: colours per copy"),
    patterns: Optional[Path] = typer.Option(None, "--patterns", help="patterned: pattern file"),
    budget: Optional[int] = typer.Option(None, "--budget", help="Search nodes (default oracle.budget)"),
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="Write the witness on 'yes'"),
):
    """Exhaustively decide whether a transversal copy exists.

    Prints yes, no or budget_exhausted; exits 0 only on yes.

    Example:
        transversal oracle decide -i lb.txt --mode factor --F C4
    """
    started = time.perf_counter()
    collection = _load_instance(instance)
    try:
        template, name, t_used, given = _template(
            collection, mode, template_file, hamilton, perfect_matching, factor, t, patterns
        )
    except InvalidInstance as e:
        raise _fail(str(e), 2)
    budget = budget if budget is not None else get_config().get("oracle.budget", 2_000_000)
    decision = exists_transversal_exact(collection, template, budget=budget)
    _record("decide", decision.outcome.value, started, kind=mode.value, instance=str(instance))

    console.print(f"{decision.outcome.value} ({decision.nodes} nodes)")
    if decision.outcome != Outcome.YES:
        raise typer.Exit(1)
    if output is not None:
        save_witness(
            Witness(
                kind="decide",
                mode=mode,
                n=collection.n,
                m=collection.m,
                template_order=template.order,
                template_edges=template.edges(),
                factor=name,
                t=t_used,
                patterns=given,
                embedding=decision.witness,
            ),
            output,
        )


def witness_template(witness: Witness) -> TransversalTemplate:
    """Rebuild the template a witness claims to embed."""
    if witness.mode == OracleMode.RAINBOW:
        graph = nx.Graph()
        graph.add_nodes_from(range(witness.template_order))
        graph.add_edges_from(witness.template_edges)
        return TransversalTemplate.rainbow(graph)
    if witness.factor is None:
        raise InvalidInstance("witness names no F")
    spec = builtin_spec(witness.factor, witness.t if witness.mode == OracleMode.FACTOR else None)
    if witness.mode == OracleMode.FACTOR:
        return TransversalTemplate.factor(spec.F, spec.t, witness.template_order // spec.r)
    if witness.patterns is None:
        raise InvalidInstance("patterned witness without patterns")
    return TransversalTemplate.patterned(spec.F, witness.patterns)


@oracle_app.command("verify")
def oracle_verify(
    instance: Path = typer.Option(..., "--instance", "-i", help="Instance file"),
    witness_path: Path = typer.Option(..., "--witness", "-w", help="Witness JSON"),
):
    """Re-check a witness against an instance; exit 0 iff every rule holds."""
    collection = _load_instance(instance)
    try:
        witness = load_witness(witness_path)
        template = witness_template(witness)
    except OSError as e:
        raise _fail(f"cannot read {witness_path}: {e}", 2)
    except InvalidInstance as e:
        raise _fail(str(e), 2)
    if (witness.n, witness.m) != (collection.n, collection.m):
        raise _fail(f"witness is for n={witness.n}, m={witness.m}; instance has n={collection.n}, m={collection.m}", 1)
    report = verify_transversal(collection, witness.embedding, template)
    display_violation(report)
    if not report:
        raise typer.Exit(1)


def parse_grid(grid: str) -> list[float]:
    """'a:b:step' -> [a, a+step, ..., <= b], rounded to 6 places."""
    try:
        a, b, step = (float(x) for x in grid.split(":"))
    except ValueError:
        raise InvalidInstance(f"bad grid {grid!r}, expected a:b:step") from None
    if step <= 0 or a > b or a < 0:
        raise InvalidInstance(f"bad grid {grid!r}: need 0 <= a <= b and step > 0")
    points = []
    i = 0
    while a + i * step <= b + 1e-9:
        points.append(round(a + i * step, 6))
        i += 1
    return points


def _sweep_colours(mode: str, n: int, factor: str) -> int:
    if mode == "perfect-matching":
        if n % 2:
            raise InvalidInstance("perfect matchings need even n")
        return n // 2
    if mode == "hamilton":
        return n
    if mode == "tree":
        return n - 1
    spec = builtin_spec(factor)
    if n % spec.r:
        raise InvalidInstance(f"n={n} is not a multiple of {spec.r}")
    return spec.t * n // spec.r


def sweep_trial(task: tuple) -> tuple[float, int, bool, float]:
    """One sweep trial: build a random instance at this δ/n and try to embed.

    Top level so worker processes can import it.
    """
    mode, n, delta, model, noise, factor, seed, budget, pipeline = task
    m = _sweep_colours(mode, n, factor)
    params = {"d": round(delta * n), "target": delta, "p": delta, "noise": noise}
    started = time.perf_counter()
    try:
        collection = random_collection(n, m, model, params, seed=seed).collection
        config = PipelineConfig(**pipeline).model_copy(update={"rng_seed": seed})
        if mode == "perfect-matching":
            ok = exists_transversal_exact(collection, TransversalTemplate.perfect_matching(n), budget).outcome == Outcome.YES
        elif mode == "hamilton":
            ok = exists_transversal_exact(collection, TransversalTemplate.hamilton_cycle(n), budget).outcome == Outcome.YES
        elif mode == "tree":
            rainbow_spanning_tree(collection, random_tree(n, max_degree=4, seed=seed), config)
            ok = True
        else:
            ft_factor(collection, builtin_spec(factor), config)
            ok = True
    except TransversalError:
        ok = False
    return delta, seed, ok, (time.perf_counter() - started) * 1000


@app.command()
def sweep(
    mode: str = typer.Option("perfect-matching", "--mode", help=f"One of: {', '.join(SWEEP_MODES)}"),
    n: int = typer.Option(10, "--n", help="Vertices per instance"),
    trials: int = typer.Option(50, "--trials", help="Instances per grid point"),
    delta_grid: str = typer.Option("0.3:0.7:0.1", "--delta-grid", help="δ/n grid as a:b:step"),
    output: Path = typer.Option(..., "--output", "-o", help="CSV file to write"),
    model: Optional[str] = typer.Option(None, "--model", help="Random model (default sweep.model)"),
    noise: Optional[float] = typer.Option(None, "--noise", help="Noise probability (default sweep.noise)"),
    factor: str = typer.Option("K3", "--F", help="factor mode: F (t = e(F))"),
    workers: Optional[int] = typer.Option(None, "--workers", help="Worker processes (default sweep.workers)"),
    budget: Optional[int] = typer.Option(None, "--budget", help="Oracle search nodes per trial"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Base seed (default TRANSVERSAL_SEED)"),
    no_timing: bool = typer.Option(False, "--no-timing", help="Write mean_runtime_ms as 0 (byte-stable CSV)"),
):
    """Success frequency against minimum degree, written as CSV.

    Columns: delta_over_n (grid point), trials, successes, mean_runtime_ms
    (0 with --no-timing). The instance at grid point δ/n has minimum degree
    about δ·n in every colour.

    Example:
        transversal sweep --mode perfect-matching --n 10 --trials 50 --delta-grid 0.3:0.7:0.1 -o pm.csv
    """
    config = get_config()
    try:
        if mode not in SWEEP_MODES:
            raise InvalidInstance(f"unknown mode {mode!r} (choose from {', '.join(SWEEP_MODES)})")
        grid = parse_grid(delta_grid)
        _sweep_colours(mode, n, factor)
    except InvalidInstance as e:
        raise _fail(str(e), 2)
    if trials < 1:
        raise _fail("--trials must be positive", 2)

    base_seed = config.get_seed() if seed is None else seed
    model = model or config.get("sweep.model", "dirac_barrier")
    noise = float(config.get("sweep.noise", 0.0) if noise is None else noise)
    budget = budget if budget is not None else config.get("oracle.budget", 2_000_000)
    workers = int(workers if workers is not None else config.get("sweep.workers", 1))
    pipeline = config.get_pipeline_config(base_seed).model_dump()
    tasks = [
        (mode, n, delta, model, noise, factor, base_seed * 1_000_003 + i * 10_000 + trial, budget, pipeline)
        for i, delta in enumerate(grid)
        for trial in range(trials)
    ]

    if workers > 1:
        with Pool(workers) as pool:
            results = pool.map(sweep_trial, tasks)
    else:
        results = [sweep_trial(task) for task in tasks]

    rows = []
    for delta in grid:
        hits = sorted((r for r in results if r[0] == delta), key=lambda r: r[1])
        rows.append(
            {
                "delta_over_n": delta,
                "trials": len(hits),
                "successes": sum(1 for r in hits if r[2]),
                "mean_runtime_ms": 0.0 if no_timing else round(sum(r[3] for r in hits) / len(hits), 3),
            }
        )
    output.parent.mkdir(parents=True, exist_ok=True)
    with open(output, "w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(
            f, fieldnames=["delta_over_n", "trials", "successes", "mean_runtime_ms"], lineterminator="\n"
        )
        writer.writeheader()
        writer.writerows(rows)
    display_sweep(rows)
    console.print(f"wrote {output}")


@app.command()
def history(
    last: int = typer.Option(10, "--last", "-n", help="Number of recent runs to show"),
    json_output: bool = typer.Option(False, "--json", help="Output as JSON array"),
):
    """View recent runs. Requires output.save_runs to be enabled."""
    if not get_config().get("output.save_runs", False):
        typer.echo(
            "Run history is disabled.\nEnable it in config.yaml: output.save_runs: true\n",
            err=True,
        )
        raise typer.Exit(1)

    records = RunHistory().load_last(last)
    if not records:
        typer.echo("No runs found in history.\n")
        return
    if json_output:
        print(json.dumps([r.model_dump() for r in records], indent=2))
    else:
        display_history(records)


@app.command()
def clear_history(
    yes: bool = typer.Option(False, "--yes", "-y", help="Skip the confirmation prompt"),
):
    """Delete the run history file."""
    runs = RunHistory()
    count = len(runs.load_all())
    if count == 0:
        typer.echo("No runs found in history. Nothing to delete.\n")
        return
    if not yes and not typer.confirm(f"Delete all {count} run(s)?", default=False):
        typer.echo("Deletion cancelled.\n")
        return
    if not runs.clear_all():
        raise _fail("failed to delete the run history", 1)
    typer.echo(f"Deleted {count} run(s).\n")


@app.command()
def version():
    """Display transversal version."""
    typer.echo(f"transversal version {__version__}")


@app.command()
def config_info():
    """Show the effective pipeline configuration and file locations."""
    from platformdirs import user_config_dir

    config = get_config()
    pipeline = config.get_pipeline_config()
    config_path = Path(user_config_dir("transversal", appauthor=False)) / "config.yaml"

    typer.echo("\ntransversal configuration\n")
    for name, value in pipeline.model_dump().items():
        typer.echo(f"  {name}: {value}")
    typer.echo(f"  oracle budget: {config.get('oracle.budget')}")
    typer.echo(f"  run history: {config.get_runs_path()} (enabled: {config.get('output.save_runs', False)})")
    typer.echo(f"\nEdit {config_path} to customize\n")


def main():
    """Entry point for CLI."""
    app()


if __name__ == "__main__":
    main()
