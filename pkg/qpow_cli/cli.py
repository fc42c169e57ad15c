import dataclasses
from datetime import datetime, timezone
from functools import wraps
from pathlib import Path
from typing import Any, Callable, List, Optional

import numpy as np
import typer
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from .energy_estimator import EnergyEstimator
from .error_collector import ErrorCollector
from .errors import DomainError, QpowError, UsageError
from .feedback import FeedbackManager
from .grover_sim import ToyPowInstance, count_marked, lowest_digest_mask, marked_mask, run
from .netstats_io import (
    REFERENCE_SCENARIO,
    Column,
    Quantity,
    ReportDocument,
    ReportFormat,
    ReportRow,
    Scenario,
    bundled_scenario_path,
    list_bundled_scenarios,
    resolve_scenario,
    write_report,
)
from .physics import TemperatureK
from .quantum_model import grover_success_probability, iterations_for_success, optimal_iterations, pow_target_m
from .race_sim import MinerAgent, MinerKind, RaceConfig, grover_block_probability, run_race
from .validator import ValidatorEngine

app = typer.Typer(help="Landauer-limit energy model of classical and quantum Proof-of-Work mining.")
console = Console(stderr=True)

EXIT_FAILURE = 1
EXIT_ERROR = 2

SCENARIO_HELP = "Bundled scenario name or path to a scenario YAML file"


def handle_errors(func: Callable) -> Callable:
    """Map package errors to exit code 2 with a one-line message."""
    @wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except typer.Exit:
            raise
        except QpowError as e:
            console.print(f"[red]Error: {escape(str(e))}[/red]", soft_wrap=True)
            raise typer.Exit(EXIT_ERROR)
        except Exception as e:
            console.print(f"[red]Unexpected error: {escape(str(e))}[/red]", soft_wrap=True)
            raise typer.Exit(EXIT_ERROR)
    return wrapper


def parse_ratios(value: Optional[str]) -> Optional[List[float]]:
    if value is None:
        return None
    try:
        ratios = [float(part) for part in value.split(",") if part.strip()]
    except ValueError:
        raise UsageError(f"--ratio expects comma-separated numbers, got {value!r}")
    if not ratios:
        raise UsageError("--ratio needs at least one value")
    return ratios


def load(scenario: Optional[str], temperature: Optional[float] = None) -> Scenario:
    loaded = resolve_scenario(scenario)
    if temperature is not None:
        try:
            loaded = dataclasses.replace(loaded, temperature_k=TemperatureK(temperature))
        except DomainError as e:
            raise UsageError(f"--temperature: {e}")
    return loaded


def emit(doc: ReportDocument, fmt: ReportFormat, out: Optional[Path], timestamp: bool) -> None:
    metadata = doc.metadata
    if timestamp:
        metadata = metadata + (("generated_at", datetime.now(timezone.utc).isoformat()),)
    write_report(dataclasses.replace(doc, format=fmt, metadata=metadata), fmt, out)


@app.command()
@handle_errors
def tables(
    scenario: Optional[str] = typer.Option(None, "--scenario", "-s", help=SCENARIO_HELP),
    temperature: Optional[float] = typer.Option(None, "--temperature", help="Heat-sink temperature in kelvin"),
    ratio: Optional[str] = typer.Option(None, "--ratio", help="Comma-separated efficiency ratios"),
    check: bool = typer.Option(False, "--check", help="Compare against the published cells"),
    tolerance: float = typer.Option(0.01, "--tolerance", help="Relative tolerance for --check"),
    fmt: ReportFormat = typer.Option(ReportFormat.TEXT, "--format", "-f", help="Output format"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write the report to a file"),
    timestamp: bool = typer.Option(False, "--timestamp", help="Record generation time in metadata"),
) -> None:
    """Landauer minimum, projected energies and break-even ratio per infrastructure."""
    estimator = EnergyEstimator(load(scenario, temperature), parse_ratios(ratio))
    emit(estimator.tables_report(), fmt, out, timestamp)
    if not check:
        return

    result = estimator.check_against_reference(tolerance)
    collector = ErrorCollector()
    collector.collect_check(result)
    collector.display()
    console.print(
        f"Max relative deviation from published cells: {result.max_deviation:.3%} "
        f"over {len(result.cells)} cells"
    )
    if result.passed:
        console.print(f"[green]All cells within {tolerance:.0%}[/green]")
    elif result.strict:
        console.print(f"[red]{len(result.failures)} cells outside a relative tolerance of {tolerance:g}[/red]")
        raise typer.Exit(EXIT_FAILURE)
    else:
        console.print(
            f"[yellow]Warning: {len(result.failures)} cells deviate; "
            f"the check is informative for scenario {result.scenario_id!r}[/yellow]"
        )


@app.command()
@handle_errors
def energy(
    scenario: Optional[str] = typer.Option(None, "--scenario", "-s", help=SCENARIO_HELP),
    temperature: Optional[float] = typer.Option(None, "--temperature", help="Heat-sink temperature in kelvin"),
    ratio: Optional[str] = typer.Option(None, "--ratio", help="Comma-separated efficiency ratios"),
    fmt: ReportFormat = typer.Option(ReportFormat.TEXT, "--format", "-f", help="Output format"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write the report to a file"),
    timestamp: bool = typer.Option(False, "--timestamp", help="Record generation time in metadata"),
) -> None:
    """Per-infrastructure Landauer minimum and projected energy per block."""
    estimator = EnergyEstimator(load(scenario, temperature), parse_ratios(ratio))
    emit(estimator.energy_report(), fmt, out, timestamp)


@app.command()
@handle_errors
def breakeven(
    scenario: Optional[str] = typer.Option(None, "--scenario", "-s", help=SCENARIO_HELP),
    temperature: Optional[float] = typer.Option(None, "--temperature", help="Heat-sink temperature in kelvin"),
    ratio: Optional[str] = typer.Option(None, "--ratio", help="Comma-separated efficiency ratios"),
    fmt: ReportFormat = typer.Option(ReportFormat.TEXT, "--format", "-f", help="Output format"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write the report to a file"),
    timestamp: bool = typer.Option(False, "--timestamp", help="Record generation time in metadata"),
) -> None:
    """Efficiency ratio each infrastructure needs to equal the classical actual energy."""
    estimator = EnergyEstimator(load(scenario, temperature), parse_ratios(ratio))
    emit(estimator.breakeven_report(), fmt, out, timestamp)


@app.command()
@handle_errors
def grover(
    qubits: int = typer.Option(3, "--qubits", "-n", help="Nonce register width"),
    digest_bits: int = typer.Option(8, "--digest-bits", help="Toy hash digest width"),
    target: Optional[int] = typer.Option(None, "--target", help="Digests at or below this value are marked"),
    marked: Optional[int] = typer.Option(None, "--marked", "-m", help="Mark exactly this many nonces"),
    iterations: Optional[int] = typer.Option(None, "--iterations", "-t", help="Grover iterations"),
    p_target: Optional[float] = typer.Option(
        None, "--p-target", help="Smallest iteration count reaching this probability"
    ),
    seed: int = typer.Option(0, "--seed", help="Measurement seed (unsigned 64-bit)"),
    fmt: ReportFormat = typer.Option(ReportFormat.TEXT, "--format", "-f", help="Output format"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write the report to a file"),
    timestamp: bool = typer.Option(False, "--timestamp", help="Record generation time in metadata"),
) -> None:
    """Run the mining loop on the statevector simulator and compare with the closed form."""
    if target is not None and marked is not None:
        raise UsageError("--target and --marked are mutually exclusive")
    if iterations is not None and p_target is not None:
        raise UsageError("--iterations and --p-target are mutually exclusive")

    if target is not None:
        instance = ToyPowInstance(nonce_bits=qubits, digest_bits=digest_bits, target=target)
        mask = marked_mask(instance)
    else:
        instance = ToyPowInstance(nonce_bits=qubits, digest_bits=digest_bits, target=0)
        mask = lowest_digest_mask(instance, 1 if marked is None else marked)

    n = instance.search_space
    m = int(np.count_nonzero(mask))
    if m == 0 and iterations is None:
        raise DomainError("no nonce satisfies the target; pass --iterations to run anyway")
    if iterations is not None:
        t = iterations
    elif p_target is not None:
        t = iterations_for_success(n, m, p_target)
    else:
        t = optimal_iterations(n, m)

    with FeedbackManager(enabled=fmt is ReportFormat.TEXT).spinner(f"Simulating {qubits} qubits"):
        outcome = run(instance, t, seed, mask=mask)
    analytic = grover_success_probability(n, m, t) if m else 0.0

    doc = ReportDocument(
        title="Quantum mining loop: closed form vs statevector",
        scenario_id=f"toy-{qubits}q",
        columns=(Column("Analytic", "1"), Column("Simulated", "1")),
        rows=(ReportRow("Success probability", (analytic, outcome.success_probability)),),
        summary=(
            Quantity("Search space N", n, "nonce"),
            Quantity("Marked M", m, "nonce"),
            Quantity("Iterations t", t, "iteration"),
            Quantity("Sampled nonce", outcome.sampled_nonce, "nonce"),
            Quantity("Sample satisfies target", int(outcome.sample_satisfies_target), "1"),
            Quantity("Gap |analytic - simulated|", abs(analytic - outcome.success_probability), "1"),
        ),
        notes=(f"Target-rule marked count {count_marked(instance)}",) if target is not None else (),
    )
    emit(doc, fmt, out, timestamp)


@app.command()
@handle_errors
def race(
    scenario: Optional[str] = typer.Option(None, "--scenario", "-s", help=SCENARIO_HELP),
    temperature: Optional[float] = typer.Option(None, "--temperature", help="Heat-sink temperature in kelvin"),
    ratio: Optional[str] = typer.Option(None, "--ratio", help="Comma-separated efficiency ratios"),
    blocks: int = typer.Option(100_000, "--blocks", help="Number of block cycles"),
    probability: Optional[float] = typer.Option(
        None, "--probability", help="Per-block success probability (both agents unless the quantum one is derived)"
    ),
    iterations: Optional[int] = typer.Option(
        None, "--iterations", "-t", help="Derive the quantum agent's probability from this Grover iteration count"
    ),
    p_target: Optional[float] = typer.Option(
        None, "--p-target", help="Derive the quantum agent's probability from the fewest iterations reaching it"
    ),
    retarget: bool = typer.Option(False, "--retarget", help="Retarget difficulty from observed block times"),
    retarget_interval: int = typer.Option(2016, "--retarget-interval", help="Blocks per retarget window"),
    hashrate_multiplier: float = typer.Option(
        1.0, "--hashrate-multiplier", help="Network hash rate relative to the initial difficulty's"
    ),
    seed: int = typer.Option(0, "--seed", help="Simulation seed (unsigned 64-bit)"),
    fmt: ReportFormat = typer.Option(ReportFormat.TEXT, "--format", "-f", help="Output format"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write the report to a file"),
    timestamp: bool = typer.Option(False, "--timestamp", help="Record generation time in metadata"),
) -> None:
    """Seeded race between the scenario's classical miner and its most corrected quantum miner."""
    loaded = load(scenario, temperature)
    estimator = EnergyEstimator(loaded, parse_ratios(ratio))
    classical = estimator.classical_figures()
    _, _, quantum_row, quantum_ratio = estimator.advantage_summary()
    p = classical.share_used if probability is None else probability
    p_quantum = p
    if iterations is not None or p_target is not None:
        if iterations is not None and p_target is not None:
            raise UsageError("--iterations and --p-target are mutually exclusive")
        net = loaded.network
        p_quantum = grover_block_probability(
            net.search_space, pow_target_m(net.max_target, net.difficulty), iterations, p_target
        )

    agents = [
        MinerAgent(MinerKind.CLASSICAL, p, classical.attributed_j, loaded.asic.label),
        MinerAgent(
            MinerKind.QUANTUM,
            p_quantum,
            quantum_row.landauer_j * quantum_ratio,
            f"{quantum_row.label} (1:{quantum_ratio:g})",
        ),
    ]
    config = RaceConfig(
        agents=agents,
        num_blocks=blocks,
        seed=seed,
        difficulty=loaded.network.difficulty,
        retarget_interval_blocks=retarget_interval,
        target_block_time_s=loaded.network.block_time_s,
        retarget_enabled=retarget,
        hashrate_multiplier=hashrate_multiplier,
    )
    with FeedbackManager(enabled=fmt is ReportFormat.TEXT).spinner(f"Racing {blocks} blocks"):
        report = run_race(config)

    summary = [
        Quantity("Total blocks", report.total_blocks, "block"),
        Quantity("Final difficulty", report.final_difficulty, "1"),
        Quantity("Mean block time", report.mean_block_time_s, "s"),
    ]
    per_block = [a.energy_per_won_block_j for a in report.agents]
    if all(v is not None for v in per_block):
        summary.append(Quantity("Energy per won block, classical / quantum", per_block[0] / per_block[1], "1"))

    doc = ReportDocument(
        title="Block race",
        scenario_id=loaded.name,
        columns=(
            Column("Win probability", "1"),
            Column("Blocks won", "block"),
            Column("Total energy", "J"),
            Column("Energy per won block", "J/block"),
        ),
        rows=tuple(
            ReportRow(a.label, (a.per_block_success_prob, a.blocks_won, a.total_energy_j, a.energy_per_won_block_j))
            for a in report.agents
        ),
        summary=tuple(summary),
        notes=(f"seed {seed}",),
    )
    emit(doc, fmt, out, timestamp)


@app.command()
@handle_errors
def validate(
    scenario: Optional[str] = typer.Option(None, "--scenario", "-s", help=SCENARIO_HELP),
) -> None:
    """Check a scenario file; exit 1 when it cannot be used."""
    ref = scenario or REFERENCE_SCENARIO
    collector = ErrorCollector()
    collector.collect(ValidatorEngine().validate(ref))
    collector.display()
    if collector.has_errors():
        console.print(f"[red]{len(collector.errors)} errors in {escape(str(ref))}[/red]", soft_wrap=True)
        raise typer.Exit(EXIT_FAILURE)
    console.print(f"[green]Valid with {len(collector.warnings)} warnings: {escape(str(ref))}[/green]", soft_wrap=True)


@app.command()
@handle_errors
def scenarios() -> None:
    """List the bundled scenarios."""
    table = Table(title="Bundled scenarios")
    table.add_column("Name", style="cyan")
    table.add_column("Description")
    table.add_column("Path")
    for name in list_bundled_scenarios():
        loaded = resolve_scenario(name)
        table.add_row(name, loaded.description, str(bundled_scenario_path(name)))
    Console().print(table)


def main() -> None:
    """Main entry point for the CLI."""
    app()
