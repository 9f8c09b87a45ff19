"""GeoSSA Bench CLI - run optimizer grids and compare algorithms.

Commands:
- run: execute an experiment config and write all result files
- report: rebuild the comparison tables from an existing results directory
- verify-rng: check the random engine against the shipped golden draws
- list-problems: show every problem reference a config may use
"""

import json
from pathlib import Path
from typing import Any

import pandas as pd
import typer
from pydantic import ValidationError
from rich.console import Console
from rich.markup import escape
from rich.progress import BarColumn, MofNCompleteColumn, Progress, TextColumn, TimeElapsedColumn
from rich.table import Table

from src import __version__
from src.experiments.config import ConfigError, get_settings, load_config
from src.experiments.logging import configure_logging
from src.experiments.models import SCHEMA_VERSION, RunRecord
from src.experiments.monitoring import GridMonitor
from src.experiments.reports import (
    METADATA_FILE,
    WTL_FILE,
    emit_reports,
    matrix_from_records,
    read_runs,
)
from src.experiments.runner import ResumeMismatchError, best_record, run_grid
from src.problems import benchmarks
from src.problems.registry import list_problems
from src.rng.streams import REFERENCE_FILE, verify_reference, write_reference
from src.stats.models import IncompleteMatrixError, InsufficientDataError

app = typer.Typer(
    name="geossa",
    help="GeoSSA Bench - seeded sparrow search experiments and statistics",
    no_args_is_help=True,
)
console = Console()

EXIT_PARTIAL_FAILURE = 1
EXIT_CONFIG_ERROR = 2


@app.callback()
def _main(
    log_level: str = typer.Option(
        None,
        "--log-level",
        "-l",
        help="Logging level (overrides GEOSSA_LOG_LEVEL)",
    ),
) -> None:
    level = log_level or get_settings().log_level
    try:
        configure_logging(level, rich_console=console)
    except ValueError as e:
        console.print(f"[red]{escape(str(e))}[/red]")
        raise typer.Exit(EXIT_CONFIG_ERROR) from None


@app.command()
def run(
    config_path: Path = typer.Argument(..., help="Experiment config (YAML)"),
    output_dir: Path = typer.Option(
        None,
        "--output-dir",
        "-o",
        help="Results directory (overrides GEOSSA_OUTPUT_DIR and the config)",
    ),
    workers: int = typer.Option(None, "--workers", "-w", help="Worker processes"),
    repetitions: int = typer.Option(None, "--repetitions", "-r", help="Runs per cell"),
    iterations: int = typer.Option(None, "--iterations", "-t", help="Iterations T per run"),
    population: int = typer.Option(None, "--population", "-n", help="Population size n"),
    reference: str = typer.Option(None, "--reference", help="Reference algorithm for reports"),
    resume: bool = typer.Option(False, "--resume", help="Skip runs already in runs.csv"),
) -> None:
    """Run every (algorithm, problem, repetition) cell of a config.

    Examples:
        geossa run config/example.yaml
        geossa run config/ablation.yaml -w 4 -o results/ablation
        geossa run config/example.yaml -r 5 -t 100 --resume
    """
    settings = get_settings()
    try:
        config = load_config(config_path).with_overrides(
            output_dir=output_dir or settings.output_dir,
            workers=workers or settings.workers,
            repetitions=repetitions,
            T=iterations,
            n=population,
            reference=reference,
        )
    except ConfigError as e:
        console.print(f"[red]Config error:[/red] {escape(str(e))}")
        raise typer.Exit(EXIT_CONFIG_ERROR) from None
    except ValidationError as e:
        console.print(f"[red]Invalid option:[/red] {e.errors()[0]['msg']}")
        raise typer.Exit(EXIT_CONFIG_ERROR) from None

    total = len(config.grid())
    console.print(
        f"[bold]Running {total} run(s)[/bold] "
        f"({len(config.algorithms)} algorithm(s) x {len(config.problems)} problem(s) "
        f"x {config.repetitions} repetition(s)) -> {config.output_dir}"
    )

    monitor = GridMonitor(total_runs=total)
    with Progress(
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        MofNCompleteColumn(),
        TimeElapsedColumn(),
        console=console,
    ) as progress:
        bar = progress.add_task("Runs", total=total)
        monitor.register_progress_handler(lambda done, _: progress.update(bar, completed=done))
        try:
            result = run_grid(config, resume=resume, base_dir=config_path.parent, monitor=monitor)
        except ResumeMismatchError as e:
            progress.stop()
            console.print(f"[red]Resume refused:[/red] {escape(str(e))}")
            raise typer.Exit(EXIT_CONFIG_ERROR) from None

    _print_health(monitor.get_health_status())
    _print_best(result.records, config.reference, config.problems)
    if result.report_paths:
        _print_wtl(Path(config.output_dir) / WTL_FILE)

    if result.exit_code:
        console.print(
            f"[yellow]{len(result.failures)} run(s) failed; see "
            f"{Path(config.output_dir) / 'failures.csv'}[/yellow]"
        )
        raise typer.Exit(EXIT_PARTIAL_FAILURE)


@app.command()
def report(
    results_dir: Path = typer.Argument(..., help="Directory written by 'geossa run'"),
    reference: str = typer.Option(None, "--reference", help="Reference algorithm"),
    alpha: float = typer.Option(None, "--alpha", help="Significance level"),
) -> None:
    """Rebuild the comparison tables from runs.csv.

    Examples:
        geossa report results --reference GeoSSA
        geossa report results/ablation --reference GeoSSA --alpha 0.01
    """
    records = read_runs(results_dir)
    if not records:
        console.print(f"[red]No runs found in {results_dir}[/red]")
        raise typer.Exit(EXIT_PARTIAL_FAILURE)

    grid = _grid_from_metadata(results_dir)
    algorithms = grid.get("algorithms") or list(dict.fromkeys(r.algorithm for r in records))
    problems = grid.get("problems") or list(dict.fromkeys(r.problem for r in records))
    repetitions = grid.get("repetitions") or max(r.repetition for r in records) + 1
    reference = reference or grid.get("reference") or algorithms[0]
    alpha = alpha if alpha is not None else grid.get("alpha", 0.05)

    if reference not in algorithms:
        console.print(f"[red]Reference '{reference}' is not among {', '.join(algorithms)}[/red]")
        raise typer.Exit(EXIT_CONFIG_ERROR)

    try:
        matrix = matrix_from_records(records, algorithms, problems, repetitions)
        paths = emit_reports(matrix, reference, results_dir, alpha=alpha)
    except (IncompleteMatrixError, InsufficientDataError) as e:
        console.print(f"[red]Cannot build reports:[/red] {escape(str(e))}")
        raise typer.Exit(EXIT_PARTIAL_FAILURE) from None

    for path in paths:
        console.print(f"[green]wrote[/green] {path}")
    _print_wtl(Path(results_dir) / WTL_FILE)


@app.command("verify-rng")
def verify_rng(
    write: Path = typer.Option(
        None,
        "--write",
        help="Write fresh reference draws to this path instead of verifying",
    ),
) -> None:
    """Compare the random engine against the shipped golden draws.

    Examples:
        geossa verify-rng
        geossa verify-rng --write /tmp/rng_reference.csv
    """
    if write is not None:
        path = write_reference(write)
        console.print(f"[green]Reference draws written to {path}[/green]")
        return

    mismatches = verify_reference(REFERENCE_FILE)
    if mismatches:
        table = Table(show_header=True, header_style="bold red")
        for column in ("kind", "draw", "expected", "actual"):
            table.add_column(column)
        for row in mismatches:
            table.add_row(*(str(row[c]) for c in ("kind", "draw", "expected", "actual")))
        console.print(table)
        console.print(f"[red]{len(mismatches)} draw(s) differ from {REFERENCE_FILE}[/red]")
        raise typer.Exit(EXIT_PARTIAL_FAILURE)

    console.print("[green]Random engine matches the reference draws[/green]")


@app.command("list-problems")
def list_problems_command() -> None:
    """Show the problem references accepted in configs."""
    table = Table(show_header=True, header_style="bold cyan")
    for column in ("Reference", "Family", "Name", "Dim", "Detail"):
        table.add_column(column)
    for row in list_problems():
        table.add_row(
            str(row["reference"]),
            str(row["family"]),
            str(row["name"]),
            str(row["dim"]),
            str(row["detail"]),
        )
    console.print(table)
    console.print("[dim]'benchmarks' expands to F1..F23; 'uav:<file>' loads a terrain YAML[/dim]")


@app.command()
def version() -> None:
    """Show version information."""
    console.print("[bold]GeoSSA Bench[/bold]")
    console.print(f"Version: {__version__}")
    console.print(f"Output schema: {SCHEMA_VERSION}")


def _grid_from_metadata(results_dir: Path) -> dict[str, Any]:
    path = Path(results_dir) / METADATA_FILE
    if not path.exists():
        return {}
    try:
        return json.loads(path.read_text(encoding="utf-8")).get("config", {})
    except json.JSONDecodeError:
        console.print(f"[yellow]Ignoring unreadable {path}[/yellow]")
        return {}


def _print_health(health: dict[str, Any]) -> None:
    metrics = health["metrics"]
    table = Table(show_header=True, header_style="bold")
    table.add_column("Metric")
    table.add_column("Value", justify="right")
    for key in ("runs_completed", "runs_skipped", "runs_failed", "evaluations", "run_seconds"):
        table.add_row(key.replace("_", " "), str(metrics[key]))
    console.print(table)

    colors = {"healthy": "green", "degraded": "yellow", "unhealthy": "red"}
    color = colors.get(health["status"], "white")
    console.print(f"Grid status: [{color}]{health['status']}[/{color}]")
    for issue in health["issues"]:
        console.print(f"  [{color}]- {escape(issue)}[/{color}]")


def _print_best(records: list[RunRecord], reference: str, problems: list[str]) -> None:
    rows: list[tuple[str, RunRecord]] = []
    for problem in problems:
        if problem in benchmarks.SPECS:
            continue
        best = best_record(records, reference, problem)
        if best is not None:
            rows.append((problem, best))
    if not rows:
        return
    table = Table(title=f"Best {reference} runs", show_header=True, header_style="bold cyan")
    table.add_column("Problem")
    table.add_column("Best fitness", justify="right")
    table.add_column("Repetition", justify="right")
    for problem, best in rows:
        table.add_row(problem, f"{best.best_fitness:.6g}", str(best.repetition))
    console.print(table)


def _print_wtl(path: Path) -> None:
    if not path.exists():
        return
    frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    table = Table(title="Win/Tie/Loss vs reference", show_header=True, header_style="bold cyan")
    for column in frame.columns:
        table.add_column(column)
    for row in frame.itertuples(index=False):
        table.add_row(*row)
    console.print(table)


def main() -> None:
    """Entry point for the CLI."""
    app()


if __name__ == "__main__":
    main()
