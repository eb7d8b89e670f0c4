from __future__ import annotations

from pathlib import Path

import structlog
from rich.console import Console
from rich.table import Table

from ..cga import run_cga
from ..ga import run_ga
from ..manifest import Algorithm, RunManifest, load_manifest
from ..runlog import RunLog
from ..save import write_run
from ..space import Individual, ParameterSpace
from .utils import configure_logging

logger = structlog.get_logger()


def _fmt(value: float | None) -> str:
    return "-" if value is None else f"{value:g}"


def champion_table(space: ParameterSpace, champion: Individual, title: str = "Champion") -> Table:
    """Initial and optimal value of every parameter with its range and step"""
    table = Table(title=title)
    table.add_column("Parameter", style="cyan", no_wrap=True)
    table.add_column("Initial", justify="right")
    table.add_column("Optimal", style="green", justify="right")
    table.add_column("Range", justify="right")
    table.add_column("Step", justify="right")
    table.add_column("Unit", style="magenta")

    values = space.expand(champion.values)
    for spec in space.specs:
        table.add_row(
            spec.name,
            _fmt(spec.initial),
            _fmt(values[spec.name]),
            f"{_fmt(spec.min)} - {_fmt(spec.max)}",
            _fmt(spec.step),
            spec.unit or "",
        )
    return table


def metrics_table(ind: Individual) -> Table:
    table = Table(title="Performance")
    table.add_column("Metric", style="cyan", no_wrap=True)
    table.add_column("Value", justify="right")
    if ind.metrics is not None:
        table.add_row("Gain (dB)", _fmt(ind.metrics.gain_db))
        table.add_row("Power (W)", _fmt(ind.metrics.power_w))
        table.add_row("Noise figure (dB)", _fmt(ind.metrics.nf_db))
    table.add_row("FoM", _fmt(ind.fitness))
    return table


def run(manifest: RunManifest, seed: int | None = None) -> RunLog:
    overrides = {} if seed is None else {"seed": seed}
    evaluator = manifest.build_evaluator()
    if manifest.algorithm is Algorithm.cga:
        return run_cga(
            manifest.space, manifest.cga_config(**overrides), evaluator, workers=manifest.workers
        )
    return run_ga(
        manifest.space, manifest.ga_config(**overrides), evaluator, workers=manifest.workers
    )


def main(
    config: Path,
    seed: int | None = None,
    output_dir: Path | None = None,
    workers: int | None = None,
    verbose: bool = False,
) -> RunLog:
    configure_logging(verbose)

    manifest = load_manifest(config)
    if output_dir is not None:
        manifest = manifest.evolve(output_dir=output_dir)
    if workers is not None:
        manifest = manifest.evolve(workers=workers)

    log = run(manifest, seed=seed)
    write_run(log, manifest.output_dir)

    console = Console()
    console.print(champion_table(manifest.space, log.champion))
    console.print(metrics_table(log.champion))
    logger.info(
        "Optimization finished",
        algorithm=log.algorithm,
        fitness=log.final_best,
        evaluations=log.total_evaluations,
        terminated_by=log.terminated_by.value,
    )
    return log
