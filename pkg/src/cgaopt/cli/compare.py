from __future__ import annotations

from pathlib import Path

import structlog
from rich.console import Console
from rich.table import Table

from ..compare import run_compare
from ..manifest import load_manifest, parse_seeds
from ..save import write_compare
from .utils import configure_logging

logger = structlog.get_logger()


def summary_table(summary: dict[str, dict[str, float]]) -> Table:
    table = Table(title="Final best over seeds")
    table.add_column("Algorithm", style="cyan", no_wrap=True)
    table.add_column("Runs", justify="right")
    table.add_column("Median", style="green", justify="right")
    table.add_column("IQR", justify="right")
    table.add_column("Evaluations", justify="right")
    for algorithm, stats in summary.items():
        table.add_row(
            algorithm,
            str(stats["runs"]),
            f"{stats['median']:.6g}",
            f"{stats['iqr']:.6g}",
            f"{stats['mean_evaluations']:g}",
        )
    return table


def main(
    config: Path,
    seeds: str | None = None,
    jobs: int = 1,
    output_dir: Path | None = None,
    workers: int | None = None,
    verbose: bool = False,
) -> list[dict]:
    configure_logging(verbose)

    manifest = load_manifest(config)
    if output_dir is not None:
        manifest = manifest.evolve(output_dir=output_dir)
    if workers is not None:
        manifest = manifest.evolve(workers=workers)
    seed_list = parse_seeds(seeds) if seeds is not None else manifest.seeds

    rows = run_compare(manifest, seed_list, jobs=jobs)
    summary, _ = write_compare(rows, manifest.output_dir)

    Console().print(summary_table(summary))
    logger.info("Comparison finished", seeds=len(seed_list))
    return rows
