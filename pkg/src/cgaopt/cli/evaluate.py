from __future__ import annotations

from pathlib import Path

import structlog
from rich.console import Console

from .. import exceptions
from ..fitness import FomConfig, compute_fom
from ..manifest import load_manifest
from ..space import Individual
from .optimize import champion_table, metrics_table
from .utils import configure_logging, parse_metrics, parse_values

logger = structlog.get_logger()


def from_metrics(text: str, fom: FomConfig) -> Individual:
    """Figure of merit of user supplied metrics, bypassing the evaluator"""
    metrics = parse_metrics(text)
    try:
        fitness = compute_fom(metrics, fom)
    except exceptions.EvaluationError as e:
        raise exceptions.InvalidConfiguration(str(e)) from None
    return Individual(values=(), fitness=fitness, metrics=metrics)


def main(
    config: Path | None = None,
    values: str | None = None,
    metrics: str | None = None,
    verbose: bool = False,
) -> Individual:
    configure_logging(verbose)
    console = Console()

    if metrics is not None:
        fom = load_manifest(config).fom if config is not None else FomConfig()
        ind = from_metrics(metrics, fom)
        console.print(metrics_table(ind))
        return ind

    if config is None:
        raise exceptions.InvalidConfiguration("eval needs a run config unless --metrics is given")

    manifest = load_manifest(config)
    space = manifest.space
    ind = Individual(values=space.values_from_mapping(parse_values(values or "initial")))
    evaluator = manifest.build_evaluator()
    result = evaluator.evaluate(ind)
    ind = ind.evolve(fitness=result.fitness, metrics=result.metrics)

    console.print(champion_table(space, ind, title="Evaluated point"))
    console.print(metrics_table(ind))
    return ind
