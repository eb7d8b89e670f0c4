"""Run both optimizers on the same seeds with the same evaluation budget."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Any, NamedTuple, Sequence

import attr
import structlog

from . import exceptions
from .cga import CgaConfig, run_cga
from .ga import GaConfig, run_ga
from .manifest import Algorithm, RunManifest

logger = structlog.get_logger()


class Budgets(NamedTuple):
    cga: CgaConfig
    ga: GaConfig
    budget: int


def ga_generations(cfg: GaConfig, budget: int) -> int:
    """Largest number of generations whose evaluations fit in `budget`

    Raises
    ------
    exceptions.InvalidConfiguration
        If not even one generation fits
    """
    if budget < cfg.pop_size:
        raise exceptions.InvalidConfiguration(
            f"Budget {budget} is smaller than the GA population size {cfg.pop_size}"
        )
    if cfg.shrink_schedule:
        # The schedule fixes the number of generations
        if cfg.budget() > budget:
            raise exceptions.InvalidConfiguration(
                f"The GA shrink schedule needs {cfg.budget()} evaluations, the budget is {budget}"
            )
        return cfg.generations

    per_generation = cfg.pop_size - (1 if cfg.elitism else 0)
    generations = (budget - cfg.pop_size) // per_generation
    if generations < 1:
        raise exceptions.InvalidConfiguration(
            f"Budget {budget} does not cover one GA generation "
            f"({cfg.pop_size + per_generation} evaluations)"
        )
    return generations


def equal_budgets(manifest: RunManifest) -> Budgets:
    """CGA and GA configurations spending the same evaluation budget

    The budget is the manifest's ``budget``, by default the CGA's
    ``max_simulations``.
    """
    cga = manifest.cga_config(n_gen=None)
    budget = manifest.budget if manifest.budget is not None else cga.max_simulations
    cga = attr.evolve(cga, max_simulations=budget)
    ga = manifest.ga_config()
    ga = attr.evolve(ga, generations=ga_generations(ga, budget))
    logger.info("Equal budgets", budget=budget, ga_generations=ga.generations)
    return Budgets(cga=cga, ga=ga, budget=budget)


def run_seed(manifest: RunManifest, budgets: Budgets, seed: int) -> list[dict[str, Any]]:
    """Both optimizers on one seed, each with a fresh evaluator"""
    cga_log = run_cga(
        manifest.space,
        attr.evolve(budgets.cga, seed=seed),
        manifest.build_evaluator(),
        workers=manifest.workers,
    )
    ga_log = run_ga(
        manifest.space,
        attr.evolve(budgets.ga, seed=seed),
        manifest.build_evaluator(),
        workers=manifest.workers,
    )
    logger.debug("Seed done", seed=seed, cga=cga_log.final_best, ga=ga_log.final_best)
    return [
        {
            "seed": seed,
            "algorithm": algorithm.value,
            "final_best": log.final_best,
            "evaluations": log.total_evaluations,
        }
        for algorithm, log in ((Algorithm.cga, cga_log), (Algorithm.ga, ga_log))
    ]


def run_compare(manifest: RunManifest, seeds: Sequence[int], jobs: int = 1) -> list[dict[str, Any]]:
    """Compare the optimizers on every seed

    Parameters
    ----------
    manifest : RunManifest
        The run config
    seeds : Sequence[int]
        At least two seeds
    jobs : int, optional
        Number of seeds run concurrently, by default 1

    Returns
    -------
    list[dict[str, Any]]
        Rows with ``seed``, ``algorithm``, ``final_best`` and ``evaluations``,
        in seed order
    """
    if len(seeds) < 2:
        raise exceptions.InvalidConfiguration(f"compare needs at least two seeds, got {len(seeds)}")
    budgets = equal_budgets(manifest)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            per_seed = list(pool.map(lambda s: run_seed(manifest, budgets, s), seeds))
    else:
        per_seed = [run_seed(manifest, budgets, s) for s in seeds]
    return [row for rows in per_seed for row in rows]
