"""Traditional genetic algorithm, kept as the baseline the circuit-centric
variant is compared against.

Every generation the top fraction of the population is selected, the
population is refilled with crossovers of randomly paired parents and each
offspring gets one component redrawn. Without elitism the champion of a
generation can be worse than the one before.
"""

from __future__ import annotations

import itertools
import math
from enum import Enum
from fractions import Fraction
from typing import Any, Iterator, Mapping, Sequence

import attr
import numpy as np
import structlog

from . import exceptions
from .cga import _check_seed, snapshot
from .evaluators import Evaluator, evaluate_batch
from .rng import Purpose, stream
from .runlog import EvaluationRecord, GenerationRecord, RunLog, Termination
from .space import (
    Individual,
    ParameterSpace,
    best_individual,
    random_individual,
    rank_key,
    redraw,
)

logger = structlog.get_logger()


class CrossoverKind(str, Enum):
    uniform = "uniform"
    single_point = "single_point"


def _fraction(value: Any) -> float:
    if isinstance(value, str):
        return float(Fraction(value))
    return float(value)


@attr.s(frozen=True, kw_only=True, slots=True)
class GaConfig:
    pop_size: int = attr.ib(81, converter=int)
    selection_fraction: float = attr.ib(1 / 3, converter=_fraction)
    generations: int = attr.ib(5, converter=int)
    crossover: CrossoverKind = attr.ib(CrossoverKind.uniform, converter=CrossoverKind)
    mutation_rate: float = attr.ib(1.0, converter=float)
    seed: int = attr.ib(0, converter=int, validator=_check_seed)
    elitism: bool = attr.ib(False)
    #: Shrink the population to the selection size every generation
    shrink_schedule: bool = attr.ib(False)

    def __attrs_post_init__(self):
        if self.pop_size < 3:
            raise exceptions.InvalidConfiguration(f"pop_size must be >= 3, got {self.pop_size}")
        if not 0 < self.selection_fraction <= 1:
            raise exceptions.InvalidConfiguration(
                f"selection_fraction must be in (0, 1], got {self.selection_fraction}"
            )
        if self.generations < 1:
            raise exceptions.InvalidConfiguration(
                f"generations must be >= 1, got {self.generations}"
            )
        if not 0 <= self.mutation_rate <= 1:
            raise exceptions.InvalidConfiguration(
                f"mutation_rate must be in [0, 1], got {self.mutation_rate}"
            )
        if math.floor(self.pop_size * self.selection_fraction) < 1:
            raise exceptions.InvalidConfiguration(
                f"selection_fraction {self.selection_fraction} selects nobody "
                f"from {self.pop_size} individuals"
            )

    def population_sizes(self) -> list[int]:
        """Population size of the initial generation and every later one"""
        sizes = [self.pop_size]
        for _ in range(self.generations):
            if self.shrink_schedule:
                sizes.append(max(1, math.floor(sizes[-1] * self.selection_fraction)))
            else:
                sizes.append(self.pop_size)
        return sizes

    def budget(self) -> int:
        """Number of evaluations a run consumes"""
        sizes = self.population_sizes()
        elites = self.generations if self.elitism else 0
        return sum(sizes) - elites

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> GaConfig:
        fields = attr.fields_dict(cls)
        try:
            return cls(**{k: v for k, v in data.items() if k in fields})
        except (TypeError, ValueError) as e:
            if isinstance(e, exceptions.CgaoptError):
                raise
            raise exceptions.InvalidConfiguration(f"Invalid GA configuration: {e}") from e

    def to_dict(self) -> dict[str, Any]:
        d = attr.asdict(self)
        d["crossover"] = self.crossover.value
        return d


def _top(population: Sequence[Individual], count: int) -> list[Individual]:
    return sorted(population, key=rank_key)[:count]


def select_top_fraction(population: Sequence[Individual], fraction: float) -> list[Individual]:
    """The ``floor(len(population) * fraction)`` fittest individuals, ties
    broken by lower id

    Raises
    ------
    exceptions.InvalidConfiguration
        If the selection would be empty
    """
    count = math.floor(len(population) * fraction)
    if count < 1:
        raise exceptions.InvalidConfiguration(
            f"Selecting a fraction {fraction} of {len(population)} individuals selects nobody"
        )
    if any(not ind.evaluated for ind in population):
        raise exceptions.UsageError("Selection needs an evaluated population")
    return _top(population, count)


def crossover(
    a: Individual,
    b: Individual,
    kind: CrossoverKind | str,
    rng: np.random.Generator,
    space: ParameterSpace | None = None,
    id: int | None = None,
) -> Individual:
    """Combine two parents into one offspring

    Uniform crossover takes every free variable from either parent with
    probability 1/2. Single-point crossover takes the values before a
    uniformly drawn cut from `a` and the rest from `b`.

    Parameters
    ----------
    a : Individual
        First parent, recorded as the offspring's parent
    b : Individual
        Second parent
    kind : CrossoverKind | str
        The crossover operator
    rng : np.random.Generator
        The random stream
    space : ParameterSpace | None, optional
        When given, both parents are checked to belong to it
    id : int | None, optional
        Id of the offspring, by default the id of `a`

    Returns
    -------
    Individual
        An unevaluated offspring

    Raises
    ------
    exceptions.UsageError
        If the parents do not come from the same space
    """
    kind = CrossoverKind(kind)
    if len(a.values) != len(b.values):
        raise exceptions.UsageError("Parents have a different number of free variables")
    if space is not None and not (space.contains(a.values) and space.contains(b.values)):
        raise exceptions.UsageError("Parents do not belong to the parameter space")

    n = len(a.values)
    if kind is CrossoverKind.uniform:
        take_a = rng.random(n) < 0.5
    else:
        cut = int(rng.integers(0, n + 1))
        take_a = np.arange(n) < cut
    values = [x if pick else y for x, y, pick in zip(a.values, b.values, take_a)]
    return Individual(values=values, id=a.id if id is None else id, parent_id=a.id)


def mutate_random_component(
    ind: Individual, space: ParameterSpace, rng: np.random.Generator
) -> Individual:
    """Redraw one uniformly chosen free variable of `ind`

    The offspring keeps its id and parent; its fitness is cleared.
    """
    index = int(rng.integers(0, space.num_free))
    return ind.evolve(
        values=redraw(ind.values, index, space, rng), fitness=None, metrics=None, error=None
    )


def _mean_fitness(population: Sequence[Individual]) -> float | None:
    finite = [ind.fitness for ind in population if ind.fitness is not None and not ind.rejected]
    if not finite:
        return None
    return float(np.mean(finite))


def breed(
    selected: Sequence[Individual],
    count: int,
    space: ParameterSpace,
    cfg: GaConfig,
    generation: int,
    ids: Iterator[int],
) -> list[Individual]:
    """`count` offspring of parents drawn uniformly, with replacement, from
    `selected`"""
    offspring = []
    for k in range(count):
        rng = stream(cfg.seed, Purpose.breeding, generation, k)
        a = selected[int(rng.integers(0, len(selected)))]
        b = selected[int(rng.integers(0, len(selected)))]
        child = crossover(a, b, cfg.crossover, rng, id=next(ids))
        if rng.random() < cfg.mutation_rate:
            child = mutate_random_component(child, space, rng)
        offspring.append(child)
    return offspring


def run_ga(
    space: ParameterSpace,
    cfg: GaConfig,
    evaluator: Evaluator,
    workers: int = 1,
) -> RunLog:
    """Run the traditional genetic algorithm for `cfg.generations` generations

    Parameters
    ----------
    space : ParameterSpace
        The parameter space
    cfg : GaConfig
        The configuration
    evaluator : Evaluator
        The evaluator, which also carries the figure-of-merit rules
    workers : int, optional
        Maximum number of concurrent evaluations, by default 1

    Returns
    -------
    RunLog
        One record for the initial population and one per generation
    """
    ids = itertools.count()
    sizes = cfg.population_sizes()
    population = [
        random_individual(space, stream(cfg.seed, Purpose.initial_population, 0, k), id=next(ids))
        for k in range(cfg.pop_size)
    ]
    population = evaluate_batch(population, evaluator, workers=workers)
    used = len(population)
    champion = best_individual(population)
    evaluations = [EvaluationRecord(generation=0, individual=ind) for ind in population]
    records = [
        GenerationRecord(
            generation=0,
            champion=champion,
            candidates_evaluated=0,
            cumulative_evaluations=used,
            accepted=True,
            population_mean_fitness=_mean_fitness(population),
        )
    ]
    logger.info("Initial population evaluated", pop_size=cfg.pop_size, fitness=champion.fitness)

    for generation in range(1, cfg.generations + 1):
        if cfg.shrink_schedule:
            count = max(1, math.floor(len(population) * cfg.selection_fraction))
            selected = _top(population, count)
        else:
            selected = select_top_fraction(population, cfg.selection_fraction)

        size = sizes[generation]
        elite = [best_individual(population)] if cfg.elitism else []
        offspring = breed(selected, size - len(elite), space, cfg, generation, ids)
        offspring = evaluate_batch(offspring, evaluator, workers=workers)
        used += len(offspring)
        population = elite + offspring

        previous = champion
        champion = best_individual(population)
        evaluations.extend(
            EvaluationRecord(generation=generation, individual=ind) for ind in offspring
        )
        records.append(
            GenerationRecord(
                generation=generation,
                champion=champion,
                candidates_evaluated=len(offspring),
                cumulative_evaluations=used,
                accepted=champion.id != previous.id,
                selected_mean_fitness=_mean_fitness(selected),
                population_mean_fitness=_mean_fitness(population),
            )
        )
        logger.debug(
            "Generation done",
            generation=generation,
            fitness=champion.fitness,
            evaluations=used,
            selected_mean=_mean_fitness(selected),
        )

    logger.info("GA finished", generations=cfg.generations, evaluations=used)
    return RunLog(
        algorithm="ga",
        config=snapshot("ga", cfg.to_dict(), evaluator),
        space=space.to_dict(),
        records=records,
        evaluations=evaluations,
        terminated_by=Termination.budget_exhausted,
    )
