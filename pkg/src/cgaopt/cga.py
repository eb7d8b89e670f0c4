"""Circuit-centric genetic algorithm.

No crossover: a random population is evaluated once, its best individual
becomes the champion, and every generation the champion is mutated once
per free variable. The best mutant replaces the champion only if it is
strictly better, so the champion fitness never decreases.
"""

from __future__ import annotations

import itertools
from enum import Enum
from typing import Any, Iterator, Mapping, NamedTuple

import attr
import structlog

from . import exceptions
from .evaluators import Evaluator, evaluate_batch
from .rng import Purpose, stream
from .runlog import EvaluationRecord, GenerationRecord, RunLog, Termination
from .space import (
    Individual,
    ParameterSpace,
    best_individual,
    mutate_one,
    random_individual,
)

logger = structlog.get_logger()


class SweepMode(str, Enum):
    independent = "independent"
    sequential = "sequential"


def _check_seed(instance, attribute, value):
    if not 0 <= int(value) < 2**64:
        raise exceptions.InvalidConfiguration(
            f"seed must be a 64-bit unsigned integer, got {value}"
        )


@attr.s(frozen=True, kw_only=True, slots=True)
class CgaConfig:
    pop_size: int = attr.ib(30, converter=int)
    max_simulations: int = attr.ib(1000, converter=int)
    target_fom: float | None = attr.ib(None)
    sweep_mode: SweepMode = attr.ib(SweepMode.independent, converter=SweepMode)
    seed: int = attr.ib(0, converter=int, validator=_check_seed)
    #: Always replace the champion by the best mutant, even a worse one
    accept_best_mutant_always: bool = attr.ib(False)
    #: Number of sweeps; when set it overrides max_simulations
    n_gen: int | None = attr.ib(None)

    def __attrs_post_init__(self):
        if self.pop_size < 1:
            raise exceptions.InvalidConfiguration(f"pop_size must be >= 1, got {self.pop_size}")
        if self.n_gen is not None and self.n_gen < 0:
            raise exceptions.InvalidConfiguration(f"n_gen must be >= 0, got {self.n_gen}")
        if self.n_gen is None and self.max_simulations < self.pop_size:
            raise exceptions.InvalidConfiguration(
                f"max_simulations ({self.max_simulations}) is smaller than "
                f"pop_size ({self.pop_size})"
            )

    def budget(self, space: ParameterSpace) -> int:
        """Evaluation budget, resolving the n_gen alias"""
        if self.n_gen is not None:
            return self.pop_size + self.n_gen * space.num_free
        return self.max_simulations

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> CgaConfig:
        fields = attr.fields_dict(cls)
        try:
            return cls(**{k: v for k, v in data.items() if k in fields})
        except (TypeError, ValueError) as e:
            if isinstance(e, exceptions.CgaoptError):
                raise
            raise exceptions.InvalidConfiguration(f"Invalid CGA configuration: {e}") from e

    def to_dict(self) -> dict[str, Any]:
        d = attr.asdict(self)
        d["sweep_mode"] = self.sweep_mode.value
        return d


def initialize_population(
    space: ParameterSpace,
    cfg: CgaConfig,
    evaluator: Evaluator,
    workers: int = 1,
    ids: Iterator[int] | None = None,
) -> tuple[list[Individual], Individual]:
    """Evaluate `cfg.pop_size` random individuals and pick the champion

    Parameters
    ----------
    space : ParameterSpace
        The parameter space
    cfg : CgaConfig
        The configuration
    evaluator : Evaluator
        The evaluator
    workers : int, optional
        Maximum number of concurrent evaluations, by default 1
    ids : Iterator[int] | None, optional
        Source of individual ids, by default counting from 0

    Returns
    -------
    tuple[list[Individual], Individual]
        The evaluated population and its best individual (lowest id on ties)

    Raises
    ------
    exceptions.InvalidConfiguration
        If the budget does not cover the population
    exceptions.InitializationFailed
        If every evaluation was rejected
    """
    if cfg.budget(space) < cfg.pop_size:
        raise exceptions.InvalidConfiguration(
            f"Budget {cfg.budget(space)} does not cover a population of {cfg.pop_size}"
        )
    ids = itertools.count() if ids is None else ids
    population = [
        random_individual(space, stream(cfg.seed, Purpose.initial_population, 0, k), id=next(ids))
        for k in range(cfg.pop_size)
    ]
    population = evaluate_batch(population, evaluator, workers=workers)
    champion = best_individual(population)
    if champion.rejected:
        raise exceptions.InitializationFailed(pop_size=cfg.pop_size)
    return population, champion


class SweepResult(NamedTuple):
    champion: Individual
    evaluated: list[Individual]
    accepted: bool


def _improves(candidate: Individual, best: Individual, always: bool) -> bool:
    if candidate.rejected:
        return False
    return always or candidate.fitness > best.fitness  # type: ignore[operator]


def mutation_sweep(
    champion: Individual,
    space: ParameterSpace,
    evaluator: Evaluator,
    cfg: CgaConfig,
    generation: int,
    ids: Iterator[int],
    workers: int = 1,
) -> SweepResult:
    """Mutate the champion once per free variable and keep the best

    In independent mode every candidate differs from `champion` in one
    coordinate and the candidates can be evaluated concurrently. In
    sequential mode an accepted candidate becomes the base for the
    following coordinates. The random stream of coordinate ``i`` is derived
    from ``(cfg.seed, generation, i)``.

    Parameters
    ----------
    champion : Individual
        The evaluated champion
    space : ParameterSpace
        The parameter space
    evaluator : Evaluator
        The evaluator
    cfg : CgaConfig
        The configuration
    generation : int
        Generation number, starting at 1
    ids : Iterator[int]
        Source of individual ids
    workers : int, optional
        Maximum number of concurrent evaluations, by default 1

    Returns
    -------
    SweepResult
        The new champion, the evaluated candidates (in coordinate order) and
        whether the champion changed
    """
    if not champion.evaluated:
        raise exceptions.UsageError("The champion has to be evaluated before a sweep")

    def rng(i: int):
        return stream(cfg.seed, Purpose.sweep, generation, i)

    always = cfg.accept_best_mutant_always
    evaluated: list[Individual] = []

    if cfg.sweep_mode is SweepMode.independent:
        candidates = [
            mutate_one(champion, i, space, rng(i), id=next(ids)) for i in range(space.num_free)
        ]
        evaluated = evaluate_batch(candidates, evaluator, workers=workers)
        best: Individual | None = None
        for candidate in evaluated:
            if candidate.rejected:
                continue
            if best is None or candidate.fitness > best.fitness:  # type: ignore[operator]
                best = candidate
        if best is not None and _improves(best, champion, always):
            return SweepResult(best, evaluated, True)
        return SweepResult(champion, evaluated, False)

    base = champion
    for i in range(space.num_free):
        candidate = evaluator(mutate_one(base, i, space, rng(i), id=next(ids)))
        evaluated.append(candidate)
        if _improves(candidate, base, always):
            base = candidate
    return SweepResult(base, evaluated, base is not champion)


def snapshot(algorithm: str, cfg_dict: dict[str, Any], evaluator: Evaluator) -> dict[str, Any]:
    """Configuration stored in a run log"""
    return {
        "algorithm": algorithm,
        **cfg_dict,
        "evaluator": evaluator.describe(),
        "fom": evaluator.fom_config.to_dict(),
    }


def run_cga(
    space: ParameterSpace,
    cfg: CgaConfig,
    evaluator: Evaluator,
    workers: int = 1,
) -> RunLog:
    """Run the circuit-centric genetic algorithm

    After the initial population, sweeps are repeated on the champion until
    its fitness reaches `cfg.target_fom` or the remaining budget cannot pay
    for a full sweep (one evaluation per free variable). Rejected
    evaluations count against the budget.

    Parameters
    ----------
    space : ParameterSpace
        The parameter space
    cfg : CgaConfig
        The configuration
    evaluator : Evaluator
        The evaluator, which also carries the figure-of-merit rules
    workers : int, optional
        Maximum number of concurrent evaluations, by default 1

    Returns
    -------
    RunLog
        The complete run log
    """
    budget = cfg.budget(space)
    ids = itertools.count()
    population, champion = initialize_population(space, cfg, evaluator, workers=workers, ids=ids)
    used = len(population)
    evaluations = [EvaluationRecord(generation=0, individual=ind) for ind in population]
    records = [
        GenerationRecord(
            generation=0,
            champion=champion,
            candidates_evaluated=0,
            cumulative_evaluations=used,
            accepted=True,
        )
    ]
    logger.info(
        "Initial population evaluated",
        pop_size=cfg.pop_size,
        champion=champion.id,
        fitness=champion.fitness,
    )

    generation = 0
    while True:
        fitness: float = champion.fitness  # type: ignore[assignment]
        if cfg.target_fom is not None and fitness >= cfg.target_fom:
            terminated_by = Termination.target_reached
            break
        if budget - used < space.num_free:
            terminated_by = Termination.budget_exhausted
            break

        generation += 1
        result = mutation_sweep(
            champion, space, evaluator, cfg, generation=generation, ids=ids, workers=workers
        )
        used += len(result.evaluated)
        champion = result.champion
        evaluations.extend(
            EvaluationRecord(generation=generation, individual=ind) for ind in result.evaluated
        )
        records.append(
            GenerationRecord(
                generation=generation,
                champion=champion,
                candidates_evaluated=len(result.evaluated),
                cumulative_evaluations=used,
                accepted=result.accepted,
            )
        )
        logger.debug(
            "Sweep done",
            generation=generation,
            fitness=champion.fitness,
            evaluations=used,
            accepted=result.accepted,
        )

    logger.info(
        f"CGA finished: {terminated_by.value}",
        generations=generation,
        evaluations=used,
        fitness=champion.fitness,
    )
    return RunLog(
        algorithm="cga",
        config=snapshot("cga", cfg.to_dict(), evaluator),
        space=space.to_dict(),
        records=records,
        evaluations=evaluations,
        terminated_by=terminated_by,
    )
