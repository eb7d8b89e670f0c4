from __future__ import annotations

import abc
import math
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from typing import Any, ClassVar, Mapping, Sequence

import attr
import structlog

from .. import exceptions
from ..fitness import FomConfig, Metrics, compute_fom
from ..space import Individual, ParameterSpace

logger = structlog.get_logger()


class EvaluatorKind(str, Enum):
    quadratic_rf = "quadratic_rf"
    physical_lite = "physical_lite"
    benchmark = "benchmark"
    external = "external"


@attr.s(frozen=True, kw_only=True, slots=True)
class EvaluatorSpec:
    """Which evaluator to build and with which parameters. Built-in
    evaluators are always reentrant; for the external one it is declared
    by the user."""

    kind: EvaluatorKind = attr.ib(converter=EvaluatorKind)
    params: dict[str, Any] = attr.ib(factory=dict)
    reentrant: bool = attr.ib(None)

    def __attrs_post_init__(self):
        if self.reentrant is None:
            object.__setattr__(self, "reentrant", self.kind is not EvaluatorKind.external)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> EvaluatorSpec:
        if "kind" not in data:
            raise exceptions.InvalidConfiguration("Evaluator needs a 'kind'")
        kind = str(data["kind"])
        if kind not in EvaluatorKind.__members__:
            known = tuple(EvaluatorKind.__members__)
            raise exceptions.UnknownEvaluatorError(kind=kind, known=known)
        return cls(
            kind=kind,
            params=dict(data.get("params", {})),
            reentrant=data.get("reentrant"),
        )

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind.value, "params": dict(self.params), "reentrant": self.reentrant}


@attr.s(frozen=True, slots=True)
class EvalResult:
    fitness: float = attr.ib(converter=float)
    metrics: Metrics | None = attr.ib(None)
    evaluations_consumed: int = attr.ib(1)


def _plain(value: Any) -> Any:
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    if isinstance(value, Mapping):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if hasattr(value, "tolist"):
        return value.tolist()
    return str(value)


class Evaluator(abc.ABC):
    """Maps an individual of a parameter space to an :class:`EvalResult`"""

    kind: ClassVar[EvaluatorKind]
    #: Parameter names and defaults, as listed by ``cga-opt list-evaluators``
    defaults: ClassVar[dict[str, Any]] = {}

    def __init__(
        self,
        space: ParameterSpace,
        fom_config: FomConfig | None = None,
        params: Mapping[str, Any] | None = None,
    ) -> None:
        self.space = space
        self.fom_config = FomConfig() if fom_config is None else fom_config
        params = dict(params or {})
        unknown = set(params) - set(self.defaults)
        if unknown:
            raise exceptions.InvalidConfiguration(
                f"Unknown parameters {sorted(unknown)!r} for evaluator {self.kind.value!r}"
            )
        self.params = {**self.defaults, **params}

    @property
    def reentrant(self) -> bool:
        return True

    def describe(self) -> dict[str, Any]:
        """JSON friendly description stored in run logs"""
        return {
            "kind": self.kind.value,
            "params": {k: _plain(v) for k, v in sorted(self.params.items())},
            "reentrant": self.reentrant,
        }

    def result_from_metrics(self, metrics: Metrics) -> EvalResult:
        return EvalResult(fitness=compute_fom(metrics, self.fom_config), metrics=metrics)

    @abc.abstractmethod
    def evaluate(self, ind: Individual) -> EvalResult: ...

    def __call__(self, ind: Individual) -> Individual:
        """Evaluate `ind`, turning evaluation errors into a rejected
        individual with fitness ``-inf``"""
        try:
            result = self.evaluate(ind)
        except exceptions.EvaluationError as e:
            logger.warning("Rejected evaluation", id=ind.id, error=str(e))
            return ind.evolve(fitness=-math.inf, metrics=None, error=str(e))
        return ind.evolve(fitness=result.fitness, metrics=result.metrics, error=None)


def evaluate_batch(
    individuals: Sequence[Individual],
    evaluator: Evaluator,
    workers: int = 1,
) -> list[Individual]:
    """Evaluate a batch of individuals

    Evaluations run concurrently on a thread pool only when `workers > 1`
    and the evaluator is reentrant. The result is in the order of
    `individuals`, independent of completion order.

    Parameters
    ----------
    individuals : Sequence[Individual]
        The individuals
    evaluator : Evaluator
        The evaluator
    workers : int, optional
        Maximum number of concurrent evaluations, by default 1

    Returns
    -------
    list[Individual]
        Evaluated individuals (rejected ones have fitness ``-inf``)
    """
    if workers > 1 and evaluator.reentrant and len(individuals) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(evaluator, individuals))
    return [evaluator(ind) for ind in individuals]
