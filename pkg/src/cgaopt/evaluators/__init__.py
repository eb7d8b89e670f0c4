from __future__ import annotations

from structlog import get_logger

from .. import exceptions
from ..fitness import FomConfig
from ..space import ParameterSpace
from .base import EvalResult, Evaluator, EvaluatorKind, EvaluatorSpec, evaluate_batch
from .benchmark import Benchmark, evaluate_benchmark
from .external import External
from .physical import PhysicalLite, evaluate_physical_lite
from .quadratic import QuadraticRF, evaluate_quadratic_rf

logger = get_logger()

EVALUATORS: dict[EvaluatorKind, type[Evaluator]] = {
    EvaluatorKind.quadratic_rf: QuadraticRF,
    EvaluatorKind.physical_lite: PhysicalLite,
    EvaluatorKind.benchmark: Benchmark,
    EvaluatorKind.external: External,
}


def get_evaluator(
    spec: EvaluatorSpec,
    space: ParameterSpace,
    fom_config: FomConfig | None = None,
) -> Evaluator:
    """Build the evaluator described by `spec`

    Raises
    ------
    exceptions.UnknownEvaluatorError
        If the kind is unknown
    """
    try:
        cls = EVALUATORS[EvaluatorKind(spec.kind)]
    except (KeyError, ValueError):
        raise exceptions.UnknownEvaluatorError(
            kind=str(spec.kind), known=tuple(k.value for k in EVALUATORS)
        ) from None

    logger.debug("Building evaluator", kind=cls.kind.value, params=spec.params)
    if cls is External:
        return External(space, fom_config, spec.params, reentrant=bool(spec.reentrant))
    if spec.reentrant is False:
        logger.warning("Built-in evaluators are reentrant, ignoring reentrant=false")
    return cls(space, fom_config, spec.params)


__all__ = [
    "Benchmark",
    "EVALUATORS",
    "EvalResult",
    "Evaluator",
    "EvaluatorKind",
    "EvaluatorSpec",
    "External",
    "PhysicalLite",
    "QuadraticRF",
    "evaluate_batch",
    "evaluate_benchmark",
    "evaluate_physical_lite",
    "evaluate_quadratic_rf",
    "get_evaluator",
]
