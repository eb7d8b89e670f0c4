from __future__ import annotations

from enum import Enum
from typing import Any, Callable, ClassVar

import numpy as np

from .. import exceptions
from ..space import Individual, ParameterSpace
from .base import EvalResult, Evaluator, EvaluatorKind
from .quadratic import active_mask, targets_for


def sphere(z: np.ndarray) -> float:
    return float(np.sum(z**2))


def rastrigin(z: np.ndarray) -> float:
    return float(np.sum(z**2 - 10 * np.cos(2 * np.pi * z) + 10))


def rosenbrock(z: np.ndarray) -> float:
    if z.size == 1:
        return float((1 - z[0]) ** 2)
    return float(np.sum(100 * (z[1:] - z[:-1] ** 2) ** 2 + (1 - z[:-1]) ** 2))


class Function(str, Enum):
    sphere = "sphere"
    rastrigin = "rastrigin"
    rosenbrock = "rosenbrock"


FUNCTIONS: dict[Function, Callable[[np.ndarray], float]] = {
    Function.sphere: sphere,
    Function.rastrigin: rastrigin,
    Function.rosenbrock: rosenbrock,
}


class Benchmark(Evaluator):
    """Standard test functions on the normalised coordinates

    ``z = 10 (u - offset)`` per non-degenerate free variable, so z lies in
    [-5, 5] for the default offset 0.5. The fitness is ``-f(z)``: sphere and
    rastrigin peak at 0 where ``u == offset``, rosenbrock where ``z == 1``.
    No metrics are produced.
    """

    kind = EvaluatorKind.benchmark
    defaults: ClassVar[dict[str, Any]] = {"function": "sphere", "offset": 0.5}

    def __init__(self, space, fom_config=None, params=None) -> None:
        super().__init__(space, fom_config, params)
        name = str(self.params["function"])
        if name not in Function.__members__:
            raise exceptions.UnknownBenchmarkError(name=name)
        self.function = FUNCTIONS[Function(name)]
        self.offset = targets_for(space, self.params["offset"])
        self.mask = active_mask(space)

    def coordinates(self, values) -> np.ndarray:
        u = self.space.normalize(values)
        return 10.0 * (u[self.mask] - self.offset[self.mask])

    def evaluate(self, ind: Individual) -> EvalResult:
        z = self.coordinates(ind.values)
        if z.size == 0:
            return EvalResult(fitness=0.0)
        return EvalResult(fitness=-self.function(z))


def evaluate_benchmark(ind: Individual, space: ParameterSpace, params=None):
    return Benchmark(space, params=params).evaluate(ind)
