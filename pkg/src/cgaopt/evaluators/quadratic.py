from __future__ import annotations

from typing import Any, ClassVar

import numpy as np

from .. import exceptions
from ..fitness import Metrics
from ..space import Individual, ParameterSpace
from .base import EvalResult, Evaluator, EvaluatorKind


def targets_for(space: ParameterSpace, targets: Any) -> np.ndarray:
    """Broadcast a scalar target, or check a per-free-variable list of
    targets, all within [0, 1]"""
    t = np.asarray(targets, dtype=float)
    if t.ndim == 0:
        t = np.full(space.num_free, float(t))
    if t.shape != (space.num_free,):
        raise exceptions.InvalidConfiguration(
            f"Expected 1 or {space.num_free} targets, got {t.size}"
        )
    if np.any(t < 0) or np.any(t > 1):
        raise exceptions.InvalidConfiguration("Targets must lie in [0, 1]")
    return t


def active_mask(space: ParameterSpace) -> np.ndarray:
    """Free variables with a non-degenerate range"""
    return np.array([not spec.degenerate for spec in space.free_specs], dtype=bool)


class QuadraticRF(Evaluator):
    """Surrogate with a known optimum

    With ``u`` the free values normalised to [0, 1] and
    ``d = mean((u - t)**2)`` over non-degenerate variables::

        gain_db = G0 - Sg * d
        nf_db   = N0 + Sn * d
        power_w = P0 + Sp * d

    so the figure of merit is maximal where ``u == t``.
    """

    kind = EvaluatorKind.quadratic_rf
    defaults: ClassVar[dict[str, Any]] = {
        "targets": 0.5,
        "G0": 18.0,
        "Sg": 10.0,
        "N0": 2.0,
        "Sn": 6.0,
        "P0": 0.008,
        "Sp": 0.01,
    }

    def __init__(self, space, fom_config=None, params=None) -> None:
        super().__init__(space, fom_config, params)
        self.targets = targets_for(space, self.params["targets"])
        self.mask = active_mask(space)

    def distance(self, values) -> float:
        if not self.mask.any():
            return 0.0
        u = self.space.normalize(values)
        return float(np.mean((u[self.mask] - self.targets[self.mask]) ** 2))

    def metrics_at(self, d: float) -> Metrics:
        p = self.params
        return Metrics(
            gain_db=p["G0"] - p["Sg"] * d,
            power_w=p["P0"] + p["Sp"] * d,
            nf_db=p["N0"] + p["Sn"] * d,
        )

    def evaluate(self, ind: Individual) -> EvalResult:
        return self.result_from_metrics(self.metrics_at(self.distance(ind.values)))


def evaluate_quadratic_rf(ind: Individual, space: ParameterSpace, params=None, fom_config=None):
    return QuadraticRF(space, fom_config=fom_config, params=params).evaluate(ind)
