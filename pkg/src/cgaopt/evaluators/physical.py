from __future__ import annotations

import math
from typing import Any, ClassVar

from .. import exceptions
from ..fitness import Metrics, friis_cascade, lin_to_db
from ..space import Individual, ParameterSpace
from ..units import to_si
from .base import EvalResult, Evaluator, EvaluatorKind

#: Parameters the surrogate reads; everything else in the space is ignored
REQUIRED = ("R1", "R3", "Rm", "I1", "I2", "I3", "M1_width", "M6_width")


class PhysicalLite(Evaluator):
    """Two-stage receiver surrogate: a common-source LNA followed by a
    single-balanced mixer, combined with the Friis cascade.

    Square-law devices, ``gm = sqrt(2 KP (W / L) I)``::

        G1 = (gm1 * (R1 || R3))**2          F1 = 1 + gamma / (gm1 Rs)
        G2 = (2 / pi)**2 * (gm6 * Rm)**2    F2 = 1 + (gamma pi**2 / 4) / (gm6 Rs)

    gain is ``G1 G2`` in dB, the noise figure comes from the cascade and the
    power is ``VDD (I1 + I2 + I3)``. All values are converted to SI with the
    units of the space file.
    """

    kind = EvaluatorKind.physical_lite
    defaults: ClassVar[dict[str, Any]] = {
        "KP": 200e-6,
        "L": 0.18e-6,
        "gamma": 1.33,
        "Rs": 50.0,
        "VDD": 1.2,
    }

    def __init__(self, space, fom_config=None, params=None) -> None:
        super().__init__(space, fom_config, params)
        missing = [name for name in REQUIRED if name not in space.names]
        if missing:
            raise exceptions.InvalidConfiguration(
                f"The physical_lite evaluator needs the parameters {missing!r}"
            )

    def si_values(self, ind: Individual) -> dict[str, float]:
        named = self.space.expand(ind.values)
        values = {}
        for name in REQUIRED:
            value = to_si(named[name], self.space.find(name).unit)
            if not value > 0:
                raise exceptions.DomainError(name=name, value=value)
            values[name] = value
        return values

    def stages(self, ind: Individual) -> tuple[list[float], list[float], float]:
        """Noise factors and gains of the two stages, and the supply power"""
        v = self.si_values(ind)
        p = self.params
        gm1 = math.sqrt(2 * p["KP"] * (v["M1_width"] / p["L"]) * v["I1"])
        r_load = v["R1"] * v["R3"] / (v["R1"] + v["R3"])
        g1 = (gm1 * r_load) ** 2
        f1 = 1 + p["gamma"] / (gm1 * p["Rs"])

        gm6 = math.sqrt(2 * p["KP"] * (v["M6_width"] / p["L"]) * v["I3"])
        g2 = (2 / math.pi) ** 2 * (gm6 * v["Rm"]) ** 2
        f2 = 1 + (p["gamma"] * math.pi**2 / 4) / (gm6 * p["Rs"])

        power = p["VDD"] * (v["I1"] + v["I2"] + v["I3"])
        return [f1, f2], [g1, g2], power

    def evaluate(self, ind: Individual) -> EvalResult:
        factors, gains, power = self.stages(ind)
        f_total = friis_cascade(factors, gains[:1])
        metrics = Metrics(
            gain_db=lin_to_db(gains[0] * gains[1]),
            power_w=power,
            nf_db=lin_to_db(f_total),
        )
        return self.result_from_metrics(metrics)


def evaluate_physical_lite(ind: Individual, space: ParameterSpace, consts=None, fom_config=None):
    return PhysicalLite(space, fom_config=fom_config, params=consts).evaluate(ind)
