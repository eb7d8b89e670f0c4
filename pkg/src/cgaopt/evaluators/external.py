from __future__ import annotations

from pathlib import Path
from typing import Any, ClassVar

from .. import exceptions
from ..simulator import NetlistTemplate, SimJobConfig, check_template, run_template
from ..space import Individual
from .base import EvalResult, Evaluator, EvaluatorKind


class External(Evaluator):
    """Render a netlist template per individual, run the configured command
    and parse its result file. Reentrancy is whatever the user declares for
    the wrapped simulator."""

    kind = EvaluatorKind.external
    defaults: ClassVar[dict[str, Any]] = {
        "template": None,
        "command": None,
        "timeout_s": 120.0,
        "result_file": "metrics.txt",
        "netlist_file": "circuit.cir",
        "constants": {},
        "keep_workdir": "on_failure",
        "workdir_root": None,
    }

    def __init__(self, space, fom_config=None, params=None, reentrant: bool = False) -> None:
        super().__init__(space, fom_config, params)
        template = self.params["template"]
        if template is None:
            raise exceptions.InvalidConfiguration("External evaluator needs a 'template'")
        if isinstance(template, NetlistTemplate):
            self.template = template
        else:
            self.template = NetlistTemplate.from_file(Path(template))
        self.job = SimJobConfig.from_dict(self.params)
        self._reentrant = bool(reentrant)
        check_template(self.template, space, list(self.job.fixed_constants))

    @property
    def reentrant(self) -> bool:
        return self._reentrant

    def evaluate(self, ind: Individual) -> EvalResult:
        metrics = run_template(self.template, self.job, ind, self.space)
        return self.result_from_metrics(metrics)
