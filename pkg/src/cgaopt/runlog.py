from __future__ import annotations

import json
from enum import Enum
from typing import Any

import attr

from .fitness import Metrics
from .space import Individual


class Termination(str, Enum):
    target_reached = "target_reached"
    budget_exhausted = "budget_exhausted"


def individual_to_dict(ind: Individual) -> dict[str, Any]:
    return {
        "id": ind.id,
        "parent_id": ind.parent_id,
        "values": list(ind.values),
        "fitness": ind.fitness,
        "metrics": None if ind.metrics is None else ind.metrics.to_dict(),
        "error": ind.error,
    }


def individual_from_dict(data: dict[str, Any]) -> Individual:
    metrics = data.get("metrics")
    return Individual(
        values=data["values"],
        id=data["id"],
        parent_id=data.get("parent_id"),
        fitness=data.get("fitness"),
        metrics=None if metrics is None else Metrics(**metrics),
        error=data.get("error"),
    )


@attr.s(frozen=True, kw_only=True, slots=True)
class GenerationRecord:
    generation: int = attr.ib()
    champion: Individual = attr.ib()
    candidates_evaluated: int = attr.ib()
    cumulative_evaluations: int = attr.ib()
    accepted: bool = attr.ib()
    #: Mean fitness of the parents selected for breeding (GA only)
    selected_mean_fitness: float | None = attr.ib(None)
    #: Mean fitness of the generation's population (GA only)
    population_mean_fitness: float | None = attr.ib(None)

    def to_dict(self) -> dict[str, Any]:
        d = attr.asdict(self, recurse=False)
        d["champion"] = individual_to_dict(self.champion)
        return d

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> GenerationRecord:
        return cls(**{**data, "champion": individual_from_dict(data["champion"])})


@attr.s(frozen=True, kw_only=True, slots=True)
class EvaluationRecord:
    generation: int = attr.ib()
    individual: Individual = attr.ib()

    def to_dict(self) -> dict[str, Any]:
        return {"generation": self.generation, **individual_to_dict(self.individual)}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> EvaluationRecord:
        data = dict(data)
        generation = data.pop("generation")
        return cls(generation=generation, individual=individual_from_dict(data))


@attr.s(frozen=True, kw_only=True, slots=True)
class RunLog:
    """Complete record of one optimisation run"""

    algorithm: str = attr.ib()
    config: dict[str, Any] = attr.ib()
    space: dict[str, Any] = attr.ib()
    records: tuple[GenerationRecord, ...] = attr.ib(converter=tuple)
    evaluations: tuple[EvaluationRecord, ...] = attr.ib(converter=tuple)
    terminated_by: Termination = attr.ib(converter=Termination)

    @property
    def champion(self) -> Individual:
        return self.records[-1].champion

    @property
    def final_best(self) -> float:
        fitness = self.champion.fitness
        return float("-inf") if fitness is None else fitness

    @property
    def total_evaluations(self) -> int:
        return self.records[-1].cumulative_evaluations

    def champion_fitness(self) -> list[float]:
        """Champion fitness of every record"""
        return [r.champion.fitness for r in self.records]  # type: ignore[misc]

    def is_monotone(self) -> bool:
        fitness = self.champion_fitness()
        return all(b >= a for a, b in zip(fitness, fitness[1:]))

    def to_dict(self) -> dict[str, Any]:
        return {
            "algorithm": self.algorithm,
            "config": self.config,
            "space": self.space,
            "terminated_by": self.terminated_by.value,
            "records": [r.to_dict() for r in self.records],
            "evaluations": [e.to_dict() for e in self.evaluations],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> RunLog:
        return cls(
            algorithm=data["algorithm"],
            config=data["config"],
            space=data["space"],
            terminated_by=data["terminated_by"],
            records=[GenerationRecord.from_dict(r) for r in data["records"]],
            evaluations=[EvaluationRecord.from_dict(e) for e in data["evaluations"]],
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> RunLog:
        return cls.from_dict(json.loads(text))
