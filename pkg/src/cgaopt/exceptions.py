from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path


class CgaoptError(Exception):
    pass


class ConfigurationError(CgaoptError, ValueError):
    pass


@dataclass
class InvalidConfiguration(ConfigurationError):
    reason: str

    def __str__(self) -> str:
        return self.reason


@dataclass
class InputFileNotFound(ConfigurationError):
    fname: Path

    def __str__(self) -> str:
        return f"File {str(self.fname)!r} does not exist"


@dataclass
class InvalidParameterSpec(ConfigurationError):
    name: str
    reason: str

    def __str__(self) -> str:
        return f"Invalid parameter {self.name!r}: {self.reason}"


@dataclass
class DuplicateParameterError(ConfigurationError):
    duplicates: set[str]

    def __str__(self) -> str:
        return f"Found multiple definitions for {sorted(self.duplicates)!r}"


@dataclass
class InvalidTieGroupError(ConfigurationError):
    group: tuple[str, ...]
    reason: str

    def __str__(self) -> str:
        return f"Invalid tie group {list(self.group)!r}: {self.reason}"


@dataclass
class UnknownEvaluatorError(ConfigurationError):
    kind: str
    known: tuple[str, ...] = ()

    def __str__(self) -> str:
        return f"Unknown evaluator {self.kind!r}, expected one of {list(self.known)!r}"


@dataclass
class UnknownBenchmarkError(ConfigurationError):
    name: str

    def __str__(self) -> str:
        return f"Unknown benchmark function {self.name!r}"


@dataclass
class UsageError(CgaoptError, IndexError):
    reason: str

    def __str__(self) -> str:
        return self.reason


@dataclass
class FriisValidationError(CgaoptError, ValueError):
    reason: str

    def __str__(self) -> str:
        return f"Invalid cascade: {self.reason}"


class EvaluationError(CgaoptError):
    """Raised for failures that reject a single evaluation without
    aborting a campaign"""


@dataclass
class DomainError(EvaluationError, ValueError):
    name: str
    value: float

    def __str__(self) -> str:
        return f"Value {self.value!r} for {self.name!r} is outside the domain"


@dataclass
class DegenerateDenominatorError(EvaluationError, ZeroDivisionError):
    nf_db: float
    power_w: float

    def __str__(self) -> str:
        return (
            "Figure of merit has a zero denominator "
            f"(nf_db={self.nf_db!r}, power_w={self.power_w!r})"
        )


@dataclass
class TemplateError(EvaluationError, KeyError):
    missing: list[str]

    def __str__(self) -> str:
        return f"Unresolved placeholders in netlist template: {self.missing!r}"


@dataclass
class SimulationError(EvaluationError):
    command: list[str]
    returncode: int
    output: str = ""

    def __str__(self) -> str:
        return (
            f"Command {self.command!r} exited with status {self.returncode}\n"
            f"{self.output}"
        )


@dataclass
class SimulationTimeout(EvaluationError):
    command: list[str]
    timeout: float

    def __str__(self) -> str:
        return f"Command {self.command!r} timed out after {self.timeout} s"


@dataclass
class MeasurementParseError(EvaluationError, ValueError):
    reason: str
    line_no: int | None = None
    line: str = field(default="")

    def __str__(self) -> str:
        if self.line_no is None:
            return f"Unable to parse measurements: {self.reason}"
        return f"Unable to parse measurements, line {self.line_no} ({self.line!r}): {self.reason}"


@dataclass
class InitializationFailed(CgaoptError):
    pop_size: int

    def __str__(self) -> str:
        return f"All {self.pop_size} individuals of the initial population were rejected"
