"""Figure of merit, penalty clamps and the Friis cascade.

The figure of merit is computed literally on dB quantities::

    FoM = gain_db / (nf_db * power_w)

after replacing every metric that violates a constraint rule by the rule's
replacement value (by default a noise figure above 5 dB becomes 10000).
"""

from __future__ import annotations

import math
from enum import Enum
from typing import Any, Sequence

import attr

from . import exceptions


class MetricName(str, Enum):
    gain_db = "gain_db"
    power_w = "power_w"
    nf_db = "nf_db"


class Comparator(str, Enum):
    greater = ">"
    less = "<"

    def violated(self, value: float, threshold: float) -> bool:
        if self is Comparator.greater:
            return value > threshold
        return value < threshold


@attr.s(frozen=True, slots=True)
class Metrics:
    """Conversion gain [dB], power consumption [W] and noise figure [dB]"""

    gain_db: float = attr.ib(converter=float)
    power_w: float = attr.ib(converter=float)
    nf_db: float = attr.ib(converter=float)

    def validate(self) -> Metrics:
        """Check that power is positive and the noise figure non-negative

        Raises
        ------
        exceptions.DomainError
            If either check fails
        """
        if not self.power_w > 0:
            raise exceptions.DomainError(name="power_w", value=self.power_w)
        if not self.nf_db >= 0:
            raise exceptions.DomainError(name="nf_db", value=self.nf_db)
        if not math.isfinite(self.gain_db):
            raise exceptions.DomainError(name="gain_db", value=self.gain_db)
        return self

    def to_dict(self) -> dict[str, float]:
        return attr.asdict(self)


def _finite(instance, attribute, value):
    if not math.isfinite(value):
        raise exceptions.InvalidConfiguration(
            f"{attribute.name} of a constraint rule must be finite, got {value!r}"
        )


@attr.s(frozen=True, kw_only=True, slots=True)
class ConstraintRule:
    """Replace `metric` by `replacement` whenever
    ``metric <comparator> threshold`` holds"""

    metric: MetricName = attr.ib(converter=MetricName)
    comparator: Comparator = attr.ib(converter=Comparator)
    threshold: float = attr.ib(converter=float, validator=_finite)
    replacement: float = attr.ib(converter=float, validator=_finite)

    def __attrs_post_init__(self):
        # Replacements must keep the clamped metrics inside the FoM domain
        if self.metric is MetricName.power_w and not self.replacement > 0:
            raise exceptions.InvalidConfiguration(
                f"A power_w replacement must be positive, got {self.replacement!r}"
            )
        if self.metric is MetricName.nf_db and not self.replacement >= 0:
            raise exceptions.InvalidConfiguration(
                f"A nf_db replacement must be non-negative, got {self.replacement!r}"
            )

    def applies_to(self, m: Metrics) -> bool:
        return self.comparator.violated(getattr(m, self.metric.value), self.threshold)

    def to_dict(self) -> dict[str, Any]:
        return {
            "metric": self.metric.value,
            "comparator": self.comparator.value,
            "threshold": self.threshold,
            "replacement": self.replacement,
        }


#: The only rule stated for the receiver: a noise figure above 5 dB is
#: replaced by 10000 so that a large gain cannot compensate for it
DEFAULT_RULES = (
    ConstraintRule(metric="nf_db", comparator=">", threshold=5.0, replacement=10_000.0),
)


def _unique_rules(instance, attribute, value: tuple[ConstraintRule, ...]):
    keys = [(rule.metric, rule.comparator) for rule in value]
    if len(keys) != len(set(keys)):
        raise exceptions.InvalidConfiguration(
            "Only one constraint rule per (metric, comparator) pair is allowed"
        )


@attr.s(frozen=True, slots=True)
class FomConfig:
    rules: tuple[ConstraintRule, ...] = attr.ib(
        default=DEFAULT_RULES, converter=tuple, validator=_unique_rules
    )

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> FomConfig:
        if "rules" not in data:
            return cls()
        try:
            return cls(rules=tuple(ConstraintRule(**rule) for rule in data["rules"]))
        except (TypeError, ValueError) as e:
            raise exceptions.InvalidConfiguration(f"Invalid constraint rule: {e}") from e

    def to_dict(self) -> dict[str, Any]:
        return {"rules": [rule.to_dict() for rule in self.rules]}


def apply_constraints(m: Metrics, cfg: FomConfig) -> Metrics:
    """Replace every metric that violates a rule of `cfg`

    All rules are checked against the original metrics.

    Parameters
    ----------
    m : Metrics
        The measured metrics
    cfg : FomConfig
        The penalty rules

    Returns
    -------
    Metrics
        A copy with violated metrics replaced
    """
    changes = {rule.metric.value: rule.replacement for rule in cfg.rules if rule.applies_to(m)}
    if not changes:
        return m
    return attr.evolve(m, **changes)


def compute_fom(m: Metrics, cfg: FomConfig | None = None) -> float:
    """Figure of merit ``gain_db / (nf_db * power_w)`` of the clamped metrics

    Parameters
    ----------
    m : Metrics
        The measured metrics
    cfg : FomConfig | None, optional
        The penalty rules, by default the noise-figure rule

    Returns
    -------
    float
        The figure of merit

    Raises
    ------
    exceptions.DomainError
        If `m` is not valid
    exceptions.DegenerateDenominatorError
        If the clamped noise figure or power is zero
    """
    cfg = FomConfig() if cfg is None else cfg
    clamped = apply_constraints(m.validate(), cfg)
    denominator = clamped.nf_db * clamped.power_w
    if denominator == 0:
        raise exceptions.DegenerateDenominatorError(nf_db=clamped.nf_db, power_w=clamped.power_w)
    return clamped.gain_db / denominator


def friis_cascade(noise_factors: Sequence[float], gains: Sequence[float]) -> float:
    """Total noise factor of a cascade of stages

    ``F = F1 + (F2 - 1) / G1 + (F3 - 1) / (G1 G2) + ...``

    All quantities are linear (not dB).

    Parameters
    ----------
    noise_factors : Sequence[float]
        Noise factor of each stage, all >= 1
    gains : Sequence[float]
        Available power gain of every stage but the last, all > 0

    Returns
    -------
    float
        The total noise factor

    Raises
    ------
    exceptions.FriisValidationError
        On a length mismatch, a noise factor below 1 or a non-positive gain
    """
    if len(noise_factors) == 0:
        raise exceptions.FriisValidationError("at least one stage is required")
    if len(gains) != len(noise_factors) - 1:
        raise exceptions.FriisValidationError(
            f"expected {len(noise_factors) - 1} gains for {len(noise_factors)} stages, "
            f"got {len(gains)}"
        )
    if any(not f >= 1 for f in noise_factors):
        raise exceptions.FriisValidationError(f"noise factors must be >= 1, got {noise_factors!r}")
    if any(not g > 0 for g in gains):
        raise exceptions.FriisValidationError(f"gains must be > 0, got {gains!r}")

    total = float(noise_factors[0])
    cumulative_gain = 1.0
    for factor, gain in zip(noise_factors[1:], gains):
        cumulative_gain *= gain
        total += (factor - 1.0) / cumulative_gain
    return total


class Direction(str, Enum):
    db_to_lin_power = "db_to_lin_power"
    lin_to_db_power = "lin_to_db_power"


def db_lin_convert(x: float, direction: Direction | str) -> float:
    """Convert a power ratio between dB and linear scale

    Raises
    ------
    exceptions.DomainError
        When converting a non-positive linear value to dB
    """
    direction = Direction(direction)
    if direction is Direction.db_to_lin_power:
        return 10.0 ** (x / 10.0)
    if not x > 0:
        raise exceptions.DomainError(name="linear power ratio", value=x)
    return 10.0 * math.log10(x)


def db_to_lin(x: float) -> float:
    return db_lin_convert(x, Direction.db_to_lin_power)


def lin_to_db(x: float) -> float:
    return db_lin_convert(x, Direction.lin_to_db_power)
