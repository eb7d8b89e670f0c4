from __future__ import annotations

import math
import typing
from decimal import Decimal
from typing import Any, Iterable, Mapping, Sequence

import attr
import numpy as np
from structlog import get_logger

from . import exceptions

if typing.TYPE_CHECKING:
    from .fitness import Metrics

logger = get_logger()

#: Tolerance, in units of the step, for grid-membership checks
GRID_TOL = 1e-9


def _decimals(x: float) -> int:
    """Number of decimals in the shortest decimal representation of `x`"""
    exponent = Decimal(repr(float(x))).as_tuple().exponent
    if not isinstance(exponent, int):
        return 0
    return max(0, -exponent)


@attr.s(frozen=True, kw_only=True, slots=True)
class ParameterSpec:
    """A named, bounded design variable restricted to the grid
    ``{min + k * step | k = 0, 1, ...}``.

    The initial value is snapped onto the grid on construction.
    A spec with ``min == max`` is a degenerate single-point grid.
    """

    name: str = attr.ib()
    min: float = attr.ib(converter=float)
    max: float = attr.ib(converter=float)
    step: float = attr.ib(converter=float)
    initial: float = attr.ib(converter=float)
    unit: str | None = attr.ib(None)
    description: str | None = attr.ib(None)
    num_points: int = attr.ib(init=False, repr=False)
    ndigits: int = attr.ib(init=False, repr=False, eq=False)

    def __attrs_post_init__(self):
        if not self.name:
            raise exceptions.InvalidParameterSpec(name=self.name, reason="empty name")
        if not (self.step > 0 and math.isfinite(self.step)):
            raise exceptions.InvalidParameterSpec(
                name=self.name, reason=f"step must be positive, got {self.step}"
            )
        if not (math.isfinite(self.min) and math.isfinite(self.max)):
            raise exceptions.InvalidParameterSpec(name=self.name, reason="bounds must be finite")
        if self.min > self.max:
            raise exceptions.InvalidParameterSpec(
                name=self.name, reason=f"min {self.min} is larger than max {self.max}"
            )
        if self.min < self.max and (self.max - self.min) < self.step * (1 - GRID_TOL):
            raise exceptions.InvalidParameterSpec(
                name=self.name, reason=f"range {self.min}..{self.max} is narrower than step"
            )
        if not (self.min <= self.initial <= self.max):
            raise exceptions.InvalidParameterSpec(
                name=self.name,
                reason=f"initial value {self.initial} outside {self.min}..{self.max}",
            )

        object.__setattr__(
            self, "num_points", int(math.floor((self.max - self.min) / self.step + GRID_TOL)) + 1
        )
        object.__setattr__(self, "ndigits", max(_decimals(self.step), _decimals(self.min)))

        snapped = quantize(self.initial, self)
        if snapped != self.initial:
            logger.debug("Snapped initial value onto grid", name=self.name, value=snapped)
            object.__setattr__(self, "initial", snapped)

    @property
    def degenerate(self) -> bool:
        return self.num_points == 1

    def grid_value(self, k: int) -> float:
        """Value of grid point number `k`"""
        return round(self.min + int(k) * self.step, self.ndigits)

    def grid(self) -> np.ndarray:
        """All grid points"""
        return np.array([self.grid_value(k) for k in range(self.num_points)])

    def contains(self, value: float) -> bool:
        """Return True if `value` is inside the range and on the grid"""
        if not (self.min <= value <= self.max):
            return False
        ratio = (value - self.min) / self.step
        return abs(ratio - round(ratio)) < GRID_TOL

    def normalize(self, value: float) -> float:
        """Map `value` onto [0, 1]. Degenerate specs map to 0"""
        if self.max == self.min:
            return 0.0
        return (value - self.min) / (self.max - self.min)

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "name": self.name,
            "min": self.min,
            "max": self.max,
            "step": self.step,
            "initial": self.initial,
        }
        if self.unit is not None:
            d["unit"] = self.unit
        if self.description is not None:
            d["description"] = self.description
        return d


def quantize(value: float, spec: ParameterSpec) -> float:
    """Snap `value` onto the grid of `spec`

    The value is clamped to ``[min, max]``, rounded (half up) to the nearest
    grid point and clamped to the last grid point.

    Parameters
    ----------
    value : float
        The value
    spec : ParameterSpec
        The parameter

    Returns
    -------
    float
        A value on the grid of `spec`
    """
    if not spec.step > 0:
        raise exceptions.InvalidParameterSpec(name=spec.name, reason="step must be positive")
    clamped = min(max(float(value), spec.min), spec.max)
    k = int(math.floor((clamped - spec.min) / spec.step + 0.5))
    k = min(max(k, 0), spec.num_points - 1)
    return spec.grid_value(k)


def random_value(spec: ParameterSpec, rng: np.random.Generator) -> float:
    """Draw a grid point of `spec` uniformly at random"""
    return spec.grid_value(int(rng.integers(0, spec.num_points)))


def find_duplicates(x: Iterable[str]) -> set[str]:
    """Find duplicates in an iterable of names

    Parameters
    ----------
    x : Iterable[str]
        The names with potential duplicates

    Returns
    -------
    set[str]
        The duplicate names
    """
    seen = set()
    dupes = []

    for xi in x:
        if xi in seen:
            dupes.append(xi)
        else:
            seen.add(xi)
    return set(dupes)


def _as_groups(groups: Iterable[Iterable[str]] | None) -> tuple[tuple[str, ...], ...]:
    if groups is None:
        return ()
    return tuple(tuple(str(name) for name in group) for group in groups)


@attr.s(frozen=True, slots=True)
class ParameterSpace:
    """An ordered collection of parameters. Parameters in the same tie group
    share one underlying free variable, represented by the member that is
    listed first in `specs`.
    """

    specs: tuple[ParameterSpec, ...] = attr.ib(converter=tuple)
    tie_groups: tuple[tuple[str, ...], ...] = attr.ib(converter=_as_groups, factory=tuple)
    free_specs: tuple[ParameterSpec, ...] = attr.ib(init=False, repr=False, eq=False)
    _free_index: dict[str, int] = attr.ib(init=False, repr=False, eq=False)
    _lookup: dict[str, ParameterSpec] = attr.ib(init=False, repr=False, eq=False)

    def __attrs_post_init__(self):
        if len(self.specs) == 0:
            raise exceptions.InvalidConfiguration("Parameter space has no parameters")

        names = [s.name for s in self.specs]
        duplicates = find_duplicates(names)
        if duplicates:
            raise exceptions.DuplicateParameterError(duplicates=duplicates)

        lookup = {s.name: s for s in self.specs}
        position = {name: i for i, name in enumerate(names)}
        leader_of: dict[str, str] = {}
        for group in self.tie_groups:
            if len(group) < 2:
                raise exceptions.InvalidTieGroupError(group=group, reason="needs two members")
            for name in group:
                if name not in lookup:
                    raise exceptions.InvalidTieGroupError(group=group, reason=f"unknown {name!r}")
                if name in leader_of:
                    raise exceptions.InvalidTieGroupError(
                        group=group, reason=f"{name!r} is in more than one group"
                    )
            members = [lookup[name] for name in group]
            first = members[0]
            for member in members[1:]:
                if (member.min, member.max, member.step) != (first.min, first.max, first.step):
                    raise exceptions.InvalidTieGroupError(
                        group=group, reason="members must share min, max and step"
                    )
            leader = min(group, key=position.__getitem__)
            for name in group:
                leader_of[name] = leader
                if lookup[name].initial != lookup[leader].initial:
                    logger.warning(
                        "Tied parameter has a different initial value, using the group's",
                        name=name,
                        group_initial=lookup[leader].initial,
                    )

        free_specs = tuple(s for s in self.specs if leader_of.get(s.name, s.name) == s.name)
        free_position = {s.name: i for i, s in enumerate(free_specs)}
        free_index = {name: free_position[leader_of.get(name, name)] for name in names}

        object.__setattr__(self, "free_specs", free_specs)
        object.__setattr__(self, "_free_index", free_index)
        object.__setattr__(self, "_lookup", lookup)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.specs)

    @property
    def free_names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.free_specs)

    @property
    def num_free(self) -> int:
        return len(self.free_specs)

    def find(self, name: str) -> ParameterSpec:
        """Find a parameter by name

        Raises
        ------
        exceptions.InvalidConfiguration
            If there is no parameter called `name`
        """
        try:
            return self._lookup[name]
        except KeyError:
            raise exceptions.InvalidConfiguration(f"Unknown parameter {name!r}") from None

    def free_index(self, name: str) -> int:
        """Index of the free variable that parameter `name` maps to"""
        self.find(name)
        return self._free_index[name]

    def initial_values(self) -> tuple[float, ...]:
        return tuple(s.initial for s in self.free_specs)

    def expand(self, values: Sequence[float]) -> dict[str, float]:
        """Map free-variable values onto every parameter, tied members
        mirroring their group's free variable"""
        if len(values) != self.num_free:
            raise exceptions.UsageError(
                f"Expected {self.num_free} free values, got {len(values)}"
            )
        return {s.name: float(values[self._free_index[s.name]]) for s in self.specs}

    def contains(self, values: Sequence[float]) -> bool:
        """Return True if `values` has the right length and every value is
        in range and on its grid"""
        if len(values) != self.num_free:
            return False
        return all(spec.contains(v) for spec, v in zip(self.free_specs, values))

    def normalize(self, values: Sequence[float]) -> np.ndarray:
        """Free values mapped onto [0, 1]"""
        return np.array([spec.normalize(v) for spec, v in zip(self.free_specs, values)])

    def values_from_mapping(
        self,
        assignment: Mapping[str, float],
        base: Sequence[float] | None = None,
    ) -> tuple[float, ...]:
        """Free values from a (partial) name to value assignment

        Parameters not mentioned keep their value from `base` (by default
        the initial values). Values are quantized, with a warning when that
        changes them.

        Raises
        ------
        exceptions.InvalidConfiguration
            For unknown names or conflicting values within a tie group
        """
        values = list(self.initial_values() if base is None else base)
        assigned: dict[int, tuple[str, float]] = {}
        for name, raw in assignment.items():
            spec = self.find(name)
            index = self._free_index[name]
            value = quantize(raw, spec)
            if value != float(raw):
                logger.warning("Value quantized onto grid", name=name, value=raw, quantized=value)
            if index in assigned and assigned[index][1] != value:
                other = assigned[index][0]
                raise exceptions.InvalidConfiguration(
                    f"Tied parameters {other!r} and {name!r} were given different values"
                )
            assigned[index] = (name, value)
            values[index] = value
        return tuple(values)

    def to_dict(self) -> dict[str, Any]:
        return {
            "parameters": [s.to_dict() for s in self.specs],
            "ties": [list(group) for group in self.tie_groups],
        }


@attr.s(frozen=True, kw_only=True, slots=True)
class Individual:
    """A point in a parameter space: one on-grid value per free variable,
    together with its evaluation state"""

    values: tuple[float, ...] = attr.ib(converter=lambda v: tuple(float(x) for x in v))
    id: int = attr.ib(0)
    parent_id: int | None = attr.ib(None)
    fitness: float | None = attr.ib(None)
    metrics: Metrics | None = attr.ib(None)
    error: str | None = attr.ib(None)

    @property
    def evaluated(self) -> bool:
        return self.fitness is not None

    @property
    def rejected(self) -> bool:
        return self.fitness is not None and self.fitness == -math.inf

    def evolve(self, **changes: Any) -> Individual:
        return attr.evolve(self, **changes)


def rank_key(ind: Individual) -> tuple[float, int]:
    """Sort key putting higher fitness first and breaking ties by lower id"""
    fitness = -math.inf if ind.fitness is None else ind.fitness
    return (-fitness, ind.id)


def best_individual(individuals: Iterable[Individual]) -> Individual:
    """The fittest individual, ties broken by lower id"""
    return min(individuals, key=rank_key)


def random_individual(space: ParameterSpace, rng: np.random.Generator, id: int = 0) -> Individual:
    """Draw every free variable uniformly from its grid

    Parameters
    ----------
    space : ParameterSpace
        The parameter space
    rng : np.random.Generator
        The random stream
    id : int, optional
        Id of the new individual, by default 0

    Returns
    -------
    Individual
        An unevaluated individual
    """
    return Individual(values=[random_value(spec, rng) for spec in space.free_specs], id=id)


def redraw(
    values: Sequence[float], index: int, space: ParameterSpace, rng: np.random.Generator
) -> tuple[float, ...]:
    """Copy of `values` with coordinate `index` drawn afresh from its grid"""
    if len(values) != space.num_free:
        raise exceptions.UsageError(
            f"Individual has {len(values)} values, space has {space.num_free} free variables"
        )
    if not 0 <= index < space.num_free:
        raise exceptions.UsageError(
            f"Index {index} out of range for {space.num_free} free variables"
        )
    new = list(values)
    new[index] = random_value(space.free_specs[index], rng)
    return tuple(new)


def mutate_one(
    ind: Individual,
    index: int,
    space: ParameterSpace,
    rng: np.random.Generator,
    id: int | None = None,
) -> Individual:
    """Redraw free variable `index` of `ind` (and therefore its tied mirrors)

    The same grid value may be drawn again. The original is not modified.

    Parameters
    ----------
    ind : Individual
        The parent
    index : int
        Index of the free variable to redraw
    space : ParameterSpace
        The parameter space
    rng : np.random.Generator
        The random stream
    id : int | None, optional
        Id of the mutant, by default the parent's id

    Returns
    -------
    Individual
        An unevaluated mutant with ``parent_id == ind.id``

    Raises
    ------
    exceptions.UsageError
        If `index` is out of range
    """
    return Individual(
        values=redraw(ind.values, index, space, rng),
        id=ind.id if id is None else id,
        parent_id=ind.id,
    )
