"""Run configuration.

A run config is a JSON or TOML document describing the parameter space, the
evaluator, the figure-of-merit rules and the optimizer settings. Relative
paths in it are resolved against the directory of the file.
"""

from __future__ import annotations

import json
import re
from enum import Enum
from pathlib import Path
from typing import Any, Mapping

import attr
from structlog import get_logger

from . import exceptions
from .cga import CgaConfig
from .evaluators import Evaluator, EvaluatorKind, EvaluatorSpec, get_evaluator
from .fitness import FomConfig
from .ga import GaConfig
from .load import default_space, load_fom_config, load_space
from .space import ParameterSpace

logger = get_logger()


class Algorithm(str, Enum):
    cga = "cga"
    ga = "ga"


#: Keys of a run config that are not optimizer parameters
RESERVED = frozenset(
    {
        "space",
        "evaluator",
        "fom",
        "algorithm",
        "cga",
        "ga",
        "budget",
        "seeds",
        "workers",
        "output_dir",
    }
)

_RANGE = re.compile(r"^\s*(\d+)\s*\.\.\s*(\d+)\s*$")


def parse_seeds(value: str | int | list[int] | tuple[int, ...]) -> tuple[int, ...]:
    """Seeds from ``"1..20"`` (inclusive), ``"1,2,3"`` or a list

    Raises
    ------
    exceptions.InvalidConfiguration
        If the seeds cannot be parsed
    """
    if isinstance(value, int):
        return (value,)
    if isinstance(value, (list, tuple)):
        try:
            return tuple(int(v) for v in value)
        except (TypeError, ValueError):
            raise exceptions.InvalidConfiguration(f"Invalid seeds {value!r}") from None

    match = _RANGE.match(value)
    if match:
        start, stop = int(match.group(1)), int(match.group(2))
        if stop < start:
            raise exceptions.InvalidConfiguration(f"Empty seed range {value!r}")
        return tuple(range(start, stop + 1))
    try:
        return tuple(int(v) for v in value.split(",") if v.strip())
    except ValueError:
        raise exceptions.InvalidConfiguration(
            f"Invalid seeds {value!r}, expected e.g '1..20' or '1,2,3'"
        ) from None


def read_config(path: Path) -> dict[str, Any]:
    """Read a JSON or TOML run config

    TOML documents may keep the settings in a ``[tool.cgaopt]`` table
    """
    fname = Path(path)
    if not fname.is_file():
        raise exceptions.InputFileNotFound(fname)
    text = fname.read_text(encoding="utf-8")

    if fname.suffix.lower() != ".toml":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise exceptions.InvalidConfiguration(f"Could not parse {str(fname)!r}: {e}") from None
    else:
        try:
            # First try to use tomllib which is part of stdlib
            import tomllib as toml
        except ImportError:
            import toml  # type: ignore

        try:
            data = toml.loads(text)
        except Exception as e:
            raise exceptions.InvalidConfiguration(f"Could not parse {str(fname)!r}: {e}") from None
        data = data.get("tool", {}).get("cgaopt", data)

    if not isinstance(data, dict):
        raise exceptions.InvalidConfiguration(f"{str(fname)!r} does not contain a mapping")
    return data


def _algorithm(value: Any) -> Algorithm:
    try:
        return Algorithm(value)
    except ValueError:
        raise exceptions.InvalidConfiguration(
            f"Unknown algorithm {value!r}, expected one of {[a.value for a in Algorithm]!r}"
        ) from None


def _resolve(base: Path, value: str | Path) -> Path:
    path = Path(value)
    return path if path.is_absolute() else base / path


def _resolve_evaluator(data: Mapping[str, Any], base: Path) -> dict[str, Any]:
    data = dict(data)
    params = dict(data.get("params", {}))
    if data.get("kind") == EvaluatorKind.external.value:
        if params.get("template"):
            params["template"] = str(_resolve(base, params["template"]))
        command = params.get("command")
        if isinstance(command, str):
            command = [command]
        if command:
            # Only rewrite the executable when it is a file next to the config
            candidate = _resolve(base, command[0])
            if not Path(command[0]).is_absolute() and candidate.is_file():
                command = [str(candidate), *command[1:]]
            params["command"] = list(command)
        if params.get("workdir_root"):
            params["workdir_root"] = str(_resolve(base, params["workdir_root"]))
    data["params"] = params
    return data


@attr.s(frozen=True, kw_only=True, slots=True)
class RunManifest:
    space: ParameterSpace = attr.ib()
    evaluator: EvaluatorSpec = attr.ib()
    fom: FomConfig = attr.ib(factory=FomConfig)
    algorithm: Algorithm = attr.ib(Algorithm.cga, converter=_algorithm)
    #: Parameters of the selected algorithm given at the top level
    params: dict[str, Any] = attr.ib(factory=dict)
    cga: dict[str, Any] = attr.ib(factory=dict)
    ga: dict[str, Any] = attr.ib(factory=dict)
    budget: int | None = attr.ib(None, converter=attr.converters.optional(int))
    seeds: tuple[int, ...] = attr.ib((), converter=tuple)
    workers: int = attr.ib(1, converter=int)
    output_dir: Path = attr.ib(Path("results"), converter=Path)

    def __attrs_post_init__(self):
        if self.workers < 1:
            raise exceptions.InvalidConfiguration(f"workers must be >= 1, got {self.workers}")
        if self.budget is not None and int(self.budget) < 1:
            raise exceptions.InvalidConfiguration(f"budget must be positive, got {self.budget}")

    def section(self, algorithm: str) -> dict[str, Any]:
        """Settings for `algorithm`: its own section, overridden by the top
        level parameters when it is the selected algorithm"""
        params = dict(self.cga if algorithm == Algorithm.cga else self.ga)
        if algorithm == self.algorithm:
            params.update(self.params)
        return params

    def cga_config(self, **overrides: Any) -> CgaConfig:
        return CgaConfig.from_dict({**self.section(Algorithm.cga), **overrides})

    def ga_config(self, **overrides: Any) -> GaConfig:
        return GaConfig.from_dict({**self.section(Algorithm.ga), **overrides})

    def build_evaluator(self) -> Evaluator:
        return get_evaluator(self.evaluator, self.space, self.fom)

    def evolve(self, **changes: Any) -> RunManifest:
        return attr.evolve(self, **changes)


def manifest_from_dict(data: Mapping[str, Any], base: Path | None = None) -> RunManifest:
    """Create a run manifest from a config document

    Parameters
    ----------
    data : Mapping[str, Any]
        The document
    base : Path | None, optional
        Directory relative paths are resolved against, by default the
        current directory

    Returns
    -------
    RunManifest
        The manifest
    """
    base = Path.cwd() if base is None else Path(base)

    if data.get("space") is None:
        space = default_space()
    else:
        space = load_space(_resolve(base, data["space"]))
    if "evaluator" not in data:
        raise exceptions.InvalidConfiguration("Run config needs an 'evaluator'")
    evaluator = EvaluatorSpec.from_dict(_resolve_evaluator(data["evaluator"], base))
    fom = load_fom_config(data.get("fom"), base=base)

    algorithm = data.get("algorithm", Algorithm.cga.value)
    params = {k: v for k, v in data.items() if k not in RESERVED}
    known = set(attr.fields_dict(CgaConfig)) | set(attr.fields_dict(GaConfig))
    for key in sorted(set(params) - known):
        logger.warning(f"Ignoring unknown key {key!r} in run config")

    seeds = parse_seeds(data["seeds"]) if "seeds" in data else ()
    manifest = RunManifest(
        space=space,
        evaluator=evaluator,
        fom=fom,
        algorithm=algorithm,
        params=params,
        cga=dict(data.get("cga", {})),
        ga=dict(data.get("ga", {})),
        budget=data.get("budget"),
        seeds=seeds,
        workers=data.get("workers", 1),
        output_dir=_resolve(base, data.get("output_dir", "results")),
    )
    logger.debug("Run config", algorithm=algorithm, evaluator=evaluator.kind.value)
    return manifest


def load_manifest(path: str | Path) -> RunManifest:
    """Load a run config from a JSON or TOML file

    Raises
    ------
    exceptions.InputFileNotFound
        Raised if the file is not found
    """
    fname = Path(path)
    logger.info(f"Load run config {fname}")
    return manifest_from_dict(read_config(fname), base=fname.resolve().parent)
