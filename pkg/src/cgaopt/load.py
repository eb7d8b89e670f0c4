from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

from structlog import get_logger

from . import exceptions
from .fitness import FomConfig
from .space import ParameterSpace, ParameterSpec

logger = get_logger()

#: Parameter space shipped with the package
DEFAULT_SPACE = "rx_table1.json"


def space_from_dict(data: Mapping[str, Any]) -> ParameterSpace:
    """Create a parameter space from its JSON document

    Parameters
    ----------
    data : Mapping[str, Any]
        A mapping with a list of ``parameters`` and an optional list of
        ``ties``

    Returns
    -------
    cgaopt.space.ParameterSpace
        The parameter space
    """
    if "parameters" not in data:
        raise exceptions.InvalidConfiguration("Parameter space needs a list of 'parameters'")

    specs = []
    for entry in data["parameters"]:
        try:
            specs.append(ParameterSpec(**entry))
        except exceptions.CgaoptError:
            raise
        except (TypeError, ValueError) as e:
            raise exceptions.InvalidParameterSpec(
                name=str(entry.get("name", "?")), reason=str(e)
            ) from None

    space = ParameterSpace(specs, data.get("ties", ()))
    logger.info(f"Num parameters {len(space.specs)}")
    logger.info(f"Num free variables {space.num_free}")
    logger.debug("Tie groups", ties=[list(g) for g in space.tie_groups])
    return space


def _read_json(fname: Path) -> Any:
    try:
        return json.loads(fname.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise exceptions.InvalidConfiguration(f"Could not parse {str(fname)!r}: {e}") from None


def load_space(path: str | Path) -> ParameterSpace:
    """Load a parameter space from a JSON file

    Parameters
    ----------
    path : str | Path
        Path to the file

    Returns
    -------
    cgaopt.space.ParameterSpace
        The parameter space

    Raises
    ------
    exceptions.InputFileNotFound
        Raised if the file is not found
    """
    fname = Path(path)

    logger.info(f"Load parameter space {path}")

    if not fname.is_file():
        raise exceptions.InputFileNotFound(fname)

    return space_from_dict(_read_json(fname))


def default_space() -> ParameterSpace:
    """The receiver space shipped with the package"""
    text = resources.files("cgaopt").joinpath("spaces", DEFAULT_SPACE).read_text(encoding="utf-8")
    logger.info(f"Load parameter space {DEFAULT_SPACE}")
    return space_from_dict(json.loads(text))


def default_netlist() -> Path:
    """Path to the netlist template shipped with the package"""
    return Path(str(resources.files("cgaopt").joinpath("netlists", "rx_lna_mixer.cir")))


def load_fom_config(
    value: str | Path | Mapping[str, Any] | None, base: Path | None = None
) -> FomConfig:
    """Figure-of-merit rules, either inline or from a JSON file

    A relative path is resolved against `base`. ``None`` gives the default
    rule.
    """
    if value is None:
        return FomConfig()
    if isinstance(value, Mapping):
        return FomConfig.from_dict(dict(value))

    fname = Path(value)
    if not fname.is_absolute() and base is not None:
        fname = base / fname
    logger.info(f"Load figure-of-merit rules {fname}")
    if not fname.is_file():
        raise exceptions.InputFileNotFound(fname)
    return FomConfig.from_dict(_read_json(fname))
