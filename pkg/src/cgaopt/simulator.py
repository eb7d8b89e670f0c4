"""Evaluate individuals with an external circuit simulator.

A netlist template with ``{{name}}`` placeholders is rendered with the
parameter values of an individual (in the units of the space file) and a set
of fixed constants, written into a fresh working directory and handed to a
user supplied command. The command must leave a result file with
``key=value`` lines for ``gain_db``, ``power_w`` and ``nf_db``.
"""

from __future__ import annotations

import re
import shutil
import subprocess
import tempfile
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Any, Mapping, Sequence

import attr
import lark
from structlog import get_logger

from . import exceptions
from .fitness import Metrics
from .parser import Parser
from .space import Individual, ParameterSpace
from .transformer import TreeToEntries, entries_to_metrics

logger = get_logger()

PLACEHOLDER = re.compile(r"\{\{\s*([A-Za-z_][A-Za-z0-9_]*)\s*\}\}")
NETLIST_TOKEN = "{netlist}"


@attr.s(frozen=True, slots=True)
class NetlistTemplate:
    body: str = attr.ib()
    required_names: frozenset[str] = attr.ib(init=False, repr=False)

    def __attrs_post_init__(self):
        object.__setattr__(self, "required_names", frozenset(PLACEHOLDER.findall(self.body)))

    @classmethod
    def from_file(cls, path: str | Path) -> NetlistTemplate:
        fname = Path(path)
        if not fname.is_file():
            raise exceptions.InputFileNotFound(fname)
        logger.debug(f"Load netlist template {fname}")
        return cls(fname.read_text(encoding="utf-8"))

    def missing(self, names: set[str] | frozenset[str]) -> list[str]:
        return sorted(self.required_names - set(names))


def format_value(value: float) -> str:
    """Shortest decimal that round-trips to `value`; integral values are
    written without a fractional part"""
    value = float(value)
    if value.is_integer() and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def render_netlist(
    tpl: NetlistTemplate,
    ind: Individual,
    space: ParameterSpace,
    consts: Mapping[str, float] | None = None,
) -> str:
    """Substitute parameter values and constants into a template

    Parameters
    ----------
    tpl : NetlistTemplate
        The template
    ind : Individual
        The individual
    space : ParameterSpace
        The parameter space of `ind`
    consts : Mapping[str, float] | None, optional
        Fixed constants, e.g ``{"VDD": 1.2}``

    Returns
    -------
    str
        The netlist

    Raises
    ------
    exceptions.TemplateError
        If a placeholder matches neither a parameter nor a constant
    """
    values: dict[str, float] = dict(consts or {})
    values.update(space.expand(ind.values))
    missing = tpl.missing(set(values))
    if missing:
        raise exceptions.TemplateError(missing=missing)
    return PLACEHOLDER.sub(lambda m: format_value(values[m.group(1)]), tpl.body)


@lru_cache(maxsize=1)
def _parser() -> Parser:
    return Parser()


def parse_measurements(text: str) -> Metrics:
    """Parse a result file

    Parameters
    ----------
    text : str
        Lines of ``key=value``; keys are case-insensitive, blank lines and
        ``#`` comments are ignored

    Returns
    -------
    Metrics
        The metrics

    Raises
    ------
    exceptions.MeasurementParseError
        On a missing or duplicate key, a non-numeric value or a malformed line
    """
    lines = text.splitlines()
    try:
        tree = _parser().parse(text)
        entries = TreeToEntries(lines=lines).transform(tree)
    except lark.exceptions.VisitError as e:
        if isinstance(e.orig_exc, exceptions.MeasurementParseError):
            raise e.orig_exc from None
        raise
    except lark.UnexpectedInput as e:
        line_no = getattr(e, "line", None)
        line = lines[line_no - 1] if line_no and 0 < line_no <= len(lines) else ""
        raise exceptions.MeasurementParseError(
            reason="expected a `key=value` line", line_no=line_no, line=line
        ) from None
    return entries_to_metrics(entries, lines=lines)


class KeepWorkdir(str, Enum):
    on_failure = "on_failure"
    always = "always"
    never = "never"


def _positive(instance, attribute, value):
    if not value > 0:
        raise exceptions.InvalidConfiguration(f"{attribute.name} must be positive, got {value!r}")


def _non_empty(instance, attribute, value):
    if not value:
        raise exceptions.InvalidConfiguration(f"{attribute.name} must not be empty")


@attr.s(frozen=True, kw_only=True, slots=True)
class SimJobConfig:
    """How to run one simulation

    `command` is an executable followed by its arguments; the token
    ``{netlist}`` is replaced by the path of the rendered netlist. Every run
    gets a fresh temporary working directory, also used as the command's
    working directory.
    """

    command: tuple[str, ...] = attr.ib(converter=tuple, validator=_non_empty)
    timeout: float = attr.ib(120.0, converter=float, validator=_positive)
    result_filename: str = attr.ib("metrics.txt", validator=_non_empty)
    netlist_filename: str = attr.ib("circuit.cir", validator=_non_empty)
    fixed_constants: dict[str, float] = attr.ib(factory=dict)
    keep_workdir: KeepWorkdir = attr.ib(KeepWorkdir.on_failure, converter=KeepWorkdir)
    workdir_root: Path | None = attr.ib(None)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> SimJobConfig:
        command = data.get("command")
        if isinstance(command, str):
            command = [command]
        if not command:
            raise exceptions.InvalidConfiguration("External evaluator needs a 'command'")
        return cls(
            command=[str(c) for c in command],
            timeout=data.get("timeout_s", data.get("timeout", 120.0)),
            result_filename=data.get("result_file", "metrics.txt"),
            netlist_filename=data.get("netlist_file", "circuit.cir"),
            fixed_constants={str(k): float(v) for k, v in data.get("constants", {}).items()},
            keep_workdir=data.get("keep_workdir", KeepWorkdir.on_failure),
            workdir_root=Path(data["workdir_root"]) if data.get("workdir_root") else None,
        )


def _finish(workdir: Path, job: SimJobConfig, failed: bool) -> None:
    keep = job.keep_workdir is KeepWorkdir.always or (
        failed and job.keep_workdir is KeepWorkdir.on_failure
    )
    if keep:
        logger.info(f"Keeping working directory {workdir}")
    else:
        shutil.rmtree(workdir, ignore_errors=True)


def command_for(job: SimJobConfig, netlist_path: Path) -> list[str]:
    return [arg.replace(NETLIST_TOKEN, str(netlist_path)) for arg in job.command]


def run_external(job: SimJobConfig, netlist: str) -> Metrics:
    """Run the simulator command on `netlist` and parse its result file

    Parameters
    ----------
    job : SimJobConfig
        The job configuration
    netlist : str
        The rendered netlist

    Returns
    -------
    Metrics
        The measured metrics

    Raises
    ------
    exceptions.SimulationError
        If the command cannot be started or exits with a non-zero status
    exceptions.SimulationTimeout
        If the command does not finish within the timeout
    exceptions.MeasurementParseError
        If the result file is missing or malformed
    """
    try:
        if job.workdir_root is not None:
            job.workdir_root.mkdir(parents=True, exist_ok=True)
        workdir = Path(tempfile.mkdtemp(prefix="cgaopt-", dir=job.workdir_root))
    except OSError as e:
        raise exceptions.SimulationError(
            command=list(job.command), returncode=-1, output=f"Cannot create workdir: {e}"
        ) from e
    netlist_path = workdir / job.netlist_filename
    command = command_for(job, netlist_path)
    logger.debug("Running simulator", command=command, workdir=str(workdir))

    failed = True
    try:
        try:
            netlist_path.write_text(netlist, encoding="utf-8")
        except OSError as e:
            raise exceptions.SimulationError(
                command=command, returncode=-1, output=f"Cannot write netlist: {e}"
            ) from e
        try:
            proc = subprocess.run(
                command,
                cwd=workdir,
                capture_output=True,
                text=True,
                errors="replace",
                timeout=job.timeout,
            )
        except subprocess.TimeoutExpired:
            raise exceptions.SimulationTimeout(command=command, timeout=job.timeout) from None
        except OSError as e:
            raise exceptions.SimulationError(command=command, returncode=-1, output=str(e)) from e

        if proc.returncode != 0:
            raise exceptions.SimulationError(
                command=command,
                returncode=proc.returncode,
                output=(proc.stdout or "") + (proc.stderr or ""),
            )

        result = workdir / job.result_filename
        if not result.is_file():
            raise exceptions.MeasurementParseError(
                reason=f"result file {job.result_filename!r} was not written"
            )
        try:
            text = result.read_bytes().decode("utf-8")
        except UnicodeDecodeError as e:
            raise exceptions.MeasurementParseError(
                reason=f"result file {job.result_filename!r} is not UTF-8 ({e.reason})"
            ) from e
        except OSError as e:
            raise exceptions.MeasurementParseError(
                reason=f"result file {job.result_filename!r} cannot be read ({e})"
            ) from e
        metrics = parse_measurements(text)
        failed = False
        return metrics
    finally:
        _finish(workdir, job, failed)


def run_template(
    tpl: NetlistTemplate,
    job: SimJobConfig,
    ind: Individual,
    space: ParameterSpace,
    consts: Mapping[str, float] | None = None,
) -> Metrics:
    """Render the netlist of `ind` and run it"""
    constants = dict(job.fixed_constants)
    constants.update(consts or {})
    return run_external(job, render_netlist(tpl, ind, space, constants))


def check_template(tpl: NetlistTemplate, space: ParameterSpace, consts: Sequence[str]) -> None:
    """Fail early when a template refers to unknown names

    Raises
    ------
    exceptions.InvalidConfiguration
        Listing the unresolved placeholders
    """
    missing = tpl.missing(set(space.names) | set(consts))
    if missing:
        raise exceptions.InvalidConfiguration(
            f"Netlist template refers to unknown names {missing!r}"
        )
