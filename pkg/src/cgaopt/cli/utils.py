from __future__ import annotations

import contextlib
import logging
from enum import IntEnum
from typing import Iterator

import structlog
import typer

from .. import exceptions
from ..fitness import Metrics

logger = structlog.get_logger()


class ExitCode(IntEnum):
    success = 0
    configuration = 2
    evaluation = 3


def configure_logging(verbose: bool) -> None:
    loglevel = logging.DEBUG if verbose else logging.INFO
    structlog.configure(
        wrapper_class=structlog.make_filtering_bound_logger(loglevel),
    )


@contextlib.contextmanager
def exit_on_error() -> Iterator[None]:
    """Turn package errors into a diagnostic on stderr and an exit status:
    2 for configuration and parse errors, 3 for evaluator failures"""
    try:
        yield
    except (exceptions.InitializationFailed, exceptions.EvaluationError) as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(code=ExitCode.evaluation) from None
    except (
        exceptions.ConfigurationError,
        exceptions.UsageError,
        exceptions.FriisValidationError,
    ) as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(code=ExitCode.configuration) from None
    except OSError as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(code=ExitCode.configuration) from None


def parse_metrics(text: str) -> Metrics:
    """Metrics from ``"gain_db,power_w,nf_db"``"""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise exceptions.InvalidConfiguration(
            f"Expected three comma separated numbers gain,power,nf, got {text!r}"
        )
    try:
        gain, power, nf = (float(p) for p in parts)
    except ValueError:
        raise exceptions.InvalidConfiguration(f"Metrics must be numbers, got {text!r}") from None
    return Metrics(gain_db=gain, power_w=power, nf_db=nf)


def parse_values(text: str) -> dict[str, float]:
    """A (partial) assignment ``"R1=5146,C1=2.92"``; ``"initial"`` gives an
    empty assignment"""
    if text.strip().lower() == "initial":
        return {}
    assignment: dict[str, float] = {}
    for item in text.split(","):
        if not item.strip():
            continue
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise exceptions.InvalidConfiguration(f"Expected name=value, got {item.strip()!r}")
        try:
            assignment[name.strip()] = float(value)
        except ValueError:
            raise exceptions.InvalidConfiguration(
                f"Value of {name.strip()!r} must be a number, got {value.strip()!r}"
            ) from None
    return assignment
