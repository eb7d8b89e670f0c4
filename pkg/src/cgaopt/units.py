from __future__ import annotations

from functools import lru_cache

import pint
from structlog import get_logger

logger = get_logger()

ureg = pint.UnitRegistry()


@lru_cache(maxsize=None)
def si_scale(unit_str: str | None) -> float:
    """Scale factor taking a value written in `unit_str` to SI base units

    Parameters
    ----------
    unit_str : str | None
        The unit as written in a parameter-space file, e.g ``"pF"`` or ``"um"``

    Returns
    -------
    float
        The factor, 1.0 when the unit is missing or cannot be parsed
    """
    if not unit_str:
        return 1.0
    try:
        quantity = ureg.Quantity(1.0, unit_str)
    except (pint.UndefinedUnitError, ValueError, AttributeError):
        logger.warning(f"Undefined unit {unit_str!r}, value is used unscaled")
        return 1.0
    return float(quantity.to_base_units().magnitude)


def to_si(value: float, unit_str: str | None) -> float:
    """Convert a value in `unit_str` to SI base units"""
    return value * si_scale(unit_str)
