from __future__ import annotations

from typing import NamedTuple

import lark

from . import exceptions
from .fitness import Metrics, MetricName


class Entry(NamedTuple):
    key: str
    value: float
    line_no: int


class TreeToEntries(lark.Transformer):
    """Turn a parsed result file into a list of entries with lower-case keys"""

    def __init__(self, lines: list[str] | None = None) -> None:
        super().__init__()
        self.lines = lines or []

    def _line(self, line_no: int) -> str:
        if 0 < line_no <= len(self.lines):
            return self.lines[line_no - 1]
        return ""

    def entry(self, s: list[lark.Token]) -> Entry:
        key, value = s
        try:
            number = float(value)
        except ValueError:
            raise exceptions.MeasurementParseError(
                reason=f"value {str(value)!r} of {str(key)!r} is not a number",
                line_no=key.line,
                line=self._line(key.line),
            ) from None
        return Entry(key=str(key).lower(), value=number, line_no=key.line)

    def start(self, s: list[Entry]) -> list[Entry]:
        return list(s)


def entries_to_metrics(entries: list[Entry], lines: list[str] | None = None) -> Metrics:
    """Collect gain, power and noise figure from parsed entries

    Unknown keys are ignored so wrappers may report extra measurements.

    Raises
    ------
    exceptions.MeasurementParseError
        On a duplicate or missing key
    """
    lines = lines or []
    found: dict[str, Entry] = {}
    for entry in entries:
        if entry.key in found:
            raise exceptions.MeasurementParseError(
                reason=f"duplicate key {entry.key!r} (first on line {found[entry.key].line_no})",
                line_no=entry.line_no,
                line=lines[entry.line_no - 1] if entry.line_no <= len(lines) else "",
            )
        found[entry.key] = entry

    missing = [name.value for name in MetricName if name.value not in found]
    if missing:
        raise exceptions.MeasurementParseError(reason=f"missing {', '.join(missing)}")

    return Metrics(
        gain_db=found[MetricName.gain_db.value].value,
        power_w=found[MetricName.power_w.value].value,
        nf_db=found[MetricName.nf_db.value].value,
    )
