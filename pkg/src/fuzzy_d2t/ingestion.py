"""Daily observation tables read from comma-separated files."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from datetime import date
from pathlib import Path
from typing import Iterable, Mapping, TextIO

from .errors import ObservationError, SeriesError
from .knowledge_base import FuzzyKnowledgeBase
from .protoform import DataSeries

COLUMNS = ("date", "temperature", "precipitation", "humidity")


@dataclass(frozen=True)
class ObservationTable:
    dates: tuple[date, ...]
    # variable -> one value per date; None marks an empty optional cell
    columns: Mapping[str, tuple[float | None, ...]]

    def __post_init__(self):
        for name, values in self.columns.items():
            if len(values) != len(self.dates):
                raise ObservationError(f"column {name!r} has {len(values)} values for {len(self.dates)} dates")

    def __len__(self) -> int:
        return len(self.dates)

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(self.columns)

    def series(self, variable: str) -> DataSeries:
        if variable not in self.columns:
            raise SeriesError(f"observation table has no column {variable!r}")
        values = self.columns[variable]
        missing = [d for d, v in zip(self.dates, values) if v is None]
        if missing:
            raise SeriesError(f"column {variable!r} has no value on {missing[0].isoformat()}")
        return DataSeries(variable, self.dates, values)


def _parse_date(text: str, row: int) -> date:
    try:
        return date.fromisoformat(text.strip())
    except ValueError:
        raise ObservationError(f"row {row}, column 'date': {text!r} is not an ISO-8601 date") from None


def _parse_value(text: str, row: int, column: str) -> float | None:
    text = text.strip()
    if not text:
        return None
    try:
        value = float(text)
    except ValueError:
        raise ObservationError(f"row {row}, column {column!r}: {text!r} is not a number") from None
    if not math.isfinite(value):
        raise ObservationError(f"row {row}, column {column!r}: {text!r} is not finite")
    return value


def read_observations(
    stream: TextIO,
    kb: FuzzyKnowledgeBase | None = None,
    required: Iterable[str] = (),
) -> ObservationTable:
    """Parse a table from an open text stream; see :func:`load_observations`."""
    reader = csv.reader(stream)
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise ObservationError("observation file is empty (no header row)") from None
    if not header or header[0] != "date":
        raise ObservationError("row 1: the first column must be 'date'")
    variables = header[1:]
    if len(set(variables)) != len(variables):
        raise ObservationError("row 1: duplicate column names")
    required = tuple(required)
    for name in required:
        if name not in variables:
            raise ObservationError(f"row 1: required column {name!r} is missing")

    rows: dict[date, tuple[int, list[float | None]]] = {}
    for lineno, cells in enumerate(reader, start=2):
        if not cells or all(not c.strip() for c in cells):
            continue
        if len(cells) != len(header):
            raise ObservationError(f"row {lineno}: expected {len(header)} cells, found {len(cells)}")
        day = _parse_date(cells[0], lineno)
        if day in rows:
            raise ObservationError(f"row {lineno}: duplicate date {day.isoformat()} (first seen on row {rows[day][0]})")
        values = []
        for name, cell in zip(variables, cells[1:]):
            value = _parse_value(cell, lineno, name)
            if value is None and name in required:
                raise ObservationError(f"row {lineno}, column {name!r}: required value is missing")
            if value is not None and kb is not None and name in kb.variables:
                lo, hi = kb.variable(name).domain
                if not lo <= value <= hi:
                    bound = f"lower bound {lo:g}" if value < lo else f"upper bound {hi:g}"
                    raise ObservationError(
                        f"row {lineno}, column {name!r}: value {value:g} violates the {bound} of the domain [{lo:g}, {hi:g}]"
                    )
            values.append(value)
        rows[day] = (lineno, values)
    if not rows:
        raise ObservationError("observation file has a header but no data rows")

    dates = tuple(sorted(rows))
    columns = {name: tuple(rows[d][1][i] for d in dates) for i, name in enumerate(variables)}
    return ObservationTable(dates, columns)


def load_observations(
    path: str | Path,
    kb: FuzzyKnowledgeBase | None = None,
    required: Iterable[str] = (),
) -> ObservationTable:
    """Load and validate a daily observation file.

    Rows may arrive in any order and are sorted by date. ``required`` names
    the columns the active report uses: those must be present and complete.
    With a knowledge base, every value of a KB variable is checked against
    the variable's domain.
    """
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            return read_observations(fh, kb, required)
    except OSError as exc:
        raise ObservationError(f"cannot read {path}: {exc.strerror}") from None


def _cell(value: float | None) -> str:
    return "" if value is None else repr(value)


def dump_observations(table: ObservationTable, target: str | Path | TextIO | None = None) -> str:
    """Serialize a table; values use ``repr`` so a reload is exact."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["date", *table.variables])
    for i, d in enumerate(table.dates):
        writer.writerow([d.isoformat(), *(_cell(table.columns[v][i]) for v in table.variables)])
    text = buf.getvalue()
    if isinstance(target, (str, Path)):
        Path(target).write_text(text, encoding="utf-8")
    elif target is not None:
        target.write(text)
    return text
