"""CSV ingestion and descriptive statistics for daily closing prices."""

from __future__ import annotations

import csv
import datetime as dt
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    DuplicateDate,
    EmptyAfterDrop,
    EmptySeries,
    MissingColumn,
    UnparseableDate,
)

FIXTURE_PATH = Path(__file__).parent / "data" / "btc_fixture.csv"


@dataclass(frozen=True)
class TimeSeries:
    """Ordered daily observations.

    ``dates`` is a ``datetime64[D]`` array, ``values`` a float64 array of the
    same length.  ``drop_count`` records how many raw rows were discarded by
    :func:`load_csv`.
    """

    dates: np.ndarray
    values: np.ndarray
    drop_count: int = 0
    name: str = field(default="Close", compare=False)

    def __post_init__(self):
        if len(self.dates) != len(self.values):
            raise ValueError("dates and values differ in length")

    def __len__(self):
        return len(self.values)

    @classmethod
    def from_values(cls, values, start="2000-01-01", name="value"):
        values = np.asarray(values, dtype=np.float64)
        dates = np.datetime64(start, "D") + np.arange(len(values))
        return cls(dates=dates, values=values, name=name)

    @property
    def raw_row_count(self):
        return len(self) + self.drop_count


@dataclass(frozen=True)
class DescriptiveStats:
    count: int
    mean: float
    std: float
    min: float
    q25: float
    median: float
    q75: float
    max: float

    def as_dict(self):
        return {
            "count": self.count,
            "mean": self.mean,
            "std": self.std,
            "min": self.min,
            "q25": self.q25,
            "median": self.median,
            "q75": self.q75,
            "max": self.max,
        }


def _parse_value(cell):
    if cell is None:
        return None
    cell = cell.strip()
    if not cell:
        return None
    try:
        value = float(cell)
    except ValueError:
        return None
    if not math.isfinite(value):
        return None
    return value


def load_csv(path, date_column="Date", value_column="Close"):
    """Load a two-column daily price CSV into a :class:`TimeSeries`.

    Rows whose value cell is empty, non-numeric or non-finite are dropped and
    counted.  Dates must be ISO ``YYYY-MM-DD``; a bad date is an error rather
    than a dropped row because it corrupts the time index.
    """
    path = Path(path)
    dates = []
    values = []
    dropped = 0
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in (date_column, value_column):
            if col not in header:
                raise MissingColumn(f"column {col!r} not found in {path.name}; have {header}")
        for lineno, row in enumerate(reader, start=2):
            raw_date = (row.get(date_column) or "").strip()
            try:
                day = dt.date.fromisoformat(raw_date[:10])
            except ValueError:
                raise UnparseableDate(f"{path.name}:{lineno}: cannot parse date {raw_date!r}") from None
            value = _parse_value(row.get(value_column))
            if value is None:
                dropped += 1
                continue
            dates.append(day)
            values.append(value)

    if not values:
        raise EmptyAfterDrop(f"{path.name}: no usable rows ({dropped} dropped)")

    d = np.array(dates, dtype="datetime64[D]")
    v = np.array(values, dtype=np.float64)
    order = np.argsort(d, kind="stable")
    d, v = d[order], v[order]
    dup = np.flatnonzero(d[1:] == d[:-1])
    if dup.size:
        raise DuplicateDate(f"{path.name}: duplicate date {d[dup[0]]}")
    return TimeSeries(dates=d, values=v, drop_count=dropped, name=value_column)


def load_fixture():
    """The bundled daily closing-price fixture."""
    return load_csv(FIXTURE_PATH)


def describe(series):
    """Count, mean, sample std and type-7 quantiles of the series values."""
    values = series.values if isinstance(series, TimeSeries) else np.asarray(series, dtype=np.float64)
    n = len(values)
    if n == 0:
        raise EmptySeries("cannot describe an empty series")
    v = np.sort(values)
    q25, median, q75 = np.quantile(v, [0.25, 0.5, 0.75], method="linear")
    std = float(np.std(v, ddof=1)) if n > 1 else 0.0
    return DescriptiveStats(
        count=n,
        mean=float(np.mean(v)),
        std=std,
        min=float(v[0]),
        q25=float(q25),
        median=float(median),
        q75=float(q75),
        max=float(v[-1]),
    )
