"""Yearly BEF time series and its canonical CSV representation."""

from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DataError,
    DuplicateYearError,
    NonFiniteValueError,
    ParseError,
)

UNIT = "BEF"


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Ordered (year, amount) pairs. Missing years are simply absent."""

    years: np.ndarray
    values: np.ndarray
    label: str = ""
    unit: str = field(default=UNIT)

    def __post_init__(self):
        years = np.asarray(self.years, dtype=np.int64).reshape(-1)
        values = np.asarray(self.values, dtype=float).reshape(-1)
        if years.shape != values.shape:
            raise DataError(f"{years.size} years but {values.size} values")
        if years.size > 1 and np.any(np.diff(years) <= 0):
            raise DataError("years must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise DataError("values must be finite")
        if np.any(values < 0):
            raise DataError("values must be non-negative")
        years.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "years", years)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_pairs(cls, pairs, label=""):
        pairs = list(pairs)
        if not pairs:
            return cls(np.empty(0, dtype=np.int64), np.empty(0), label)
        years, values = zip(*pairs)
        return cls(np.array(years), np.array(values, dtype=float), label)

    def __len__(self):
        return int(self.years.size)

    def __iter__(self):
        return zip(self.years.tolist(), self.values.tolist())

    def __eq__(self, other):
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return (
            np.array_equal(self.years, other.years)
            and np.array_equal(self.values, other.values)
            and self.unit == other.unit
        )

    def window(self, start, end):
        """Sub-series restricted to the closed year interval [start, end]."""
        mask = (self.years >= start) & (self.years <= end)
        return TimeSeries(self.years[mask], self.values[mask], self.label, self.unit)

    def replace_values(self, values):
        return TimeSeries(self.years, values, self.label, self.unit)


def format_value(value):
    """Canonical BEF formatting: at most 2 decimals, no trailing zeros."""
    text = f"{value:.2f}".rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


def dumps_csv(series):
    lines = [f"# {series.label}"] if series.label else []
    lines.append("year,value")
    lines.extend(f"{year},{format_value(value)}" for year, value in series)
    return "\n".join(lines) + "\n"


def loads_csv(text, label=""):
    """Parse the ``year,value`` CSV format; ``#`` comments and blank lines are skipped."""
    header_seen = False
    seen = {}
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            if line.startswith("#") and not header_seen and not label:
                label = line[1:].strip()
            continue
        fields = [f.strip() for f in line.split(",")]
        if not header_seen:
            if [f.lower() for f in fields] != ["year", "value"]:
                raise ParseError(f"expected header 'year,value', got {line!r}", lineno)
            header_seen = True
            continue
        if len(fields) != 2:
            raise ParseError(f"expected 2 fields, got {len(fields)}", lineno)
        try:
            year = int(fields[0])
        except ValueError:
            raise ParseError(f"year {fields[0]!r} is not an integer", lineno) from None
        try:
            value = float(fields[1])
        except ValueError:
            raise ParseError(f"value {fields[1]!r} is not a number", lineno) from None
        if not math.isfinite(value):
            raise NonFiniteValueError(f"value {fields[1]!r} is not finite", lineno)
        if year in seen:
            raise DuplicateYearError(
                f"duplicate year {year} (first seen on line {seen[year]})", lineno
            )
        if pairs and year < pairs[-1][0]:
            raise ParseError(f"year {year} is out of order", lineno)
        if value < 0:
            raise ParseError(f"negative value {value}", lineno)
        seen[year] = lineno
        pairs.append((year, value))
    if not header_seen:
        raise ParseError("missing 'year,value' header")
    return TimeSeries.from_pairs(pairs, label)


def load_csv(path):
    with open(path, encoding="utf-8", newline="") as fh:
        return loads_csv(fh.read())


def write_atomic(path, text):
    """Write ``text`` to ``path`` through a temporary file and rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_csv(series, path):
    write_atomic(path, dumps_csv(series))
