"""Tabular ingestion, datatype inference, and stable datapoint identities.

A :class:`Dataset` is immutable after ingest. Datapoint ids are dense
0-based row indices and are never reassigned for the lifetime of a
session, so every downstream counter can key on them safely.

Attribute values are canonicalized per datatype:

* Nominal     -> the raw cell string
* Quantitative-> float
* Temporal    -> float (a 4-digit year as-is, an ISO date as its ordinal)

Missing cells (empty string or the literal ``"NA"``) become ``None`` and
are excluded from domains, targets, and deviation computations.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import re
from dataclasses import dataclass, field
from datetime import date
from enum import Enum
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    AllNullColumn,
    CellParseError,
    DuplicateAttributeName,
    EmptyInput,
    IngestError,
    RaggedRow,
    UnknownAttribute,
)

#: Shared bin count for every equal-width discretization of a Q/T attribute
#: (chart grouping, targets, observed distributions). Keeping one grid means
#: observed and expected distributions always compare like with like.
N_BINS = 10

NULL_LITERALS = ("", "NA")

_DATE_WORD = re.compile(r"year|date|time", re.IGNORECASE)
_YEAR_MIN, _YEAR_MAX = 1800, 2100


class Datatype(str, Enum):
    NOMINAL = "N"
    QUANTITATIVE = "Q"
    TEMPORAL = "T"


@dataclass(frozen=True)
class AttributeSchema:
    """One attribute: name, datatype, ordinal position, and value domain.

    ``domain`` is the ordered tuple of distinct categories for Nominal
    attributes (first-occurrence order) and the ``(min, max)`` pair for
    Quantitative/Temporal ones.
    """

    name: str
    datatype: Datatype
    index: int
    domain: tuple

    def __post_init__(self):
        if self.datatype is Datatype.NOMINAL:
            if not self.domain:
                raise ValueError(f"{self.name}: empty nominal domain")
            if len(set(self.domain)) != len(self.domain):
                raise ValueError(f"{self.name}: duplicate categories in domain")
        else:
            lo, hi = self.domain
            if lo > hi:
                raise ValueError(f"{self.name}: domain min {lo} > max {hi}")

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "datatype": self.datatype.value,
            "index": self.index,
            "domain": list(self.domain),
        }


@dataclass(frozen=True)
class Dataset:
    """Immutable typed table with dense 0-based datapoint ids."""

    schema: tuple[AttributeSchema, ...]
    rows: tuple[tuple, ...]
    _by_name: dict = field(default_factory=dict, repr=False, compare=False)
    _key_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self._by_name.update({a.name: a for a in self.schema})

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def attribute_names(self) -> list[str]:
        return [a.name for a in self.schema]

    def attribute(self, name: str) -> AttributeSchema:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownAttribute(name) from None

    def value(self, datapoint_id: int, attribute: str):
        return self.rows[datapoint_id][self.attribute(attribute).index]

    def column(self, attribute: str) -> list:
        idx = self.attribute(attribute).index
        return [row[idx] for row in self.rows]

    def support_indices(self, attribute: str) -> np.ndarray:
        """Per-row support key indices for ``attribute`` (int32, -1 = null).

        For Nominal the index into the domain tuple; for Q/T the bin index
        on the shared :data:`N_BINS` grid. Cached; the dataset is immutable.
        """
        cached = self._key_cache.get(attribute)
        if cached is not None:
            return cached
        schema = self.attribute(attribute)
        col = self.column(attribute)
        out = np.full(len(col), -1, dtype=np.int32)
        if schema.datatype is Datatype.NOMINAL:
            lookup = {c: i for i, c in enumerate(schema.domain)}
            for i, v in enumerate(col):
                if v is not None:
                    out[i] = lookup[v]
        else:
            for i, v in enumerate(col):
                if v is not None:
                    out[i] = bin_index(schema, v)
        self._key_cache[attribute] = out
        return out

    def fingerprint(self) -> str:
        """SHA-256 over the canonical schema + row serialization."""
        payload = {
            "schema": [a.to_json() for a in self.schema],
            "rows": [list(r) for r in self.rows],
        }
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


# --- binning ----------------------------------------------------------------

def bin_edges(schema: AttributeSchema) -> np.ndarray:
    """The N_BINS+1 equal-width edges over a Q/T attribute's range."""
    lo, hi = schema.domain
    return np.linspace(float(lo), float(hi), N_BINS + 1)

def bin_index(schema: AttributeSchema, value: float) -> int:
    """Index of the equal-width bin holding ``value`` (max lands in the last)."""
    lo, hi = schema.domain
    if hi <= lo:
        return 0
    frac = (float(value) - lo) / (hi - lo)
    return min(N_BINS - 1, max(0, int(frac * N_BINS)))


# --- cell parsing -----------------------------------------------------------

def _is_null(cell: str | None) -> bool:
    return cell is None or cell.strip() in NULL_LITERALS

def _parse_number(cell: str) -> float | None:
    try:
        return float(cell)
    except ValueError:
        return None

def _parse_iso_date(cell: str) -> date | None:
    try:
        return date.fromisoformat(cell.strip())
    except ValueError:
        return None

def _parse_year(cell: str) -> int | None:
    s = cell.strip()
    if len(s) == 4 and s.isdigit():
        y = int(s)
        if _YEAR_MIN <= y <= _YEAR_MAX:
            return y
    return None


def infer_types(columns: Mapping[str, Sequence[str | None]]) -> dict[str, Datatype]:
    """Infer a datatype for each raw string column.

    Rules, applied to the non-null cells (Temporal wins over Quantitative):

    * every cell is an ISO date                          -> Temporal
    * every cell is an ISO date or a 4-digit year in
      [1800, 2100], and the column name contains
      "year"/"date"/"time" (case-insensitive)            -> Temporal
    * every cell parses as a number                      -> Quantitative
    * otherwise                                          -> Nominal

    Raises :class:`AllNullColumn` for a column with no non-null cells.
    """
    if not columns:
        raise EmptyInput("no columns to infer")
    result: dict[str, Datatype] = {}
    for name, cells in columns.items():
        values = [c for c in cells if not _is_null(c)]
        if not values:
            raise AllNullColumn(name)
        if all(_parse_iso_date(v) is not None for v in values):
            result[name] = Datatype.TEMPORAL
        elif _DATE_WORD.search(name) and all(
            _parse_iso_date(v) is not None or _parse_year(v) is not None
            for v in values
        ):
            result[name] = Datatype.TEMPORAL
        elif all(_parse_number(v) is not None for v in values):
            result[name] = Datatype.QUANTITATIVE
        else:
            result[name] = Datatype.NOMINAL
    return result


def _coerce(cell: str, datatype: Datatype, attribute: str):
    """Canonicalize one non-null cell per the attribute datatype."""
    if datatype is Datatype.NOMINAL:
        return cell
    if datatype is Datatype.QUANTITATIVE:
        num = _parse_number(cell)
        if num is None:
            raise CellParseError(f"{attribute}: {cell!r} is not numeric")
        return num
    d = _parse_iso_date(cell)
    if d is not None:
        return float(d.toordinal())
    num = _parse_number(cell)
    if num is None:
        raise CellParseError(f"{attribute}: {cell!r} is not a date or number")
    return num


# --- ingestion ---------------------------------------------------------------

def _build_dataset(
    names: list[str],
    raw_rows: list[list[str | None]],
    types: Mapping[str, Datatype | str] | None,
) -> Dataset:
    seen = set()
    for n in names:
        if n in seen:
            raise DuplicateAttributeName(n)
        seen.add(n)
    if not raw_rows:
        raise EmptyInput("no data rows")

    overrides = {
        k: (v if isinstance(v, Datatype) else Datatype(v))
        for k, v in (types or {}).items()
    }
    for k in overrides:
        if k not in seen:
            raise UnknownAttribute(k)

    columns = {n: [row[i] for row in raw_rows] for i, n in enumerate(names)}
    inferred: dict[str, Datatype] = {}
    for name, cells in columns.items():
        if all(_is_null(c) for c in cells):
            # No override can make an all-null column satisfy the schema
            # invariants (a nominal domain must be non-empty).
            raise AllNullColumn(name)
        if name in overrides:
            inferred[name] = overrides[name]
        else:
            inferred[name] = infer_types({name: cells})[name]

    typed_columns: dict[str, list] = {}
    for name in names:
        dt = inferred[name]
        typed_columns[name] = [
            None if _is_null(c) else _coerce(c, dt, name) for c in columns[name]
        ]

    schema = []
    for i, name in enumerate(names):
        dt = inferred[name]
        present = [v for v in typed_columns[name] if v is not None]
        if dt is Datatype.NOMINAL:
            domain = tuple(dict.fromkeys(present))
        else:
            domain = (min(present), max(present))
        schema.append(AttributeSchema(name=name, datatype=dt, index=i, domain=domain))

    rows = tuple(
        tuple(typed_columns[name][r] for name in names) for r in range(len(raw_rows))
    )
    return Dataset(schema=tuple(schema), rows=rows)


def ingest(
    source: str,
    delimiter: str = ",",
    has_header: bool = True,
    types: Mapping[str, Datatype | str] | None = None,
) -> Dataset:
    """Parse character-delimited text into a typed :class:`Dataset`.

    ``types`` maps attribute names to explicit datatype overrides
    ("N"/"Q"/"T"), bypassing inference for those columns.
    """
    reader = csv.reader(io.StringIO(source.lstrip("﻿")), delimiter=delimiter)
    table = [row for row in reader if row]
    if not table:
        raise EmptyInput("source is empty")
    if has_header:
        names = [c.strip() for c in table[0]]
        body = table[1:]
    else:
        names = [f"column_{i}" for i in range(len(table[0]))]
        body = table
    arity = len(names)
    raw_rows: list[list[str | None]] = []
    for r, row in enumerate(body):
        if len(row) != arity:
            raise RaggedRow(r + (2 if has_header else 1), arity, len(row))
        raw_rows.append(list(row))
    return _build_dataset(names, raw_rows, types)


def ingest_json(
    source: str, types: Mapping[str, Datatype | str] | None = None
) -> Dataset:
    """JSON row-array alternative: ``[{"attr": value, ...}, ...]``.

    Values are stringified before type inference so both file formats go
    through identical rules; JSON ``null`` is a missing cell.
    """
    try:
        records = json.loads(source)
    except json.JSONDecodeError as e:
        raise IngestError(f"invalid JSON: {e}") from None
    if not isinstance(records, list) or not records:
        raise EmptyInput("expected a non-empty JSON array of row objects")
    names = list(records[0].keys())
    raw_rows = []
    for r, rec in enumerate(records):
        if not isinstance(rec, dict) or list(rec.keys()) != names:
            raise RaggedRow(r + 1, len(names), len(rec) if isinstance(rec, dict) else 0)
        raw_rows.append([None if v is None else str(v) for v in rec.values()])
    return _build_dataset(names, raw_rows, types)


def recompute_domain(dataset: Dataset, attribute: str) -> tuple:
    """Brute-force domain/range recomputation (test oracle for ingest)."""
    schema = dataset.attribute(attribute)
    present = [v for v in dataset.column(attribute) if v is not None]
    if schema.datatype is Datatype.NOMINAL:
        return tuple(dict.fromkeys(present))
    return (min(present), max(present))
