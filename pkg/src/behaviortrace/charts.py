"""Encoding validation, filtering, and the element-to-datapoint mapping.

Every renderable visual element carries the set of datapoint ids that
constitute it, which is what lets hover telemetry flow back into
per-datapoint interaction counters. Element ids hash the encoding and
the group key but deliberately exclude filters, so traces survive both
re-renders and filter changes of the same encoding.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence, Union

from .dataset import (
    AttributeSchema,
    Datatype,
    Dataset,
    N_BINS,
    bin_edges,
    bin_index,
)
from .errors import InvalidPredicate, UnknownAttribute


class ChartType(str, Enum):
    SCATTER = "scatter"
    STRIP = "strip"
    BAR = "bar"
    LINE = "line"


class Aggregation(str, Enum):
    NONE = "none"
    COUNT = "count"
    SUM = "sum"
    MIN = "min"
    MAX = "max"
    AVERAGE = "average"


_Y_AGGREGATIONS = (Aggregation.SUM, Aggregation.MIN, Aggregation.MAX, Aggregation.AVERAGE)


@dataclass(frozen=True)
class RangeFilter:
    """Inclusive [lo, hi] predicate for Quantitative/Temporal attributes."""

    attribute: str
    lo: float
    hi: float

    def to_json(self) -> dict:
        return {"attribute": self.attribute, "kind": "range", "lo": self.lo, "hi": self.hi}


@dataclass(frozen=True)
class CategoryFilter:
    """Category membership predicate for Nominal attributes."""

    attribute: str
    categories: frozenset[str]

    def __init__(self, attribute: str, categories):
        object.__setattr__(self, "attribute", attribute)
        object.__setattr__(self, "categories", frozenset(categories))

    def to_json(self) -> dict:
        return {
            "attribute": self.attribute,
            "kind": "categories",
            "categories": sorted(self.categories),
        }


FilterPredicate = Union[RangeFilter, CategoryFilter]


@dataclass(frozen=True)
class ChartSpec:
    chart_type: ChartType
    x: str
    y: str | None = None
    aggregation: Aggregation = Aggregation.NONE
    filters: tuple[FilterPredicate, ...] = ()

    def to_json(self) -> dict:
        return {
            "chart_type": self.chart_type.value,
            "x": self.x,
            "y": self.y,
            "aggregation": self.aggregation.value,
            "filters": [f.to_json() for f in self.filters],
        }


class ElementKind(str, Enum):
    UNIT = "unit"
    AGGREGATE = "aggregate"


@dataclass(frozen=True)
class VisualElement:
    element_id: str
    kind: ElementKind
    members: tuple[int, ...]
    value: object
    x_key: object

    def to_json(self) -> dict:
        return {
            "id": self.element_id,
            "kind": self.kind.value,
            "members": list(self.members),
            "value": self.value,
            "x_key": self.x_key,
        }


def _schema_map(schema) -> dict[str, AttributeSchema]:
    if isinstance(schema, Dataset):
        return {a.name: a for a in schema.schema}
    return {a.name: a for a in schema}


def validate_filters(filters, schema) -> list[str]:
    """Predicate-level violations (kind/attribute/domain mismatches)."""
    return _check_filters(filters, _schema_map(schema))


def _check_filters(filters, by_name) -> list[str]:
    violations = []
    for f in filters:
        if f.attribute not in by_name:
            raise UnknownAttribute(f.attribute)
        dt = by_name[f.attribute].datatype
        if isinstance(f, RangeFilter):
            if dt is Datatype.NOMINAL:
                violations.append(
                    f"Range filters need a quantitative or temporal attribute; "
                    f"{f.attribute} is nominal — use a category filter."
                )
            elif f.lo > f.hi:
                violations.append(f"Filter on {f.attribute}: lower bound exceeds upper bound.")
        else:
            if dt is not Datatype.NOMINAL:
                violations.append(
                    f"Category filters need a nominal attribute; {f.attribute} is {dt.name.lower()} — "
                    f"use a range filter."
                )
            else:
                unknown = f.categories - set(by_name[f.attribute].domain)
                if unknown:
                    violations.append(
                        f"Filter on {f.attribute}: unknown categories {sorted(unknown)}."
                    )
    return violations


def validate_spec(spec: ChartSpec, schema) -> list[str]:
    """Check a spec against the encoding validity matrix.

    Returns a list of human-readable violations (empty means the spec is
    renderable); these become the fix-it messages shown to the user.
    Raises :class:`UnknownAttribute` for attributes missing from the schema.
    """
    by_name = _schema_map(schema)
    if spec.x not in by_name:
        raise UnknownAttribute(spec.x)
    if spec.y is not None and spec.y not in by_name:
        raise UnknownAttribute(spec.y)

    xt = by_name[spec.x].datatype
    yt = by_name[spec.y].datatype if spec.y is not None else None
    agg = spec.aggregation
    violations: list[str] = []
    numeric = (Datatype.QUANTITATIVE, Datatype.TEMPORAL)

    if spec.chart_type is ChartType.SCATTER:
        if xt not in numeric or yt not in numeric:
            violations.append(
                "Scatter plots need quantitative or temporal attributes on both axes."
            )
        if agg is not Aggregation.NONE:
            violations.append("Scatter plots render raw datapoints; remove the aggregation.")
    elif spec.chart_type is ChartType.STRIP:
        axis_ok = (xt in numeric and yt in (None, Datatype.NOMINAL)) or (
            yt in numeric and xt is Datatype.NOMINAL
        )
        if not axis_ok:
            violations.append(
                "Strip plots need one quantitative/temporal axis; the other axis "
                "must be nominal or left empty."
            )
        if agg is not Aggregation.NONE:
            violations.append("Strip plots render raw datapoints; remove the aggregation.")
    elif spec.chart_type in (ChartType.BAR, ChartType.LINE):
        name = "Bar charts" if spec.chart_type is ChartType.BAR else "Line charts"
        if spec.chart_type is ChartType.BAR and xt not in (Datatype.NOMINAL, Datatype.TEMPORAL):
            violations.append("Bar charts need a nominal or temporal X axis.")
        if spec.chart_type is ChartType.LINE and xt not in numeric:
            violations.append("Line charts need a temporal (or quantitative) X axis.")
        if spec.y is None:
            if agg is not Aggregation.COUNT:
                violations.append(f"{name} without a Y attribute must aggregate by count.")
        else:
            if yt is not Datatype.QUANTITATIVE:
                violations.append(f"{name} need a quantitative Y attribute.")
            if agg not in _Y_AGGREGATIONS:
                violations.append(
                    f"{name} with a Y attribute need a sum/min/max/average aggregation."
                )

    violations.extend(_check_filters(spec.filters, by_name))
    return violations


def apply_filters(dataset: Dataset, filters: Sequence[FilterPredicate]) -> set[int]:
    """Datapoint ids passing the conjunction of predicates.

    Null cells fail every predicate. An empty filter list passes all rows.
    """
    by_name = _schema_map(dataset)
    for f in filters:
        if f.attribute not in by_name:
            raise UnknownAttribute(f.attribute)
        dt = by_name[f.attribute].datatype
        if isinstance(f, RangeFilter):
            if dt is Datatype.NOMINAL or f.lo > f.hi:
                raise InvalidPredicate(f"invalid range filter on {f.attribute}")
        elif not isinstance(f, CategoryFilter) or dt is not Datatype.NOMINAL:
            raise InvalidPredicate(f"invalid category filter on {f.attribute}")

    ids = set(range(dataset.n_rows))
    for f in filters:
        col = dataset.column(f.attribute)
        if isinstance(f, RangeFilter):
            ids = {i for i in ids if col[i] is not None and f.lo <= col[i] <= f.hi}
        else:
            ids = {i for i in ids if col[i] is not None and col[i] in f.categories}
    return ids


def _element_id(spec: ChartSpec, key) -> str:
    payload = json.dumps(
        [
            spec.chart_type.value,
            spec.x,
            spec.y,
            spec.aggregation.value,
            key,
        ],
        sort_keys=False,
        separators=(",", ":"),
    )
    return hashlib.sha1(payload.encode()).hexdigest()[:16]


def _aggregate(values: list[float], agg: Aggregation):
    if agg is Aggregation.SUM:
        return sum(values)
    if agg is Aggregation.MIN:
        return min(values)
    if agg is Aggregation.MAX:
        return max(values)
    return sum(values) / len(values)


def build_elements(dataset: Dataset, spec: ChartSpec) -> list[VisualElement]:
    """Map a validated spec to its renderable elements.

    Scatter/Strip emit one unit element per filtered row whose encoded
    coordinates are all non-null. Bar/Line emit one aggregate element per
    nominal category, per distinct temporal value, or per equal-width
    quantitative bin; groups are restricted to rows with non-null x and
    empty groups are not emitted. Aggregations skip null y cells; a group
    whose y cells are all null gets value ``None``.
    """
    by_name = _schema_map(dataset)
    passing = sorted(apply_filters(dataset, spec.filters))
    x_schema = by_name[spec.x]
    x_col = dataset.column(spec.x)
    y_col = dataset.column(spec.y) if spec.y is not None else None

    if spec.chart_type in (ChartType.SCATTER, ChartType.STRIP):
        elements = []
        for i in passing:
            coords = [x_col[i]] + ([y_col[i]] if y_col is not None else [])
            if any(c is None for c in coords):
                continue
            elements.append(
                VisualElement(
                    element_id=_element_id(spec, ["unit", i]),
                    kind=ElementKind.UNIT,
                    members=(i,),
                    value=coords if len(coords) > 1 else coords[0],
                    x_key=x_col[i],
                )
            )
        return elements

    # Bar / Line: group rows with non-null x.
    groups: dict = {}
    if x_schema.datatype is Datatype.NOMINAL:
        for i in passing:
            if x_col[i] is not None:
                groups.setdefault(x_col[i], []).append(i)
        ordered_keys = [c for c in x_schema.domain if c in groups]
        key_payload = {k: k for k in ordered_keys}
    elif x_schema.datatype is Datatype.TEMPORAL:
        for i in passing:
            if x_col[i] is not None:
                groups.setdefault(x_col[i], []).append(i)
        ordered_keys = sorted(groups)
        key_payload = {k: k for k in ordered_keys}
    else:
        edges = bin_edges(x_schema)
        for i in passing:
            if x_col[i] is not None:
                groups.setdefault(bin_index(x_schema, x_col[i]), []).append(i)
        ordered_keys = sorted(groups)
        key_payload = {k: [float(edges[k]), float(edges[k + 1])] for k in ordered_keys}

    elements = []
    for key in ordered_keys:
        members = groups[key]
        if spec.aggregation is Aggregation.COUNT:
            value = len(members)
        else:
            y_values = [y_col[i] for i in members if y_col[i] is not None]
            value = _aggregate(y_values, spec.aggregation) if y_values else None
        elements.append(
            VisualElement(
                element_id=_element_id(spec, ["group", key_payload[key]]),
                kind=ElementKind.AGGREGATE,
                members=tuple(members),
                value=value,
                x_key=key_payload[key],
            )
        )
    return elements
