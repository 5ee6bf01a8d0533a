"""Deviation-over-time series rebuilt from a session log.

Replaying a log re-derives every attribute's deviation value after each
accepted event, yielding the per-attribute time series behind temporal
plots and the CSV export. Attribute-level events (encodings, filters) and
card toggles become annotations on the series.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .behavior import BehaviorEngine
from .dataset import Dataset
from .ledger import (
    EventKind,
    Ledger,
    MARKER_KINDS,
    entry_to_event,
    parse_log,
)
from .targets import TargetDistribution, default_targets

_ANNOTATED_KINDS = {
    EventKind.ENCODING_ASSIGN.value: "encoding",
    EventKind.FILTER_APPLY.value: "filter",
    EventKind.FILTER_CHANGE.value: "filter",
    "card_open": "card",
    "card_close": "card",
}


@dataclass
class ADTimeSeries:
    """One attribute's deviation trajectory plus event annotations."""

    attribute: str
    points: list[tuple[float, float]] = field(default_factory=list)
    annotations: list[tuple[float, str, str]] = field(default_factory=list)
    insufficient: bool = True

    @property
    def final_value(self) -> float:
        return self.points[-1][1]


def replay_series(
    log: Iterable[str] | Iterable[dict],
    dataset: Dataset,
    targets: Mapping[str, TargetDistribution] | None = None,
) -> list[ADTimeSeries]:
    """Rebuild per-attribute deviation series from a session log.

    ``log`` is an iterable of JSONL lines or already-parsed entries. Every
    series starts at (0, 0); a point is appended after each event that
    changes counters. A log with no accepted events leaves each series at
    the single starting point, flagged insufficient.
    """
    entries = _coerce_entries(log)
    if targets is None:
        targets = default_targets(dataset)
    engine = BehaviorEngine(dataset, targets)
    ledger = Ledger()
    names = dataset.attribute_names
    series = {name: ADTimeSeries(attribute=name, points=[(0.0, 0.0)]) for name in names}

    for entry in entries:
        t = float(entry["t"])
        kind = entry["kind"]
        marker = _ANNOTATED_KINDS.get(kind)
        if marker is not None:
            attr = entry["target"].get("attribute", "")
            series_for = series.get(attr)
            if series_for is not None:
                series_for.annotations.append((t, marker, kind))
        if kind in MARKER_KINDS:
            continue
        outcome = ledger.record(entry_to_event(entry))
        if not outcome.accepted:
            continue
        engine.apply_datapoint_deltas(outcome.datapoint_deltas)
        for name in names:
            snap = engine.snapshot(name)
            series[name].points.append((t, snap.ad_value))
            series[name].insufficient = snap.insufficient

    return [series[name] for name in names]


def _coerce_entries(log) -> list[dict]:
    materialized = list(log)
    if materialized and isinstance(materialized[0], str):
        return list(parse_log(materialized))
    return materialized


def series_to_csv(all_series: Iterable[ADTimeSeries]) -> str:
    """Deterministic CSV export: (attribute, t_ms, ad, event_kind)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["attribute", "t_ms", "ad", "event_kind"])
    for s in all_series:
        annotations = {t: kind for t, _, kind in s.annotations}
        for i, (t, ad) in enumerate(s.points):
            kind = "start" if i == 0 else annotations.get(t, "")
            writer.writerow([s.attribute, repr(float(t)), repr(float(ad)), kind])
    return buf.getvalue()


def write_series_csv(path, all_series: Iterable[ADTimeSeries]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(series_to_csv(all_series))
