"""Interaction accounting: raw UI events in, weighted counters out.

The ledger is the single source of truth for analytic behavior. Rules:

* Element hovers shorter than 350 ms are treated as accidental: the event
  is still logged, but no counter moves.
* An accepted hover on a unit element credits its datapoint +1 (a
  "complete" interaction); on an aggregate element with N members each
  member gets +1/N ("partial" interactions), so one accepted hover always
  adds a total mass of 1.
* A detail-table row hover is a complete interaction with that row.
* Encoding assignments and filter applications/changes credit the target
  attribute's counter by 1; rapid-fire filter changes (slider drags) on
  the same attribute are coalesced by a quiet period equal to the hover
  gate.

Counters only ever increase, and replaying an event log from an empty
ledger reproduces them bit-exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator

from .errors import CorruptLog, UnknownAttribute

#: Hovers shorter than this many milliseconds are ignored as accidental.
HOVER_GATE_MS = 350

#: Quiet period coalescing successive filter changes on one attribute.
FILTER_QUIET_MS = 350


class EventKind(str, Enum):
    HOVER_ELEMENT = "hover_element"
    HOVER_DETAIL_ROW = "hover_detail_row"
    ENCODING_ASSIGN = "encoding_assign"
    FILTER_APPLY = "filter_apply"
    FILTER_CHANGE = "filter_change"


_HOVER_KINDS = (EventKind.HOVER_ELEMENT, EventKind.HOVER_DETAIL_ROW)
_ATTRIBUTE_KINDS = (EventKind.ENCODING_ASSIGN, EventKind.FILTER_APPLY, EventKind.FILTER_CHANGE)

#: Non-counter marker kinds allowed in a session log (card toggles feed
#: temporal annotations but never move counters).
MARKER_KINDS = ("card_open", "card_close")


class NormalizeMode(str, Enum):
    RELATIVE = "relative"
    ABSOLUTE = "absolute"
    BINARY = "binary"


@dataclass(frozen=True)
class InteractionEvent:
    """One timestamped user action.

    ``t`` is milliseconds since session start and must be non-decreasing
    within a session. Hover kinds carry ``members`` (the constituent
    datapoint ids) and, for element hovers, a ``dwell``; attribute kinds
    carry ``attribute``.
    """

    t: float
    kind: EventKind
    element_id: str | None = None
    members: tuple[int, ...] = ()
    attribute: str | None = None
    dwell: float | None = None

    def __post_init__(self):
        if self.kind in _HOVER_KINDS and not self.members:
            raise ValueError(f"{self.kind.value} event needs member datapoint ids")
        if self.kind in _ATTRIBUTE_KINDS and not self.attribute:
            raise ValueError(f"{self.kind.value} event needs an attribute name")
        if self.dwell is not None and self.dwell < 0:
            raise ValueError("dwell must be >= 0")


@dataclass(frozen=True)
class RecordOutcome:
    """What one event did to the ledger."""

    accepted: bool
    datapoint_deltas: dict[int, float] = field(default_factory=dict)
    attribute_deltas: dict[str, int] = field(default_factory=dict)
    reason: str = ""


class Ledger:
    """Weighted interaction counters plus the append-only event log.

    One writer per session; events must arrive in timestamp order.
    ``dedupe_elements`` turns on binary-per-element credit (an element's
    repeat hovers stop counting once credited); it defaults off because
    re-hover skew is part of the behavior being surfaced.
    """

    def __init__(
        self,
        known_attributes: Iterable[str] | None = None,
        hover_gate_ms: float = HOVER_GATE_MS,
        filter_quiet_ms: float = FILTER_QUIET_MS,
        detail_row_weight: float = 1.0,
        dedupe_elements: bool = False,
    ):
        self.datapoint_counters: dict[int, float] = {}
        self.attribute_counters: dict[str, int] = {}
        self.event_log: list[InteractionEvent] = []
        self.hover_gate_ms = hover_gate_ms
        self.filter_quiet_ms = filter_quiet_ms
        self.detail_row_weight = detail_row_weight
        self.dedupe_elements = dedupe_elements
        self._known_attributes = set(known_attributes) if known_attributes is not None else None
        self._last_t: float | None = None
        self._last_filter_change: dict[str, float] = {}
        self._credited_elements: set[str] = set()

    # -- recording -----------------------------------------------------------

    def record(self, event: InteractionEvent) -> RecordOutcome:
        """Apply one event; the event is logged whether or not it counts."""
        if self._last_t is not None and event.t < self._last_t:
            raise ValueError(
                f"event at t={event.t} arrived after t={self._last_t}; "
                "timestamps must be non-decreasing"
            )
        if (
            event.attribute is not None
            and self._known_attributes is not None
            and event.attribute not in self._known_attributes
        ):
            raise UnknownAttribute(event.attribute)

        self._last_t = event.t
        self.event_log.append(event)

        if event.kind is EventKind.HOVER_ELEMENT:
            outcome = self._record_element_hover(event)
        elif event.kind is EventKind.HOVER_DETAIL_ROW:
            outcome = self._credit_members(event.members, self.detail_row_weight)
        elif event.kind is EventKind.FILTER_CHANGE:
            outcome = self._record_filter_change(event)
        else:
            outcome = self._credit_attribute(event.attribute)
        return outcome

    def _record_element_hover(self, event: InteractionEvent) -> RecordOutcome:
        dwell = event.dwell if event.dwell is not None else 0.0
        if dwell < self.hover_gate_ms:
            return RecordOutcome(accepted=False, reason="below dwell threshold")
        if self.dedupe_elements and event.element_id in self._credited_elements:
            return RecordOutcome(accepted=False, reason="element already credited")
        if event.element_id is not None:
            self._credited_elements.add(event.element_id)
        return self._credit_members(event.members, 1.0 / len(event.members))

    def _credit_members(self, members: tuple[int, ...], weight: float) -> RecordOutcome:
        deltas = {}
        for dp in members:
            self.datapoint_counters[dp] = self.datapoint_counters.get(dp, 0.0) + weight
            deltas[dp] = deltas.get(dp, 0.0) + weight
        return RecordOutcome(accepted=True, datapoint_deltas=deltas)

    def _record_filter_change(self, event: InteractionEvent) -> RecordOutcome:
        last = self._last_filter_change.get(event.attribute)
        self._last_filter_change[event.attribute] = event.t
        if last is not None and event.t - last < self.filter_quiet_ms:
            return RecordOutcome(accepted=False, reason="coalesced into previous change")
        return self._credit_attribute(event.attribute)

    def _credit_attribute(self, attribute: str) -> RecordOutcome:
        self.attribute_counters[attribute] = self.attribute_counters.get(attribute, 0) + 1
        return RecordOutcome(accepted=True, attribute_deltas={attribute: 1})

    # -- derived views ---------------------------------------------------------

    @property
    def total_datapoint_mass(self) -> float:
        return sum(self.datapoint_counters.values())

    @classmethod
    def replay(cls, events: Iterable[InteractionEvent], **config) -> "Ledger":
        """Rebuild a ledger from an event sequence (deterministic)."""
        ledger = cls(**config)
        for event in events:
            ledger.record(event)
        return ledger


def normalize(counters: dict, mode: NormalizeMode) -> dict:
    """Map counters into [0, 1] by the session's color-mode rule.

    ``relative`` divides by the maximum counter, ``absolute`` by the sum
    (nudging the largest share by at most one ulp so the output sums to
    exactly 1.0), ``binary`` maps any interaction to 1. All-zero input
    yields all-zero output in every mode.
    """
    mode = NormalizeMode(mode)
    if not counters:
        return {}
    values = counters.values()
    if mode is NormalizeMode.BINARY:
        return {k: 1.0 if v > 0 else 0.0 for k, v in counters.items()}
    if mode is NormalizeMode.RELATIVE:
        peak = max(values)
        if peak <= 0:
            return {k: 0.0 for k in counters}
        return {k: v / peak for k, v in counters.items()}
    total = sum(values)
    if total <= 0:
        return {k: 0.0 for k in counters}
    out = {k: v / total for k, v in counters.items()}
    # Absorb the division rounding residual (a few ulps) into the last
    # nonzero share so the output sums to exactly 1.0; zero counters must
    # keep an exact 0. A share too small to absorb a negative residual is
    # clamped to 0 and the next pass picks an earlier share.
    for _ in range(len(out)):
        if sum(out.values()) == 1.0:
            break
        last_nonzero = None
        for k, v in out.items():
            if v > 0:
                last_nonzero = k
        if last_nonzero is None:
            break
        partial = sum(v for k, v in out.items() if k != last_nonzero)
        out[last_nonzero] = max(0.0, 1.0 - partial)
    return out


# --- session-log serialization ----------------------------------------------

def event_to_entry(event: InteractionEvent) -> dict:
    """One event as its wire/log object ``{t, kind, target[, dwell]}``."""
    if event.kind is EventKind.HOVER_ELEMENT:
        target: dict = {"element": event.element_id, "members": list(event.members)}
    elif event.kind is EventKind.HOVER_DETAIL_ROW:
        target = {"row": event.members[0]}
    else:
        target = {"attribute": event.attribute}
    entry = {"t": event.t, "kind": event.kind.value, "target": target}
    if event.dwell is not None:
        entry["dwell"] = event.dwell
    return entry


def entry_to_event(entry: dict) -> InteractionEvent | None:
    """Inverse of :func:`event_to_entry`; ``None`` for marker entries."""
    kind = entry["kind"]
    if kind in MARKER_KINDS:
        return None
    kind = EventKind(kind)
    target = entry["target"]
    if kind is EventKind.HOVER_ELEMENT:
        return InteractionEvent(
            t=entry["t"],
            kind=kind,
            element_id=target["element"],
            members=tuple(target["members"]),
            dwell=entry.get("dwell"),
        )
    if kind is EventKind.HOVER_DETAIL_ROW:
        return InteractionEvent(
            t=entry["t"], kind=kind, members=(target["row"],), dwell=entry.get("dwell")
        )
    return InteractionEvent(t=entry["t"], kind=kind, attribute=target["attribute"])


def entry_line(entry: dict) -> str:
    return json.dumps(entry, sort_keys=True, separators=(",", ":"))


def parse_log(lines: Iterable[str]) -> Iterator[dict]:
    """Yield log entries, validating shape; raises :class:`CorruptLog`."""
    valid_kinds = {k.value for k in EventKind} | set(MARKER_KINDS)
    for number, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            entry = json.loads(line)
        except json.JSONDecodeError as e:
            raise CorruptLog(number, str(e)) from None
        if not isinstance(entry, dict):
            raise CorruptLog(number, "entry is not an object")
        if not isinstance(entry.get("t"), (int, float)):
            raise CorruptLog(number, "missing numeric 't'")
        if entry.get("kind") not in valid_kinds:
            raise CorruptLog(number, f"unknown kind {entry.get('kind')!r}")
        if not isinstance(entry.get("target"), dict):
            raise CorruptLog(number, "missing 'target' object")
        yield entry


def write_log(path, entries: Iterable[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for entry in entries:
            fh.write(entry_line(entry) + "\n")


def read_log(path) -> list[dict]:
    with open(path, "r", encoding="utf-8") as fh:
        return list(parse_log(fh))
