"""One live exploration session: state, message handling, trace broadcasts.

A session owns the dataset, the current encoding and filters, the
interaction ledger, per-attribute targets, and settings. Client messages
apply one at a time (single writer); each applied message bumps the
revision by exactly 1 and yields delta frames for the client. Sessions
opened in the ``control`` condition log events identically but suppress
every trace frame (intensities, attribute shading, distribution cards).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

import numpy as np

from . import charts
from .behavior import BehaviorEngine
from .charts import (
    Aggregation,
    CategoryFilter,
    ChartSpec,
    ChartType,
    RangeFilter,
    VisualElement,
)
from .dataset import Dataset, ingest, ingest_json
from .errors import (
    EngineError,
    FingerprintMismatch,
    ProtocolError,
    UnknownElement,
)
from .ledger import (
    EventKind,
    InteractionEvent,
    Ledger,
    NormalizeMode,
    entry_line,
    event_to_entry,
    normalize,
)
from .mitigation import suggest_reverse_filter
from .targets import (
    TargetDistribution,
    TargetMode,
    default_targets,
    equal_target,
    proportional_target,
    set_custom_target,
)

ARCHIVE_FORMAT = "behaviortrace-session"

#: Frame types suppressed for control-condition sessions.
TRACE_FRAME_TYPES = ("intensities", "attributes", "cards")


class SortBy(str, Enum):
    ORDER_IN_DATASET = "order_in_dataset"
    NAME = "name"
    DATATYPE = "datatype"
    FOCUS = "focus"


class FocusMode(str, Enum):
    PERCENTAGE = "percentage"
    RAW = "raw"


@dataclass(frozen=True)
class SessionSettings:
    sort_by: SortBy = SortBy.ORDER_IN_DATASET
    color_mode: NormalizeMode = NormalizeMode.RELATIVE
    focus_mode: FocusMode = FocusMode.PERCENTAGE
    color_scale: str = "default-diverging"

    def to_json(self) -> dict:
        return {
            "sort_by": self.sort_by.value,
            "color_mode": self.color_mode.value,
            "focus_mode": self.focus_mode.value,
            "color_scale": self.color_scale,
        }

    def updated(self, fields: dict) -> "SessionSettings":
        known = {"sort_by": SortBy, "color_mode": NormalizeMode, "focus_mode": FocusMode}
        changes = {}
        for key, value in fields.items():
            if key == "color_scale":
                if not isinstance(value, str):
                    raise ProtocolError("color_scale must be a string")
                changes[key] = value
            elif key in known:
                try:
                    changes[key] = known[key](value)
                except ValueError:
                    raise ProtocolError(f"invalid {key}: {value!r}") from None
            else:
                raise ProtocolError(f"unknown setting: {key!r}")
        return replace(self, **changes)


class _ViolationSignal(Exception):
    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = violations


class Session:
    """Single-writer session state machine speaking JSON messages."""

    def __init__(self, condition: str = "awareness"):
        if condition not in ("awareness", "control"):
            raise ValueError(f"unknown condition: {condition!r}")
        self.condition = condition
        self.dataset: Dataset | None = None
        self.ledger: Ledger | None = None
        self.engine: BehaviorEngine | None = None
        self.targets: dict[str, TargetDistribution] = {}
        self.settings = SessionSettings()
        self.spec: ChartSpec | None = None
        self.filters: dict[str, charts.FilterPredicate] = {}
        self.elements: list[VisualElement] = []
        self.revision = 0
        self.message_log: list[dict] = []
        self.log_entries: list[dict] = []
        self.open_cards: set[str] = set()
        self._elements_by_id: dict[str, VisualElement] = {}
        self._unit_element_ids: list[str] = []
        self._unit_member_ids = np.empty(0, dtype=np.int64)
        self._aggregate_members: dict[str, np.ndarray] = {}
        self._last_dp_dense = np.empty(0)
        self._last_unit_values = np.empty(0)
        self._last_aggregates: dict[str, float] = {}
        self._pending_hover: tuple[str, float] | None = None
        self._last_t: float | None = None

    # -- public API -------------------------------------------------------------

    def handle_message(self, msg: dict) -> list[dict]:
        """Apply one client message; returns the frames to send back.

        Protocol errors and validation violations leave the state (and the
        revision) unchanged.
        """
        try:
            kind = self._check_envelope(msg)
            handler = _HANDLERS[kind]
        except EngineError as e:
            return [self._error_frame(e)]
        try:
            frames = handler(self, msg)
        except _ViolationSignal as v:
            return [
                {
                    "type": "violation",
                    "revision": self.revision,
                    "violations": v.violations,
                    "frames": 1,
                }
            ]
        except EngineError as e:
            return [self._error_frame(e)]

        self.revision += 1
        self.message_log.append(msg)
        self._last_t = float(msg["t"])
        out = [{"type": "ok", "applied": msg["type"]}] + frames
        for frame in out:
            frame["revision"] = self.revision
        if self.condition == "control":
            out = [f for f in out if f["type"] not in TRACE_FRAME_TYPES]
            for f in out:
                f.pop("intensities", None)
        out[0]["frames"] = len(out)  # lets clients read responses without peeking
        return out

    def snapshots(self) -> dict:
        """Current BehaviorSnapshot per attribute (test/inspection hook)."""
        self._require_dataset()
        return self.engine.snapshots()

    def event_log_lines(self) -> list[str]:
        return [entry_line(e) for e in self.log_entries]

    # -- envelope / guards --------------------------------------------------------

    def _check_envelope(self, msg) -> str:
        if not isinstance(msg, dict):
            raise ProtocolError("message must be a JSON object")
        kind = msg.get("type")
        if kind not in _HANDLERS:
            raise ProtocolError(f"unknown message type: {kind!r}")
        t = msg.get("t")
        if not isinstance(t, (int, float)) or t < 0:
            raise ProtocolError("message needs a non-negative numeric 't'")
        if self._last_t is not None and t < self._last_t:
            raise ProtocolError(
                f"message at t={t} arrived after t={self._last_t}; "
                "timestamps must be non-decreasing"
            )
        return kind

    def _require_dataset(self) -> None:
        if self.dataset is None:
            raise ProtocolError("no dataset loaded")

    def _error_frame(self, e: EngineError) -> dict:
        code = e.code if isinstance(e, EngineError) else type(e).__name__
        return {
            "type": "error",
            "revision": self.revision,
            "code": code,
            "message": str(e),
            "frames": 1,
        }

    # -- message handlers -----------------------------------------------------------

    def _on_load_dataset(self, msg) -> list[dict]:
        types = msg.get("types")
        if "path" in msg:
            text = Path(msg["path"]).read_text(encoding="utf-8")
            dataset = ingest(text, delimiter=msg.get("delimiter", ","), types=types)
        elif "text" in msg:
            dataset = ingest(msg["text"], delimiter=msg.get("delimiter", ","), types=types)
        elif "json_text" in msg:
            dataset = ingest_json(msg["json_text"], types=types)
        else:
            raise ProtocolError("load_dataset needs 'path', 'text', or 'json_text'")

        self.dataset = dataset
        self.ledger = Ledger(known_attributes=dataset.attribute_names)
        self.targets = default_targets(dataset)
        self.engine = BehaviorEngine(dataset, self.targets)
        self.spec = None
        self.filters = {}
        self.elements = []
        self._elements_by_id = {}
        self._unit_element_ids = []
        self._unit_member_ids = np.empty(0, dtype=np.int64)
        self._aggregate_members = {}
        self._last_dp_dense = np.zeros(dataset.n_rows)
        self._last_unit_values = np.empty(0)
        self._last_aggregates = {}
        self._pending_hover = None
        self.open_cards = set()
        self.log_entries = []
        return [
            self._schema_frame(),
            self._attributes_frame(),
            self._cards_frame(dataset.attribute_names),
        ]

    def _on_set_encoding(self, msg) -> list[dict]:
        self._require_dataset()
        try:
            chart_type = ChartType(msg.get("chart_type"))
            aggregation = Aggregation(msg.get("aggregation", "none"))
        except ValueError as e:
            raise ProtocolError(str(e)) from None
        x = msg.get("x")
        y = msg.get("y")
        if not isinstance(x, str):
            raise ProtocolError("set_encoding needs an 'x' attribute")
        spec = ChartSpec(
            chart_type=chart_type,
            x=x,
            y=y,
            aggregation=aggregation,
            filters=tuple(self.filters.values()),
        )
        violations = charts.validate_spec(spec, self.dataset)
        if violations:
            raise _ViolationSignal(violations)

        t = float(msg["t"])
        events = []
        if self.spec is None or self.spec.x != x:
            events.append(self._attribute_event(t, EventKind.ENCODING_ASSIGN, x))
        if y is not None and (self.spec is None or self.spec.y != y):
            events.append(self._attribute_event(t, EventKind.ENCODING_ASSIGN, y))
        for event in events:
            self._record(event)

        self.spec = spec
        self._rebuild_elements()
        return [self._elements_frame(), self._attributes_frame()]

    def _on_set_filter(self, msg) -> list[dict]:
        self._require_dataset()
        attribute = msg.get("attribute")
        if not isinstance(attribute, str):
            raise ProtocolError("set_filter needs an 'attribute'")
        schema = self.dataset.attribute(attribute)  # raises UnknownAttribute
        raw = msg.get("filter")
        predicate = self._parse_filter(attribute, raw)
        if predicate is not None:
            violations = charts.validate_filters([predicate], [schema])
            if violations:
                raise _ViolationSignal(violations)
        if predicate is None and attribute not in self.filters:
            raise ProtocolError(f"no filter on {attribute!r} to remove")

        kind = EventKind.FILTER_APPLY if attribute not in self.filters else EventKind.FILTER_CHANGE
        self._record(self._attribute_event(float(msg["t"]), kind, attribute))
        if predicate is None:
            del self.filters[attribute]
        else:
            self.filters[attribute] = predicate
        if self.spec is not None:
            self.spec = replace(self.spec, filters=tuple(self.filters.values()))
            self._rebuild_elements()
            return [self._elements_frame(), self._attributes_frame()]
        return [self._attributes_frame()]

    @staticmethod
    def _parse_filter(attribute, raw):
        if raw is None:
            return None
        if not isinstance(raw, dict) or "kind" not in raw:
            raise ProtocolError("filter must be null or an object with a 'kind'")
        if raw["kind"] == "range":
            try:
                return RangeFilter(attribute, float(raw["lo"]), float(raw["hi"]))
            except (KeyError, TypeError, ValueError):
                raise ProtocolError("range filter needs numeric 'lo' and 'hi'") from None
        if raw["kind"] == "categories":
            cats = raw.get("categories")
            if not isinstance(cats, list) or not cats:
                raise ProtocolError("category filter needs a non-empty 'categories' list")
            return CategoryFilter(attribute, cats)
        raise ProtocolError(f"unknown filter kind: {raw['kind']!r}")

    def _on_hover(self, msg) -> list[dict]:
        self._require_dataset()
        element_id = msg.get("element")
        phase = msg.get("phase")
        t = float(msg["t"])
        if phase not in ("start", "end"):
            raise ProtocolError("hover phase must be 'start' or 'end'")

        if phase == "start":
            if element_id not in self._elements_by_id:
                raise UnknownElement(str(element_id))
            frames: list[dict] = []
            if self._pending_hover is not None:
                # Client moved to a new element without an explicit end;
                # close the previous hover at this timestamp.
                frames = self._finish_hover(t)
            self._pending_hover = (element_id, t)
            return frames

        if self._pending_hover is None:
            raise ProtocolError("hover end without a hover in progress")
        if self._pending_hover[0] != element_id:
            raise ProtocolError(
                f"hover end for {element_id!r} but {self._pending_hover[0]!r} in progress"
            )
        return self._finish_hover(t)

    def _finish_hover(self, end_t: float) -> list[dict]:
        element_id, start_t = self._pending_hover
        self._pending_hover = None
        element = self._elements_by_id.get(element_id)
        if element is None:
            raise UnknownElement(element_id)
        event = InteractionEvent(
            t=end_t,
            kind=EventKind.HOVER_ELEMENT,
            element_id=element_id,
            members=element.members,
            dwell=end_t - start_t,
        )
        outcome = self._record(event)
        if not outcome.accepted:
            return []
        return [self._intensities_frame(), self._cards_frame(self.dataset.attribute_names)]

    def _on_detail_hover(self, msg) -> list[dict]:
        self._require_dataset()
        row = msg.get("row")
        if not isinstance(row, int) or not 0 <= row < self.dataset.n_rows:
            raise UnknownElement(f"row:{row}")
        event = InteractionEvent(
            t=float(msg["t"]), kind=EventKind.HOVER_DETAIL_ROW, members=(row,)
        )
        self._record(event)
        return [self._intensities_frame(), self._cards_frame(self.dataset.attribute_names)]

    def _on_set_target(self, msg) -> list[dict]:
        self._require_dataset()
        attribute = msg.get("attribute")
        if not isinstance(attribute, str):
            raise ProtocolError("set_target needs an 'attribute'")
        self.dataset.attribute(attribute)
        try:
            mode = TargetMode(msg.get("mode"))
        except ValueError:
            raise ProtocolError(f"unknown target mode: {msg.get('mode')!r}") from None
        if mode is TargetMode.PROPORTIONAL:
            target = proportional_target(self.dataset, attribute)
        elif mode is TargetMode.EQUAL:
            target = equal_target(self.dataset, attribute)
        else:
            points = msg.get("points")
            target = set_custom_target(
                self.dataset,
                attribute,
                weights=msg.get("weights"),
                points=[tuple(p) for p in points] if points else None,
            )
        self.targets[attribute] = target
        self.engine.set_target(attribute, target)
        return [self._cards_frame([attribute])]

    def _on_set_settings(self, msg) -> list[dict]:
        fields = {k: v for k, v in msg.items() if k not in ("type", "t")}
        self.settings = self.settings.updated(fields)
        if self.dataset is None:
            return []
        return [
            self._attributes_frame(),
            self._intensities_frame(),
            self._cards_frame(self.dataset.attribute_names),
        ]

    def _on_open_card(self, msg) -> list[dict]:
        attribute = self._card_attribute(msg)
        self.open_cards.add(attribute)
        self.log_entries.append(
            {"t": float(msg["t"]), "kind": "card_open", "target": {"attribute": attribute}}
        )
        return [self._cards_frame([attribute])]

    def _on_close_card(self, msg) -> list[dict]:
        attribute = self._card_attribute(msg)
        self.open_cards.discard(attribute)
        self.log_entries.append(
            {"t": float(msg["t"]), "kind": "card_close", "target": {"attribute": attribute}}
        )
        return [self._cards_frame([attribute])]

    def _card_attribute(self, msg) -> str:
        self._require_dataset()
        attribute = msg.get("attribute")
        if not isinstance(attribute, str):
            raise ProtocolError("card messages need an 'attribute'")
        self.dataset.attribute(attribute)
        return attribute

    # -- recording / frames ------------------------------------------------------

    def _attribute_event(self, t: float, kind: EventKind, attribute: str) -> InteractionEvent:
        self.dataset.attribute(attribute)  # raises UnknownAttribute
        return InteractionEvent(t=t, kind=kind, attribute=attribute)

    def _record(self, event: InteractionEvent):
        outcome = self.ledger.record(event)
        self.log_entries.append(event_to_entry(event))
        if outcome.datapoint_deltas:
            self.engine.apply_datapoint_deltas(outcome.datapoint_deltas)
        return outcome

    def _rebuild_elements(self) -> None:
        self.elements = charts.build_elements(self.dataset, self.spec)
        self._elements_by_id = {el.element_id: el for el in self.elements}
        units = [el for el in self.elements if len(el.members) == 1]
        self._unit_element_ids = [el.element_id for el in units]
        self._unit_member_ids = np.fromiter(
            (el.members[0] for el in units), dtype=np.int64, count=len(units)
        )
        self._aggregate_members = {
            el.element_id: np.fromiter(el.members, dtype=np.int64, count=len(el.members))
            for el in self.elements
            if len(el.members) > 1
        }

    def _schema_frame(self) -> dict:
        return {
            "type": "schema",
            "attributes": [a.to_json() for a in self.dataset.schema],
            "n_rows": self.dataset.n_rows,
            "rows_preview": [list(r) for r in self.dataset.rows[:50]],
        }

    def _intensity_state(self) -> tuple[np.ndarray, np.ndarray, dict]:
        """Vectorized wire intensities, quantized to 4 decimals.

        Same rules as :func:`behaviortrace.behavior.trace_intensity`; this
        path exists because broadcasting after every accepted hover has a
        50 ms budget on 10k-row datasets. Returns the dense per-datapoint
        vector, the per-unit-element vector, and the aggregate-element map.
        """
        n = self.dataset.n_rows
        counters = self.ledger.datapoint_counters
        dense = np.zeros(n)
        if counters:
            ids = np.fromiter(counters.keys(), dtype=np.int64, count=len(counters))
            vals = np.fromiter(counters.values(), dtype=np.float64, count=len(counters))
            mode = self.settings.color_mode
            if mode is NormalizeMode.BINARY:
                norm = (vals > 0).astype(np.float64)
            elif mode is NormalizeMode.ABSOLUTE:
                total = vals.sum()
                norm = vals / total if total > 0 else np.zeros_like(vals)
            else:
                peak = vals.max()
                norm = vals / peak if peak > 0 else np.zeros_like(vals)
            dense[ids] = np.round(norm, 4)
        unit_values = dense[self._unit_member_ids]
        aggregates = {
            el_id: round(float(dense[members].mean()), 4)
            for el_id, members in self._aggregate_members.items()
        }
        return dense, unit_values, aggregates

    def _elements_frame(self) -> dict:
        """Full chart state; resets the client's intensity baseline."""
        dense, unit_values, aggregates = self._intensity_state()
        intensities = dict(zip(self._unit_element_ids, unit_values.tolist()))
        intensities.update(aggregates)
        self._last_dp_dense = dense
        self._last_unit_values = unit_values
        self._last_aggregates = aggregates
        return {
            "type": "elements",
            "spec": self.spec.to_json(),
            "elements": [el.to_json() for el in self.elements],
            "intensities": intensities,
        }

    def _intensities_frame(self) -> dict:
        """Delta frame: only entries whose quantized value changed.

        Absent keys mean "unchanged"; the baseline is zero after dataset
        load and fully restated by each elements frame.
        """
        dense, unit_values, aggregates = self._intensity_state()
        changed = np.nonzero(dense != self._last_dp_dense)[0]
        datapoints = dict(zip(changed.tolist(), dense[changed].tolist()))
        self._last_dp_dense = dense

        if self._last_unit_values.shape == unit_values.shape:
            moved = np.nonzero(unit_values != self._last_unit_values)[0]
        else:
            moved = np.arange(len(unit_values))
        elements = {
            self._unit_element_ids[i]: v
            for i, v in zip(moved.tolist(), unit_values[moved].tolist())
        }
        for el_id, value in aggregates.items():
            if self._last_aggregates.get(el_id) != value:
                elements[el_id] = value
        self._last_unit_values = unit_values
        self._last_aggregates = aggregates
        return {
            "type": "intensities",
            "elements": elements,
            "datapoints": datapoints,
        }

    def _attributes_frame(self) -> dict:
        raw = normalize(self.ledger.attribute_counters, NormalizeMode.RELATIVE)
        intensities = {name: raw.get(name, 0.0) for name in self.dataset.attribute_names}
        return {
            "type": "attributes",
            "intensities": intensities,
            "order": self._attribute_order(intensities),
        }

    def _attribute_order(self, intensities: dict[str, float]) -> list[str]:
        names = self.dataset.attribute_names
        mode = self.settings.sort_by
        if mode is SortBy.NAME:
            return sorted(names)
        if mode is SortBy.DATATYPE:
            return sorted(names, key=lambda n: (self.dataset.attribute(n).datatype.value,
                                                self.dataset.attribute(n).index))
        if mode is SortBy.FOCUS:
            return sorted(names, key=lambda n: (-intensities[n], self.dataset.attribute(n).index))
        return list(names)

    def _cards_frame(self, attributes) -> dict:
        snapshots = []
        for name in attributes:
            snap = self.engine.snapshot(name)
            doc = snap.to_json(self.settings.focus_mode.value)
            suggestion = suggest_reverse_filter(snap)
            doc["suggestion"] = suggestion.to_json() if suggestion is not None else None
            doc["open"] = name in self.open_cards
            snapshots.append(doc)
        return {"type": "cards", "snapshots": snapshots}


_HANDLERS = {
    "load_dataset": Session._on_load_dataset,
    "set_encoding": Session._on_set_encoding,
    "set_filter": Session._on_set_filter,
    "hover": Session._on_hover,
    "detail_hover": Session._on_detail_hover,
    "set_target": Session._on_set_target,
    "set_settings": Session._on_set_settings,
    "open_card": Session._on_open_card,
    "close_card": Session._on_close_card,
}


# --- persistence -----------------------------------------------------------------

def save_session(session: Session, path) -> None:
    """Archive = one JSON header line + one line per applied message."""
    header = {
        "format": ARCHIVE_FORMAT,
        "version": 1,
        "condition": session.condition,
        "dataset_fingerprint": session.dataset.fingerprint() if session.dataset else None,
        "revision": session.revision,
        "settings": session.settings.to_json(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(header, sort_keys=True, separators=(",", ":")) + "\n")
        for msg in session.message_log:
            fh.write(json.dumps(msg, sort_keys=True, separators=(",", ":")) + "\n")


def restore_session(path) -> Session:
    """Rebuild a session by replaying its archived message log.

    Raises :class:`FingerprintMismatch` if the dataset behind the log no
    longer matches the archived fingerprint.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line for line in fh.read().splitlines() if line.strip()]
    if not lines:
        raise EngineError("empty session archive")
    header = json.loads(lines[0])
    if header.get("format") != ARCHIVE_FORMAT:
        raise EngineError("not a session archive")
    session = Session(condition=header["condition"])
    for line in lines[1:]:
        frames = session.handle_message(json.loads(line))
        bad = [f for f in frames if f["type"] in ("error", "violation")]
        if bad:
            raise EngineError(f"archived message failed on replay: {bad[0]}")
    expected = header.get("dataset_fingerprint")
    actual = session.dataset.fingerprint() if session.dataset else None
    if expected != actual:
        raise FingerprintMismatch(
            f"archive expects dataset {expected}, replay loaded {actual}"
        )
    if session.revision != header.get("revision"):
        raise EngineError(
            f"replayed revision {session.revision} != archived {header.get('revision')}"
        )
    return session
