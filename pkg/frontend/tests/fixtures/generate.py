"""Regenerate the frontend test fixtures from the reference server.

Encodes the 30-gesture round-trip script, the expected client messages
(the protocol.md mapping, written independently of the TS emitter), the
reference event log those messages produce, and a full frame stream for
panel rendering. Run from the repo root:

    python frontend/tests/fixtures/generate.py
"""

import json
import sys
from pathlib import Path

from behaviortrace import Session
from behaviortrace.sampledata import loans_csv

HERE = Path(__file__).parent
ATTR = "Home Ownership Type"
CSV = loans_csv()

SCRIPT = [
    {"kind": "load_dataset", "t": 0, "text": CSV},
    {"kind": "set_encoding", "t": 1000, "chart_type": "bar", "x": ATTR, "aggregation": "count"},
    {"kind": "hover_start", "t": 2000, "x_key": "Own"},
    {"kind": "hover_end", "t": 2600, "x_key": "Own"},
    {"kind": "hover_start", "t": 3000, "x_key": "Rent"},
    {"kind": "hover_end", "t": 3200, "x_key": "Rent"},
    {"kind": "hover_start", "t": 4000, "x_key": "Mortgage"},
    {"kind": "hover_end", "t": 4800, "x_key": "Mortgage"},
    {"kind": "detail_hover_member", "t": 5000, "x_key": "Own", "index": 0},
    {"kind": "detail_hover", "t": 5500, "row": 7},
    {"kind": "open_card", "t": 6000, "attribute": ATTR},
    {"kind": "set_target", "t": 6500, "attribute": ATTR, "mode": "equal"},
    {
        "kind": "set_target",
        "t": 7000,
        "attribute": ATTR,
        "mode": "custom",
        "weights": {"Mortgage": 2, "Own": 1, "Rent": 1},
    },
    {"kind": "set_filter", "t": 7500, "attribute": "Age", "filter": {"kind": "range", "lo": 25, "hi": 60}},
    {"kind": "set_filter", "t": 7600, "attribute": "Age", "filter": {"kind": "range", "lo": 25, "hi": 50}},
    {
        "kind": "set_filter",
        "t": 8000,
        "attribute": ATTR,
        "filter": {"kind": "categories", "categories": ["Own", "Mortgage"]},
    },
    {
        "kind": "set_encoding",
        "t": 8500,
        "chart_type": "bar",
        "x": ATTR,
        "y": "Age",
        "aggregation": "average",
    },
    {"kind": "hover_start", "t": 9000, "x_key": "Own"},
    {"kind": "hover_end", "t": 9700, "x_key": "Own"},
    {"kind": "open_card", "t": 10000, "attribute": "Age"},
    {
        "kind": "set_target",
        "t": 10500,
        "attribute": "Age",
        "mode": "custom",
        "points": [[30, 1.0], [60, 0.5]],
    },
    {"kind": "close_card", "t": 11000, "attribute": "Age"},
    {"kind": "set_settings", "t": 11500, "settings": {"sort_by": "focus"}},
    {"kind": "set_settings", "t": 12000, "settings": {"color_mode": "absolute"}},
    {"kind": "set_filter", "t": 12500, "attribute": "Age", "filter": None},
    {"kind": "set_encoding", "t": 13000, "chart_type": "scatter", "x": "Age", "y": "Income", "aggregation": "none"},
    {"kind": "detail_hover", "t": 13500, "row": 3},
    {"kind": "detail_hover", "t": 14000, "row": 3},
    {"kind": "open_card", "t": 14500, "attribute": "Income"},
    {"kind": "close_card", "t": 15000, "attribute": "Income"},
]
assert len(SCRIPT) == 30


def message_for(step, elements):
    """The protocol.md message for one gesture (reference mapping)."""
    kind = step["kind"]
    if kind == "load_dataset":
        return {"type": "load_dataset", "t": step["t"], "text": step["text"]}
    if kind == "set_encoding":
        return {
            "type": "set_encoding",
            "t": step["t"],
            "chart_type": step["chart_type"],
            "x": step["x"],
            "y": step.get("y"),
            "aggregation": step["aggregation"],
        }
    if kind == "set_filter":
        return {
            "type": "set_filter",
            "t": step["t"],
            "attribute": step["attribute"],
            "filter": step["filter"],
        }
    if kind in ("hover_start", "hover_end"):
        element = next(e for e in elements if e["x_key"] == step["x_key"])
        return {
            "type": "hover",
            "t": step["t"],
            "element": element["id"],
            "phase": "start" if kind == "hover_start" else "end",
        }
    if kind == "detail_hover_member":
        element = next(e for e in elements if e["x_key"] == step["x_key"])
        return {"type": "detail_hover", "t": step["t"], "row": element["members"][step["index"]]}
    if kind == "detail_hover":
        return {"type": "detail_hover", "t": step["t"], "row": step["row"]}
    if kind == "set_target":
        msg = {
            "type": "set_target",
            "t": step["t"],
            "attribute": step["attribute"],
            "mode": step["mode"],
        }
        if "weights" in step:
            msg["weights"] = step["weights"]
        if "points" in step:
            msg["points"] = step["points"]
        return msg
    if kind == "set_settings":
        return {"type": "set_settings", "t": step["t"], **step["settings"]}
    if kind in ("open_card", "close_card"):
        return {"type": kind, "t": step["t"], "attribute": step["attribute"]}
    raise ValueError(kind)


def main():
    session = Session()
    elements = []
    messages = []
    batches = []
    for step in SCRIPT:
        msg = message_for(step, elements)
        messages.append(msg)
        frames = session.handle_message(msg)
        if any(f["type"] in ("error", "violation") for f in frames):
            raise SystemExit(f"script step failed: {step} -> {frames[0]}")
        batches.append(frames)
        for f in frames:
            if f["type"] == "elements":
                elements = f["elements"]

    (HERE / "roundtrip_script.json").write_text(json.dumps(SCRIPT, indent=1))
    (HERE / "reference_messages.json").write_text(json.dumps(messages, indent=1))
    (HERE / "reference_log.jsonl").write_text(
        "".join(line + "\n" for line in session.event_log_lines())
    )
    (HERE / "golden_frames.json").write_text(json.dumps(batches, indent=1))
    print(
        f"wrote fixtures: {len(messages)} messages, "
        f"{len(session.log_entries)} log entries, "
        f"{sum(len(b) for b in batches)} frames in {len(batches)} batches"
    )


if __name__ == "__main__":
    sys.exit(main())
