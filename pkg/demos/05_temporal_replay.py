"""Replay a session log into deviation-over-time series and a CSV export.

Run: python demos/05_temporal_replay.py
"""

import tempfile
from pathlib import Path

from behaviortrace import Session, replay_series, write_series_csv
from behaviortrace.ledger import parse_log
from behaviortrace.sampledata import loans_csv

# Record a session whose second half spreads attention back out.
session = Session()
session.handle_message({"type": "load_dataset", "t": 0, "text": loans_csv()})
frames = session.handle_message(
    {"type": "set_encoding", "t": 10, "chart_type": "bar",
     "x": "Home Ownership Type", "aggregation": "count"}
)
bars = {e["x_key"]: e["id"] for f in frames if f["type"] == "elements" for e in f["elements"]}

t = 100
script = ["Own"] * 12 + ["Mortgage", "Own", "Rent", "Mortgage"] * 4
for key in script:
    session.handle_message({"type": "hover", "t": t, "element": bars[key], "phase": "start"})
    t += 500
    session.handle_message({"type": "hover", "t": t, "element": bars[key], "phase": "end"})
    t += 30

entries = list(parse_log(session.event_log_lines()))
series = replay_series(entries, session.dataset, session.targets)
ownership = next(s for s in series if s.attribute == "Home Ownership Type")

print("deviation over time for Home Ownership Type:")
for t_ms, value in ownership.points:
    bar = "#" * int(value * 40)
    print(f"  t={t_ms:>7.0f}ms  {value:.3f} {bar}")

out = Path(tempfile.mkdtemp()) / "series.csv"
write_series_csv(out, series)
print(f"\nwrote {out} ({sum(len(s.points) for s in series)} points)")
print("(same thing via the CLI: behaviortrace replay <dataset.csv> <session.jsonl> --out series.csv)")
