"""A full loan-review session: skewed attention, the red card, the reverse filter.

Run: python demos/04_session_and_mitigation.py
"""

from behaviortrace import Session
from behaviortrace.sampledata import loans_csv

session = Session()
session.handle_message({"type": "load_dataset", "t": 0, "text": loans_csv()})
frames = session.handle_message(
    {"type": "set_encoding", "t": 10, "chart_type": "bar",
     "x": "Home Ownership Type", "aggregation": "count"}
)
bars = {e["x_key"]: e["id"] for f in frames if f["type"] == "elements" for e in f["elements"]}

# The reviewer dwells on Own and Rent applications only.
t = 100
for _ in range(10):
    for key in ("Own", "Rent"):
        session.handle_message({"type": "hover", "t": t, "element": bars[key], "phase": "start"})
        t += 500
        session.handle_message({"type": "hover", "t": t, "element": bars[key], "phase": "end"})
        t += 20

frames = session.handle_message({"type": "open_card", "t": t, "attribute": "Home Ownership Type"})
card = next(f for f in frames if f["type"] == "cards")["snapshots"][0]
print(f"deviation={card['ad']:.4f} card color={card['color']} (red side)")
print("suggested reverse filter:", card["suggestion"])

# Apply the suggestion and interact inside it: the card walks back to green.
t += 100
frames = session.handle_message(
    {"type": "set_filter", "t": t, "attribute": "Home Ownership Type",
     "filter": {"kind": "categories", "categories": card["suggestion"]["categories"]}}
)
mortgage = next(
    e["id"] for f in frames if f["type"] == "elements" for e in f["elements"]
)
for i in range(10):
    session.handle_message({"type": "hover", "t": t, "element": mortgage, "phase": "start"})
    t += 600
    session.handle_message({"type": "hover", "t": t, "element": mortgage, "phase": "end"})
    t += 20
    snap = session.snapshots()["Home Ownership Type"]
    print(f"after correction {i + 1:>2}: deviation={snap.ad_value:.4f} card={snap.color.hex}")
