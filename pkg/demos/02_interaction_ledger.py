"""The interaction ledger: dwell gating, partial credit, normalization modes.

Run: python demos/02_interaction_ledger.py
"""

from behaviortrace import (
    Aggregation,
    ChartSpec,
    ChartType,
    EventKind,
    InteractionEvent,
    Ledger,
    NormalizeMode,
    build_elements,
    normalize,
    trace_intensity,
)
from behaviortrace.sampledata import movies_dataset

dataset = movies_dataset()
bars = build_elements(
    dataset,
    ChartSpec(chart_type=ChartType.BAR, x="Genre", aggregation=Aggregation.COUNT),
)
action = next(e for e in bars if e.x_key == "Action")

ledger = Ledger(known_attributes=dataset.attribute_names)

# A 200 ms flyover is noise: logged, but no counter moves.
flyover = InteractionEvent(
    t=100, kind=EventKind.HOVER_ELEMENT, element_id=action.element_id,
    members=action.members, dwell=200,
)
print("200 ms hover accepted?", ledger.record(flyover).accepted)

# A deliberate hover on the Action bar spreads one unit of credit over
# its members (partial interactions).
dwell = InteractionEvent(
    t=1000, kind=EventKind.HOVER_ELEMENT, element_id=action.element_id,
    members=action.members, dwell=900,
)
outcome = ledger.record(dwell)
print(f"accepted; {len(action.members)} members each +{1 / len(action.members):.4f}, "
      f"total +{sum(outcome.datapoint_deltas.values()):.6f}")

# Detail-view rows and attribute actions:
ledger.record(InteractionEvent(t=2000, kind=EventKind.HOVER_DETAIL_ROW, members=(action.members[0],)))
ledger.record(InteractionEvent(t=3000, kind=EventKind.ENCODING_ASSIGN, attribute="Genre"))
ledger.record(InteractionEvent(t=4000, kind=EventKind.FILTER_APPLY, attribute="Genre"))
print("attribute counters:", ledger.attribute_counters)

# Three ways to turn counters into white->blue shades:
counters = {"A": 4.0, "B": 2.0, "C": 0.0}
for mode in NormalizeMode:
    print(f"{mode.value:>9}:", normalize(counters, mode))

shades = trace_intensity(ledger, NormalizeMode.RELATIVE, bars)
top = sorted(shades.elements.items(), key=lambda kv: -kv[1])[:3]
print("darkest elements:", [(bars_id[:8], round(v, 3)) for bars_id, v in top])
