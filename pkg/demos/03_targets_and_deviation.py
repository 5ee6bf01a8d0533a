"""Target distributions and the 0-to-1 deviation score behind card colors.

Run: python demos/03_targets_and_deviation.py
"""

from behaviortrace import (
    EventKind,
    InteractionEvent,
    Ledger,
    ad_metric,
    card_color,
    equal_target,
    ingest,
    proportional_target,
    set_custom_target,
    snapshot,
)

applicants = ingest("gender\n" + "\n".join(["male"] * 5 + ["female"] * 4 + ["non-binary"]) + "\n")

prop = proportional_target(applicants, "gender")
eq = equal_target(applicants, "gender")
custom = set_custom_target(applicants, "gender", weights={"female": 2, "non-binary": 2, "male": 1})
print("proportional:", prop.weights)
print("equal:       ", eq.weights)
print("custom:      ", custom.weights)

# Interact only with male applicants and watch the deviation climb.
ledger = Ledger()
for k in range(5):
    ledger.record(
        InteractionEvent(t=k * 1000, kind=EventKind.HOVER_ELEMENT, element_id=f"p{k}",
                         members=(k,), dwell=600)
    )
    snap = snapshot(ledger, applicants, "gender", prop)
    color = card_color(snap.ad_value)
    print(f"after {k + 1} male-only hovers: deviation={snap.ad_value:.4f} card={color.hex}")

# The same observed behavior scored against each target:
masses = snapshot(ledger, applicants, "gender", prop)
obs = dict(zip(masses.keys, masses.observed))
for name, target in [("proportional", prop), ("equal", eq), ("custom", custom)]:
    value = ad_metric(obs, target, applicants.attribute("gender").datatype)
    print(f"deviation vs {name:<12} = {value:.4f}")
