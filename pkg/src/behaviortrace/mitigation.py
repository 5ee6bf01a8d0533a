"""Passive mitigation: turn an unbalanced card into a suggested filter.

The suggestion is computed, never applied — acting on it stays the
user's call.
"""

from __future__ import annotations

from .behavior import BehaviorSnapshot
from .charts import CategoryFilter, FilterPredicate, RangeFilter
from .dataset import Datatype

#: Minimum under-target share before a key qualifies for the suggestion.
UNDER_SHARE_THRESHOLD = 0.05


def suggest_reverse_filter(
    snapshot: BehaviorSnapshot, threshold: float = UNDER_SHARE_THRESHOLD
) -> FilterPredicate | None:
    """A filter pointing the user at what they have been neglecting.

    Nominal: the categories whose observed share sits more than
    ``threshold`` below their target share. Q/T: the range spanning the
    contiguous under-target bin run with the largest total deficit,
    provided that deficit clears ``threshold``. ``None`` when nothing
    qualifies (including a snapshot with no observed mass).
    """
    if snapshot.total_mass <= 0:
        return None
    shares = snapshot.observed_share()
    deficits = [w - s for w, s in zip(snapshot.target, shares)]

    if snapshot.datatype is Datatype.NOMINAL:
        lagging = [k for k, d in zip(snapshot.keys, deficits) if d > threshold]
        if not lagging:
            return None
        return CategoryFilter(snapshot.attribute, lagging)

    best_span, best_mass = None, 0.0
    start, run = None, 0.0
    for i, d in enumerate(deficits + [0.0]):  # sentinel flushes the last run
        if d > 0:
            if start is None:
                start, run = i, 0.0
            run += d
        elif start is not None:
            if run > best_mass:
                best_span, best_mass = (start, i - 1), run
            start = None
    if best_span is None or best_mass <= threshold:
        return None
    lo_bin, hi_bin = best_span
    return RangeFilter(
        snapshot.attribute,
        lo=snapshot.edges[lo_bin],
        hi=snapshot.edges[hi_bin + 1],
    )
