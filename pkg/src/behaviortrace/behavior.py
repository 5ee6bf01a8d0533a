"""Observed interaction distributions and their deviation from target.

The deviation score lives on a 0-to-1 scale: 0 means the observed
interaction distribution matches the target exactly, values near 1 mean
the user's attention is concentrated where the target says it should not
be. Nominal attributes are scored with a chi-square goodness-of-fit
p-value complement; Quantitative/Temporal attributes with the complement
of the Kolmogorov-Smirnov p-value between the binned observed and target
CDFs (effective sample size = total observed mass). Both scores are
mass-sensitive on purpose: ten skewed interactions are stronger evidence
of deviation than one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.special import kolmogorov
from scipy.stats import chi2

from .charts import VisualElement
from .dataset import AttributeSchema, Datatype, Dataset, bin_edges
from .errors import SupportMismatch
from .ledger import Ledger, NormalizeMode, normalize
from .targets import TargetDistribution, support_keys

#: Support key collecting counter mass of datapoints whose cell is null.
#: Excluded from deviation computation but reported on snapshots.
MISSING = "__missing__"

#: Expected-mass floor below which a bin is merged into its neighbor
#: before the chi-square statistic (avoids division blowup).
EXPECTED_FLOOR = 1e-9


def observed_distribution(ledger: Ledger, dataset: Dataset, attribute: str) -> dict:
    """Project datapoint counter mass onto an attribute's support keys.

    Returns a mass for every support key plus :data:`MISSING` for mass
    sitting on null cells. An untouched ledger yields all-zero masses.
    """
    schema = dataset.attribute(attribute)
    keys = support_keys(schema)
    indices = dataset.support_indices(attribute)
    masses = {k: 0.0 for k in keys}
    missing = 0.0
    for dp, mass in ledger.datapoint_counters.items():
        idx = indices[dp]
        if idx < 0:
            missing += mass
        else:
            masses[keys[idx]] += mass
    masses[MISSING] = missing
    return masses


def _target_weights(target) -> Mapping:
    return target.weights if isinstance(target, TargetDistribution) else target


def _aligned(observed: Mapping, target: Mapping) -> tuple[list, np.ndarray, np.ndarray]:
    obs = {k: v for k, v in observed.items() if k != MISSING}
    if set(obs) != set(target):
        raise SupportMismatch(obs.keys(), target.keys())
    keys = list(target.keys())
    if keys and all(isinstance(k, (int, np.integer)) for k in keys):
        keys = sorted(keys)  # bin order matters for the CDF comparison
    o = np.array([float(obs[k]) for k in keys])
    q = np.array([float(target[k]) for k in keys])
    return keys, o, q


def ad_metric(observed: Mapping, target, datatype: Datatype) -> float:
    """Deviation of observed interaction mass from the target distribution.

    0 when the normalized observed distribution equals the target, rising
    toward 1 as concentration diverges; 0 when there is no observed mass
    at all (no evidence of deviation). ``observed`` may carry a
    :data:`MISSING` key, which is ignored; the remaining support must
    match the target's exactly.
    """
    _, o, q = _aligned(observed, _target_weights(target))
    total = float(o.sum())
    if total <= 0:
        return 0.0
    p = o / total
    q = q / q.sum()
    if datatype is Datatype.NOMINAL:
        return _chi_square_deviation(p, q, total)
    return _ks_deviation(p, q, total)


def _chi_square_deviation(p: np.ndarray, q: np.ndarray, total: float) -> float:
    # Merge bins whose expected mass is below the floor into the next bin
    # (the trailing remainder folds backwards).
    shares: list[tuple[float, float]] = []
    carry_p = carry_q = 0.0
    for i in range(len(q)):
        carry_p += p[i]
        carry_q += q[i]
        if carry_q * total >= EXPECTED_FLOOR:
            shares.append((carry_p, carry_q))
            carry_p = carry_q = 0.0
    if (carry_p or carry_q) and shares:
        last_p, last_q = shares[-1]
        shares[-1] = (last_p + carry_p, last_q + carry_q)
    if len(shares) <= 1:
        return 0.0
    stat = total * sum((pp - qq) ** 2 / qq for pp, qq in shares)
    p_value = float(chi2.sf(stat, len(shares) - 1))
    return min(1.0, max(0.0, 1.0 - p_value))


def _ks_deviation(p: np.ndarray, q: np.ndarray, total: float) -> float:
    d = float(np.max(np.abs(np.cumsum(p) - np.cumsum(q))))
    p_value = float(kolmogorov(math.sqrt(total) * d))
    return min(1.0, max(0.0, 1.0 - p_value))


# --- card coloring ------------------------------------------------------------

_GREEN = (26, 152, 80)
_GREY = (128, 128, 128)
_RED = (215, 48, 39)


@dataclass(frozen=True)
class CardColor:
    t: float
    rgb: tuple[int, int, int]

    @property
    def hex(self) -> str:
        return "#{:02x}{:02x}{:02x}".format(*self.rgb)


def card_color(ad_value: float) -> CardColor:
    """Continuous green-grey-red scale; grey at 0.5, redder = more different."""
    if not 0.0 <= ad_value <= 1.0:
        raise ValueError(f"deviation value {ad_value} outside [0, 1]")
    if ad_value <= 0.5:
        lo, hi, u = _GREEN, _GREY, ad_value / 0.5
    else:
        lo, hi, u = _GREY, _RED, (ad_value - 0.5) / 0.5
    rgb = tuple(round(a + (b - a) * u) for a, b in zip(lo, hi))
    return CardColor(t=ad_value, rgb=rgb)


# --- in-situ intensities -------------------------------------------------------

@dataclass(frozen=True)
class TraceIntensity:
    """White-to-blue intensities in [0, 1] for the in-situ traces."""

    datapoints: dict[int, float]
    attributes: dict[str, float]
    elements: dict[str, float]


def trace_intensity(
    ledger: Ledger,
    mode: NormalizeMode = NormalizeMode.RELATIVE,
    elements: Iterable[VisualElement] = (),
) -> TraceIntensity:
    """Normalized interaction intensities for datapoints, attributes, elements.

    Datapoints follow the session color mode; attributes are always
    normalized relative to the most-interacted attribute. An element's
    intensity is the mean of its members' intensities (untouched members
    count as 0).
    """
    dp = normalize(ledger.datapoint_counters, mode)
    attrs = normalize(ledger.attribute_counters, NormalizeMode.RELATIVE)
    els = {}
    for el in elements:
        els[el.element_id] = sum(dp.get(m, 0.0) for m in el.members) / len(el.members)
    return TraceIntensity(datapoints=dp, attributes=attrs, elements=els)


# --- snapshots -----------------------------------------------------------------

@dataclass(frozen=True)
class BehaviorSnapshot:
    """Everything a distribution card needs for one attribute."""

    attribute: str
    datatype: Datatype
    keys: tuple
    observed: tuple[float, ...]
    target: tuple[float, ...]
    total_mass: float
    missing_mass: float
    ad_value: float
    insufficient: bool
    edges: tuple[float, ...] | None

    @property
    def color(self) -> CardColor:
        return card_color(self.ad_value)

    def observed_share(self) -> list[float]:
        """Observed masses as proportions summing to exactly 1 (or all 0)."""
        shares = normalize(dict(zip(self.keys, self.observed)), NormalizeMode.ABSOLUTE)
        return [shares[k] for k in self.keys]

    def series(self, focus_mode: str = "percentage") -> dict:
        """Focus-panel series: percent shares or raw/expected counts."""
        if focus_mode == "raw":
            return {
                "observed": list(self.observed),
                "target": [w * self.total_mass for w in self.target],
            }
        return {"observed": self.observed_share(), "target": list(self.target)}

    def to_json(self, focus_mode: str = "percentage") -> dict:
        color = self.color
        return {
            "attribute": self.attribute,
            "datatype": self.datatype.value,
            "keys": list(self.keys),
            "observed": list(self.observed),
            "target": list(self.target),
            "total_mass": self.total_mass,
            "missing_mass": self.missing_mass,
            "ad": self.ad_value,
            "color_t": color.t,
            "color": color.hex,
            "flag": "insufficient-evidence" if self.insufficient else "ok",
            "edges": list(self.edges) if self.edges is not None else None,
            "focus_mode": focus_mode,
            "series": self.series(focus_mode),
        }


def snapshot(
    ledger: Ledger, dataset: Dataset, attribute: str, target
) -> BehaviorSnapshot:
    """Compute one attribute's card state from a ledger (pure path)."""
    schema = dataset.attribute(attribute)
    masses = observed_distribution(ledger, dataset, attribute)
    return _snapshot_from_masses(schema, masses, _target_weights(target))


def _snapshot_from_masses(
    schema: AttributeSchema, masses: Mapping, weights: Mapping
) -> BehaviorSnapshot:
    keys = support_keys(schema)
    observed = tuple(float(masses[k]) for k in keys)
    total = float(sum(observed))
    ad = ad_metric(masses, weights, schema.datatype)
    return BehaviorSnapshot(
        attribute=schema.name,
        datatype=schema.datatype,
        keys=tuple(keys),
        observed=observed,
        target=tuple(float(weights[k]) for k in keys),
        total_mass=total,
        missing_mass=float(masses.get(MISSING, 0.0)),
        ad_value=ad,
        insufficient=total <= 0,
        edges=tuple(float(e) for e in bin_edges(schema))
        if schema.datatype is not Datatype.NOMINAL
        else None,
    )


class BehaviorEngine:
    """Incrementally maintained observed distributions for every attribute.

    The pure functions above recompute from the full ledger; this engine
    applies per-event datapoint deltas instead, which is what keeps the
    event-to-broadcast path fast on large datasets. Feeding it the same
    deltas in the same order reproduces identical snapshots bit for bit.
    """

    def __init__(self, dataset: Dataset, targets: Mapping[str, TargetDistribution]):
        self.dataset = dataset
        self.targets = dict(targets)
        self._schemas = {a.name: a for a in dataset.schema}
        self._keys = {a.name: support_keys(a) for a in dataset.schema}
        self._indices = {a.name: dataset.support_indices(a.name) for a in dataset.schema}
        self._observed = {
            a.name: np.zeros(len(self._keys[a.name])) for a in dataset.schema
        }
        self._missing = {a.name: 0.0 for a in dataset.schema}

    def apply_datapoint_deltas(self, deltas: Mapping[int, float]) -> None:
        if not deltas:
            return
        ids = np.fromiter(deltas.keys(), dtype=np.int64, count=len(deltas))
        mass = np.fromiter(deltas.values(), dtype=np.float64, count=len(deltas))
        for name, indices in self._indices.items():
            idx = indices[ids]
            valid = idx >= 0
            if valid.all():
                np.add.at(self._observed[name], idx, mass)
            else:
                np.add.at(self._observed[name], idx[valid], mass[valid])
                self._missing[name] += float(mass[~valid].sum())

    def set_target(self, attribute: str, target: TargetDistribution) -> None:
        self.targets[attribute] = target

    def observed(self, attribute: str) -> dict:
        keys = self._keys[attribute]
        vec = self._observed[attribute]
        masses = {k: float(vec[i]) for i, k in enumerate(keys)}
        masses[MISSING] = self._missing[attribute]
        return masses

    def snapshot(self, attribute: str) -> BehaviorSnapshot:
        return _snapshot_from_masses(
            self._schemas[attribute],
            self.observed(attribute),
            self.targets[attribute].weights,
        )

    def snapshots(self, attributes: Sequence[str] | None = None) -> dict[str, BehaviorSnapshot]:
        names = attributes if attributes is not None else list(self._schemas)
        return {name: self.snapshot(name) for name in names}
