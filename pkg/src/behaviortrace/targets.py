"""Per-attribute expected interaction distributions.

Three modes: proportional to the underlying data, equal across
categories/bins, or custom (user-supplied category weights, or a sketched
piecewise-linear density for Q/T attributes). Whatever the mode, the
result is a normalized distribution over the exact support the observed
distribution uses — nominal categories in domain order, or the shared
equal-width bin grid — so deviation always compares like with like.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

from .dataset import AttributeSchema, Datatype, Dataset, N_BINS, bin_edges
from .errors import (
    AllNullColumn,
    DegenerateSketch,
    InvalidControlPoints,
    NegativeWeight,
    TargetError,
)

_SUM_TOLERANCE = 1e-9


class TargetMode(str, Enum):
    PROPORTIONAL = "proportional"
    EQUAL = "equal"
    CUSTOM = "custom"


def support_keys(schema: AttributeSchema) -> list:
    """The comparison support: categories for N, bin indices for Q/T."""
    if schema.datatype is Datatype.NOMINAL:
        return list(schema.domain)
    return list(range(N_BINS))


def _normalized(weights: dict) -> dict:
    total = sum(weights.values())
    if total <= 0:
        raise DegenerateSketch("all weights are zero")
    if abs(total - 1.0) <= _SUM_TOLERANCE:
        return dict(weights)  # already normalized; keep bits identical
    return {k: v / total for k, v in weights.items()}


@dataclass(frozen=True)
class TargetDistribution:
    """A normalized expected interaction distribution for one attribute."""

    attribute: str
    mode: TargetMode
    weights: dict
    control_points: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self):
        total = sum(self.weights.values())
        if abs(total - 1.0) > _SUM_TOLERANCE:
            raise TargetError(f"{self.attribute}: weights sum to {total}, expected 1")

    def to_json(self) -> dict:
        doc = {
            "attribute": self.attribute,
            "mode": self.mode.value,
            "weights": {str(k): v for k, v in self.weights.items()},
        }
        if self.control_points is not None:
            doc["points"] = [list(p) for p in self.control_points]
        return doc

    @classmethod
    def from_json(cls, doc: dict, schema: AttributeSchema) -> "TargetDistribution":
        keys = support_keys(schema)
        raw = doc["weights"]
        weights = {k: float(raw[str(k)]) for k in keys}
        points = doc.get("points")
        return cls(
            attribute=doc["attribute"],
            mode=TargetMode(doc["mode"]),
            weights=weights,
            control_points=tuple(tuple(p) for p in points) if points else None,
        )


def proportional_target(dataset: Dataset, attribute: str) -> TargetDistribution:
    """Expected behavior mirroring the data: every datapoint equally likely."""
    schema = dataset.attribute(attribute)
    indices = dataset.support_indices(attribute)
    present = indices[indices >= 0]
    if present.size == 0:
        raise AllNullColumn(attribute)
    keys = support_keys(schema)
    counts = [int((present == i).sum()) for i in range(len(keys))]
    total = present.size
    weights = {k: c / total for k, c in zip(keys, counts)}
    return TargetDistribution(attribute=attribute, mode=TargetMode.PROPORTIONAL, weights=weights)


def equal_target(dataset: Dataset, attribute: str) -> TargetDistribution:
    """Uniform expected behavior across categories (N) or bins (Q/T)."""
    schema = dataset.attribute(attribute)
    indices = dataset.support_indices(attribute)
    if not (indices >= 0).any():
        raise AllNullColumn(attribute)
    keys = support_keys(schema)
    weights = {k: 1.0 / len(keys) for k in keys}
    return TargetDistribution(attribute=attribute, mode=TargetMode.EQUAL, weights=weights)


def set_custom_target(
    dataset: Dataset,
    attribute: str,
    weights: Mapping[str, float] | None = None,
    points: Sequence[tuple[float, float]] | None = None,
) -> TargetDistribution:
    """Store a user-defined target.

    Nominal attributes take a weight for every category (zeros allowed);
    Q/T attributes take >= 2 strictly increasing ``(position, proportion)``
    control points inside the attribute range, interpreted as a
    piecewise-linear density and integrated into the shared bins. Either
    way the stored weights are normalized to sum to 1; re-setting already
    normalized weights is an exact no-op.
    """
    schema = dataset.attribute(attribute)
    if schema.datatype is Datatype.NOMINAL:
        if weights is None:
            raise TargetError(f"{attribute} is nominal; pass per-category weights")
        for category, w in weights.items():
            if w < 0:
                raise NegativeWeight(category, w)
        missing = [c for c in schema.domain if c not in weights]
        if missing:
            raise TargetError(f"{attribute}: missing weights for categories {missing}")
        unknown = [c for c in weights if c not in schema.domain]
        if unknown:
            raise TargetError(f"{attribute}: unknown categories {unknown}")
        ordered = {c: float(weights[c]) for c in schema.domain}
        return TargetDistribution(
            attribute=attribute, mode=TargetMode.CUSTOM, weights=_normalized(ordered)
        )

    if points is None:
        raise TargetError(f"{attribute} is {schema.datatype.name.lower()}; pass control points")
    pts = [(float(x), float(w)) for x, w in points]
    if len(pts) < 2:
        raise InvalidControlPoints("need at least 2 control points")
    lo, hi = schema.domain
    for x, w in pts:
        if w < 0:
            raise NegativeWeight(x, w)
        if not (lo <= x <= hi):
            raise InvalidControlPoints(
                f"position {x} outside attribute range [{lo}, {hi}]"
            )
    for (x0, _), (x1, _) in zip(pts, pts[1:]):
        if x1 <= x0:
            raise InvalidControlPoints("positions must be strictly increasing")

    masses = _integrate_density(pts, bin_edges(schema))
    total = sum(masses)
    if total <= 0:
        raise DegenerateSketch("sketched density integrates to zero")
    weights_q = {i: m / total for i, m in enumerate(masses)}
    return TargetDistribution(
        attribute=attribute,
        mode=TargetMode.CUSTOM,
        weights=weights_q,
        control_points=tuple(pts),
    )


def _integrate_density(pts: list[tuple[float, float]], edges) -> list[float]:
    """Exact trapezoid integral of the piecewise-linear density per bin.

    Density is zero outside the sketched span.
    """
    masses = [0.0] * (len(edges) - 1)
    for b in range(len(masses)):
        a, c = float(edges[b]), float(edges[b + 1])
        for (x0, w0), (x1, w1) in zip(pts, pts[1:]):
            seg_lo, seg_hi = max(a, x0), min(c, x1)
            if seg_hi <= seg_lo:
                continue
            slope = (w1 - w0) / (x1 - x0)
            w_lo = w0 + slope * (seg_lo - x0)
            w_hi = w0 + slope * (seg_hi - x0)
            masses[b] += (seg_hi - seg_lo) * (w_lo + w_hi) / 2.0
    return masses


def default_targets(dataset: Dataset) -> dict[str, TargetDistribution]:
    """Proportional targets for every attribute (the default configuration)."""
    return {a.name: proportional_target(dataset, a.name) for a in dataset.schema}


def targets_to_json(targets: Mapping[str, TargetDistribution]) -> list[dict]:
    return [targets[name].to_json() for name in targets]


def targets_from_json(docs: Sequence[dict], dataset: Dataset) -> dict[str, TargetDistribution]:
    out = {}
    for doc in docs:
        schema = dataset.attribute(doc["attribute"])
        out[doc["attribute"]] = TargetDistribution.from_json(doc, schema)
    return out
