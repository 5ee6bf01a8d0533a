import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from behaviortrace import (
    Aggregation,
    BehaviorEngine,
    ChartSpec,
    ChartType,
    Datatype,
    EventKind,
    InteractionEvent,
    Ledger,
    MISSING,
    NormalizeMode,
    ad_metric,
    build_elements,
    card_color,
    ingest,
    observed_distribution,
    proportional_target,
    snapshot,
    trace_intensity,
)
from behaviortrace.errors import SupportMismatch

from oracles import chi2_deviation, ks_deviation


def hover(t, element, members, dwell=500):
    return InteractionEvent(
        t=t,
        kind=EventKind.HOVER_ELEMENT,
        element_id=element,
        members=tuple(members),
        dwell=dwell,
    )


class TestObservedDistribution:
    def test_single_counter_lands_on_its_category(self):
        ds = ingest("Content Rating\nPG-13\nG\nG\n")
        ledger = Ledger()
        ledger.record(hover(0, "p0", [0]))
        masses = observed_distribution(ledger, ds, "Content Rating")
        assert masses == {"PG-13": 1.0, "G": 0.0, MISSING: 0.0}

    def test_aggregate_hover_mass_conserved_into_bin(self, ratings3):
        # one aggregate hover over a 2-member 2008 bar: bin mass exactly 1
        els = build_elements(
            ratings3,
            ChartSpec(chart_type=ChartType.BAR, x="Release Year", aggregation=Aggregation.COUNT),
        )
        bar_2008 = next(e for e in els if e.x_key == 2008.0)
        ledger = Ledger()
        ledger.record(hover(0, bar_2008.element_id, bar_2008.members))
        masses = observed_distribution(ledger, ratings3, "Release Year")
        year_bin = ratings3.support_indices("Release Year")[0]
        assert masses[int(year_bin)] == pytest.approx(1.0, abs=1e-12)
        assert sum(v for k, v in masses.items() if k != MISSING) == pytest.approx(1.0, abs=1e-12)

    def test_null_cells_collect_under_missing(self):
        ds = ingest("c,v\na,1\n,2\n")
        ledger = Ledger()
        ledger.record(hover(0, "p1", [1]))
        masses = observed_distribution(ledger, ds, "c")
        assert masses[MISSING] == 1.0
        assert masses["a"] == 0.0

    def test_zero_ledger_all_zero(self, movies):
        masses = observed_distribution(Ledger(), movies, "Genre")
        assert all(v == 0.0 for v in masses.values())

    def test_skewed_interaction_dominates(self):
        # mostly-G dataset, user touches only PG-13 rows
        rows = ["G"] * 8 + ["PG-13"] * 2
        ds = ingest("Content Rating\n" + "\n".join(rows) + "\n")
        ledger = Ledger()
        for i, t in zip((8, 9, 8, 9), range(4)):
            ledger.record(hover(t, f"p{i}", [i]))
        masses = observed_distribution(ledger, ds, "Content Rating")
        assert masses["PG-13"] > masses["G"]
        target = proportional_target(ds, "Content Rating")
        assert ad_metric(masses, target, Datatype.NOMINAL) > 0.5


class TestAdMetric:
    def test_identity_is_exactly_zero(self):
        for dist in ({"a": 0.25, "b": 0.75}, {"a": 1 / 3, "b": 1 / 3, "c": 1 / 3}):
            assert ad_metric(dict(dist), dict(dist), Datatype.NOMINAL) == 0.0
            bins = {i: w for i, w in enumerate(dist.values())}
            assert ad_metric(dict(bins), dict(bins), Datatype.QUANTITATIVE) == 0.0

    def test_zero_mass_is_zero(self):
        assert ad_metric({"a": 0.0, "b": 0.0}, {"a": 0.5, "b": 0.5}, Datatype.NOMINAL) == 0.0

    def test_hand_derived_fifty_fifty_case(self):
        # 10 interactions all on one side of a 50/50 target:
        # chi-square = 10, df = 1, p ~ 0.001565, deviation ~ 0.998435
        ad = ad_metric({"a": 10.0, "b": 0.0}, {"a": 0.5, "b": 0.5}, Datatype.NOMINAL)
        assert ad == pytest.approx(0.998, abs=1e-3)
        assert ad == pytest.approx(0.9984345977419975, abs=1e-9)

    def test_support_mismatch_rejected(self):
        with pytest.raises(SupportMismatch):
            ad_metric({"a": 1.0}, {"a": 0.5, "b": 0.5}, Datatype.NOMINAL)

    def test_missing_key_ignored(self):
        ad = ad_metric(
            {"a": 5.0, "b": 5.0, MISSING: 3.0}, {"a": 0.5, "b": 0.5}, Datatype.NOMINAL
        )
        assert ad == 0.0

    def test_single_key_support_always_zero(self):
        assert ad_metric({"only": 7.0}, {"only": 1.0}, Datatype.NOMINAL) == 0.0

    def test_tiny_expected_bins_merged(self):
        # target mass ~0 on b: merged into neighbor instead of dividing by ~0
        observed = {"a": 5.0, "b": 1.0, "c": 4.0}
        target = {"a": 0.5, "b": 1e-12, "c": 0.5 - 1e-12}
        ad = ad_metric(observed, target, Datatype.NOMINAL)
        merged = chi2_deviation([5.0, 5.0], [0.5, 0.5])
        assert ad == pytest.approx(merged, abs=1e-9)

    def test_ks_direction(self):
        target = {i: 0.1 for i in range(10)}
        concentrated = {i: (12.0 if i == 0 else 0.0) for i in range(10)}
        assert ad_metric(concentrated, target, Datatype.QUANTITATIVE) > 0.9


class TestAdOracle:
    @staticmethod
    def _random_pair(rng, k):
        target_raw = [rng.uniform(0.05, 1.0) for _ in range(k)]
        s = sum(target_raw)
        target = [w / s for w in target_raw]
        observed = [rng.uniform(0.0, 10.0) for _ in range(k)]
        return observed, target

    def test_nominal_matches_independent_oracle(self):
        rng = random.Random(99)
        for _ in range(100):
            k = rng.randint(2, 8)
            observed, target = self._random_pair(rng, k)
            keys = [f"c{i}" for i in range(k)]
            got = ad_metric(
                dict(zip(keys, observed)), dict(zip(keys, target)), Datatype.NOMINAL
            )
            want = chi2_deviation(observed, target)
            assert got == pytest.approx(want, abs=1e-6)

    def test_binned_matches_independent_oracle(self):
        rng = random.Random(101)
        for _ in range(100):
            k = rng.randint(2, 8)
            observed, target = self._random_pair(rng, k)
            got = ad_metric(
                dict(enumerate(observed)), dict(enumerate(target)), Datatype.QUANTITATIVE
            )
            want = ks_deviation(observed, target)
            assert got == pytest.approx(want, abs=1e-6)


class TestAdProperties:
    @given(
        st.integers(min_value=2, max_value=6),
        st.data(),
    )
    @settings(max_examples=60, deadline=None)
    def test_monotone_concentration_nominal(self, k, data):
        rng_target = data.draw(
            st.lists(
                st.floats(min_value=0.05, max_value=1.0), min_size=k, max_size=k
            )
        )
        s = sum(rng_target)
        target = {i: w / s for i, w in enumerate(rng_target)}
        observed_raw = data.draw(
            st.lists(st.floats(min_value=0.1, max_value=5.0), min_size=k, max_size=k)
        )
        observed = dict(enumerate(observed_raw))
        total = sum(observed.values())
        under = [i for i in observed if observed[i] / total < target[i]]
        over = [i for i in observed if observed[i] / total > target[i]]
        if not under or not over:
            return
        src, dst = under[0], over[0]
        delta = min(observed[src], 0.05 * total)
        moved = dict(observed)
        moved[src] -= delta
        moved[dst] += delta
        before = ad_metric(observed, target, Datatype.NOMINAL)
        after = ad_metric(moved, target, Datatype.NOMINAL)
        assert after >= before - 1e-12

    def test_scaling_raises_deviation_but_not_shares(self):
        target = {"a": 0.5, "b": 0.5}
        observed = {"a": 7.0, "b": 3.0}
        scaled = {k: 4.0 * v for k, v in observed.items()}
        assert ad_metric(scaled, target, Datatype.NOMINAL) >= ad_metric(
            observed, target, Datatype.NOMINAL
        )
        bins = {0: 0.5, 1: 0.5}
        obs_bins = {0: 7.0, 1: 3.0}
        scaled_bins = {0: 28.0, 1: 12.0}
        assert ad_metric(scaled_bins, bins, Datatype.QUANTITATIVE) >= ad_metric(
            obs_bins, bins, Datatype.QUANTITATIVE
        )


class TestCardColor:
    def test_endpoints_and_midpoint(self):
        assert card_color(0.0).rgb == (26, 152, 80)  # green: most similar
        assert card_color(1.0).rgb == (215, 48, 39)  # red: most different
        assert card_color(0.5).rgb == (128, 128, 128)
        assert card_color(0.25).t == 0.25

    def test_redness_monotone(self):
        reds = [card_color(t / 100).rgb[0] for t in range(101)]
        assert all(b >= a for a, b in zip(reds, reds[1:]))

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            card_color(1.5)
        with pytest.raises(ValueError):
            card_color(-0.1)

    def test_hex_format(self):
        assert card_color(1.0).hex == "#d73027"


class TestTraceIntensity:
    def test_attribute_scale_relative(self):
        ledger = Ledger()
        for t, attr in enumerate(["Genre", "Genre", "Price"]):
            ledger.record(
                InteractionEvent(t=t * 1000, kind=EventKind.ENCODING_ASSIGN, attribute=attr)
            )
        out = trace_intensity(ledger)
        assert out.attributes["Genre"] == 1.0  # most interacted: darkest
        assert out.attributes["Price"] == 0.5

    def test_never_interacted_is_zero(self):
        ledger = Ledger()
        ledger.record(InteractionEvent(t=0, kind=EventKind.ENCODING_ASSIGN, attribute="Genre"))
        out = trace_intensity(ledger)
        assert out.attributes.get("Worldwide Gross", 0.0) == 0.0

    def test_aggregate_element_mean_of_members(self, ratings3):
        els = build_elements(
            ratings3,
            ChartSpec(chart_type=ChartType.BAR, x="Content Rating", aggregation=Aggregation.COUNT),
        )
        ledger = Ledger()
        ledger.record(hover(0, "unit", [1]))  # row 1 gets intensity 1
        fake = els[1]  # the R bar with members {1, 2}
        out = trace_intensity(ledger, NormalizeMode.RELATIVE, els)
        assert out.elements[fake.element_id] == pytest.approx(0.5)

    def test_mean_rule_quarter(self):
        from behaviortrace.charts import ElementKind, VisualElement

        el = VisualElement("e", ElementKind.AGGREGATE, (0, 1, 2, 3), 4, "k")
        ledger = Ledger()
        ledger.record(hover(0, "u", [0]))
        out = trace_intensity(ledger, NormalizeMode.RELATIVE, [el])
        assert out.elements["e"] == 0.25


class TestSnapshot:
    def test_snapshot_shape_and_flags(self, movies):
        target = proportional_target(movies, "Genre")
        snap = snapshot(Ledger(), movies, "Genre", target)
        assert snap.insufficient
        assert snap.ad_value == 0.0
        assert snap.keys == tuple(target.weights)
        assert snap.edges is None
        doc = snap.to_json()
        assert doc["flag"] == "insufficient-evidence"
        assert doc["series"]["target"] == list(snap.target)

    def test_percentage_series_sums_to_one(self, movies):
        ledger = Ledger()
        ledger.record(hover(0, "a", [0, 1, 2]))
        snap = snapshot(ledger, movies, "Genre", proportional_target(movies, "Genre"))
        assert sum(snap.observed_share()) == 1.0

    def test_raw_series_expected_counts(self, movies):
        ledger = Ledger()
        for i in range(4):
            ledger.record(hover(i * 1000, f"p{i}", [i]))
        snap = snapshot(ledger, movies, "Genre", proportional_target(movies, "Genre"))
        series = snap.series("raw")
        assert sum(series["observed"]) == pytest.approx(4.0, abs=1e-9)
        assert sum(series["target"]) == pytest.approx(4.0, abs=1e-9)

    def test_quantitative_snapshot_carries_edges(self, movies):
        snap = snapshot(
            Ledger(), movies, "Production Budget", proportional_target(movies, "Production Budget")
        )
        assert len(snap.edges) == 11


class TestBehaviorEngine:
    def test_engine_matches_pure_path(self, movies):
        rng = random.Random(5)
        targets = {a: proportional_target(movies, a) for a in movies.attribute_names}
        engine = BehaviorEngine(movies, targets)
        ledger = Ledger()
        for t in range(60):
            members = rng.sample(range(movies.n_rows), k=rng.randint(1, 12))
            event = hover(t * 100, f"e{rng.randint(0, 5)}", members, dwell=rng.choice([200, 500]))
            outcome = ledger.record(event)
            engine.apply_datapoint_deltas(outcome.datapoint_deltas)
        for attr in movies.attribute_names:
            pure = snapshot(ledger, movies, attr, targets[attr])
            fast = engine.snapshot(attr)
            assert fast.ad_value == pytest.approx(pure.ad_value, abs=1e-9)
            assert np.allclose(fast.observed, pure.observed, atol=1e-9)

    def test_engine_deterministic_across_instances(self, movies):
        targets = {a: proportional_target(movies, a) for a in movies.attribute_names}
        deltas = [{i: 0.125} for i in range(40)] + [{3: 1 / 3, 5: 1 / 3, 9: 1 / 3}]
        snaps = []
        for _ in range(2):
            engine = BehaviorEngine(movies, targets)
            for d in deltas:
                engine.apply_datapoint_deltas(d)
            snaps.append({a: engine.snapshot(a).ad_value for a in movies.attribute_names})
        assert snaps[0] == snaps[1]
