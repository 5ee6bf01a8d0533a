"""Load a tabular dataset, inspect the inferred schema, and validate encodings.

Run: python demos/01_ingest_and_encodings.py
"""

from behaviortrace import Aggregation, ChartSpec, ChartType, build_elements, ingest, validate_spec
from behaviortrace.sampledata import movies_csv

dataset = ingest(movies_csv())
print(f"{dataset.n_rows} rows, {len(dataset.schema)} attributes:")
for a in dataset.schema:
    print(f"  {a.name:<25} {a.datatype.value}  domain={a.domain if a.datatype.value == 'N' else tuple(round(d, 1) for d in a.domain)}")

# A valid encoding: average running time per genre.
spec = ChartSpec(
    chart_type=ChartType.BAR, x="Genre", y="Running Time", aggregation=Aggregation.AVERAGE
)
print("\nbar(Genre, avg Running Time):", validate_spec(spec, dataset) or "ok")
for el in build_elements(dataset, spec):
    print(f"  {el.x_key:<12} n={len(el.members):<4} avg={el.value:.1f}")

# An invalid one: the matrix explains what to fix.
bad = ChartSpec(chart_type=ChartType.SCATTER, x="Genre", y="Genre", aggregation=Aggregation.COUNT)
print("\nscatter(Genre, Genre, count):")
for violation in validate_spec(bad, dataset):
    print("  -", violation)
