"""behaviortrace: behavior-aware visual data-exploration engine.

Record what a user touches, model it as per-attribute interaction
distributions, compare against configurable targets, and stream trace
feedback to a client.
"""

from .behavior import (
    BehaviorEngine,
    BehaviorSnapshot,
    MISSING,
    ad_metric,
    card_color,
    observed_distribution,
    snapshot,
    trace_intensity,
)
from .charts import (
    Aggregation,
    CategoryFilter,
    ChartSpec,
    ChartType,
    ElementKind,
    RangeFilter,
    VisualElement,
    apply_filters,
    build_elements,
    validate_filters,
    validate_spec,
)
from .dataset import (
    AttributeSchema,
    Dataset,
    Datatype,
    N_BINS,
    bin_edges,
    bin_index,
    infer_types,
    ingest,
    ingest_json,
)
from .ledger import (
    EventKind,
    HOVER_GATE_MS,
    InteractionEvent,
    Ledger,
    NormalizeMode,
    event_to_entry,
    entry_to_event,
    normalize,
    parse_log,
    read_log,
    write_log,
)
from .mitigation import suggest_reverse_filter
from .session import (
    FocusMode,
    Session,
    SessionSettings,
    SortBy,
    restore_session,
    save_session,
)
from .targets import (
    TargetDistribution,
    TargetMode,
    default_targets,
    equal_target,
    proportional_target,
    set_custom_target,
    support_keys,
)
from .temporal import ADTimeSeries, replay_series, series_to_csv, write_series_csv

__version__ = "0.1.0"
