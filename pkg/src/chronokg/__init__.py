"""Time-aware knowledge graphs: quintuple stores, rule validation, and
mutable / semi-incremental / incremental views replayed from a change log."""

from .log import (
    AppendError,
    AppendErrorCode,
    Assert,
    ChangeEvent,
    ChangeLog,
    Close,
    Retract,
    assert_,
    close,
    commit_times,
    retract,
)
from .model import (
    NEG_INF,
    POS_INF,
    Entity,
    Kind,
    Literal,
    Ordering,
    Quintuple,
    ReminiscentKG,
    StandardKG,
    TimePoint,
    Triple,
    compare_timepoints,
    interval_contains,
    project_triple,
    timepoint,
)
from .query import WILDCARD, Pattern, QueryError, history, match
from .rules import (
    Domain,
    Functional,
    FunctionalAtEveryInstant,
    NoOverlap,
    Order,
    RangeConcept,
    RangeDatatype,
    StaticOntology,
    TemporalOntology,
    Violation,
    WithinTimeDomain,
    is_semi_reminiscent,
    validate,
    validate_reminiscent,
    validate_standard,
)
from .serialization import (
    ParseError,
    ParseFailure,
    parse_event_log,
    parse_graph,
    parse_ontology,
    parse_quintuples,
    parse_triples,
    write_event_log,
    write_graph,
    write_ontology,
    write_quintuples,
    write_triples,
)
from .views import (
    NOT_FOUND,
    STILL_PRESENT,
    Cell,
    Diff,
    Snapshot,
    ViewError,
    ViewKind,
    accessibility_time,
    classify,
    deletion_time,
    diff,
    iter_snapshots,
    snapshot,
)

__version__ = "0.1.0"
