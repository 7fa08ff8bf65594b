"""Single-pattern matching over stationary graphs, and per-triple history."""

from __future__ import annotations

from dataclasses import dataclass

from .log import ChangeEvent, ChangeLog
from .model import (
    Entity,
    Quintuple,
    ReminiscentKG,
    StandardKG,
    Term,
    TimeLike,
    TimePoint,
    Triple,
    canonical,
    interval_contains,
    timepoint,
)
from .views import Snapshot

WILDCARD = None


class QueryError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


@dataclass(frozen=True)
class Pattern:
    """``None`` in a position matches anything.

    ``valid_at`` keeps edges whose interval contains the instant and
    ``active_only`` keeps open-ended edges; both only apply to quintuples.
    """

    head: str | None = WILDCARD
    relation: str | None = WILDCARD
    tail: Term | None = WILDCARD
    valid_at: TimePoint | None = None
    active_only: bool = False

    def __post_init__(self) -> None:
        if isinstance(self.tail, str):
            object.__setattr__(self, "tail", Entity(self.tail))
        if self.valid_at is not None:
            at = timepoint(self.valid_at)
            if not at.is_finite:
                raise ValueError("valid_at must be a finite instant")
            object.__setattr__(self, "valid_at", at)

    @property
    def is_temporal(self) -> bool:
        return self.valid_at is not None or self.active_only


def match(store: StandardKG | ReminiscentKG | Snapshot, p: Pattern) -> list:
    if isinstance(store, Snapshot):
        store = store.graph
    if isinstance(store, StandardKG) and p.is_temporal:
        raise QueryError("TEMPORAL_FILTER_ON_STATIC", "valid_at/active_only need a quintuple store")
    out = []
    for e in store.edges:
        if p.head is not None and e.head != p.head:
            continue
        if p.relation is not None and e.relation != p.relation:
            continue
        if p.tail is not None and e.tail != p.tail:
            continue
        if p.active_only and not e.is_active:
            continue
        if p.valid_at is not None and not interval_contains(e, p.valid_at):
            continue
        out.append(e)
    return canonical(out)


def history(log: ChangeLog, key: Triple) -> list[tuple[TimePoint, ChangeEvent]]:
    """Every event touching ``key``, in commit order."""
    return [(e.commit_time, e) for e in log if e.key == key]


def valid_at(store: ReminiscentKG | Snapshot, at: TimeLike) -> list[Quintuple]:
    return match(store, Pattern(valid_at=timepoint(at)))
