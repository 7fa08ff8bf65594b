"""The append-only change log that every dynamic view is replayed from.

Three actions exist. ``Assert`` makes a quintuple accessible. ``Close`` ends
the validity of the active quintuple for a triple by rewriting its
``valid_until``; the fact stays in the record. ``Retract`` withdraws the
active quintuple from every view, for facts that were wrong to begin with.

A triple has at most one active (open-ended) quintuple at a time, so
``Close`` and ``Retract`` can address it by its triple alone.
"""

from __future__ import annotations

import bisect
import enum
from collections import OrderedDict, defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from .model import Entity, Quintuple, TimeLike, TimePoint, Triple, timepoint
from .rules import (
    TemporalOntology,
    Violation,
    static_violations,
    temporal_violations,
)


@dataclass(frozen=True)
class Assert:
    quintuple: Quintuple

    @property
    def key(self) -> Triple:
        return self.quintuple.triple


@dataclass(frozen=True)
class Close:
    key: Triple
    valid_until: TimePoint

    def __post_init__(self) -> None:
        object.__setattr__(self, "valid_until", timepoint(self.valid_until))
        if not self.valid_until.is_finite:
            raise ValueError("close needs a finite valid_until")


@dataclass(frozen=True)
class Retract:
    key: Triple


Action = Union[Assert, Close, Retract]


@dataclass(frozen=True)
class ChangeEvent:
    commit_time: TimePoint
    action: Action

    def __post_init__(self) -> None:
        object.__setattr__(self, "commit_time", timepoint(self.commit_time))
        if not self.commit_time.is_finite:
            raise ValueError("commit time must be finite")
        if isinstance(self.action, Assert):
            q = self.action.quintuple
            if q.valid_from > q.valid_until:
                raise ValueError(f"asserted quintuple has inverted bounds: {q}")
        elif not isinstance(self.action, (Close, Retract)):
            raise TypeError(f"unknown action {self.action!r}")

    @property
    def key(self) -> Triple:
        return self.action.key


def assert_(commit: TimeLike, q: Quintuple) -> ChangeEvent:
    return ChangeEvent(timepoint(commit), Assert(q))


def close(commit: TimeLike, key: Triple, valid_until: TimeLike) -> ChangeEvent:
    return ChangeEvent(timepoint(commit), Close(key, timepoint(valid_until)))


def retract(commit: TimeLike, key: Triple) -> ChangeEvent:
    return ChangeEvent(timepoint(commit), Retract(key))


class AppendErrorCode(enum.Enum):
    OUT_OF_ORDER_COMMIT = "OUT_OF_ORDER_COMMIT"
    NO_ACTIVE_EDGE = "NO_ACTIVE_EDGE"
    RULE_VIOLATION = "RULE_VIOLATION"
    DUPLICATE_ASSERT = "DUPLICATE_ASSERT"


class AppendError(Exception):
    """An event was refused. The log is left exactly as it was."""

    def __init__(self, code: AppendErrorCode, message: str,
                 violations: Iterable[Violation] = (), line: int | None = None):
        super().__init__(f"{code.value}: {message}")
        self.code = code
        self.message = message
        self.violations = list(violations)
        self.line = line


class ChangeLog:
    """Commit-ordered events under a fixed ontology.

    Every accepted event leaves both the incremental image and its
    active-only projection rule-clean, so all views derived from the log are
    valid stationary graphs. ``ontology=None`` checks only the built-in
    order rule.
    """

    def __init__(self, ontology: TemporalOntology | None = None,
                 events: Iterable[ChangeEvent] = ()):
        self.ontology = ontology
        self._events: list[ChangeEvent] = []
        self._commits: list[TimePoint] = []
        # live incremental image, kept for scoped validation
        self._quints: dict[Triple, set[Quintuple]] = {}
        self._active: dict[Triple, Quintuple] = {}
        self._by_head: dict[str, set[Triple]] = defaultdict(set)
        self._by_tail: dict[str, set[Triple]] = defaultdict(set)
        self._touched: dict[Triple, TimePoint] = {}
        # derived images keyed by prefix length; appends never invalidate them
        self.memo: OrderedDict = OrderedDict()
        for e in events:
            self.append(e)

    @property
    def events(self) -> tuple[ChangeEvent, ...]:
        return tuple(self._events)

    def __len__(self) -> int:
        return len(self._events)

    def __iter__(self) -> Iterator[ChangeEvent]:
        return iter(self._events)

    def __getitem__(self, i):
        return self._events[i]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChangeLog):
            return NotImplemented
        return self.ontology == other.ontology and self._events == other._events

    __hash__ = None

    def __repr__(self) -> str:
        return f"ChangeLog({len(self._events)} events)"

    @property
    def last_commit(self) -> TimePoint | None:
        return self._commits[-1] if self._commits else None

    def prefix_length(self, at: TimeLike) -> int:
        """Number of events with ``commit_time <= at``."""
        return bisect.bisect_right(self._commits, timepoint(at))

    def commit_times(self) -> list[TimePoint]:
        out: list[TimePoint] = []
        for t in self._commits:
            if not out or out[-1] != t:
                out.append(t)
        return out

    # -- append -------------------------------------------------------------

    def append(self, event: ChangeEvent) -> ChangeLog:
        at = event.commit_time
        key = event.key
        last = self.last_commit
        if last is not None and at < last:
            raise AppendError(AppendErrorCode.OUT_OF_ORDER_COMMIT,
                              f"commit {at} precedes last commit {last}")
        if self._touched.get(key) == at:
            raise AppendError(AppendErrorCode.OUT_OF_ORDER_COMMIT,
                              f"{_fmt(key)} already changed at commit {at}")

        action = event.action
        if isinstance(action, Assert):
            q = action.quintuple
            if q in self._quints.get(key, ()):
                raise AppendError(AppendErrorCode.DUPLICATE_ASSERT, f"{_fmt(key)} {q.valid_from} {q.valid_until} already present")
            if q.is_active and key in self._active:
                raise AppendError(AppendErrorCode.DUPLICATE_ASSERT, f"{_fmt(key)} already has an active edge")
            removed, added = [], [q]
        else:
            old = self._active.get(key)
            if old is None:
                raise AppendError(AppendErrorCode.NO_ACTIVE_EDGE, f"{_fmt(key)} has no active edge")
            if isinstance(action, Close):
                new = Quintuple.raw(old.head, old.relation, old.tail, old.valid_from, action.valid_until)
                if new in self._quints[key]:
                    raise AppendError(AppendErrorCode.DUPLICATE_ASSERT,
                                      f"closing {_fmt(key)} duplicates an existing edge")
                removed, added = [old], [new]
            else:
                removed, added = [old], []

        for q in removed:
            self._remove(q)
        for q in added:
            self._add(q)
        violations = self._check(key, added)
        if violations:
            for q in added:
                self._remove(q)
            for q in removed:
                self._add(q)
            raise AppendError(AppendErrorCode.RULE_VIOLATION,
                              f"{len(violations)} rule violation(s)", violations)

        self._events.append(event)
        self._commits.append(at)
        self._touched[key] = at
        return self

    def _add(self, q: Quintuple) -> None:
        key = q.triple
        bucket = self._quints.setdefault(key, set())
        if not bucket:
            self._by_head[key.head].add(key)
            if isinstance(key.tail, Entity):
                self._by_tail[key.tail.iri].add(key)
        bucket.add(q)
        if q.is_active:
            self._active[key] = q

    def _remove(self, q: Quintuple) -> None:
        key = q.triple
        bucket = self._quints[key]
        bucket.discard(q)
        if self._active.get(key) == q:
            del self._active[key]
        if not bucket:
            del self._quints[key]
            self._by_head[key.head].discard(key)
            if isinstance(key.tail, Entity):
                self._by_tail[key.tail.iri].discard(key)

    def _check(self, key: Triple, added: list[Quintuple]) -> list[Violation]:
        o = self.ontology
        if o is None:
            return temporal_violations(added, None)
        # The prior state was clean, so any violation involves an edge whose
        # head group is affected by this change.
        heads = {key.head}
        typing = o.typing_relation
        if key.relation == typing:
            heads.update(t.head for t in self._by_tail.get(key.head, ()))
        triples = [t for h in heads for t in self._by_head.get(h, ())]
        quints = [q for t in triples for q in self._quints[t]]
        active = [t for t in triples if t in self._active]

        def typed_any(entity: str, concept: str) -> bool:
            return Triple(entity, typing, Entity(concept)) in self._quints

        def typed_active(entity: str, concept: str) -> bool:
            return Triple(entity, typing, Entity(concept)) in self._active

        found = static_violations(triples, typed_any, o.base)
        found += temporal_violations(quints, o)
        found += static_violations(active, typed_active, o.base)
        return sorted(set(found), key=Violation.sort_key)


def _fmt(t: Triple) -> str:
    tail = t.tail.iri if isinstance(t.tail, Entity) else repr(t.tail.lexical)
    return f"({t.head}, {t.relation}, {tail})"


def commit_times(log: ChangeLog) -> list[TimePoint]:
    return log.commit_times()


def append(log: ChangeLog, event: ChangeEvent) -> ChangeLog:
    return log.append(event)
