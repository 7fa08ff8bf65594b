"""Stationary images of a change log.

``snapshot(log, kind, at)`` replays every event committed at or before
``at``. The three kinds differ only in what they keep:

- incremental: every quintuple, with closed ones rewritten to their end time;
- semi-incremental: only open-ended quintuples, so a close deletes the edge;
- mutable: the semi-incremental edges with their timestamps dropped.

Between commits the image is constant: a query at any instant sees the state
after the latest commit at or before it.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterator, Union

from .log import Assert, ChangeLog, Close
from .model import (
    Quintuple,
    ReminiscentKG,
    StandardKG,
    TimeLike,
    TimePoint,
    Triple,
    canonical,
    timepoint,
)


class ViewKind(enum.Enum):
    MUTABLE = "mutable"
    SEMI_INCREMENTAL = "semi-incremental"
    INCREMENTAL = "incremental"


class Absence(enum.Enum):
    NOT_FOUND = "not-found"
    STILL_PRESENT = "still-present"


NOT_FOUND = Absence.NOT_FOUND
STILL_PRESENT = Absence.STILL_PRESENT


class Cell(enum.Enum):
    """One box of the time-awareness taxonomy."""

    STANDARD = "standard"
    REMINISCENT = "reminiscent"
    SEMI_REMINISCENT = "semi-reminiscent"
    MUTABLE = "mutable"
    INCREMENTAL = "incremental"
    SEMI_INCREMENTAL = "semi-incremental"


class ViewError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


def view_kind(kind: ViewKind | str) -> ViewKind:
    if isinstance(kind, ViewKind):
        return kind
    return ViewKind(kind.replace("_", "-").lower())


@dataclass(frozen=True)
class Snapshot:
    kind: ViewKind
    at: TimePoint
    graph: Union[StandardKG, ReminiscentKG]

    def __post_init__(self) -> None:
        if not self.at.is_finite:
            raise ValueError("snapshots are taken at finite instants")
        if self.kind is ViewKind.SEMI_INCREMENTAL and not self.graph.semi:
            raise ValueError("semi-incremental snapshot must hold a semi-reminiscent graph")

    @property
    def edges(self) -> frozenset:
        return self.graph.edges

    def __len__(self) -> int:
        return len(self.graph.edges)

    def __iter__(self):
        return iter(self.graph)


class _Fold:
    """Running state of one view kind while replaying events in order."""

    def __init__(self, kind: ViewKind):
        self.kind = kind
        self.quints: set[Quintuple] = set()
        self.active: dict[Triple, Quintuple] = {}
        self.triples: set[Triple] = set()

    def apply(self, action) -> None:
        kind = self.kind
        if kind is ViewKind.INCREMENTAL:
            if isinstance(action, Assert):
                q = action.quintuple
                self.quints.add(q)
                if q.is_active:
                    self.active[action.key] = q
            else:
                old = self.active.pop(action.key, None)
                if old is None:
                    return
                self.quints.discard(old)
                if isinstance(action, Close):
                    self.quints.add(Quintuple.raw(old.head, old.relation, old.tail,
                                                  old.valid_from, action.valid_until))
        elif kind is ViewKind.SEMI_INCREMENTAL:
            if isinstance(action, Assert):
                if action.quintuple.is_active:
                    self.active[action.key] = action.quintuple
            else:
                self.active.pop(action.key, None)
        else:
            if isinstance(action, Assert):
                if action.quintuple.is_active:
                    self.triples.add(action.key)
            else:
                self.triples.discard(action.key)

    def contains(self, key: Triple) -> bool:
        if self.kind is ViewKind.INCREMENTAL:
            return any(q.triple == key for q in self.quints)
        if self.kind is ViewKind.SEMI_INCREMENTAL:
            return key in self.active
        return key in self.triples

    def graph(self) -> StandardKG | ReminiscentKG:
        if self.kind is ViewKind.INCREMENTAL:
            return ReminiscentKG._derived(frozenset(self.quints), semi=False)
        if self.kind is ViewKind.SEMI_INCREMENTAL:
            return ReminiscentKG._derived(frozenset(self.active.values()), semi=True)
        return StandardKG._derived(frozenset(self.triples))


def _finite(at: TimeLike) -> TimePoint:
    at = timepoint(at)
    if not at.is_finite:
        raise ValueError(f"expected a finite instant, got {at}")
    return at


_MEMO_SIZE = 512


def snapshot(log: ChangeLog, kind: ViewKind | str, at: TimeLike) -> Snapshot:
    kind = view_kind(kind)
    at = _finite(at)
    n = log.prefix_length(at)
    key = (kind, n)
    graph = log.memo.get(key)
    if graph is not None:
        try:
            log.memo.move_to_end(key)
        except KeyError:  # evicted by a concurrent caller
            pass
    else:
        fold = _Fold(kind)
        for event in log[:n]:
            fold.apply(event.action)
        graph = fold.graph()
        log.memo[key] = graph
        if len(log.memo) > _MEMO_SIZE:
            log.memo.popitem(last=False)
    return Snapshot(kind, at, graph)


def iter_snapshots(log: ChangeLog, kind: ViewKind | str) -> Iterator[Snapshot]:
    """One snapshot per distinct commit time, in a single replay pass."""
    kind = view_kind(kind)
    fold = _Fold(kind)
    events = log.events
    for i, event in enumerate(events):
        fold.apply(event.action)
        if i + 1 == len(events) or events[i + 1].commit_time != event.commit_time:
            yield Snapshot(kind, event.commit_time, fold.graph())


def accessibility_time(log: ChangeLog, key: Triple) -> TimePoint | Absence:
    """Commit time of the first assert of ``key``."""
    for event in log:
        if isinstance(event.action, Assert) and event.key == key:
            return event.commit_time
    return NOT_FOUND


def deletion_time(log: ChangeLog, key: Triple, kind: ViewKind | str) -> TimePoint | Absence:
    """First commit time at which ``key`` vanishes from the image.

    Computed by comparing the image at each commit time with the one at the
    previous commit time. Incremental images never drop closed edges, so that
    kind is refused.
    """
    kind = view_kind(kind)
    if kind is ViewKind.INCREMENTAL:
        raise ViewError("UNSUPPORTED_KIND", "incremental images close edges instead of deleting them")
    fold = _Fold(kind)
    events = log.events
    seen = present = False
    for i, event in enumerate(events):
        fold.apply(event.action)
        if i + 1 < len(events) and events[i + 1].commit_time == event.commit_time:
            continue
        now = fold.contains(key)
        if present and not now:
            return event.commit_time
        present = now
        seen = seen or now
    return STILL_PRESENT if seen else NOT_FOUND


@dataclass(frozen=True)
class Diff:
    added: frozenset
    removed: frozenset
    rewritten: frozenset[tuple[Quintuple, Quintuple]]

    def is_empty(self) -> bool:
        return not (self.added or self.removed or self.rewritten)


def diff(log: ChangeLog, kind: ViewKind | str, t1: TimeLike, t2: TimeLike) -> Diff:
    """Edges added, removed, and (incremental only) re-bounded between two instants.

    A removed and an added quintuple with the same triple and the same
    ``valid_from`` are reported as one rewrite.
    """
    kind = view_kind(kind)
    t1, t2 = _finite(t1), _finite(t2)
    if t1 > t2:
        raise ViewError("BAD_RANGE", f"from {t1} is after to {t2}")
    before = snapshot(log, kind, t1).edges
    after = snapshot(log, kind, t2).edges
    added = after - before
    removed = before - after
    rewritten = set()
    if kind is ViewKind.INCREMENTAL and added and removed:
        olds = defaultdict(list)
        news = defaultdict(list)
        for q in canonical(removed):
            olds[(q.triple, q.valid_from)].append(q)
        for q in canonical(added):
            news[(q.triple, q.valid_from)].append(q)
        for k, old_group in olds.items():
            for old, new in zip(old_group, news.get(k, ())):
                rewritten.add((old, new))
        removed = removed - {o for o, _ in rewritten}
        added = added - {n for _, n in rewritten}
    return Diff(frozenset(added), frozenset(removed), frozenset(rewritten))


def classify(obj: ChangeLog | StandardKG | ReminiscentKG | Snapshot) -> Cell:
    """The most specific taxonomy cell the value supports.

    Logs: any finite end of validity (a close, or a bounded assert) needs the
    incremental image to be kept; finite start times without ends fit the
    semi-incremental image; edges without any timestamps are mutable.
    """
    if isinstance(obj, Snapshot):
        obj = obj.graph
    if isinstance(obj, StandardKG):
        return Cell.STANDARD
    if isinstance(obj, ReminiscentKG):
        if all(q.is_active for q in obj.edges):
            return Cell.SEMI_REMINISCENT
        return Cell.REMINISCENT
    if isinstance(obj, ChangeLog):
        timed = False
        for event in obj:
            action = event.action
            if isinstance(action, Close):
                return Cell.INCREMENTAL
            if isinstance(action, Assert):
                q = action.quintuple
                if not q.is_active:
                    return Cell.INCREMENTAL
                if q.valid_from.is_finite:
                    timed = True
        return Cell.SEMI_INCREMENTAL if timed else Cell.MUTABLE
    raise TypeError(f"cannot classify {type(obj).__name__}")

