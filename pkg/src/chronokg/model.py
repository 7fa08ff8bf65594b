"""Timestamps, terms, and the stationary graph value types.

Every value here is immutable. Time is a signed integer tick extended with
the two sentinels ``-inf`` and ``inf``, so an edge with no known start or
end can still carry a well-formed validity interval.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Union


class Kind(enum.IntEnum):
    NEG_INF = 0
    FINITE = 1
    POS_INF = 2


class Ordering(enum.IntEnum):
    LT = -1
    EQ = 0
    GT = 1


@dataclass(frozen=True, slots=True, repr=False)
class TimePoint:
    """An instant on the tick axis, or one of the two infinite sentinels."""

    kind: Kind
    value: int | None = None

    def __post_init__(self) -> None:
        if self.kind is Kind.FINITE:
            if not isinstance(self.value, int) or isinstance(self.value, bool):
                raise TypeError(f"finite TimePoint needs an int value, got {self.value!r}")
        elif self.value is not None:
            raise ValueError("sentinel TimePoint carries no value")

    @classmethod
    def at(cls, value: int) -> TimePoint:
        return cls(Kind.FINITE, value)

    @property
    def is_finite(self) -> bool:
        return self.kind is Kind.FINITE

    def _key(self) -> tuple[int, int]:
        return (self.kind, self.value if self.value is not None else 0)

    def __lt__(self, other: TimePoint) -> bool:
        return self._key() < other._key()

    def __le__(self, other: TimePoint) -> bool:
        return self._key() <= other._key()

    def __gt__(self, other: TimePoint) -> bool:
        return self._key() > other._key()

    def __ge__(self, other: TimePoint) -> bool:
        return self._key() >= other._key()

    def __repr__(self) -> str:
        if self.kind is Kind.FINITE:
            return f"TimePoint.at({self.value})"
        return "NEG_INF" if self.kind is Kind.NEG_INF else "POS_INF"

    def __str__(self) -> str:
        if self.kind is Kind.NEG_INF:
            return "-inf"
        if self.kind is Kind.POS_INF:
            return "inf"
        return str(self.value)


NEG_INF = TimePoint(Kind.NEG_INF)
POS_INF = TimePoint(Kind.POS_INF)

TimeLike = Union[TimePoint, int, str, float]


def timepoint(x: TimeLike) -> TimePoint:
    """Coerce an int, ``"inf"``/``"-inf"``, a float infinity or a TimePoint."""
    if isinstance(x, TimePoint):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a time point")
    if isinstance(x, int):
        return TimePoint(Kind.FINITE, x)
    if isinstance(x, float):
        if x == float("inf"):
            return POS_INF
        if x == float("-inf"):
            return NEG_INF
        raise TypeError(f"only infinite floats coerce to TimePoint, got {x!r}")
    if isinstance(x, str):
        s = x.strip()
        if s == "inf":
            return POS_INF
        if s == "-inf":
            return NEG_INF
        return TimePoint(Kind.FINITE, int(s))
    raise TypeError(f"cannot interpret {x!r} as a TimePoint")


def compare_timepoints(a: TimePoint, b: TimePoint) -> Ordering:
    ka, kb = a._key(), b._key()
    if ka < kb:
        return Ordering.LT
    if ka > kb:
        return Ordering.GT
    return Ordering.EQ


_IDENT = re.compile(r'[^\s<>"]+')


def check_identifier(ident: str, what: str = "identifier") -> str:
    if not isinstance(ident, str) or not _IDENT.fullmatch(ident):
        raise ValueError(f"invalid {what}: {ident!r}")
    return ident


@dataclass(frozen=True, slots=True)
class Entity:
    iri: str

    def __post_init__(self) -> None:
        check_identifier(self.iri, "entity identifier")

    def __str__(self) -> str:
        return self.iri


@dataclass(frozen=True, slots=True)
class Literal:
    lexical: str
    datatype: str

    def __post_init__(self) -> None:
        if not isinstance(self.lexical, str):
            raise TypeError("literal lexical form must be a str")
        check_identifier(self.datatype, "datatype identifier")

    def __str__(self) -> str:
        return f"{self.lexical!r}^^{self.datatype}"


Term = Union[Entity, Literal]


def _term(t: Term | str) -> Term:
    if isinstance(t, (Entity, Literal)):
        return t
    if isinstance(t, str):
        return Entity(t)
    raise TypeError(f"not a term: {t!r}")


def term_key(t: Term) -> tuple[int, str, str]:
    if isinstance(t, Entity):
        return (0, t.iri, "")
    return (1, t.lexical, t.datatype)


@dataclass(frozen=True, slots=True)
class Triple:
    head: str
    relation: str
    tail: Term

    def __post_init__(self) -> None:
        check_identifier(self.head, "entity identifier")
        check_identifier(self.relation, "relation identifier")
        object.__setattr__(self, "tail", _term(self.tail))

    def with_bounds(self, valid_from: TimeLike = NEG_INF, valid_until: TimeLike = POS_INF) -> Quintuple:
        return Quintuple(self.head, self.relation, self.tail, valid_from, valid_until)

    def sort_key(self) -> tuple:
        return (self.head, self.relation, term_key(self.tail))

    def __str__(self) -> str:
        return f"({self.head}, {self.relation}, {self.tail})"


@dataclass(frozen=True, slots=True)
class Quintuple:
    """An edge together with its closed validity interval ``[valid_from, valid_until]``."""

    head: str
    relation: str
    tail: Term
    valid_from: TimePoint = NEG_INF
    valid_until: TimePoint = POS_INF

    def __post_init__(self) -> None:
        self._coerce()
        if self.valid_from > self.valid_until:
            raise ValueError(
                f"valid_from {self.valid_from} is after valid_until {self.valid_until}"
            )

    def _coerce(self) -> None:
        check_identifier(self.head, "entity identifier")
        check_identifier(self.relation, "relation identifier")
        object.__setattr__(self, "tail", _term(self.tail))
        object.__setattr__(self, "valid_from", timepoint(self.valid_from))
        object.__setattr__(self, "valid_until", timepoint(self.valid_until))

    @classmethod
    def raw(cls, head: str, relation: str, tail: Term | str,
            valid_from: TimeLike, valid_until: TimeLike) -> Quintuple:
        """Build a quintuple without the order check.

        Parsers use this so that inverted bounds reach the validator and are
        reported as rule violations instead of aborting the load.
        """
        q = object.__new__(cls)
        for name, v in zip(("head", "relation", "tail", "valid_from", "valid_until"),
                           (head, relation, tail, valid_from, valid_until)):
            object.__setattr__(q, name, v)
        q._coerce()
        return q

    @property
    def triple(self) -> Triple:
        return Triple(self.head, self.relation, self.tail)

    @property
    def is_active(self) -> bool:
        return self.valid_until.kind is Kind.POS_INF

    def sort_key(self) -> tuple:
        return (self.head, self.relation, term_key(self.tail),
                self.valid_from._key(), self.valid_until._key())

    def __str__(self) -> str:
        return f"({self.head}, {self.relation}, {self.tail}, {self.valid_from}, {self.valid_until})"


Edge = Union[Triple, Quintuple]


def project_triple(q: Quintuple) -> Triple:
    return Triple(q.head, q.relation, q.tail)


def interval_contains(q: Quintuple, at: TimeLike) -> bool:
    at = timepoint(at)
    if not at.is_finite:
        raise ValueError("validity is only defined at finite instants")
    return q.valid_from <= at <= q.valid_until


def canonical(edges: Iterable[Edge]) -> list:
    """Edges deduplicated and sorted by head, relation, tail and bounds."""
    return sorted(set(edges), key=lambda e: e.sort_key())


def _endpoints(edges: Iterable[Edge]) -> set[str]:
    out = set()
    for e in edges:
        out.add(e.head)
        if isinstance(e.tail, Entity):
            out.add(e.tail.iri)
    return out


def _check_endpoints(entities: frozenset[str], edges: Iterable[Edge]) -> None:
    missing = _endpoints(edges) - entities
    if missing:
        raise ValueError(f"edges reference entities outside the graph: {sorted(missing)}")


@dataclass(frozen=True)
class StandardKG:
    entities: frozenset[str]
    edges: frozenset[Triple]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entities", frozenset(self.entities))
        object.__setattr__(self, "edges", frozenset(self.edges))
        for e in self.edges:
            if not isinstance(e, Triple):
                raise TypeError(f"StandardKG holds triples, got {e!r}")
        _check_endpoints(self.entities, self.edges)

    @classmethod
    def from_edges(cls, edges: Iterable[Triple], entities: Iterable[str] = ()) -> StandardKG:
        edges = frozenset(edges)
        return cls(frozenset(entities) | _endpoints(edges), edges)

    @classmethod
    def _derived(cls, edges: frozenset[Triple]) -> StandardKG:
        # Trusted fast path for replay: entities come straight from the edges.
        g = object.__new__(cls)
        object.__setattr__(g, "entities", frozenset(_endpoints(edges)))
        object.__setattr__(g, "edges", edges)
        return g

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[Triple]:
        return iter(canonical(self.edges))

    def __contains__(self, edge: object) -> bool:
        return edge in self.edges


@dataclass(frozen=True)
class ReminiscentKG:
    """A quintuple store. With ``semi=True`` only open-ended edges are allowed."""

    entities: frozenset[str]
    edges: frozenset[Quintuple]
    semi: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "entities", frozenset(self.entities))
        object.__setattr__(self, "edges", frozenset(self.edges))
        for e in self.edges:
            if not isinstance(e, Quintuple):
                raise TypeError(f"ReminiscentKG holds quintuples, got {e!r}")
        _check_endpoints(self.entities, self.edges)
        if self.semi:
            bounded = [e for e in self.edges if not e.is_active]
            if bounded:
                raise ValueError(f"semi-reminiscent graph cannot hold bounded edges: {bounded[:3]}")

    @classmethod
    def from_edges(cls, edges: Iterable[Quintuple], entities: Iterable[str] = (),
                   semi: bool = False) -> ReminiscentKG:
        edges = frozenset(edges)
        return cls(frozenset(entities) | _endpoints(edges), edges, semi)

    @classmethod
    def _derived(cls, edges: frozenset[Quintuple], semi: bool) -> ReminiscentKG:
        g = object.__new__(cls)
        object.__setattr__(g, "entities", frozenset(_endpoints(edges)))
        object.__setattr__(g, "edges", edges)
        object.__setattr__(g, "semi", semi)
        return g

    def with_edge(self, q: Quintuple) -> ReminiscentKG:
        return ReminiscentKG(self.entities | _endpoints([q]), self.edges | {q}, self.semi)

    def without_edge(self, q: Quintuple) -> ReminiscentKG:
        return ReminiscentKG(self.entities, self.edges - {q}, self.semi)

    def project(self) -> StandardKG:
        return StandardKG(self.entities, frozenset(project_triple(q) for q in self.edges))

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[Quintuple]:
        return iter(canonical(self.edges))

    def __contains__(self, edge: object) -> bool:
        return edge in self.edges
