"""Static and temporal ontologies, and validation of stationary graphs.

Rules only reject edges, they never derive new ones. Concept membership is an
ordinary edge ``(x, typing_relation, Concept)``, so every rule is a check over
the edge set plus a type lookup.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Union

from .model import (
    Entity,
    Literal,
    Quintuple,
    ReminiscentKG,
    StandardKG,
    Triple,
    canonical,
    check_identifier,
)


class OntologyError(ValueError):
    pass


# -- rule algebra -----------------------------------------------------------

@dataclass(frozen=True)
class Domain:
    relation: str
    concept: str

    def __str__(self) -> str:
        return f"domain {self.relation} {self.concept}"


@dataclass(frozen=True)
class RangeConcept:
    relation: str
    concept: str

    def __str__(self) -> str:
        return f"range {self.relation} {self.concept}"


@dataclass(frozen=True)
class RangeDatatype:
    relation: str
    datatype: str

    def __str__(self) -> str:
        return f"range {self.relation} {self.datatype}"


@dataclass(frozen=True)
class Functional:
    relation: str

    def __str__(self) -> str:
        return f"functional {self.relation}"


Rule = Union[Domain, RangeConcept, RangeDatatype, Functional]


@dataclass(frozen=True)
class Order:
    """Built in: ``valid_from <= valid_until``."""

    def __str__(self) -> str:
        return "order"


@dataclass(frozen=True)
class NoOverlap:
    relation: str

    def __str__(self) -> str:
        return f"no_overlap {self.relation}"


@dataclass(frozen=True)
class FunctionalAtEveryInstant:
    relation: str

    def __str__(self) -> str:
        return f"functional_instant {self.relation}"


@dataclass(frozen=True)
class WithinTimeDomain:
    def __str__(self) -> str:
        return "within_time_domain"


TemporalRule = Union[Order, NoOverlap, FunctionalAtEveryInstant, WithinTimeDomain]


# Vocabulary checks. Not part of the declared rule list, but reported the same way.

@dataclass(frozen=True)
class UnknownRelation:
    relation: str

    def __str__(self) -> str:
        return f"unknown_relation {self.relation}"


@dataclass(frozen=True)
class UnknownDatatype:
    datatype: str

    def __str__(self) -> str:
        return f"unknown_datatype {self.datatype}"


@dataclass(frozen=True)
class UnknownConcept:
    concept: str

    def __str__(self) -> str:
        return f"unknown_concept {self.concept}"


TEMPORAL_RULE_TYPES = (Order, NoOverlap, FunctionalAtEveryInstant, WithinTimeDomain)


def is_temporal(rule: object) -> bool:
    return isinstance(rule, TEMPORAL_RULE_TYPES)


@dataclass(frozen=True)
class Violation:
    rule: object
    offenders: tuple
    message: str

    def __post_init__(self) -> None:
        if not self.offenders:
            raise ValueError("a violation needs at least one offending edge")

    def sort_key(self) -> tuple:
        return (tuple(e.sort_key() for e in self.offenders), type(self.rule).__name__, str(self.rule))

    def __str__(self) -> str:
        return f"{self.rule}: {self.message}"


# -- ontologies -------------------------------------------------------------

def _rule_key(rule: object) -> tuple[str, str]:
    return (type(rule).__name__, str(rule))


@dataclass(frozen=True)
class StaticOntology:
    """Concepts, literal datatypes, relations and the rule list.

    Rules are stored deduplicated in a canonical order, so two ontologies
    declaring the same rules in a different order compare equal.
    """

    concepts: frozenset[str] = frozenset()
    datatypes: frozenset[str] = frozenset()
    relations: frozenset[str] = frozenset()
    typing_relation: str | None = None
    rules: tuple[Rule, ...] = ()

    def __post_init__(self) -> None:
        for name in ("concepts", "datatypes", "relations"):
            ids = frozenset(getattr(self, name))
            for i in ids:
                check_identifier(i)
            object.__setattr__(self, name, ids)
        if self.typing_relation is not None and self.typing_relation not in self.relations:
            raise OntologyError(f"typing relation {self.typing_relation!r} is not a declared relation")
        rules = tuple(sorted(set(self.rules), key=_rule_key))
        object.__setattr__(self, "rules", rules)
        for rule in rules:
            self._check_rule(rule)

    def _check_rule(self, rule: Rule) -> None:
        if not isinstance(rule, (Domain, RangeConcept, RangeDatatype, Functional)):
            raise OntologyError(f"not a static rule: {rule!r}")
        if rule.relation not in self.relations:
            raise OntologyError(f"{rule}: relation {rule.relation!r} is not declared")
        if isinstance(rule, (Domain, RangeConcept)):
            if rule.concept not in self.concepts:
                raise OntologyError(f"{rule}: concept {rule.concept!r} is not declared")
            if self.typing_relation is None:
                raise OntologyError(f"{rule} needs a typing relation")
        if isinstance(rule, RangeDatatype) and rule.datatype not in self.datatypes:
            raise OntologyError(f"{rule}: datatype {rule.datatype!r} is not declared")

    @cached_property
    def _by_relation(self) -> dict[str, list[Rule]]:
        out: dict[str, list[Rule]] = defaultdict(list)
        for rule in self.rules:
            out[rule.relation].append(rule)
        return dict(out)


@dataclass(frozen=True)
class TemporalOntology:
    base: StaticOntology = field(default_factory=StaticOntology)
    time_domain: tuple[int, int] | None = None
    temporal_rules: tuple[TemporalRule, ...] = ()

    def __post_init__(self) -> None:
        rules = set(self.temporal_rules) | {Order()}
        if self.time_domain is not None:
            lo, hi = self.time_domain
            if not (isinstance(lo, int) and isinstance(hi, int)) or lo > hi:
                raise OntologyError(f"time domain must be a non-empty integer range, got {self.time_domain}")
            object.__setattr__(self, "time_domain", (lo, hi))
            rules.add(WithinTimeDomain())
        elif WithinTimeDomain() in rules:
            raise OntologyError("within_time_domain needs a declared time domain")
        for rule in rules:
            if not is_temporal(rule):
                raise OntologyError(f"not a temporal rule: {rule!r}")
            rel = getattr(rule, "relation", None)
            if rel is not None and rel not in self.base.relations:
                raise OntologyError(f"{rule}: relation {rel!r} is not declared")
        ordered = sorted(rules, key=lambda r: (not isinstance(r, Order), _rule_key(r)))
        object.__setattr__(self, "temporal_rules", tuple(ordered))

    # Convenience passthroughs so callers can treat O+ like O.
    @property
    def concepts(self) -> frozenset[str]:
        return self.base.concepts

    @property
    def datatypes(self) -> frozenset[str]:
        return self.base.datatypes

    @property
    def relations(self) -> frozenset[str]:
        return self.base.relations

    @property
    def typing_relation(self) -> str | None:
        return self.base.typing_relation


# -- checks -----------------------------------------------------------------

TypeLookup = Callable[[str, str], bool]


def static_violations(triples: Iterable[Triple], has_type: TypeLookup,
                      ontology: StaticOntology) -> list[Violation]:
    """Check static rules over ``triples``.

    ``triples`` must hold complete per-head groups (the functional check
    groups by head); ``has_type(entity, concept)`` answers typing lookups
    against whichever graph the triples come from.
    """
    out: list[Violation] = []
    by_relation = ontology._by_relation
    typing = ontology.typing_relation
    functional_groups: dict[tuple[str, str], set[Triple]] = defaultdict(set)
    for t in triples:
        if t.relation not in ontology.relations:
            out.append(Violation(UnknownRelation(t.relation), (t,),
                                 f"relation {t.relation} is not declared"))
            continue
        tail = t.tail
        if isinstance(tail, Literal) and tail.datatype not in ontology.datatypes:
            out.append(Violation(UnknownDatatype(tail.datatype), (t,),
                                 f"datatype {tail.datatype} is not declared"))
        if t.relation == typing:
            if not isinstance(tail, Entity) or tail.iri not in ontology.concepts:
                name = tail.iri if isinstance(tail, Entity) else tail.lexical
                out.append(Violation(UnknownConcept(name), (t,), f"{name} is not a declared concept"))
        for rule in by_relation.get(t.relation, ()):
            if isinstance(rule, Domain):
                if not has_type(t.head, rule.concept):
                    out.append(Violation(rule, (t,), f"{t.head} is not typed {rule.concept}"))
            elif isinstance(rule, RangeConcept):
                if not (isinstance(tail, Entity) and has_type(tail.iri, rule.concept)):
                    out.append(Violation(rule, (t,), f"tail of {t.head} {t.relation} is not typed {rule.concept}"))
            elif isinstance(rule, RangeDatatype):
                if not (isinstance(tail, Literal) and tail.datatype == rule.datatype):
                    out.append(Violation(rule, (t,), f"tail of {t.head} {t.relation} is not a {rule.datatype} literal"))
            else:
                functional_groups[(t.head, t.relation)].add(t)
    for (head, rel), group in functional_groups.items():
        if len(group) > 1:
            out.append(Violation(Functional(rel), tuple(canonical(group)),
                                 f"{head} has {len(group)} values for functional {rel}"))
    return out


def _overlap(a: Quintuple, b: Quintuple) -> bool:
    return a.valid_from <= b.valid_until and b.valid_from <= a.valid_until


def temporal_violations(quintuples: Iterable[Quintuple],
                        ontology: TemporalOntology | None) -> list[Violation]:
    """Check temporal rules. With no ontology only the built-in order rule applies."""
    quintuples = list(quintuples)
    out: list[Violation] = []
    for q in quintuples:
        if q.valid_from > q.valid_until:
            out.append(Violation(Order(), (q,), f"starts at {q.valid_from} after it ends at {q.valid_until}"))
    if ontology is None:
        return out
    no_overlap = set()
    instant = set()
    for rule in ontology.temporal_rules:
        if isinstance(rule, NoOverlap):
            no_overlap.add(rule.relation)
        elif isinstance(rule, FunctionalAtEveryInstant):
            instant.add(rule.relation)
    if ontology.time_domain is not None:
        lo, hi = ontology.time_domain
        for q in quintuples:
            bad = [str(tp) for tp in (q.valid_from, q.valid_until)
                   if tp.is_finite and not lo <= tp.value <= hi]
            if bad:
                out.append(Violation(WithinTimeDomain(), (q,),
                                     f"bound(s) {', '.join(bad)} outside time domain [{lo}, {hi}]"))
    if no_overlap:
        groups: dict[Triple, list[Quintuple]] = defaultdict(list)
        for q in quintuples:
            if q.relation in no_overlap:
                groups[q.triple].append(q)
        for group in groups.values():
            for a, b in itertools.combinations(canonical(group), 2):
                if _overlap(a, b):
                    out.append(Violation(NoOverlap(a.relation), (a, b),
                                         f"intervals [{a.valid_from}, {a.valid_until}] and "
                                         f"[{b.valid_from}, {b.valid_until}] overlap"))
    if instant:
        groups2: dict[tuple[str, str], list[Quintuple]] = defaultdict(list)
        for q in quintuples:
            if q.relation in instant:
                groups2[(q.head, q.relation)].append(q)
        for group in groups2.values():
            for a, b in itertools.combinations(canonical(group), 2):
                if a.tail != b.tail and _overlap(a, b):
                    out.append(Violation(FunctionalAtEveryInstant(a.relation), (a, b),
                                         f"{a.head} has two {a.relation} values valid at the same time"))
    return out


def _sorted(violations: Iterable[Violation]) -> list[Violation]:
    return sorted(set(violations), key=Violation.sort_key)


def _typing_lookup(triples: set[Triple] | frozenset[Triple], typing: str | None) -> TypeLookup:
    if typing is None:
        return lambda entity, concept: False
    return lambda entity, concept: Triple(entity, typing, Entity(concept)) in triples


def validate_standard(g: StandardKG, o: StaticOntology) -> list[Violation]:
    """All violations of ``o``'s rules in ``g``, ordered by offending edge."""
    if isinstance(o, TemporalOntology):
        o = o.base
    return _sorted(static_violations(g.edges, _typing_lookup(g.edges, o.typing_relation), o))


def validate_reminiscent(g: ReminiscentKG, o: TemporalOntology) -> list[Violation]:
    """Static rules over the projected triples plus temporal rules over the quintuples."""
    triples = frozenset(q.triple for q in g.edges)
    found = static_violations(triples, _typing_lookup(triples, o.typing_relation), o.base)
    found += temporal_violations(g.edges, o)
    return _sorted(found)


def validate(g: StandardKG | ReminiscentKG, o: TemporalOntology | StaticOntology) -> list[Violation]:
    if isinstance(g, StandardKG):
        return validate_standard(g, o)
    if isinstance(o, StaticOntology):
        o = TemporalOntology(o)
    return validate_reminiscent(g, o)


def is_semi_reminiscent(g: ReminiscentKG) -> bool:
    return all(q.is_active for q in g.edges)
