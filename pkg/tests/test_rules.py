import itertools
import random

import pytest

from chronokg import (
    Domain,
    Entity,
    Functional,
    FunctionalAtEveryInstant,
    Literal,
    NoOverlap,
    Order,
    Quintuple,
    RangeConcept,
    RangeDatatype,
    ReminiscentKG,
    StandardKG,
    StaticOntology,
    TemporalOntology,
    Triple,
    WithinTimeDomain,
    is_semi_reminiscent,
    validate_reminiscent,
    validate_standard,
)
from chronokg.rules import OntologyError, UnknownDatatype, UnknownRelation, is_temporal
from chronokg.synth import random_quintuple

BASE = StaticOntology(
    concepts=frozenset({"Country", "Union"}),
    datatypes=frozenset({"year"}),
    relations=frozenset({"member", "type", "founded", "capital"}),
    typing_relation="type",
    rules=(Domain("member", "Country"),),
)


def onto(*trules, **kw):
    return TemporalOntology(BASE, temporal_rules=trules, **kw)


def std(*triples):
    return StandardKG.from_edges(triples)


def test_domain_rule_accepts_typed_member():
    g = std(Triple("UK", "type", "Country"), Triple("UK", "member", "EU"))
    assert validate_standard(g, BASE) == []


def test_domain_rule_rejects_untyped_member():
    g = std(Triple("X", "member", "EU"))
    (v,) = validate_standard(g, BASE)
    assert v.rule == Domain("member", "Country")
    assert v.offenders == (Triple("X", "member", "EU"),)


def test_empty_graph_is_valid():
    assert validate_standard(std(), BASE) == []
    assert validate_reminiscent(ReminiscentKG.from_edges([]), onto(NoOverlap("member"))) == []


def test_unknown_relation_is_reported_not_raised():
    (v,) = validate_standard(std(Triple("a", "likes", "b")), BASE)
    assert v.rule == UnknownRelation("likes")


def test_range_rules():
    o = StaticOntology(BASE.concepts, BASE.datatypes, BASE.relations, "type",
                       (RangeConcept("member", "Union"), RangeDatatype("founded", "year")))
    ok = std(Triple("EU", "type", "Union"), Triple("UK", "member", "EU"),
             Triple("EU", "founded", Literal("1951", "year")))
    assert validate_standard(ok, o) == []
    bad = std(Triple("UK", "member", "EU"), Triple("EU", "founded", Entity("y1951")),
              Triple("EU", "capital", Literal("x", "nodatatype")))
    rules = sorted(str(v.rule) for v in validate_standard(bad, o))
    assert rules == ["range founded year", "range member Union", "unknown_datatype nodatatype"]


def test_functional_groups_offenders():
    o = StaticOntology(relations=frozenset({"capital"}), rules=(Functional("capital"),))
    g = std(Triple("FR", "capital", "Paris"), Triple("FR", "capital", "Lyon"),
            Triple("DE", "capital", "Berlin"))
    (v,) = validate_standard(g, o)
    assert [t.tail.iri for t in v.offenders] == ["Lyon", "Paris"]


def test_violation_order_is_lexicographic():
    g = std(*(Triple(h, "member", "EU") for h in ["Z", "B", "M", "A"]))
    heads = [v.offenders[0].head for v in validate_standard(g, BASE)]
    assert heads == ["A", "B", "M", "Z"]


def test_order_rule():
    g = ReminiscentKG.from_edges([Quintuple("UK", "member", "EU", 1973, 2020),
                                  Quintuple("UK", "type", "Country")])
    assert validate_reminiscent(g, onto()) == []
    bad = ReminiscentKG.from_edges([Quintuple.raw("a", "capital", "b", 2020, 1973)])
    (v,) = validate_reminiscent(bad, onto())
    assert v.rule == Order()


def _share_an_instant(a, b, lo=-5, hi=20):
    # brute force over the integer instants in a window wider than the bounds
    return any(a.valid_from.value <= t <= a.valid_until.value and
               b.valid_from.value <= t <= b.valid_until.value for t in range(lo, hi))


def test_no_overlap_against_enumeration():
    a = Quintuple("a", "capital", "b", 1, 5)
    b = Quintuple("a", "capital", "b", 3, 9)
    assert _share_an_instant(a, b)
    (v,) = validate_reminiscent(ReminiscentKG.from_edges([a, b]), onto(NoOverlap("capital")))
    assert v.rule == NoOverlap("capital") and set(v.offenders) == {a, b}


@pytest.mark.parametrize("seed", range(30))
def test_no_overlap_random_pairs(seed):
    rng = random.Random(seed)
    qs = []
    for _ in range(4):
        x, y = sorted(rng.randint(0, 12) for _ in range(2))
        qs.append(Quintuple("a", "capital", "b", x, y))
    g = ReminiscentKG.from_edges(qs)
    expected = {frozenset(p) for p in itertools.combinations(g.edges, 2) if _share_an_instant(*p)}
    found = {frozenset(v.offenders) for v in validate_reminiscent(g, onto(NoOverlap("capital")))}
    assert found == expected


def test_functional_at_every_instant():
    o = onto(FunctionalAtEveryInstant("capital"))
    seq = [Quintuple("DE", "capital", "Bonn", 1949, 1990), Quintuple("DE", "capital", "Berlin", 1991)]
    assert validate_reminiscent(ReminiscentKG.from_edges(seq), o) == []
    clash = seq + [Quintuple("DE", "capital", "Munich", 1990, 1991)]
    found = validate_reminiscent(ReminiscentKG.from_edges(clash), o)
    assert len(found) == 2
    # same tail twice is still one value
    same = [Quintuple("DE", "capital", "Berlin", 1, 5), Quintuple("DE", "capital", "Berlin", 3, 9)]
    assert validate_reminiscent(ReminiscentKG.from_edges(same), o) == []


def test_time_domain():
    o = onto(time_domain=(1900, 2100))
    assert WithinTimeDomain() in o.temporal_rules
    g = ReminiscentKG.from_edges([Quintuple("UK", "capital", "EU", 1850, "inf")])
    (v,) = validate_reminiscent(g, o)
    assert v.rule == WithinTimeDomain()
    with pytest.raises(OntologyError):
        onto(time_domain=(5, 1))


def test_order_rule_cannot_be_removed():
    o = TemporalOntology(BASE, temporal_rules=())
    assert o.temporal_rules[0] == Order()


def test_ontology_rejects_undeclared_references():
    with pytest.raises(OntologyError):
        StaticOntology(relations=frozenset({"member"}), rules=(Domain("member", "Country"),))
    with pytest.raises(OntologyError):
        StaticOntology(relations=frozenset({"r"}), typing_relation="type")
    with pytest.raises(OntologyError):
        TemporalOntology(BASE, temporal_rules=(NoOverlap("nope"),))


def test_is_semi_reminiscent():
    assert is_semi_reminiscent(ReminiscentKG.from_edges([Quintuple("UK", "member", "EU", 1973)]))
    assert not is_semi_reminiscent(ReminiscentKG.from_edges([Quintuple("UK", "member", "EU", 1973, 2020)]))
    assert is_semi_reminiscent(ReminiscentKG.from_edges([]))


RULED = TemporalOntology(
    StaticOntology(frozenset({"C0", "C1"}), frozenset({"int", "str"}),
                   frozenset({"r0", "r1", "r2", "r3", "type"}), "type",
                   (Domain("r0", "C0"), RangeConcept("r1", "C1"), RangeDatatype("r2", "int"),
                    Functional("r3"))),
    temporal_rules=(NoOverlap("r0"), FunctionalAtEveryInstant("r1")),
)


def _random_graph(rng, n=20, relations=5):
    edges = [random_quintuple(rng, n_entities=6, n_relations=relations, literal_rate=0.2)
             for _ in range(n)]
    edges += [Quintuple(f"e{rng.randrange(6)}", "type", f"C{rng.randrange(3)}") for _ in range(4)]
    return ReminiscentKG.from_edges(edges)


@pytest.mark.parametrize("seed", range(40))
def test_validation_pushes_through_projection(seed):
    g = _random_graph(random.Random(seed))
    static = [v for v in validate_reminiscent(g, RULED) if not is_temporal(v.rule)]
    assert static == validate_standard(g.project(), RULED.base)


@pytest.mark.parametrize("seed", range(10))
def test_validation_is_pure(seed):
    g = _random_graph(random.Random(seed))
    assert validate_reminiscent(g, RULED) == validate_reminiscent(g, RULED)


MONOTONE = StaticOntology(frozenset({"C0", "C1"}), frozenset({"int"}),
                          frozenset({"r0", "r1", "r2", "type"}), "type",
                          (Domain("r0", "C0"), RangeConcept("r1", "C1"), RangeDatatype("r2", "int")))


@pytest.mark.parametrize("seed", range(50))
def test_violations_monotone_without_grouping_rules(seed):
    # Without functional/no-overlap rules, adding a non-typing edge keeps every
    # existing violation. Typing edges are excluded: they can satisfy domain
    # and range checks and so legitimately remove violations.
    rng = random.Random(seed)
    edges = [random_quintuple(rng, 8, 4, 0.2).triple for _ in range(20)]
    edges = [Triple(t.head, "type", f"C{rng.randrange(2)}") if t.relation == "r3" else t for t in edges]
    g = StandardKG.from_edges(edges)
    before = set(validate_standard(g, MONOTONE))
    extra = random_quintuple(rng, 8, 3, 0.2).triple
    after = set(validate_standard(StandardKG.from_edges(edges + [extra]), MONOTONE))
    assert before <= after


def test_typing_edge_can_clear_a_violation():
    g = std(Triple("X", "member", "EU"))
    assert validate_standard(g, BASE)
    assert validate_standard(std(Triple("X", "member", "EU"), Triple("X", "type", "Country")), BASE) == []


def test_unknown_datatype_kind():
    (v,) = validate_standard(std(Triple("EU", "founded", Literal("1951", "century"))), BASE)
    assert v.rule == UnknownDatatype("century")
