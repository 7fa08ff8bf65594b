# Ontology rules and validation.

from chronokg import (Domain, FunctionalAtEveryInstant, NoOverlap, Quintuple, RangeDatatype,
                      ReminiscentKG, StandardKG, StaticOntology, TemporalOntology, Triple,
                      Literal, validate_reminiscent, validate_standard)

# Membership is reserved for countries. The typing relation says what a thing is.

base = StaticOntology(
    concepts=frozenset({"Country", "Union"}),
    datatypes=frozenset({"year"}),
    relations=frozenset({"member", "founded", "capital", "type"}),
    typing_relation="type",
    rules=(Domain("member", "Country"), RangeDatatype("founded", "year")),
)

typed = StandardKG.from_edges([Triple("UK", "type", "Country"), Triple("UK", "member", "EU")])
print(validate_standard(typed, base))

# Without the typing edge the same graph breaks the domain rule. Violations are data.

for v in validate_standard(StandardKG.from_edges([Triple("UK", "member", "EU")]), base):
    print(v)

# Literals must carry the declared datatype.

for v in validate_standard(StandardKG.from_edges([Triple("EU", "founded", Literal("1951", "century"))]), base):
    print(v)

# Temporal rules look at the intervals. The order rule is always on.

onto = TemporalOntology(base, time_domain=(1800, 2100),
                        temporal_rules=(NoOverlap("member"), FunctionalAtEveryInstant("capital")))
print([str(r) for r in onto.temporal_rules])

capitals = ReminiscentKG.from_edges([
    Quintuple("DE", "capital", "Bonn", 1949, 1990),
    Quintuple("DE", "capital", "Berlin", 1990),
    Quintuple("DE", "type", "Country"),
])
for v in validate_reminiscent(capitals, onto):
    print(v)

# Shift Berlin by one year and the instants no longer clash.

capitals = capitals.without_edge(Quintuple("DE", "capital", "Berlin", 1990)).with_edge(
    Quintuple("DE", "capital", "Berlin", 1991))
print(validate_reminiscent(capitals, onto))

# Inverted bounds can only come from outside (a parsed file, say). The order rule catches them.

bad = ReminiscentKG.from_edges([Quintuple.raw("DE", "capital", "Bonn", 1990, 1949), Quintuple("DE", "type", "Country")])
for v in validate_reminiscent(bad, onto):
    print(v)
