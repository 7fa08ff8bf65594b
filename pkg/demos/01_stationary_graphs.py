# Stationary graphs: triples, quintuples, and the closure of the time axis.

from chronokg import (NEG_INF, POS_INF, Literal, Quintuple, ReminiscentKG, StandardKG,
                      TimePoint, Triple, classify, interval_contains, project_triple)

# A standard graph holds plain triples. Entities are derived from the edges.

uk_eu = Triple("UK", "member", "EU")
founded = Triple("EU", "founded", Literal("1951", "year"))
g = StandardKG.from_edges([uk_eu, founded])
print(sorted(g.entities))
print(classify(g).value)

# Time points are integer ticks plus two sentinels that bound every tick.

print(NEG_INF < TimePoint.at(-10**9) < TimePoint.at(1973) < POS_INF)

# A quintuple adds a closed validity interval. Dropping the bounds gives the triple back.

q = Quintuple("UK", "member", "EU", 1973, 2020)
print(q, "->", project_triple(q))
print(interval_contains(q, 1999), interval_contains(q, 2020), interval_contains(q, 2021))

# A reminiscent graph keeps several intervals for the same triple.

history = ReminiscentKG.from_edges([q, Quintuple("UK", "member", "EU", 2030, "inf")])
print(len(history), "quintuples,", len(history.project()), "triple")
print(classify(history).value)

# If every edge is still open, the graph is semi-reminiscent.

print(classify(ReminiscentKG.from_edges([Quintuple("UK", "member", "EU", 1973)])).value)
