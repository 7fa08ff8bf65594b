# Text formats: triples, quintuples, event logs, ontologies.

from chronokg import (ParseFailure, parse_event_log, parse_ontology, parse_quintuples,
                      parse_triples, write_event_log, write_ontology, write_quintuples)

# Readers accept comments, tabs, runs of spaces, and CRLF.

edges = parse_quintuples(
    "# membership\r\n"
    "<UK>\t<member>   <EU> 1973 2020 .\r\n"
    '<EU> <founded> "1951"^^<year> -inf inf . # no bounds known\r\n'
)
print(write_quintuples(edges), end="")

# Writers are canonical: sorted, single spaces, LF, trailing newline.

text = write_quintuples(reversed(edges))
print(parse_quintuples(text) == sorted(edges, key=lambda q: q.sort_key()))

# Every error in the input is reported, with line and column.

try:
    parse_triples("<UK> <member> .\n<UK> <member> <EU> .\n<a> <r> \"x\" .\n")
except ParseFailure as f:
    for e in f.errors:
        print(e)

# Event logs replay as they parse; a refused event names its line.

log = parse_event_log("2012 ASSERT <UK> <member> <EU> 1973 inf\n2021 CLOSE <UK> <member> <EU> 2020\n")
print(write_event_log(log), end="")
try:
    parse_event_log("2021 ASSERT <a> <r> <b> 1 inf\n2012 ASSERT <c> <r> <d> 1 inf\n")
except Exception as e:
    print(e.code.value, "on line", e.line)

# Ontologies round-trip too.

onto = parse_ontology("relation member\nconcept Country\ntyping type\nrule domain member Country\n")
print(write_ontology(onto), end="")
