"""Line-oriented text formats for triples, quintuples, ontologies and event logs.

Triples and quintuples::

    <UK> <member> <EU> .
    <EU> <founded> "1951"^^<year> .
    <UK> <member> <EU> 1973 2020 .

Event logs, one event per line::

    2012 ASSERT <UK> <member> <EU> 1973 inf
    2021 CLOSE <UK> <member> <EU> 2020
    2022 RETRACT <UK> <member> <EU>

``#`` starts a comment outside of ``<...>`` and ``"..."``. Readers accept any
run of spaces or tabs between tokens and CRLF line endings; writers emit
single spaces and LF. Parsers collect every error in one pass and return no
value if there was any.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable

from .log import AppendError, Assert, ChangeEvent, ChangeLog, Close, Retract
from .model import (
    NEG_INF,
    POS_INF,
    Entity,
    Literal,
    Quintuple,
    ReminiscentKG,
    StandardKG,
    Term,
    TimePoint,
    Triple,
    canonical,
)
from .rules import (
    Domain,
    FunctionalAtEveryInstant,
    Functional,
    NoOverlap,
    OntologyError,
    RangeConcept,
    RangeDatatype,
    StaticOntology,
    TemporalOntology,
)


class ErrorKind(enum.Enum):
    SYNTAX = "SYNTAX"
    UNKNOWN_KEYWORD = "UNKNOWN_KEYWORD"
    BAD_TIMEPOINT = "BAD_TIMEPOINT"
    BAD_TERM = "BAD_TERM"
    DUPLICATE_DECL = "DUPLICATE_DECL"


@dataclass(frozen=True)
class ParseError:
    line: int
    column: int
    kind: ErrorKind
    message: str

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.kind.value}: {self.message}"


class ParseFailure(ValueError):
    """Raised with every ParseError found in the input."""

    def __init__(self, errors: Iterable[ParseError]):
        self.errors = sorted(errors, key=lambda e: (e.line, e.column))
        super().__init__("\n".join(str(e) for e in self.errors))


# -- lexer ------------------------------------------------------------------

IRI, LIT, WORD, DOT = "iri", "literal", "word", "dot"


@dataclass(frozen=True)
class Token:
    type: str
    value: object
    column: int


class LexError(Exception):
    def __init__(self, column: int, kind: ErrorKind, message: str):
        self.column, self.kind, self.message = column, kind, message


_IDENT = re.compile(r'[^\s<>"]+')
_INT = re.compile(r"[-+]?[0-9]+")
_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "r": "\r", "t": "\t"}


def _scan_iri(line: str, i: int) -> tuple[str, int]:
    end = line.find(">", i + 1)
    if end < 0:
        raise LexError(i + 1, ErrorKind.SYNTAX, "unterminated <...>")
    ident = line[i + 1:end]
    if not _IDENT.fullmatch(ident):
        raise LexError(i + 1, ErrorKind.BAD_TERM, f"bad identifier <{ident}>")
    return ident, end + 1


def _scan_literal(line: str, i: int) -> tuple[Literal, int]:
    start = i
    i += 1
    chars = []
    while True:
        if i >= len(line):
            raise LexError(start + 1, ErrorKind.SYNTAX, "unterminated string")
        c = line[i]
        if c == '"':
            i += 1
            break
        if c == "\\":
            if i + 1 >= len(line) or line[i + 1] not in _ESCAPES:
                raise LexError(i + 1, ErrorKind.BAD_TERM, "bad escape in string")
            chars.append(_ESCAPES[line[i + 1]])
            i += 2
            continue
        chars.append(c)
        i += 1
    if not line.startswith("^^<", i):
        raise LexError(start + 1, ErrorKind.BAD_TERM, 'literal needs a datatype: "..."^^<type>')
    datatype, i = _scan_iri(line, i + 2)
    return Literal("".join(chars), datatype), i


def tokenize(line: str) -> list[Token]:
    tokens: list[Token] = []
    i, n = 0, len(line)
    while i < n:
        c = line[i]
        if c in " \t":
            i += 1
        elif c == "#":
            break
        elif c == "<":
            ident, j = _scan_iri(line, i)
            tokens.append(Token(IRI, ident, i + 1))
            i = j
        elif c == '"':
            lit, j = _scan_literal(line, i)
            tokens.append(Token(LIT, lit, i + 1))
            i = j
        elif c == "." and (i + 1 == n or line[i + 1] in " \t#"):
            tokens.append(Token(DOT, ".", i + 1))
            i += 1
        else:
            j = i
            while j < n and line[j] not in ' \t#<"':
                j += 1
            word = line[i:j]
            if len(word) > 1 and word.endswith(".") and (j == n or line[j] in " \t#"):
                tokens.append(Token(WORD, word[:-1], i + 1))
                tokens.append(Token(DOT, ".", j))
            else:
                tokens.append(Token(WORD, word, i + 1))
            i = j
    return tokens


def _lines(text: str):
    for number, line in enumerate(text.split("\n"), start=1):
        if line.endswith("\r"):
            line = line[:-1]
        yield number, line


class _LineError(Exception):
    def __init__(self, column: int, kind: ErrorKind, message: str):
        self.column, self.kind, self.message = column, kind, message


def _scan(text: str, handle, errors: list[ParseError]) -> None:
    """Tokenize each non-blank line and hand it to ``handle(tokens, eol_column)``."""
    for number, line in _lines(text):
        try:
            tokens = tokenize(line)
        except LexError as e:
            errors.append(ParseError(number, e.column, e.kind, e.message))
            continue
        if not tokens:
            continue
        try:
            handle(number, tokens, len(line) + 1)
        except _LineError as e:
            errors.append(ParseError(number, e.column, e.kind, e.message))


# -- token readers ----------------------------------------------------------

def _take(tokens: list[Token], i: int, eol: int, what: str) -> Token:
    if i >= len(tokens):
        raise _LineError(eol, ErrorKind.SYNTAX, f"expected {what}, found end of line")
    tok = tokens[i]
    if tok.type == DOT:
        raise _LineError(tok.column, ErrorKind.SYNTAX, f"expected {what}, found '.'")
    return tok


def _entity(tokens, i, eol, what) -> str:
    tok = _take(tokens, i, eol, what)
    if tok.type != IRI:
        raise _LineError(tok.column, ErrorKind.BAD_TERM, f"{what} must be <identifier>")
    return tok.value


def _tail(tokens, i, eol) -> Term:
    tok = _take(tokens, i, eol, "tail")
    if tok.type == IRI:
        return Entity(tok.value)
    if tok.type == LIT:
        return tok.value
    raise _LineError(tok.column, ErrorKind.BAD_TERM, "tail must be <identifier> or \"...\"^^<type>")


def parse_timepoint(word: str) -> TimePoint:
    if word == "inf":
        return POS_INF
    if word == "-inf":
        return NEG_INF
    if _INT.fullmatch(word):
        return TimePoint.at(int(word))
    raise ValueError(f"not a time point: {word!r}")


def _time(tokens, i, eol, what, finite=False) -> TimePoint:
    tok = _take(tokens, i, eol, what)
    try:
        if tok.type != WORD:
            raise ValueError
        tp = parse_timepoint(tok.value)
    except ValueError:
        shown = tok.value if isinstance(tok.value, str) else "term"
        raise _LineError(tok.column, ErrorKind.BAD_TIMEPOINT, f"{what}: not a time point: {shown}") from None
    if finite and not tp.is_finite:
        raise _LineError(tok.column, ErrorKind.BAD_TIMEPOINT, f"{what} must be finite")
    return tp


def _end(tokens, i, eol, dot: bool) -> None:
    if dot:
        if i >= len(tokens):
            raise _LineError(eol, ErrorKind.SYNTAX, "missing terminating '.'")
        if tokens[i].type != DOT:
            raise _LineError(tokens[i].column, ErrorKind.SYNTAX, "expected '.'")
        i += 1
    if i < len(tokens):
        raise _LineError(tokens[i].column, ErrorKind.SYNTAX, "unexpected trailing token")


# -- graphs -----------------------------------------------------------------

def _triple_line(tokens, eol) -> Triple:
    h = _entity(tokens, 0, eol, "head")
    r = _entity(tokens, 1, eol, "relation")
    t = _tail(tokens, 2, eol)
    return Triple(h, r, t)


def parse_triples(text: str) -> list[Triple]:
    """Triples in file order. Raises ParseFailure listing every bad line."""
    out: list[Triple] = []
    errors: list[ParseError] = []

    def handle(_, tokens, eol):
        triple = _triple_line(tokens, eol)
        _end(tokens, 3, eol, dot=True)
        out.append(triple)

    _scan(text, handle, errors)
    if errors:
        raise ParseFailure(errors)
    return out


def parse_quintuples(text: str) -> list[Quintuple]:
    """Quintuples in file order.

    Inverted bounds are kept, not rejected: the order rule reports them at
    validation time.
    """
    out: list[Quintuple] = []
    errors: list[ParseError] = []

    def handle(_, tokens, eol):
        t = _triple_line(tokens, eol)
        start = _time(tokens, 3, eol, "valid_from")
        end = _time(tokens, 4, eol, "valid_until")
        _end(tokens, 5, eol, dot=True)
        out.append(Quintuple.raw(t.head, t.relation, t.tail, start, end))

    _scan(text, handle, errors)
    if errors:
        raise ParseFailure(errors)
    return out


def detect_arity(text: str, default: int = 3) -> int:
    """3 or 5, judged from the first line that has a terminating dot.

    A file with no such line (for instance an empty graph) says nothing about
    its arity, so ``default`` decides.
    """
    for _, line in _lines(text):
        try:
            tokens = tokenize(line)
        except LexError:
            continue
        if tokens and tokens[-1].type == DOT:
            return 5 if len(tokens) - 1 == 5 else 3
    return default


def parse_graph(text: str, default_arity: int = 3) -> StandardKG | ReminiscentKG:
    """A triple or quintuple file as a stationary graph, by its first data line."""
    if detect_arity(text, default_arity) == 5:
        return ReminiscentKG.from_edges(parse_quintuples(text))
    return StandardKG.from_edges(parse_triples(text))


def format_term(t: Term) -> str:
    if isinstance(t, Entity):
        return f"<{t.iri}>"
    lex = (t.lexical.replace("\\", "\\\\").replace('"', '\\"')
           .replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t"))
    return f'"{lex}"^^<{t.datatype}>'


def format_triple(t: Triple | Quintuple) -> str:
    return f"<{t.head}> <{t.relation}> {format_term(t.tail)}"


def format_quintuple(q: Quintuple) -> str:
    return f"{format_triple(q)} {q.valid_from} {q.valid_until}"


def _join(lines: list[str]) -> str:
    return "".join(line + "\n" for line in lines)


def write_triples(edges: StandardKG | Iterable[Triple]) -> str:
    if isinstance(edges, StandardKG):
        edges = edges.edges
    return _join([f"{format_triple(t)} ." for t in canonical(edges)])


def write_quintuples(edges: ReminiscentKG | Iterable[Quintuple]) -> str:
    if isinstance(edges, ReminiscentKG):
        edges = edges.edges
    return _join([f"{format_quintuple(q)} ." for q in canonical(edges)])


def write_graph(g: StandardKG | ReminiscentKG) -> str:
    return write_triples(g) if isinstance(g, StandardKG) else write_quintuples(g)


# -- event logs -------------------------------------------------------------

def format_event(e: ChangeEvent) -> str:
    a = e.action
    if isinstance(a, Assert):
        return f"{e.commit_time} ASSERT {format_quintuple(a.quintuple)}"
    if isinstance(a, Close):
        return f"{e.commit_time} CLOSE {format_triple(a.key)} {a.valid_until}"
    return f"{e.commit_time} RETRACT {format_triple(a.key)}"


def parse_events(text: str) -> list[tuple[int, ChangeEvent]]:
    """Events with their source line numbers, without append-time checks."""
    out: list[tuple[int, ChangeEvent]] = []
    errors: list[ParseError] = []

    def handle(number, tokens, eol):
        commit = _time(tokens, 0, eol, "commit time", finite=True)
        tok = _take(tokens, 1, eol, "action")
        if tok.type != WORD:
            raise _LineError(tok.column, ErrorKind.SYNTAX, "expected ASSERT, CLOSE or RETRACT")
        rest = tokens[2:]
        if tok.value == "ASSERT":
            t = _triple_line(rest, eol)
            start = _time(rest, 3, eol, "valid_from")
            end = _time(rest, 4, eol, "valid_until")
            _end(rest, 5, eol, dot=False)
            if start > end:
                raise _LineError(rest[3].column, ErrorKind.BAD_TIMEPOINT,
                                 f"valid_from {start} is after valid_until {end}")
            action = Assert(Quintuple(t.head, t.relation, t.tail, start, end))
        elif tok.value == "CLOSE":
            t = _triple_line(rest, eol)
            end = _time(rest, 3, eol, "valid_until", finite=True)
            _end(rest, 4, eol, dot=False)
            action = Close(t, end)
        elif tok.value == "RETRACT":
            t = _triple_line(rest, eol)
            _end(rest, 3, eol, dot=False)
            action = Retract(t)
        else:
            raise _LineError(tok.column, ErrorKind.UNKNOWN_KEYWORD, f"unknown action {tok.value!r}")
        out.append((number, ChangeEvent(commit, action)))

    _scan(text, handle, errors)
    if errors:
        raise ParseFailure(errors)
    return out


def parse_event_log(text: str, ontology: TemporalOntology | None = None) -> ChangeLog:
    """Parse and replay a log.

    Raises ParseFailure for malformed lines, or AppendError (with ``line``
    set) for the first event the log refuses.
    """
    log = ChangeLog(ontology)
    for number, event in parse_events(text):
        try:
            log.append(event)
        except AppendError as e:
            e.line = number
            e.args = (f"line {number}: {e.args[0]}",)
            raise
    return log


def write_event_log(log: ChangeLog | Iterable[ChangeEvent]) -> str:
    return _join([format_event(e) for e in log])


# -- ontologies -------------------------------------------------------------

_DECL = {"concept": "concepts", "datatype": "datatypes", "relation": "relations"}


def parse_ontology(text: str) -> TemporalOntology:
    decls: dict[str, dict[str, int]] = {k: {} for k in _DECL.values()}
    typing: list[tuple[str, int, int]] = []
    domain: list[tuple[int, int]] = []
    pending: list[tuple[int, int, str, list[str]]] = []
    errors: list[ParseError] = []

    def ident(tok: Token) -> str:
        if tok.type not in (IRI, WORD):
            raise _LineError(tok.column, ErrorKind.BAD_TERM, "expected an identifier")
        if not _IDENT.fullmatch(tok.value):
            raise _LineError(tok.column, ErrorKind.BAD_TERM, f"bad identifier {tok.value!r}")
        return tok.value

    def args(tokens, start, count, eol) -> list[str]:
        vals = [ident(_take(tokens, start + k, eol, "identifier")) for k in range(count)]
        _end(tokens, start + count, eol, dot=False)
        return vals

    def handle(number, tokens, eol):
        head = tokens[0]
        word = head.value if head.type == WORD else None
        if word in _DECL:
            (name,) = args(tokens, 1, 1, eol)
            seen = decls[_DECL[word]]
            if name in seen:
                raise _LineError(tokens[1].column, ErrorKind.DUPLICATE_DECL,
                                 f"{word} {name} already declared on line {seen[name]}")
            seen[name] = number
        elif word == "typing":
            (name,) = args(tokens, 1, 1, eol)
            if typing:
                raise _LineError(tokens[1].column, ErrorKind.DUPLICATE_DECL,
                                 f"typing relation already declared on line {typing[0][1]}")
            typing.append((name, number, tokens[1].column))
        elif word == "time_domain":
            lo = _time(tokens, 1, eol, "time domain start", finite=True)
            hi = _time(tokens, 2, eol, "time domain end", finite=True)
            _end(tokens, 3, eol, dot=False)
            if lo > hi:
                raise _LineError(tokens[1].column, ErrorKind.BAD_TIMEPOINT, "empty time domain")
            if domain:
                raise _LineError(head.column, ErrorKind.DUPLICATE_DECL, "time domain already declared")
            domain.append((lo.value, hi.value))
        elif word in ("rule", "trule"):
            sub = _take(tokens, 1, eol, "rule name")
            arity = {("rule", "domain"): 2, ("rule", "range"): 2, ("rule", "functional"): 1,
                     ("trule", "no_overlap"): 1, ("trule", "functional_instant"): 1}
            n = arity.get((word, sub.value))
            if n is None:
                raise _LineError(sub.column, ErrorKind.UNKNOWN_KEYWORD, f"unknown {word} {sub.value!r}")
            pending.append((number, tokens[2].column if len(tokens) > 2 else eol,
                            sub.value, args(tokens, 2, n, eol)))
        else:
            raise _LineError(head.column, ErrorKind.UNKNOWN_KEYWORD, f"unknown keyword {head.value!r}")

    _scan(text, handle, errors)

    concepts = set(decls["concepts"])
    datatypes = set(decls["datatypes"])
    relations = set(decls["relations"])
    typing_rel = None
    if typing:
        typing_rel = typing[0][0]
        relations.add(typing_rel)

    rules, trules = [], []
    for number, column, name, vals in pending:
        def bad(msg):
            errors.append(ParseError(number, column, ErrorKind.BAD_TERM, msg))
        rel = vals[0]
        if rel not in relations:
            bad(f"relation {rel} is not declared")
            continue
        if name == "domain":
            if vals[1] not in concepts:
                bad(f"concept {vals[1]} is not declared")
            else:
                rules.append(Domain(rel, vals[1]))
        elif name == "range":
            target = vals[1]
            if target in concepts and target in datatypes:
                bad(f"{target} is both a concept and a datatype")
            elif target in concepts:
                rules.append(RangeConcept(rel, target))
            elif target in datatypes:
                rules.append(RangeDatatype(rel, target))
            else:
                bad(f"{target} is neither a declared concept nor datatype")
        elif name == "functional":
            rules.append(Functional(rel))
        elif name == "no_overlap":
            trules.append(NoOverlap(rel))
        else:
            trules.append(FunctionalAtEveryInstant(rel))
    if typing_rel is None and any(isinstance(r, (Domain, RangeConcept)) for r in rules):
        number = min(n for n, _, name, _ in pending if name in ("domain", "range"))
        errors.append(ParseError(number, 1, ErrorKind.SYNTAX, "concept rules need a `typing` declaration"))
    if errors:
        raise ParseFailure(errors)
    try:
        base = StaticOntology(frozenset(concepts), frozenset(datatypes), frozenset(relations),
                              typing_rel, tuple(rules))
        return TemporalOntology(base, domain[0] if domain else None, tuple(trules))
    except OntologyError as e:
        raise ParseFailure([ParseError(1, 1, ErrorKind.SYNTAX, str(e))]) from None


def write_ontology(o: TemporalOntology | StaticOntology) -> str:
    if isinstance(o, StaticOntology):
        o = TemporalOntology(o)
    b = o.base
    lines = [f"concept <{c}>" for c in sorted(b.concepts)]
    lines += [f"datatype <{d}>" for d in sorted(b.datatypes)]
    lines += [f"relation <{r}>" for r in sorted(b.relations)]
    if b.typing_relation is not None:
        lines.append(f"typing <{b.typing_relation}>")
    if o.time_domain is not None:
        lines.append(f"time_domain {o.time_domain[0]} {o.time_domain[1]}")
    for r in b.rules:
        if isinstance(r, Domain):
            lines.append(f"rule domain <{r.relation}> <{r.concept}>")
        elif isinstance(r, RangeConcept):
            lines.append(f"rule range <{r.relation}> <{r.concept}>")
        elif isinstance(r, RangeDatatype):
            lines.append(f"rule range <{r.relation}> <{r.datatype}>")
        else:
            lines.append(f"rule functional <{r.relation}>")
    for r in o.temporal_rules:
        if isinstance(r, NoOverlap):
            lines.append(f"trule no_overlap <{r.relation}>")
        elif isinstance(r, FunctionalAtEveryInstant):
            lines.append(f"trule functional_instant <{r.relation}>")
    return _join(lines)
