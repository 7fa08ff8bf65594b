"""Command line interface.

Exit codes: 0 success, 1 rule violations found, 2 parse error, 3 usage error.
Times given on the command line go through the calendar (``--calendar`` or
``CHRONOKG_CALENDAR``); times inside files are always raw integer ticks.
"""

from __future__ import annotations

import argparse
import datetime as dt
import json
import os
import sys
from typing import Sequence

from . import serialization as ser
from .log import AppendError, AppendErrorCode, Assert, ChangeLog, Close
from .model import Entity, Quintuple, Term, TimePoint, Triple, canonical
from .query import Pattern, QueryError, history, match
from .rules import TemporalOntology, Violation, validate
from .views import ViewKind, classify, diff, snapshot

EXIT_OK, EXIT_VIOLATIONS, EXIT_PARSE, EXIT_USAGE = 0, 1, 2, 3

CALENDARS = ("year", "days-since-epoch")
_EPOCH = dt.date(1970, 1, 1)


class UsageError(Exception):
    pass


def to_tick(text: str, calendar: str) -> int:
    """``"1973"`` or an ISO date to a tick: the year itself, or days since 1970-01-01."""
    text = text.strip()
    try:
        if text.lstrip("-+").isdigit():
            if calendar == "year":
                return int(text)
            day = dt.date(int(text), 1, 1)
        else:
            parts = text.split("-")
            if len(parts) == 2:
                text += "-01"
            day = dt.date.fromisoformat(text)
            if calendar == "year":
                return day.year
    except ValueError:
        raise UsageError(f"cannot read {text!r} as a {calendar} time") from None
    return (day - _EPOCH).days


# -- rendering --------------------------------------------------------------

def _tp_json(tp: TimePoint):
    return tp.value if tp.is_finite else str(tp)


def _term_json(t: Term) -> dict:
    if isinstance(t, Entity):
        return {"entity": t.iri}
    return {"lexical": t.lexical, "datatype": t.datatype}


def _edge_json(e: Triple | Quintuple) -> dict:
    out = {"head": e.head, "relation": e.relation, "tail": _term_json(e.tail)}
    if isinstance(e, Quintuple):
        out["valid_from"] = _tp_json(e.valid_from)
        out["valid_until"] = _tp_json(e.valid_until)
    return out


def _edge_text(e: Triple | Quintuple) -> str:
    return ser.format_quintuple(e) if isinstance(e, Quintuple) else ser.format_triple(e)


def _violation_text(v: Violation) -> str:
    return f"{v.rule}: {v.message} [{' ; '.join(_edge_text(e) for e in v.offenders)}]"


def _violation_json(v: Violation) -> dict:
    return {"rule": str(v.rule), "message": v.message,
            "offenders": [_edge_json(e) for e in v.offenders]}


def _event_json(e) -> dict:
    a = e.action
    out = {"commit": _tp_json(e.commit_time), "action": type(a).__name__.upper()}
    if isinstance(a, Assert):
        out["edge"] = _edge_json(a.quintuple)
    else:
        out["edge"] = _edge_json(a.key)
        if isinstance(a, Close):
            out["valid_until"] = _tp_json(a.valid_until)
    return out


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


# -- input ------------------------------------------------------------------

def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8", newline="") as f:
            return f.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


class _Failed(Exception):
    def __init__(self, code: int, lines: list[str]):
        self.code, self.lines = code, lines


def _parse(path: str, fn, *args):
    try:
        return fn(_read(path), *args)
    except ser.ParseFailure as e:
        raise _Failed(EXIT_PARSE, [f"{path}:{err}" for err in e.errors]) from None


def _load_graph(path: str):
    # an empty quintuple file has no data line to judge its arity by
    return _parse(path, ser.parse_graph, 5 if path.endswith(".nq") else 3)


def _load_ontology(args) -> TemporalOntology | None:
    path = getattr(args, "ontology", None)
    return _parse(path, ser.parse_ontology) if path else None


def _load_log(args, ontology=None) -> ChangeLog:
    try:
        return _parse(args.log, ser.parse_event_log, ontology)
    except AppendError as e:
        where = f"{args.log}:{e.line}"
        if e.code is AppendErrorCode.RULE_VIOLATION:
            raise _Failed(EXIT_VIOLATIONS, [f"{where}: {_violation_text(v)}" for v in e.violations]) from None
        raise _Failed(EXIT_PARSE, [f"{where}: {e.code.value}: {e.message}"]) from None


def _time(args, text: str) -> int:
    return to_tick(text, args.calendar)


def _terms(words: Sequence[str], wildcards: bool) -> list:
    try:
        tokens = ser.tokenize(" ".join(words))
    except ser.LexError as e:
        raise UsageError(f"bad pattern: {e.message}") from None
    out = []
    for tok in tokens:
        if tok.type == ser.IRI:
            out.append(tok.value)
        elif tok.type == ser.LIT:
            out.append(tok.value)
        elif wildcards and tok.type == ser.WORD and tok.value == "?":
            out.append(None)
        else:
            raise UsageError(f"bad pattern term {tok.value!r}")
    if len(out) != 3:
        raise UsageError("a pattern has exactly three terms: head relation tail")
    for pos in (0, 1):
        if out[pos] is not None and not isinstance(out[pos], str):
            raise UsageError("head and relation must be <identifier>")
    if isinstance(out[2], str):
        out[2] = Entity(out[2])
    return out


def parse_pattern(words: Sequence[str] | str) -> tuple:
    """``<UK> <member> ?`` to (head, relation, tail), ``None`` for ``?``."""
    if isinstance(words, str):
        words = [words]
    return tuple(_terms(words, wildcards=True))


# -- commands ---------------------------------------------------------------

def cmd_validate(args, out) -> int:
    ontology = _load_ontology(args)
    if args.graph:
        g = _load_graph(args.graph)
        violations = validate(g, ontology)
    else:
        try:
            _load_log(args, ontology)
            violations = []
        except _Failed as f:
            if f.code != EXIT_VIOLATIONS:
                raise
            if args.format == "json":
                out.write(_dump({"valid": False, "errors": f.lines}))
            else:
                out.writelines(line + "\n" for line in f.lines)
            return EXIT_VIOLATIONS
    if args.format == "json":
        out.write(_dump({"valid": not violations,
                         "violations": [_violation_json(v) for v in violations]}))
    else:
        out.writelines(_violation_text(v) + "\n" for v in violations)
    return EXIT_VIOLATIONS if violations else EXIT_OK


def _snapshot(args):
    log = _load_log(args, _load_ontology(args))
    return snapshot(log, ViewKind(args.kind), _time(args, args.at))


def cmd_snapshot(args, out) -> int:
    snap = _snapshot(args)
    if args.format == "json":
        text = _dump({"kind": snap.kind.value, "at": _tp_json(snap.at),
                      "edges": [_edge_json(e) for e in snap.graph]})
    else:
        text = ser.write_graph(snap.graph)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_query(args, out) -> int:
    if args.graph:
        store = _load_graph(args.graph)
    else:
        if not (args.kind and args.at):
            raise UsageError("query --log needs --kind and --at")
        store = _snapshot(args).graph
    h, r, t = parse_pattern(args.pattern)
    at = _time(args, args.valid_at) if args.valid_at else None
    try:
        edges = match(store, Pattern(h, r, t, at, args.active_only))
    except QueryError as e:
        raise UsageError(str(e)) from None
    if args.format == "json":
        out.write(_dump({"edges": [_edge_json(e) for e in edges]}))
    else:
        out.writelines(_edge_text(e) + " .\n" for e in edges)
    return EXIT_OK


def cmd_diff(args, out) -> int:
    log = _load_log(args, _load_ontology(args))
    t1, t2 = _time(args, args.from_), _time(args, args.to)
    if t1 > t2:
        raise UsageError(f"--from {t1} is after --to {t2}")
    d = diff(log, ViewKind(args.kind), t1, t2)
    rewritten = sorted(d.rewritten, key=lambda p: (p[0].sort_key(), p[1].sort_key()))
    if args.format == "json":
        out.write(_dump({
            "added": [_edge_json(e) for e in canonical(d.added)],
            "removed": [_edge_json(e) for e in canonical(d.removed)],
            "rewritten": [{"old": _edge_json(a), "new": _edge_json(b)} for a, b in rewritten],
        }))
        return EXIT_OK
    for e in canonical(d.added):
        out.write(f"added {_edge_text(e)}\n")
    for e in canonical(d.removed):
        out.write(f"removed {_edge_text(e)}\n")
    for a, b in rewritten:
        out.write(f"rewritten {_edge_text(a)} -> {b.valid_from} {b.valid_until}\n")
    return EXIT_OK


def cmd_classify(args, out) -> int:
    if args.graph:
        obj = _load_graph(args.graph)
    else:
        obj = _load_log(args, _load_ontology(args))
    cell = classify(obj).value
    out.write(_dump({"cell": cell}) if args.format == "json" else cell + "\n")
    return EXIT_OK


def cmd_history(args, out) -> int:
    log = _load_log(args, _load_ontology(args))
    h, r, t = _terms(args.key, wildcards=False)
    entries = history(log, Triple(h, r, t))
    if args.format == "json":
        out.write(_dump({"events": [_event_json(e) for _, e in entries]}))
    else:
        out.writelines(ser.format_event(e) + "\n" for _, e in entries)
    return EXIT_OK


def cmd_replay(args, out) -> int:
    log = _load_log(args, _load_ontology(args))
    if args.format == "json":
        text = _dump({"events": [_event_json(e) for e in log]})
    else:
        text = ser.write_event_log(log)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    else:
        out.write(text)
    return EXIT_OK


# -- argument parsing -------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--calendar", choices=CALENDARS,
                        default=os.environ.get("CHRONOKG_CALENDAR", "year"))
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--ontology", metavar="FILE")

    p = _Parser(prog="chronokg", description="Time-aware knowledge graph tools.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    kinds = [k.value for k in ViewKind]

    def source(sp, log_only=False):
        if log_only:
            sp.add_argument("--log", metavar="FILE", required=True)
            return
        g = sp.add_mutually_exclusive_group(required=True)
        g.add_argument("--graph", metavar="FILE")
        g.add_argument("--log", metavar="FILE")

    sp = sub.add_parser("validate", parents=[common], help="check a graph or log against an ontology")
    source(sp)
    sp.set_defaults(func=cmd_validate, need_ontology=True)

    sp = sub.add_parser("snapshot", parents=[common], help="materialize the image at a time")
    source(sp, log_only=True)
    sp.add_argument("--kind", choices=kinds, required=True)
    sp.add_argument("--at", required=True)
    sp.add_argument("--out", metavar="FILE")
    sp.set_defaults(func=cmd_snapshot)

    sp = sub.add_parser("query", parents=[common], help="match a pattern such as '<UK> <member> ?'")
    source(sp)
    sp.add_argument("--kind", choices=kinds)
    sp.add_argument("--at")
    sp.add_argument("--valid-at")
    sp.add_argument("--active-only", action="store_true")
    sp.add_argument("pattern", nargs="+")
    sp.set_defaults(func=cmd_query)

    sp = sub.add_parser("diff", parents=[common], help="compare two images of a log")
    source(sp, log_only=True)
    sp.add_argument("--kind", choices=kinds, required=True)
    sp.add_argument("--from", dest="from_", required=True)
    sp.add_argument("--to", required=True)
    sp.set_defaults(func=cmd_diff)

    sp = sub.add_parser("classify", parents=[common], help="name the taxonomy cell of a graph or log")
    source(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("history", parents=[common], help="events touching one triple")
    source(sp, log_only=True)
    sp.add_argument("key", nargs="+")
    sp.set_defaults(func=cmd_history)

    sp = sub.add_parser("replay", parents=[common], help="re-emit a log in canonical form")
    source(sp, log_only=True)
    sp.add_argument("--out", metavar="FILE")
    sp.set_defaults(func=cmd_replay)
    return p


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.calendar not in CALENDARS:
            raise UsageError(f"unknown calendar {args.calendar!r}")
        if getattr(args, "need_ontology", False) and not args.ontology:
            raise UsageError("validate needs --ontology")
        return args.func(args, out)
    except _Failed as f:
        err.writelines(line + "\n" for line in f.lines)
        return f.code
    except UsageError as e:
        err.write(f"chronokg: {e}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
