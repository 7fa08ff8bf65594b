"""Random graphs and valid change logs for property tests and benchmarks."""

from __future__ import annotations

import random

from .log import AppendError, Assert, ChangeLog, assert_, close, retract
from .model import NEG_INF, POS_INF, Entity, Literal, Quintuple, Term, TimePoint, Triple
from .rules import StaticOntology, TemporalOntology

_LEXICALS = ["1951", "", "two words", 'say "hi"', "back\\slash", "tab\there",
             "line\nbreak", "# not a comment", "ünïcødé", "<angle>", "x . y"]


def relations(n: int) -> list[str]:
    return [f"r{i}" for i in range(n)]


def open_ontology(n_relations: int = 5, datatypes=("int", "str")) -> TemporalOntology:
    """Declares the generated relations and datatypes, with no rules."""
    return TemporalOntology(StaticOntology(datatypes=frozenset(datatypes),
                                           relations=frozenset(relations(n_relations))))


def random_term(rng: random.Random, n_entities: int, literal_rate: float = 0.1) -> Term:
    if rng.random() < literal_rate:
        return Literal(rng.choice(_LEXICALS), rng.choice(["int", "str"]))
    return Entity(f"e{rng.randrange(n_entities)}")


def random_bound(rng: random.Random, lo: int = 1900, hi: int = 2100) -> TimePoint:
    return TimePoint.at(rng.randint(lo, hi))


def random_quintuple(rng: random.Random, n_entities: int = 20, n_relations: int = 5,
                     literal_rate: float = 0.1) -> Quintuple:
    h = f"e{rng.randrange(n_entities)}"
    r = f"r{rng.randrange(n_relations)}"
    t = random_term(rng, n_entities, literal_rate)
    a = NEG_INF if rng.random() < 0.15 else random_bound(rng)
    b = POS_INF if rng.random() < 0.4 else random_bound(rng)
    if a > b:
        a, b = b, a
    return Quintuple(h, r, t, a, b)


def random_triple(rng: random.Random, n_entities: int = 20, n_relations: int = 5,
                  literal_rate: float = 0.1) -> Triple:
    return random_quintuple(rng, n_entities, n_relations, literal_rate).triple


def random_log(rng: random.Random, n_events: int = 100, n_entities: int = 20,
               n_relations: int = 5, *, ontology: TemporalOntology | None = None,
               allow_retract: bool = True, allow_close: bool = True,
               bounded_rate: float = 0.1, remove_once: bool = False,
               literal_rate: float = 0.05, start: int = 2000) -> ChangeLog:
    """A log of at most ``n_events`` events that the log itself accepted.

    ``remove_once`` closes or retracts each triple at most once over the whole
    log. When the ontology has a typing relation and concepts, some asserts
    are typing edges. Candidate events the log refuses are dropped.
    """
    typing = ontology.typing_relation if ontology is not None else None
    concepts = sorted(ontology.concepts) if typing else []
    log = ChangeLog(ontology)
    active: dict[Triple, Quintuple] = {}
    active_keys: list[Triple] = []
    slot: dict[Triple, int] = {}
    removed: set[Triple] = set()
    tick = start
    attempts = 0
    while len(log) < n_events and attempts < 4 * n_events:
        attempts += 1
        tick += rng.choice((0, 0, 1, 1, 1, 2, 5))
        roll = rng.random()
        candidates = [k for k in active_keys if k not in removed] if remove_once else active_keys
        if candidates and roll < 0.35 and (allow_close or allow_retract):
            key = rng.choice(candidates)
            q = active[key]
            if allow_close and (not allow_retract or rng.random() < 0.6):
                base = q.valid_from.value if q.valid_from.is_finite else tick - 50
                event = close(tick, key, base + rng.randint(0, 40))
            else:
                event = retract(tick, key)
        elif concepts and roll < 0.6:
            q = Quintuple(f"e{rng.randrange(n_entities)}", typing, rng.choice(concepts))
            event = assert_(tick, q)
        else:
            q = random_quintuple(rng, n_entities, n_relations, literal_rate)
            if rng.random() >= bounded_rate:
                q = Quintuple(q.head, q.relation, q.tail, q.valid_from, POS_INF)
            event = assert_(tick, q)
        try:
            log.append(event)
        except AppendError:
            continue
        key = event.key
        if isinstance(event.action, Assert):
            if event.action.quintuple.is_active:
                active[key] = event.action.quintuple
                slot[key] = len(active_keys)
                active_keys.append(key)
        else:
            removed.add(key)
            del active[key]
            # swap-remove keeps this O(1) on long logs
            i = slot.pop(key)
            last = active_keys.pop()
            if last != key:
                active_keys[i] = last
                slot[last] = i
    return log
