import random

import pytest

from chronokg import (
    ChangeLog,
    Entity,
    Pattern,
    Quintuple,
    QueryError,
    ReminiscentKG,
    StandardKG,
    TimePoint,
    Triple,
    ViewKind,
    assert_,
    history,
    interval_contains,
    iter_snapshots,
    match,
    retract,
    snapshot,
)
from chronokg.query import valid_at
from chronokg.synth import random_log, random_quintuple
from conftest import UK_EU

CLOSED = Quintuple("UK", "member", "EU", 1973, 2020)


def test_match_examples(uk_eu_log):
    snap = snapshot(uk_eu_log, ViewKind.INCREMENTAL, 2021)
    assert match(snap, Pattern("UK", "member", valid_at=1999)) == [CLOSED]
    assert match(snap, Pattern("UK", "member", active_only=True)) == []
    assert match(snap, Pattern()) == [CLOSED]
    assert valid_at(snap, 2020) == [CLOSED] and valid_at(snap, 2021) == []


def test_both_filters_mean_active_and_valid():
    g = ReminiscentKG.from_edges([Quintuple("a", "r", "b", 0, 10), Quintuple("a", "r", "c", 5),
                                  Quintuple("a", "r", "d", 20)])
    assert [e.tail.iri for e in match(g, Pattern(valid_at=7, active_only=True))] == ["c"]


def test_string_tail_means_entity():
    g = StandardKG.from_edges([UK_EU])
    assert match(g, Pattern(tail="EU")) == match(g, Pattern(tail=Entity("EU"))) == [UK_EU]


def test_temporal_filter_on_static_store():
    g = StandardKG.from_edges([UK_EU])
    assert match(g, Pattern(relation="member")) == [UK_EU]
    for p in (Pattern(valid_at=2000), Pattern(active_only=True)):
        with pytest.raises(QueryError) as info:
            match(g, p)
        assert info.value.code == "TEMPORAL_FILTER_ON_STATIC"


def test_valid_at_must_be_finite():
    with pytest.raises(ValueError):
        Pattern(valid_at="inf")


def _store(seed, n=60):
    rng = random.Random(seed)
    return ReminiscentKG.from_edges(random_quintuple(rng, 6, 3, 0.2) for _ in range(n))


@pytest.mark.parametrize("seed", range(20))
def test_all_wildcards_return_every_edge(seed):
    g = _store(seed)
    assert set(match(g, Pattern())) == g.edges
    assert len(match(g, Pattern())) == len(g)
    s = g.project()
    assert set(match(s, Pattern())) == s.edges


@pytest.mark.parametrize("seed", range(30))
def test_filter_composition(seed):
    rng = random.Random(seed)
    g = _store(seed)
    for _ in range(10):
        p = Pattern(rng.choice([None, "e0", "e1"]), rng.choice([None, "r0", "r1"]))
        at = rng.randint(1890, 2110)
        plain = match(g, p)
        timed = match(g, Pattern(p.head, p.relation, p.tail, valid_at=at))
        assert timed == [e for e in plain if interval_contains(e, at)]
        active = match(g, Pattern(p.head, p.relation, active_only=True))
        assert active == [e for e in plain if e.is_active]


@pytest.mark.parametrize("seed", range(10))
def test_match_output_is_canonical(seed):
    g = _store(seed)
    out = match(g, Pattern(relation="r0"))
    assert out == sorted(out, key=lambda e: e.sort_key())


def _key(e):
    return Triple(e.head, e.relation, e.tail)


def test_history_examples(uk_eu_log):
    (a, b) = history(uk_eu_log, UK_EU)
    assert (a[0], b[0]) == (TimePoint.at(2012), TimePoint.at(2021))
    assert type(a[1].action).__name__ == "Assert" and type(b[1].action).__name__ == "Close"
    assert history(uk_eu_log, Triple("FR", "member", "EU")) == []


def test_history_after_reassertion():
    key = Triple("a", "r", "b")
    log = ChangeLog()
    log.append(assert_(5, key.with_bounds()))
    log.append(assert_(6, Quintuple("x", "r", "y")))
    log.append(retract(7, key))
    log.append(assert_(9, key.with_bounds()))
    got = history(log, key)
    # linear scan oracle
    want = [(e.commit_time, e) for e in log.events if _key(e.key) == key]
    assert got == want and len(got) == 3


@pytest.mark.parametrize("seed", range(10))
def test_history_replayed_alone_reproduces_presence(seed):
    log = random_log(random.Random(seed), 80, 6, 3)
    images = {kind: list(iter_snapshots(log, kind)) for kind in ViewKind}
    for key in {e.key for e in log}:
        alone = ChangeLog()
        for _, event in history(log, key):
            alone.append(event)
        for kind, snaps in images.items():
            for snap in snaps:
                full = {e for e in snap.edges if _key(e) == key}
                assert full == set(snapshot(alone, kind, snap.at).edges)
