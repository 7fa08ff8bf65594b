import random
from concurrent.futures import ThreadPoolExecutor

import pytest

from chronokg import (
    NOT_FOUND,
    STILL_PRESENT,
    Cell,
    ChangeLog,
    Quintuple,
    ReminiscentKG,
    StandardKG,
    TimePoint,
    Triple,
    ViewError,
    ViewKind,
    accessibility_time,
    assert_,
    classify,
    close,
    deletion_time,
    diff,
    iter_snapshots,
    retract,
    snapshot,
    validate_reminiscent,
    validate_standard,
)
from chronokg.synth import random_log
from conftest import UK_EU
from oracle import removal_time, replay
from test_rules import RULED

OPEN = Quintuple("UK", "member", "EU", 1973, "inf")
CLOSED = Quintuple("UK", "member", "EU", 1973, 2020)
M, S, I = ViewKind.MUTABLE, ViewKind.SEMI_INCREMENTAL, ViewKind.INCREMENTAL


def test_snapshot_examples(uk_eu_log):
    assert snapshot(uk_eu_log, I, 2021).edges == {CLOSED}
    assert snapshot(uk_eu_log, M, 2020).edges == {UK_EU}
    assert snapshot(uk_eu_log, M, 2021).edges == set()
    assert snapshot(uk_eu_log, S, 2012).edges == {OPEN}


def test_snapshot_graph_types(uk_eu_log):
    assert isinstance(snapshot(uk_eu_log, M, 2012).graph, StandardKG)
    semi = snapshot(uk_eu_log, S, 2012).graph
    assert isinstance(semi, ReminiscentKG) and semi.semi
    assert not snapshot(uk_eu_log, I, 2012).graph.semi
    assert snapshot(uk_eu_log, I, 2012).graph.entities == {"UK", "EU"}


def test_before_first_commit_is_empty(uk_eu_log):
    for kind in ViewKind:
        assert len(snapshot(uk_eu_log, kind, 1999)) == 0


def test_snapshot_needs_finite_instant(uk_eu_log):
    with pytest.raises(ValueError):
        snapshot(uk_eu_log, I, "inf")


def test_snapshot_accepts_kind_names(uk_eu_log):
    assert snapshot(uk_eu_log, "semi-incremental", 2012).kind is S


@pytest.mark.parametrize("seed", range(15))
def test_step_semantics(seed):
    log = random_log(random.Random(seed), 60)
    times = [t.value for t in log.commit_times()]
    rng = random.Random(seed)
    for _ in range(10):
        at = rng.randint(times[0] - 3, times[-1] + 3)
        prior = [t for t in times if t <= at]
        for kind in ViewKind:
            got = snapshot(log, kind, at).edges
            want = snapshot(log, kind, prior[-1]).edges if prior else frozenset()
            assert got == want


@pytest.mark.parametrize("seed", range(15))
def test_iter_snapshots_matches_snapshot(seed):
    log = random_log(random.Random(seed), 50)
    for kind in ViewKind:
        for snap in iter_snapshots(log, kind):
            assert snap.edges == snapshot(log, kind, snap.at).edges


@pytest.mark.parametrize("seed", range(15))
def test_snapshots_match_reference_replay(seed):
    log = random_log(random.Random(seed), 70)
    for t in log.commit_times():
        for kind in ViewKind:
            assert snapshot(log, kind, t).edges == replay(list(log), kind.value, t.value)


@pytest.mark.parametrize("seed", range(20))
def test_snapshots_are_valid_stationary_graphs(seed):
    log = random_log(random.Random(seed), 80, 6, 4, ontology=RULED)
    assert len(log) > 20
    for t in log.commit_times():
        assert validate_reminiscent(snapshot(log, I, t).graph, RULED) == []
        assert validate_standard(snapshot(log, M, t).graph, RULED.base) == []
        assert validate_reminiscent(snapshot(log, S, t).graph, RULED) == []


def test_monotone_growth_example():
    log = ChangeLog()
    log.append(assert_(1, Quintuple("a", "r", "b", 0)))
    log.append(close(2, Triple("a", "r", "b"), 1))
    log.append(assert_(3, Quintuple("a", "r", "b", 2)))
    sizes = [len(s) for s in iter_snapshots(log, I)]
    assert sizes == [1, 1, 2]


def test_accessibility_time(uk_eu_log):
    assert accessibility_time(uk_eu_log, UK_EU) == TimePoint.at(2012)
    assert accessibility_time(uk_eu_log, Triple("FR", "member", "EU")) is NOT_FOUND


def test_accessibility_after_reassertion():
    log = ChangeLog()
    log.append(assert_(5, Quintuple("a", "r", "b")))
    log.append(retract(7, Triple("a", "r", "b")))
    log.append(assert_(9, Quintuple("a", "r", "b")))
    # linear scan oracle: first ASSERT whose key matches
    first = next(e.commit_time for e in log if e.key == Triple("a", "r", "b"))
    assert accessibility_time(log, Triple("a", "r", "b")) == first == TimePoint.at(5)


def test_deletion_time(uk_eu_log):
    assert deletion_time(uk_eu_log, UK_EU, M) == TimePoint.at(2021)
    assert deletion_time(uk_eu_log, UK_EU, S) == TimePoint.at(2021)
    only = ChangeLog().append(assert_(1, Quintuple("a", "r", "b")))
    assert deletion_time(only, Triple("a", "r", "b"), M) is STILL_PRESENT
    assert deletion_time(only, Triple("x", "r", "b"), M) is NOT_FOUND
    with pytest.raises(ViewError) as info:
        deletion_time(uk_eu_log, UK_EU, I)
    assert info.value.code == "UNSUPPORTED_KIND"


def test_deletion_time_with_bounded_assert_only():
    log = ChangeLog().append(assert_(1, Quintuple("a", "r", "b", 0, 5)))
    # a bounded edge never enters the active-only images
    assert deletion_time(log, Triple("a", "r", "b"), S) is NOT_FOUND


@pytest.mark.parametrize("seed", range(30))
def test_deletion_time_agrees_with_generating_event(seed):
    log = random_log(random.Random(seed), 60, remove_once=True)
    keys = {e.key for e in log}
    for key in keys:
        when = removal_time(list(log), key)
        for kind in (M, S):
            got = deletion_time(log, key, kind)
            if when is not None:
                assert got == when
            else:
                assert got in (STILL_PRESENT, NOT_FOUND)


def test_diff_examples(uk_eu_log):
    d = diff(uk_eu_log, I, 2012, 2021)
    assert d.rewritten == {(OPEN, CLOSED)}
    assert not d.added and not d.removed
    m = diff(uk_eu_log, M, 2012, 2021)
    assert m.removed == {UK_EU} and not m.rewritten
    for kind in ViewKind:
        assert diff(uk_eu_log, kind, 2020, 2020).is_empty()
    with pytest.raises(ViewError) as info:
        diff(uk_eu_log, I, 2021, 2012)
    assert info.value.code == "BAD_RANGE"


@pytest.mark.parametrize("seed", range(10))
def test_diff_reflexive(seed):
    log = random_log(random.Random(seed), 50)
    for t in log.commit_times():
        for kind in ViewKind:
            assert diff(log, kind, t, t).is_empty()


def test_classify_examples(uk_eu_log):
    assert classify(StandardKG.from_edges([UK_EU])) is Cell.STANDARD
    assert classify(ReminiscentKG.from_edges([CLOSED])) is Cell.REMINISCENT
    assert classify(ReminiscentKG.from_edges([OPEN])) is Cell.SEMI_REMINISCENT
    assert classify(uk_eu_log) is Cell.INCREMENTAL
    semi = ChangeLog().append(assert_(2012, OPEN)).append(retract(2021, UK_EU))
    assert classify(semi) is Cell.SEMI_INCREMENTAL
    plain = ChangeLog().append(assert_(2012, UK_EU.with_bounds())).append(retract(2021, UK_EU))
    assert classify(plain) is Cell.MUTABLE
    assert classify(snapshot(uk_eu_log, M, 2012)) is Cell.STANDARD


def test_memoized_images_survive_appends():
    log = ChangeLog().append(assert_(1, Quintuple("a", "r", "b")))
    first = snapshot(log, I, 1)
    log.append(close(2, Triple("a", "r", "b"), 1))
    assert snapshot(log, I, 1).edges == first.edges == {Quintuple("a", "r", "b")}
    assert snapshot(log, I, 2).edges == {Quintuple("a", "r", "b", "-inf", 1)}


def test_concurrent_snapshots_agree():
    log = random_log(random.Random(3), 100)
    times = [t.value for t in log.commit_times()] * 20
    with ThreadPoolExecutor(8) as pool:
        got = list(pool.map(lambda t: snapshot(log, I, t).edges, times))
    assert got == [frozenset(replay(list(log), "incremental", t)) for t in times]
