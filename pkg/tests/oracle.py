"""Naive reference replay, written from the view definitions and kept apart
from the library's fold so that diff and deletion-time checks compare two
independent implementations."""

from chronokg.log import Assert, Close, Retract
from chronokg.model import Quintuple, Triple


def replay(events, kind, at):
    """Edge set of the ``kind`` image after all events committed at or before ``at``.

    Works on a plain list of quintuples with linear scans throughout.
    """
    edges = []
    for e in events:
        if e.commit_time.value > at:
            break
        a = e.action
        if isinstance(a, Assert):
            edges.append(a.quintuple)
            continue
        k = a.key
        hit = [q for q in edges
               if (q.head, q.relation, q.tail) == (k.head, k.relation, k.tail)
               and str(q.valid_until) == "inf"]
        assert len(hit) == 1, "valid logs have exactly one active edge per key"
        edges.remove(hit[0])
        if isinstance(a, Close):
            q = hit[0]
            edges.append(Quintuple.raw(q.head, q.relation, q.tail, q.valid_from, a.valid_until))
        else:
            assert isinstance(a, Retract)
    if kind == "incremental":
        return set(edges)
    active = [q for q in edges if str(q.valid_until) == "inf"]
    if kind == "semi-incremental":
        return set(active)
    return {Triple(q.head, q.relation, q.tail) for q in active}


def removal_time(events, key):
    """Commit time of the (single) close or retract of ``key``, else None."""
    for e in events:
        if not isinstance(e.action, Assert) and e.action.key == key:
            return e.commit_time
    return None
