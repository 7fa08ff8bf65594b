# Pattern queries over snapshots, and the history of one fact.

from chronokg import (ChangeLog, Pattern, Quintuple, Triple, ViewKind, assert_, close, history,
                      match, retract, snapshot)

log = ChangeLog()
log.append(assert_(2012, Quintuple("UK", "member", "EU", 1973, "inf")))
log.append(assert_(2012, Quintuple("FR", "member", "EU", 1951, "inf")))
log.append(assert_(2015, Quintuple("UK", "member", "NATO", 1949, "inf")))
log.append(close(2021, Triple("UK", "member", "EU"), 2020))

now = snapshot(log, ViewKind.INCREMENTAL, 2021)

# None is the wildcard. Filters narrow by validity instant or keep only open edges.

print(*match(now, Pattern("UK", "member")), sep="\n")
print(*match(now, Pattern("UK", "member", valid_at=2021)), sep="\n")
print(*match(now, Pattern(relation="member", tail="EU", active_only=True)), sep="\n")

# Each event touching a triple, in commit order.

for when, event in history(log, Triple("UK", "member", "EU")):
    print(when, type(event.action).__name__)

# A retracted fact can be entered again later; history shows all three steps.

log.append(retract(2022, Triple("FR", "member", "EU")))
log.append(assert_(2023, Quintuple("FR", "member", "EU", 1951, "inf")))
print([type(e.action).__name__ for _, e in history(log, Triple("FR", "member", "EU"))])
