# One change log, three views.

from chronokg import (AppendError, ChangeLog, Quintuple, Triple, ViewKind, accessibility_time, assert_,
                      classify, close, deletion_time, diff, snapshot)

# The UK joined in 1973. The fact is recorded in 2012; in 2021 its validity is
# closed at 2020.

uk_eu = Triple("UK", "member", "EU")
log = ChangeLog()
log.append(assert_(2012, Quintuple("UK", "member", "EU", 1973, "inf")))
log.append(close(2021, uk_eu, 2020))
print(classify(log).value)

# Each view replays the same events and keeps a different image.

for kind in ViewKind:
    cells = [", ".join(map(str, snapshot(log, kind, year))) or "-" for year in (2012, 2020, 2021)]
    print(f"{kind.value:17}", " | ".join(cells))

# Between commits the image does not change.

print(snapshot(log, ViewKind.MUTABLE, 2015).edges == snapshot(log, ViewKind.MUTABLE, 2012).edges)

# When did the fact become accessible, and when did it leave the active views?

print(accessibility_time(log, uk_eu), deletion_time(log, uk_eu, ViewKind.MUTABLE))

# The incremental view rewrites the end of validity instead of deleting.

d = diff(log, ViewKind.INCREMENTAL, 2012, 2021)
for old, new in d.rewritten:
    print(old, "=>", new)

# Appends are checked. A close before the start of validity is refused and the log is unchanged.

log.append(assert_(2022, Quintuple("FR", "member", "EU", 1951, "inf")))
try:
    log.append(close(2023, Triple("FR", "member", "EU"), 1900))
except AppendError as e:
    print(e.code.value, "-", e.violations[0])
print(len(log), "events")
