import pathlib
import sys

import pytest

from chronokg import ChangeLog, Quintuple, Triple, assert_, close, parse_ontology

sys.path.insert(0, str(pathlib.Path(__file__).parent))

DATA = pathlib.Path(__file__).parent / "data"

UK_EU = Triple("UK", "member", "EU")

_criteria: list[tuple[str, bool, str, bool]] = []


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def uk_eu_log():
    log = ChangeLog()
    log.append(assert_(2012, Quintuple("UK", "member", "EU", 1973, "inf")))
    log.append(close(2021, UK_EU, 2020))
    return log


@pytest.fixture
def eu_ontology():
    return parse_ontology((DATA / "eu.onto").read_text())


@pytest.fixture
def criterion():
    """Record one acceptance criterion; the summary prints a line per criterion.

    Soft criteria are reported but never fail the run.
    """

    def record(label: str, ok: bool, detail: str = "", soft: bool = False) -> None:
        _criteria.append((label, ok, detail, soft))
        if not soft:
            assert ok, f"{label}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail, soft in _criteria:
        status = "PASS" if ok else ("SOFT-FAIL" if soft else "FAIL")
        terminalreporter.write_line(f"{status}  {label}  {detail}".rstrip())
