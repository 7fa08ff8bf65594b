# The command line, driven from Python. The same commands work from a shell
# as `chronokg ...` or `python -m chronokg ...`.

import os
import pathlib
import sys
import tempfile

from chronokg.cli import main

work = pathlib.Path(tempfile.mkdtemp())
os.chdir(work)
(work / "eu.onto").write_text(
    "concept Country\nconcept Union\nrelation member\ntyping type\n"
    "rule domain member Country\nrule range member Union\n")
(work / "uk.log").write_text(
    "2012 ASSERT <UK> <type> <Country> -inf inf\n"
    "2012 ASSERT <EU> <type> <Union> -inf inf\n"
    "2012 ASSERT <UK> <member> <EU> 1973 inf\n"
    "2021 CLOSE <UK> <member> <EU> 2020\n")


def run(*argv):
    print("$ chronokg", " ".join(str(a) for a in argv))
    code = main([str(a) for a in argv], sys.stdout, sys.stdout)
    print(f"[exit {code}]")


log = "uk.log"
run("validate", "--ontology", "eu.onto", "--log", log)
run("classify", "--log", log)
run("snapshot", "--log", log, "--kind", "incremental", "--at", 2021)
run("snapshot", "--log", log, "--kind", "mutable", "--at", 2021)
run("query", "--log", log, "--kind", "incremental", "--at", 2021, "<UK> <member> ?", "--valid-at", 1999)
run("diff", "--log", log, "--kind", "incremental", "--from", 2012, "--to", 2021)
run("history", "--log", log, "<UK> <member> <EU>")
run("classify", "--log", log, "--format", "json")

# Times on the command line go through a calendar. With days since the epoch,
# the ticks in the file are days, and dates are accepted.

run("snapshot", "--log", log, "--kind", "mutable", "--at", "1975-07-10", "--calendar", "days-since-epoch")

# Exit codes: 1 for rule violations, 2 for unreadable input, 3 for bad usage.

(work / "bad.nq").write_text("<UK> <member> <EU> 2020 1973 .\n")
run("validate", "--ontology", "eu.onto", "--graph", "bad.nq")
(work / "cut.nq").write_text("<UK> <member> <EU> 1973")
run("classify", "--graph", "cut.nq")
run("snapshot", "--log", log, "--kind", "sideways", "--at", 2012)
