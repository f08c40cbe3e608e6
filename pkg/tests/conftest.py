from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


def pytest_collection_modifyitems(config, items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            num, title = m.args
            entry = CRITERIA.setdefault(num, {"title": title, "tests": set(), "failed": set(), "ran": set()})
            entry["tests"].add(item.nodeid)


def pytest_runtest_logreport(report):
    for entry in CRITERIA.values():
        if report.nodeid in entry["tests"]:
            if report.when == "call" or report.outcome != "passed":
                entry["ran"].add(report.nodeid)
            if report.outcome == "failed":
                entry["failed"].add(report.nodeid)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(CRITERIA):
        e = CRITERIA[num]
        if not e["ran"]:
            status = "NOT RUN"
        elif e["failed"]:
            status = "FAIL"
        elif e["ran"] != e["tests"]:
            status = "PARTIAL"
        else:
            status = "PASS"
        tr.write_line(f"criterion {num}: {status:7} {e['title']} ({len(e['ran'])}/{len(e['tests'])} tests)")
