"""Per-criterion pass/fail reporting for the acceptance suite."""

import pytest

_CRITERIA: dict[int, dict] = {}
_NOTES: list[str] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.fixture
def note():
    """Record a measured value to print beside the criterion summary."""
    return _NOTES.append


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.skipped:
        return
    if rep.when != "call" and not rep.failed:
        return
    number, title = marker.args
    entry = _CRITERIA.setdefault(number, {"title": title, "passed": 0, "failed": []})
    if rep.failed:
        entry["failed"].append(item.name)
    elif rep.when == "call":
        entry["passed"] += 1


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        e = _CRITERIA[number]
        status = "FAIL" if e["failed"] else "PASS"
        total = e["passed"] + len(e["failed"])
        line = f"{status} criterion {number}: {e['title']} ({e['passed']}/{total} checks)"
        if e["failed"]:
            line += " failed: " + ", ".join(e["failed"])
        tr.write_line(line)
    if _NOTES:
        tr.write_line("")
        for n in _NOTES:
            tr.write_line(f"  {n}")
