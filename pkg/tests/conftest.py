"""Collects results of ``@pytest.mark.acceptance(n, title)`` tests and prints
one PASS/FAIL/SKIP line per criterion at the end of the run."""

import pytest

_RESULTS = {}
_RANK = {"PASS": 0, "SKIP": 1, "FAIL": 2}


def _criterion(item):
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return None
    number = mark.args[0]
    title = mark.args[1] if len(mark.args) > 1 else ""
    return number, title


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    crit = _criterion(item)
    if crit is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        if report.passed:
            status = "PASS"
        elif report.skipped:
            status = "SKIP"
        else:
            status = "FAIL"
        detail = ""
        if report.skipped and isinstance(report.longrepr, tuple):
            detail = str(report.longrepr[2])
        number, title = crit
        prev = _RESULTS.get(number)
        if prev is None or _RANK[status] >= _RANK[prev[1]]:
            _RESULTS[number] = (title, status, report.duration, detail)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, status, duration, detail = _RESULTS[number]
        line = f"criterion {number:>2}  {status}  {title}  ({duration:.1f}s)"
        if detail:
            line += f"  [{detail.removeprefix('Skipped: ')}]"
        terminalreporter.write_line(line)
