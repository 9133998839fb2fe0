"""Collects acceptance-criterion outcomes and prints one line per criterion."""

import pytest

_RESULTS = {}


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    num, title = mark.args
    ok, _ = _RESULTS.get(num, (True, title))
    if call.excinfo is not None and not call.excinfo.errisinstance(pytest.skip.Exception):
        ok = False
    _RESULTS[num] = (ok, title)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_RESULTS):
        ok, title = _RESULTS[num]
        terminalreporter.write_line(f"criterion {num:2d} {'PASS' if ok else 'FAIL'}  {title}")
