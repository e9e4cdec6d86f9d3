from __future__ import annotations

import pytest

_RESULTS = pytest.StashKey[dict]()
_DETAILS = pytest.StashKey[dict]()


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(n): acceptance criterion number n")
    config.stash[_RESULTS] = {}
    config.stash[_DETAILS] = {}


@pytest.fixture
def detail(request):
    """Record a one-line measurement summary for the PASS/FAIL report."""
    marker = request.node.get_closest_marker("acceptance")
    store = request.config.stash[_DETAILS]

    def note(text: str):
        if marker is not None:
            store[marker.args[0]] = text

    return note


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    results = item.config.stash[_RESULTS]
    n = marker.args[0]
    if report.failed:
        results[n] = False
    elif report.when == "call":
        results.setdefault(n, True)


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash[_RESULTS]
    if not results:
        return
    details = config.stash[_DETAILS]
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        line = f"criterion {n:2d}: {'PASS' if results[n] else 'FAIL'}"
        if n in details:
            line += f"  ({details[n]})"
        terminalreporter.write_line(line)
