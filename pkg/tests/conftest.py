import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_results: list[tuple[int, str, str, list[str]]] = []
_notes: dict[str, list[str]] = {}


@pytest.fixture
def note(request):
    """Attach a measurement line to the current criterion's summary."""
    return lambda text: _notes.setdefault(request.node.nodeid, []).append(text)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number, title = marker.args
        callspec = getattr(item, "callspec", None)
        if callspec is not None:
            title = f"{title} [{callspec.id}]"
        _results.append((number, title, "PASS" if report.passed else "FAIL", _notes.get(item.nodeid, [])))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, status, notes in sorted(_results, key=lambda r: (r[0], r[1])):
        terminalreporter.write_line(f"[{status}] criterion {number}: {title}")
        for text in notes:
            terminalreporter.write_line(f"       {text}")
