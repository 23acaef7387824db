"""Shared fixtures; the acceptance suite reports one line per criterion at the end of the run."""
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

RESULTS = {}


class Recorder:
    def __init__(self, number, title):
        self.number, self.title = number, title

    def __call__(self, ok, detail="", seconds=None):
        timing = f" ({seconds:.2f}s)" if seconds is not None else ""
        line = f"criterion {self.number}: {'PASS' if ok else 'FAIL'} - {self.title}{timing}{': ' + detail if detail else ''}"
        RESULTS[self.number] = line
        print(line)
        return ok


@pytest.fixture
def criterion(request):
    mark = request.node.get_closest_marker("criterion")
    number, title = mark.args
    RESULTS[number] = f"criterion {number}: FAIL - {title}: did not complete"
    return Recorder(number, title)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n])
