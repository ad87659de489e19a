import time
from contextlib import contextmanager

import pytest

_LINES = pytest.StashKey[dict]()


@pytest.fixture
def criterion(request):
    """Time one acceptance criterion and record a PASS/FAIL line for the summary."""
    lines = request.config.stash.setdefault(_LINES, {})

    @contextmanager
    def run(number, title, limit):
        start = time.perf_counter()
        try:
            yield
        except BaseException as exc:
            lines[number] = f"FAIL criterion {number}: {title} ({type(exc).__name__}: {exc})"
            print(lines[number])
            raise
        elapsed = time.perf_counter() - start
        ok = elapsed < limit
        lines[number] = (f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} "
                         f"({elapsed:.2f}s, limit {limit}s)")
        print(lines[number])
        assert ok, lines[number]

    return run


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for number in sorted(lines):
            terminalreporter.write_line(lines[number])
