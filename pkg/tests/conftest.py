import time
from contextlib import contextmanager

import pytest

_ACCEPTANCE: dict[int, str] = {}


class Criterion:
    """Collects the verdict of one acceptance criterion, timed."""

    def __init__(self, number, title, limit):
        self.number, self.title, self.limit = number, title, limit
        self.checks: list[tuple[str, bool]] = []
        self.notes: list[str] = []
        self.seconds = None

    def check(self, label, ok):
        self.checks.append((label, bool(ok)))

    def note(self, text):
        self.notes.append(text)

    @property
    def passed(self):
        return all(ok for _, ok in self.checks)

    def line(self):
        verdict = "PASS" if self.passed else "FAIL"
        failed = [label for label, ok in self.checks if not ok]
        detail = "; ".join(self.notes + [f"failed: {f}" for f in failed])
        return (f"[{verdict}] criterion {self.number:2d} {self.title} "
                f"({self.seconds:.2f}s / {self.limit:g}s) {detail}").rstrip()


@pytest.fixture
def criterion():
    @contextmanager
    def run(number, title, limit):
        c = Criterion(number, title, limit)
        start = time.perf_counter()
        try:
            yield c
        finally:
            c.seconds = time.perf_counter() - start
            c.check(f"runtime under {limit:g}s", c.seconds < limit)
            _ACCEPTANCE[number] = c.line()
            print(c.line())
        assert c.passed, c.line()
    return run


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[number])
