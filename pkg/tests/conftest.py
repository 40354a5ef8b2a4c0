import numpy as np
import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def gate():
    """Record one PASS/FAIL line per acceptance criterion, then assert it."""

    def record(number: int, ok: bool, summary: str) -> None:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {summary}"
        print(line)
        ACCEPTANCE_LINES.append(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
