"""Shared pytest plumbing: the acceptance run prints one line per criterion."""

import pytest

_CRITERION_LINES: list[str] = []


@pytest.fixture(scope="session")
def criterion_log() -> list[str]:
    return _CRITERION_LINES


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERION_LINES:
            terminalreporter.write_line(line)
