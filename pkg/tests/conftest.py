"""Shared test plumbing: the acceptance suite's terminal summary.

Acceptance tests record one verdict line each; the hook below replays them
after the run so they are visible even when pytest captures test output.
"""

ACCEPTANCE_LINES: list[str] = []


def record_criterion(line: str) -> None:
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.line(line)
