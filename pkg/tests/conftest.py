"""Shared test plumbing: the acceptance reporter.

Acceptance tests record one line each; pytest prints them after the run
so the per-criterion verdicts are visible without -s.
"""

ACCEPTANCE_LINES: list = []


def record(criterion: int, status: str, detail: str) -> None:
    ACCEPTANCE_LINES.append((criterion, f"criterion {criterion}: {status} - {detail}"))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
