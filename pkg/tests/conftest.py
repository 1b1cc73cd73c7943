"""Shared pytest plumbing: acceptance criterion reporting."""

_CRITERION_LINES = []


def record_criterion(number: int, passed: bool, detail: str) -> None:
    """Queue a one-line verdict, echoed in the terminal summary."""
    line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {detail}"
    _CRITERION_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERION_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(_CRITERION_LINES):
        terminalreporter.write_line(line)
