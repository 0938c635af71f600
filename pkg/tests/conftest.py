"""Shared pytest plumbing: the acceptance checklist printed after the run."""

# one "criterion NN: PASS/FAIL" line per acceptance test, in execution order
REPORT_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not REPORT_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in REPORT_LINES:
        terminalreporter.write_line(line)
