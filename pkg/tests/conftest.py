"""Shared pytest wiring: surface the acceptance criterion lines.

The acceptance tests print one PASS/FAIL line each; stdout capture would
hide the passing ones, so the lines are also collected here and replayed
in the terminal summary of every run.
"""

criterion_lines = []


def record_criterion(line: str) -> None:
    criterion_lines.append(line)


def pytest_terminal_summary(terminalreporter):
    if criterion_lines:
        terminalreporter.section("acceptance criteria")
        for line in criterion_lines:
            terminalreporter.write_line(line)
