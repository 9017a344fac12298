# Verdict lines recorded by the acceptance suite (tests/test_acceptance.py);
# echoed at the end of the run so every criterion's PASS/FAIL line is visible
# in the terminal output even when capture hides passing tests' stdout.
VERDICTS = []


def pytest_terminal_summary(terminalreporter):
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(VERDICTS, key=lambda s: int(s.split(":")[0].split()[1])):
        terminalreporter.write_line(line)
