def pytest_terminal_summary(terminalreporter):
    from tests.acceptance_checks import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[number])
