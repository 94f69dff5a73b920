CRITERIA = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        ok, seconds, limit = CRITERIA[n]
        terminalreporter.write_line(
            f"CRITERION {n}: {'PASS' if ok else 'FAIL'} ({seconds:.2f}s, limit {limit}s)")
