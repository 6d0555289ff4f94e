"""Acceptance report: one PASS/FAIL line per criterion in the terminal summary."""

_outcomes = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _outcomes.setdefault(mark.args, [])


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when == "teardown":
        return
    if call.when == "setup" and call.excinfo is None:
        return
    _outcomes.setdefault(mark.args, []).append(call.excinfo is None)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), results in sorted(_outcomes.items()):
        status = "PASS" if results and all(results) else "FAIL"
        terminalreporter.write_line(f"{status}  criterion {number}: {title}")
