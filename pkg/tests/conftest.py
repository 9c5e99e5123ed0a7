"""Acceptance bookkeeping: one PASS/FAIL line per numbered criterion."""
import pytest

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(n, title): numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        n, title = mark.args
        passed, _ = _RESULTS.get(n, (True, title))
        _RESULTS[n] = (passed and report.passed, title)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        passed, title = _RESULTS[n]
        terminalreporter.write_line(f"ACCEPTANCE {n:>2} {'PASS' if passed else 'FAIL'}  {title}")
