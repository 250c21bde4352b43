import random

import pytest

_results: dict = {}
_titles: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            n = mark.args[0]
            _titles[n] = mark.args[1]
            _results.setdefault(n, [])


def pytest_runtest_logreport(report):
    if report.when not in ("setup", "call") or "criterion" not in report.keywords:
        return
    for n in _results:
        if f"criterion{n}_" in report.nodeid.replace("test_criterion", "criterion"):
            if report.when == "call" or report.failed:
                _results[n].append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        runs = _results[n]
        verdict = "PASS" if runs and all(runs) else ("FAIL" if runs else "NOT RUN")
        terminalreporter.write_line(f"criterion {n}: {verdict}  {_titles[n]}")


@pytest.fixture
def rng():
    return random.Random(20240611)
