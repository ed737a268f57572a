from __future__ import annotations

import pytest

from valueprobe.core import load_questionnaire

CRITERIA = {
    1: "benchmark fidelity",
    2: "circumplex recovery",
    3: "anchored curve",
    4: "procrustes exactness",
    5: "statistic oracles",
    6: "protocol round-trip",
    7: "parser robustness",
    8: "replay regression",
}

_outcomes: dict[int, list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion this test checks")


def pytest_runtest_logreport(report):
    n = getattr(report, "criterion", None)
    if n is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _outcomes.setdefault(n, []).append(report.passed)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = marker.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n, name in CRITERIA.items():
        results = _outcomes.get(n)
        if results is None:
            status = "NOT RUN"
        else:
            status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"criterion {n} ({name}): {status}")


@pytest.fixture(scope="session")
def questionnaire():
    return load_questionnaire()
