import random

import pytest

from secondbest.cf import CFExpansion

ACCEPTANCE_LINES = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or (report.when != "call" and report.passed):
        return
    number, title = marker.args
    if hasattr(item, "callspec"):
        title += f" [{item.callspec.id}]"
    status = "PASS" if report.passed else "FAIL"
    ACCEPTANCE_LINES.append((number, f"{status}  criterion {number:>2}: {title} ({report.duration:.2f} s)"))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def random_periodic(rng, max_digit=5, max_pre=3, max_per=4):
    pre = tuple(rng.randint(1, max_digit) for _ in range(rng.randint(0, max_pre)))
    per = tuple(rng.randint(1, max_digit) for _ in range(rng.randint(1, max_per)))
    return CFExpansion(rng.randint(-3, 3), pre, per)


@pytest.fixture
def rng():
    return random.Random(20261014)
