import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from games import (both_repair_strategy, nondeterminism_game, production_line_game,  # noqa: E402
                   two_robot_unfolding, winning_strategy)

_criteria = {}


@pytest.fixture
def pl2():
    return production_line_game()


@pytest.fixture
def pl2_unfolding():
    return two_robot_unfolding()


@pytest.fixture
def winning():
    return winning_strategy()


@pytest.fixture
def repair_all():
    return both_repair_strategy()


@pytest.fixture
def nondet():
    return nondeterminism_game()


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if "test_acceptance.py" not in report.nodeid or not name.startswith("test_criterion_"):
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        outcome = "SKIP" if report.skipped else ("PASS" if report.passed else "FAIL")
        _criteria[name] = outcome


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria, key=lambda n: int(n.split("_")[2])):
        terminalreporter.write_line(f"{_criteria[name]:4}  {name}")
