from pathlib import Path

import pytest

from ifcbridge.lattice import lattice_load

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"


@pytest.fixture(scope="session")
def two():
    return lattice_load("two-point")


@pytest.fixture(scope="session")
def L(two):
    return two["L"]


@pytest.fixture(scope="session")
def H(two):
    return two["H"]


@pytest.fixture(scope="session")
def diamond():
    return lattice_load({"name": "diamond", "points": ["bot", "A", "B", "top"],
                         "order": [["bot", "A"], ["bot", "B"], ["A", "top"], ["B", "top"]]})


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
