import json
from pathlib import Path

import pytest

from varcat.geometry import Variety
from varcat.parsing import parse_polynomial

CORPUS = Path(__file__).resolve().parent.parent / "corpus"

ACCEPTANCE_LINES = []


def poly(text, variables=("x",)):
    return parse_polynomial(text, list(variables))


def load(name):
    return json.loads((CORPUS / name).read_text())


@pytest.fixture
def A1():
    return Variety("A1", ["x"])


@pytest.fixture
def A2():
    return Variety("A2", ["x", "y"])


@pytest.fixture
def cusp():
    return Variety("cusp", ["x", "y"], [poly("y^2 - x^3", "xy")])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
