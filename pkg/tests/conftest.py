import numpy as np
import pytest

from sdmono.monopole import MonopoleConfig
from sdmono.twistor import build_poon_model


@pytest.fixture(scope="session")
def pair():
    return MonopoleConfig.from_heights([1.0, 2.0])


@pytest.fixture(scope="session")
def poon():
    return build_poon_model(1.75)


@pytest.fixture
def rng():
    return np.random.default_rng(0)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
