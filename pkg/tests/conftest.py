import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from plansofai.blocksworld import domain  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def bw():
    return domain()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
