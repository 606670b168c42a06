from pathlib import Path

import pytest

DATA = Path(__file__).resolve().parent.parent / "src" / "spectopo" / "data"
GOLDEN = Path(__file__).resolve().parent / "golden"

ACCEPTANCE_LINES: list = []


@pytest.fixture
def data_dir() -> Path:
    return DATA


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
