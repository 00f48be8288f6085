from __future__ import annotations

from pathlib import Path

import pytest

from sdslink.poly import VarTable

DATA = Path(__file__).parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def xyzt() -> VarTable:
    return VarTable.of("x y z t")


def pytest_terminal_summary(terminalreporter) -> None:
    from . import test_acceptance

    if not test_acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(test_acceptance.RESULTS):
        terminalreporter.write_line(test_acceptance.line(number, test_acceptance.RESULTS[number]))
