import sys
from pathlib import Path

import pytest

from condpres.logic import parse_kb

KB_DIR = Path(__file__).resolve().parent.parent / "kbs"
DATA_DIR = Path(__file__).resolve().parent / "data"


def load_kb(name: str):
    return parse_kb((KB_DIR / f"{name}.ckb").read_text())


def load_table(name: str) -> list[list[str]]:
    rows = []
    for line in (DATA_DIR / name).read_text().splitlines():
        if line.strip() and not line.startswith("#"):
            rows.append(line.split("  "))
    return rows


@pytest.fixture
def penguin():
    return load_kb("penguin")


@pytest.fixture
def nonminimal():
    return load_kb("nonminimal")


@pytest.fixture
def swedes():
    return load_kb("swedes")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if not mod or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[num])
