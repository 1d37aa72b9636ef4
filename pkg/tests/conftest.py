import os
from pathlib import Path

import pytest

from zerodensity.arith import build_arith_tables

ROOT = Path(__file__).resolve().parent.parent
DATA = Path(__file__).resolve().parent / "data"

ACCEPTANCE_LINES = []


def zeros_dataset_path():
    env = os.environ.get("ZERODENSITY_ZEROS")
    path = Path(env) if env else ROOT / "data" / "zeros_1e5.txt"
    return path if path.is_file() else None


@pytest.fixture(scope="session")
def tables_1e6():
    return build_arith_tables(10**6)


@pytest.fixture(scope="session")
def tables_small():
    return build_arith_tables(5000)


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion."""

    def record(number, title, ok, detail=""):
        status = "PASS" if ok else "FAIL"
        ACCEPTANCE_LINES.append(f"[{status}] criterion {number:>2}: {title}" + (f" ({detail})" if detail else ""))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
