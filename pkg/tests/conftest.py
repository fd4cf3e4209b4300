import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture(autouse=True)
def _cache_dir(tmp_path, monkeypatch):
    # keep the irreducibility cache out of the user's home directory
    monkeypatch.setenv("MXG_CACHE_DIR", str(tmp_path / "mxg-cache"))


TOY_NAMES = ["toy4-7", "toy4-11", "toy4-13", "toy8-11", "toy8-13"]


# one line per acceptance criterion, filled by test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[0][1:])):
            terminalreporter.write_line(line)
