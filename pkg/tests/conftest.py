from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"
LISTINGS = DATA / "listings"


@pytest.fixture
def data_dir():
    return DATA


def listing(name: str) -> bytes:
    return (LISTINGS / name).read_bytes()


_ACCEPTANCE: list[str] = []


@pytest.fixture
def criterion(request):
    """Call with (ok, detail); records one PASS/FAIL line per criterion."""
    def record(ok: bool, detail: str):
        _ACCEPTANCE.append(f"{'PASS' if ok else 'FAIL'}  {request.node.name}: {detail}")
        assert ok, detail
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
