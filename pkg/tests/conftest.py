import pytest

from knotband.invariants import QEvaluator
from knotband.notation import DEFAULT_DATA, load_knot_table

# criterion number -> (passed, detail), filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def table():
    return load_knot_table(DEFAULT_DATA)


@pytest.fixture(scope="session")
def evaluator():
    return QEvaluator()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
