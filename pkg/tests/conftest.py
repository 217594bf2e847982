import json
from pathlib import Path

import pytest

from wsim.fock import StateVector

TESTDATA = Path(__file__).parent / "testdata"


def golden_state(name: str) -> StateVector:
    return StateVector.from_json(json.loads((TESTDATA / name).read_text()))


@pytest.fixture
def bell_product():
    return golden_state("bell_product.json")


@pytest.fixture
def w4_golden():
    return golden_state("w4.json")


# criterion number -> (passed, description), from tests marked @pytest.mark.acceptance(n, desc)
ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or rep.when not in ("setup", "call"):
        return
    n, desc = mark.args
    if rep.when == "call" or not rep.passed:
        ACCEPTANCE_RESULTS[n] = (rep.passed, desc)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        ok, desc = ACCEPTANCE_RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {desc}")
