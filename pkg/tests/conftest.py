import pytest

from rbcom.config import default_config
from rbcom.link import evaluate_link


@pytest.fixture(scope="session", params=["L120", "L10"])
def case(request):
    return request.param


@pytest.fixture(scope="session")
def nominal_reports():
    return {c: evaluate_link(default_config(c)) for c in ("L120", "L10")}


@pytest.fixture(scope="session")
def nominal_model(nominal_reports):
    return nominal_reports["L120"].model


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.LINES):
        terminalreporter.write_line(line)
