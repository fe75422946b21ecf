import pytest

from deligne_action.chains import build_fundamental_class
from deligne_action.scenario import load_builtin


@pytest.fixture(scope="session")
def scenarios():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = load_builtin(name)
        return cache[name]

    return get


@pytest.fixture(scope="session")
def cycles(scenarios):
    cache = {}

    def get(name):
        if name not in cache:
            sc = scenarios(name)
            cache[name] = build_fundamental_class(sc.cover, sc.faces)
        return cache[name]

    return get


# filled by test_acceptance; echoed after the run so the PASS/FAIL lines survive output capture
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
