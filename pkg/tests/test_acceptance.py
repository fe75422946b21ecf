"""Acceptance criteria 1-9, each at its stated tolerance and runtime budget.

Every criterion prints one ``criterion N: PASS|FAIL`` line. The lines are
repeated in the terminal summary, so ``-s`` is optional.
"""

import pytest

from deligne_action.suite import CRITERIA, Context, run_criterion

from conftest import ACCEPTANCE


@pytest.fixture(scope="module")
def ctx():
    return Context(seed=0)


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(ctx, number):
    res = run_criterion(number, ctx)
    ACCEPTANCE[number] = res.line()
    print(res.line())
    assert res.passed, f"{res.line()}\n{res.report}"

