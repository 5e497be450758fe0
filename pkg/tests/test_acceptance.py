"""The 14 acceptance criteria, one test each, at the stated tolerances.

Each test records its ``CHECK ... PASS|FAIL`` line; the lines are printed
in the terminal summary.  A test fails unless its check passes within 60 s.
"""
import pytest

from foldcover.checks import CHECKS, PASS, run_check

TIME_LIMIT = 60.0
CHECK_LINES: list[str] = []


@pytest.mark.parametrize("name", list(CHECKS))
def test_acceptance(name):
    res = run_check(name)
    line = f"{res.line()} [{res.seconds:.1f}s]"
    CHECK_LINES.append(line)
    print(line)
    assert res.status == PASS, res.line()
    assert res.seconds < TIME_LIMIT, f"{name} took {res.seconds:.1f}s"
