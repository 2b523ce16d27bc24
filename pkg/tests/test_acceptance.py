"""The primary acceptance criteria, one test each.

Every test prints a single ``[PASS]``/``[FAIL]`` line; the lines are also
collected into a summary section at the end of the pytest run.
"""

import pytest

from daha_lab import acceptance


@pytest.mark.parametrize("number", sorted(acceptance.CRITERIA))
def test_criterion(number, acceptance_lines):
    res = acceptance.run(number)
    line = res.line()
    print(line)
    acceptance_lines.append(line)
    assert res.passed, res.details
    assert res.seconds < res.limit, f"took {res.seconds:.1f}s, limit {res.limit:.0f}s"
