"""The acceptance criteria, one test each, at their stated tolerances.

Each test prints a ``[PASS]``/``[FAIL]`` line; the lines are repeated in the
terminal summary.  The greedy criterion reuses the duality runs of the
sandwich and hard-distribution criteria, so the file order matters for speed
but not for correctness.
"""

import pytest

from depth3lab.acceptance import CRITERIA, DEFAULT_SEED, run_criterion


@pytest.mark.acceptance
@pytest.mark.parametrize("name", list(CRITERIA))
def test_criterion(name, cost_cache, acceptance_log, capsys):
    res = run_criterion(name, cost_cache, DEFAULT_SEED)
    line = res.line()
    acceptance_log.append(line)
    with capsys.disabled():
        print("\n" + line)
    assert res.ok, f"{line}\n{res.detail}"
