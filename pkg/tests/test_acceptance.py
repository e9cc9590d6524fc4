"""Acceptance criteria at their stated tolerances.

Each test prints one PASS/FAIL line.  Run standalone with
``python tests/test_acceptance.py`` for the summary alone.
"""
import sys

import pytest

from forage.acceptance import CRITERIA

RUNTIME_LIMITS = {1: 30, 2: 120, 3: 10, 4: 1200, 5: 1, 6: 1200, 7: 1200, 8: 300, 9: 120}


@pytest.mark.slow
@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    res = CRITERIA[number]()
    with capsys.disabled():
        print(f"\n{res.line()}")
        for failure in res.failures[:10]:
            print(f"    failing: {failure}")
    assert res.passed, res.failures[:5]
    assert res.seconds < RUNTIME_LIMITS[number], f"runtime {res.seconds:.1f}s"


if __name__ == "__main__":
    ok = True
    for number in sorted(CRITERIA):
        res = CRITERIA[number]()
        ok = ok and res.passed and res.seconds < RUNTIME_LIMITS[number]
        print(res.line(), flush=True)
    sys.exit(0 if ok else 1)
