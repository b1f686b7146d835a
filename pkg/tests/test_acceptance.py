"""Acceptance criteria, one test each.

Run ``pytest tests/test_acceptance.py`` for the per-criterion summary block, or
``python3 tests/test_acceptance.py`` for the bare pass/fail lines.  Tolerances
and runtime limits are pinned in :mod:`thermoprobe.thermolab.checks`.
"""
import sys

import pytest

from thermoprobe.thermolab.checks import CHECKS, run_check

RESULTS = {}


def test_pinned_tolerances():
    from thermoprobe.thermolab import checks

    assert checks.ROUTE_TOL == 1e-10
    assert checks.QFI_ROUTE_RTOL == 1e-8
    assert checks.DATA_PROCESSING_RTOL == 1e-9
    assert checks.DERIVATIVE_RTOL == 1e-6
    assert (checks.HIGH_T, checks.HIGH_T_TOL) == (1e6, 1e-8)
    assert checks.FIG5_MARGIN == 0.95
    assert [budget for *_, budget in CHECKS] == [5, 2, 5, 10, 2, 5, 1, 2, 2, None, None]


@pytest.mark.parametrize("number", [c[0] for c in CHECKS], ids=[f"criterion_{c[0]:02d}" for c in CHECKS])
def test_criterion(number):
    result = run_check(number)
    RESULTS[number] = result
    print(result.line())
    assert result.ok, result.line()


if __name__ == "__main__":
    failed = 0
    for number, *_ in CHECKS:
        result = run_check(number)
        print(result.line(), flush=True)
        failed += not result.ok
    sys.exit(1 if failed else 0)
