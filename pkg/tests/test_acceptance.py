"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line."""
import pytest

from grpiso.acceptance import NAMES, fault_injected, run_criterion

# wall-clock limits in seconds, per criterion
LIMITS = {1: 1.0, 2: 600.0, 3: 60.0, 4: 120.0, 5: 60.0, 6: 300.0, 7: 60.0, 8: 120.0, 9: 300.0}


def test_limits_are_pinned():
    assert {n: limit for n, (_, limit) in NAMES.items()} == LIMITS


@pytest.mark.parametrize("number", sorted(LIMITS))
def test_criterion(number, capsys):
    res = run_criterion(number, seed=0)
    with capsys.disabled():
        print("\n" + res.line())
    assert res.elapsed <= LIMITS[number]
    assert res.passed, res.detail


def test_injected_fault_is_detected(capsys):
    with fault_injected():
        res = run_criterion(3, seed=0)
    with capsys.disabled():
        print("\n(fault injected) " + res.line())
    assert not res.passed
