"""Acceptance gate: every criterion at full size, one pass/fail line each."""
import pytest

from waring.acceptance import CHECKS, AcceptanceConfig

CFG = AcceptanceConfig()


@pytest.mark.parametrize("k,check", list(enumerate(CHECKS, start=1)), ids=[c.__name__ for c in CHECKS])
def test_criterion(k, check, capsys):
    result = check(CFG)
    with capsys.disabled():
        print(f"\ncriterion {k} {result.line()}")
    assert result.passed, result.detail
