"""Acceptance criteria, one test per criterion.  Each test prints a single
PASS/FAIL line (shown even under output capture)."""
import pytest

from freealg.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[f"{c[0]:02d}-{c[1].replace(' ', '-')}" for c in CRITERIA])
def test_criterion(number, capsys):
    r = run_criterion(number, seed=0)
    with capsys.disabled():
        print("\n" + r.line())
    assert r.passed, r.detail
