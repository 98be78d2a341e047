"""Acceptance criteria; one PASS/FAIL line per criterion (run with ``-s`` to see them)."""

import pytest

from aqwalk.acceptance import CRITERIA


@pytest.mark.acceptance
@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"c{c.number:02d}" for c in CRITERIA])
def test_criterion(criterion):
    ok, detail = criterion.check()
    print(f"\n[{'PASS' if ok else 'FAIL'}] {criterion.number:2d} {criterion.name}: {detail}")
    assert ok, detail
