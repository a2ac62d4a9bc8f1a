"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the report lines.
"""
import pytest

from fractalzeta import acceptance

CIDS = [cid for cid, _, _ in acceptance.CRITERIA]


def test_catalog_is_complete():
    assert len(CIDS) == 14
    assert CIDS == sorted(CIDS)
    assert set(acceptance.SUITES["all"]) == set(CIDS)


@pytest.mark.parametrize("cid", CIDS)
def test_criterion(cid):
    r = acceptance.run_criterion(cid)
    status = "PASS" if r.passed else "FAIL"
    print(f"{status} {r.cid} {r.title}: {r.detail}")
    assert r.passed, f"{r.cid} {r.title}: {r.detail}"
