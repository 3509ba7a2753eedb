"""Every acceptance criterion at its exact tolerance, one pass/fail line each."""

import time

import pytest

from species_crystal.acceptance import CRITERIA


@pytest.mark.parametrize("key,title,check", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(key, title, check, capsys):
    start = time.time()
    ok, detail = check()
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {key}: {title} ({time.time() - start:.1f}s) - {detail}")
    assert ok, detail
