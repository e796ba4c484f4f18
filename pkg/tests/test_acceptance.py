"""One test per acceptance criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines.
"""

import time

import pytest

from definetti import acceptance


@pytest.mark.parametrize("cid,name,check", acceptance.CHECKS,
                         ids=["criterion_%d" % c for c, _, _ in acceptance.CHECKS])
def test_criterion(cid, name, check, capsys):
    start = time.monotonic()
    ok, detail = check()
    line = "[%s] criterion %d %s: %s (%.1fs)" % ("PASS" if ok else "FAIL", cid, name, detail,
                                                time.monotonic() - start)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line
