"""Acceptance suite: one test per criterion, printing a pass/fail line each.

Bounds live in chmass.verification and are fixed; run with ``pytest -s``
to see the per-criterion lines.
"""

import pytest

from chmass.verification import CRITERIA, run_all


@pytest.fixture(scope="module")
def summary():
    return run_all(tol_scale=1.0)


@pytest.mark.parametrize("index", range(len(CRITERIA)), ids=[c[0] for c in CRITERIA])
def test_criterion(summary, index):
    result = summary.results[index]
    status = "PASS" if result.passed else "FAIL"
    print(f"[{status}] criterion {result.cid} ({result.title}) in {result.seconds:.2f}s")
    for check in result.checks:
        mark = "ok " if check.passed else "BAD"
        print(f"    [{mark}] {check.name}: value={check.value:.3e} bound={check.bound:.3e}")
    failed = [c for c in result.checks if not c.passed]
    assert not failed, (
        f"criterion {result.cid} failed: "
        + "; ".join(f"{c.name} value={c.value!r} bound={c.bound!r}" for c in failed)
    )


def test_total_runtime(summary):
    total = sum(r.seconds for r in summary.results)
    print(f"acceptance suite wall time: {total:.1f}s")
    assert total < 60.0
