"""Acceptance criteria 1-11 over the desk-scale cases, each at a geometric and a
generic parameter assignment. Every criterion prints one summary line."""
import pytest

from capelli.catalog import DESK_CASES
from capelli.criteria import CRITERIA, TITLES, case_I2_dimension

from conftest import case_label, desk

STRUCTURES = [(cid, size, kind) for cid, size in DESK_CASES for kind in ("geo", "gen")]


def _report(capsys, number, results, extra_failures=()):
    failures = [f"{r.case}: {f}" for r in results for f in r.failures] + list(extra_failures)
    checks = sum(r.checked for r in results)
    secs = sum(r.seconds for r in results)
    status = "PASS" if not failures else "FAIL"
    with capsys.disabled():
        print(f"\ncriterion {number:2d} {status}  {len(results)} structures, {checks} checks, "
              f"{secs:.1f}s  [{TITLES[number]}]")
        for f in failures[:10]:
            print(f"    {f}")
    return failures


@pytest.mark.slow
@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    results = []
    for cid, size, kind in STRUCTURES:
        r = CRITERIA[number](desk(cid, size, kind))
        r.case = f"{case_label(cid, size)}-{kind}"
        results.append(r)
        assert r.checked > 0
    extra = []
    if number == 9:
        for kind in ("geo", "gen"):
            got, expect = case_I2_dimension(desk("I", {"n": 2}, kind))
            if got != expect:
                extra.append(f"I-n2-{kind}: d_e1 = {got}, expected {expect}")
        got, _ = case_I2_dimension(desk("I", {"n": 2}, "geo"))
        if got != 4:
            extra.append(f"I-n2-geo: d_e1 = {got}, expected 4")
    assert not _report(capsys, number, results, extra)
