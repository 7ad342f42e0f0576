"""End-to-end acceptance suite.

Each criterion runs at the tolerance pinned in inflowshock.acceptance and
reports one PASS/FAIL line (visible with ``pytest -s`` or on failure).
Criteria 3/4 and 7/9 share cached simulations, so ordering matters for
wall time but not for results.
"""

import json

import pytest

from inflowshock.acceptance import CRITERIA, run_all

_results = {}


def _get(number):
    if number not in _results:
        res = run_all([number])[0]
        _results[number] = res
        print(f"\n{'PASS' if res.passed else 'FAIL'}  criterion {res.number}: {res.name} "
              f"[{res.elapsed:.1f}s]")
    return _results[number]


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    res = _get(number)
    assert res.passed, json.dumps(res.details, indent=2, default=str)


if __name__ == "__main__":
    failures = 0
    for res in run_all():
        print(f"{'PASS' if res.passed else 'FAIL'}  criterion {res.number}: {res.name} "
              f"[{res.elapsed:.1f}s]")
        if not res.passed:
            failures += 1
            print(json.dumps(res.details, indent=2, default=str))
    raise SystemExit(failures)
