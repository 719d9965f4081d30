"""End-to-end acceptance checks, one per library-level guarantee.

Each test delegates to :mod:`nsolab.acceptance` (the same code behind
``nso-lab verify``) and prints its pass/fail line; tolerances are pinned
inside the check functions.  Run with ``pytest -s tests/test_acceptance.py``
to see the table.
"""

import pytest

from nsolab import acceptance


@pytest.mark.parametrize("check", acceptance.ALL_CHECKS,
                         ids=[fn.__name__ for fn in acceptance.ALL_CHECKS])
def test_acceptance(check):
    result = check()
    status = "PASS" if result.passed else "FAIL"
    print(f"[{status}] {result.number:2d} {result.name}: {result.detail} "
          f"({result.seconds:.1f}s)")
    assert result.passed, f"{result.name}: {result.detail}"
