"""All fifteen acceptance criteria at their stated tolerances, one line each in the summary."""

import pytest

from conftest import ACCEPTANCE_LINES
from kawahara import acceptance


@pytest.mark.parametrize("criterion", acceptance.CRITERIA, ids=lambda c: f"{c.number:02d}-{c.key}")
def test_criterion(criterion):
    rec = acceptance.run_criterion(criterion, seed=0)
    line = acceptance.summary_line(rec)
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert rec["passed"], acceptance.dumps(rec)
