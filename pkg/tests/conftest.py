import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from thetaloci import Tolerance  # noqa: E402

#: filled by test_acceptance.py: number -> (title, passed, seconds)
ACCEPTANCE_RESULTS = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def tol():
    return Tolerance()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        title, passed, secs = ACCEPTANCE_RESULTS[n]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {n:2d}: {title} ({secs:.2f} s)")
