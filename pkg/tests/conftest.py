import math

import numpy as np
import pytest

from dctembed.dct_core import make_plan


def naive_dct(seq):
    """Direct double loop over the DCT-II definition with math.cos."""
    n_len = len(seq)
    out = []
    for k in range(n_len):
        scale = math.sqrt(1.0 / n_len) if k == 0 else math.sqrt(2.0 / n_len)
        out.append(scale * sum(v * math.cos(math.pi / n_len * (n + 0.5) * k) for n, v in enumerate(seq)))
    return out


@pytest.fixture(scope="session")
def plan():
    return make_plan(400)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE_LINES = []


def report(criterion, ok, detail):
    """Record one acceptance line; the test still asserts ``ok`` itself."""
    ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {criterion}: {detail}")
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
