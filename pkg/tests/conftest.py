import random
from pathlib import Path

import pytest

from petrilive.samples import drain, running_example, weak_doubling

FIXTURES = Path(__file__).parent / "fixtures"

# Running example, written out once for readability in assertions.
T_ALL = ["t1", "t2", "t3"]


@pytest.fixture
def net():
    return running_example()


@pytest.fixture
def drain_net():
    return drain()


@pytest.fixture
def doubling_net():
    return weak_doubling()


@pytest.fixture
def rng():
    return random.Random(20161)


def live_reference(m):
    """Reference predicate for live markings of the running example."""
    return m[1] + m[2] >= 1 and (m[0] + m[2]) % 2 == 1


def reach_from_310(m):
    """Reachability set of (3,1,0): (odd,1,0) or (even,0,1)."""
    x, y, z = m
    return (y, z) == (1, 0) and x % 2 == 1 or (y, z) == (0, 1) and x % 2 == 0


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
