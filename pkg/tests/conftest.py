import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from majority_gnp import Coloring, Graph  # noqa: E402


@pytest.fixture
def k4():
    return Graph.complete(4)


@pytest.fixture
def k5():
    return Graph.complete(5)


def random_flags(rs, n, p=0.5):
    return rs.random(n) < p


@pytest.fixture
def rs():
    return np.random.default_rng(20240601)


def coloring(n, red):
    return Coloring.from_red(n, red)
