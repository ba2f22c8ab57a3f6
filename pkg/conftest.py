import os
from pathlib import Path

import numpy as np
import pytest

# Keep test runs from writing dated log files next to the checkout
os.environ.setdefault("GNS_LOG_DIR", "")

from app.algebra import make_algebra
from app.states import diagonal_state, tracial_state

SCENARIO_DIR = Path(__file__).resolve().parent / "data" / "scenarios"


@pytest.fixture
def scenario_dir() -> Path:
    return SCENARIO_DIR


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def m2():
    return make_algebra([2])


@pytest.fixture
def diag_state(m2):
    """omega(a) = 0.25 a_11 + 0.75 a_22 on M_2."""
    return diagonal_state(m2, [0.25, 0.75])


@pytest.fixture
def tracial_m2(m2):
    return tracial_state(m2)
