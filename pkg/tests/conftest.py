from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import three_user_problem, two_user_problem


@pytest.fixture
def two_user():
    return two_user_problem()


@pytest.fixture
def three_user():
    return three_user_problem()
