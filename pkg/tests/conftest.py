"""Shared fixtures: bundled diagrams and the reference 8a2 matrices."""

import os
import sys

import pytest

REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, REPO_ROOT)

from knotres.diagram import parse_pd  # noqa: E402
from knotres.exactlinalg import to_matrix  # noqa: E402

DATA_DIR = os.path.join(REPO_ROOT, "data")

TREFOIL_NEGATIVE = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"
TREFOIL_POSITIVE = "X(4,2,5,1) X(6,4,1,3) X(2,6,3,5)"

L_8A2A = [
    [-1, 1, 0, 0, 0],
    [0, -2, 1, 1, 0],
    [0, 0, -2, 1, 1],
    [1, 0, 1, -2, 0],
    [0, 1, 0, 0, -1],
]
L_8A2B = [
    [-1, 1, 0, 0, 0],
    [0, -2, 1, 0, 1],
    [1, 0, -2, 1, 0],
    [0, 1, 1, -2, 0],
    [0, 0, 0, 1, -1],
]
PINV75_8A2A = [
    [-48, -3, 12, 12, 27],
    [12, -18, -3, -3, 12],
    [17, 12, -23, 2, -8],
    [-8, 12, 2, -23, 17],
    [27, -3, 12, 12, -48],
]
PINV75_8A2B = [
    [-44, -4, 16, 21, 11],
    [16, -19, 1, 6, -4],
    [-9, 6, -24, 6, 21],
    [11, 1, -4, -24, 16],
    [26, 16, 11, -9, -44],
]
# det(L - x I), constant term first
CHARPOLY_8A2A = [0, -15, -32, -24, -8, -1]
CHARPOLY_8A2B = [0, -15, -31, -24, -8, -1]

BUNDLED = ["3a1", "5a2", "7a7", "9a41", "8a2A", "8a2B"]


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: exhaustive enumerations that take minutes; deselect with -m \"not slow\"")


def load_bundled(name):
    with open(os.path.join(DATA_DIR, "diagrams", f"{name}.pd")) as f:
        return parse_pd(f.read())


@pytest.fixture
def data_dir():
    return DATA_DIR


@pytest.fixture
def diagram_8a2A():
    return load_bundled("8a2A")


@pytest.fixture
def diagram_8a2B():
    return load_bundled("8a2B")


@pytest.fixture
def trefoil():
    """Standard all-positive trefoil (Tait weights -1)."""
    return parse_pd(TREFOIL_POSITIVE)


@pytest.fixture
def L_A():
    return to_matrix(L_8A2A)


@pytest.fixture
def L_B():
    return to_matrix(L_8A2B)
