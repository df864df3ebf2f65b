"""Test fixtures."""

import json
import os

import numpy as np
import pytest

from ns2d_bdf2.initial import random_initial_field
from ns2d_bdf2.spectral import Grid

MOCKED_DATA = os.path.join(os.path.dirname(os.path.abspath(__file__)), "mocked_data")


def load_expected_result(test_name, case="normal"):
    path = os.path.join(MOCKED_DATA, test_name, case, "expected_result.json")
    with open(path, "r") as fh:
        return json.load(fh)


@pytest.fixture
def expected_result(request):
    """expected_result.json of the requesting test from mocked_data/<test>/normal/."""
    return load_expected_result(request.node.originalname or request.node.name)


@pytest.fixture(scope="session")
def grid16():
    return Grid(16)


@pytest.fixture(scope="session")
def grid32():
    return Grid(32)


@pytest.fixture(scope="session")
def grid64():
    return Grid(64)


@pytest.fixture
def random_field():
    """random_field(seed, grid, amplitude=1.0): Nyquist-free random field."""

    def make(seed, grid, amplitude=1.0, slope=-1.0):
        return random_initial_field(seed, grid, slope, amplitude)

    return make


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)
