"""Shared fixtures for the test suite."""

from pathlib import Path

import numpy as np
import pytest

FIXTURES_DIR = Path(__file__).parent / "fixtures"


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def fixtures_dir():
    return FIXTURES_DIR


@pytest.fixture
def rand_u8(rng):
    """Factory for random uint8 images: rand_u8((h, w)) or ((h, w, 3))."""
    def make(shape):
        return rng.integers(0, 256, size=shape, dtype=np.uint8)
    return make
