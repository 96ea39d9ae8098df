"""Shared fixtures: deterministic RNGs and small natural-image crops."""

import numpy as np
import pytest
from skimage import data


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)


@pytest.fixture(scope="session")
def camera():
    """Full 512x512 camera test image in [0, 1]."""
    return data.camera().astype(np.float64) / 255.0


@pytest.fixture(scope="session")
def camera_crop(camera):
    """64x64 natural-image crop with edges and texture."""
    return camera[192:256, 192:256].copy()
