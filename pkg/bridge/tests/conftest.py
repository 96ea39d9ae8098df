"""Shared fixtures for the bridge tests."""

import numpy as np
import pytest


@pytest.fixture(scope="session")
def texture64():
    """Deterministic 64x64 uint8 test image: crossed waves, a step edge,
    mild noise.  Built from numpy only so the fixture needs no assets."""
    yy, xx = np.meshgrid(np.arange(64.0), np.arange(64.0), indexing="ij")
    plane = (0.55
             + 0.22 * np.cos(2.0 * np.pi * xx / 23.0) * np.cos(2.0 * np.pi * yy / 17.0)
             + 0.12 * (xx > 40))
    plane += np.random.default_rng(64).normal(scale=0.02, size=plane.shape)
    return np.clip(plane * 255.0, 0.0, 255.0).astype(np.uint8)
