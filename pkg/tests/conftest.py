"""Shared fixtures and small builders used across the suite."""

import numpy as np
import pytest

from uwrestore import ImageBuf


def random_image(seed: int, channels: int = 3, height: int = 16, width: int = 16) -> ImageBuf:
    rng = np.random.default_rng(seed)
    return ImageBuf(rng.random((channels, height, width)))


def constant_image(value: float, channels: int = 3, height: int = 8, width: int = 8) -> ImageBuf:
    return ImageBuf(np.full((channels, height, width), value))


@pytest.fixture(scope="session")
def textured_frame():
    from uwrestore.scenes import seabed_scene

    return seabed_scene(seed=0, size=128)
