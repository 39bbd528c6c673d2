# tests/conftest.py
import logging

import numpy as np
import pytest

from hamlim.core.config import get_settings


@pytest.fixture
def rng() -> np.random.Generator:
    """
    Fixed-seed generator so every randomized test sees the same draws.
    """
    return np.random.default_rng(20240601)


@pytest.fixture(autouse=True)
def _reset_hamlim_state():
    """
    Drop the cached settings and any stderr handler a test installed.

    Handlers bind to the sys.stderr of the test that created them, which
    capsys closes afterwards.
    """
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()
    logger = logging.getLogger("hamlim")
    for handler in list(logger.handlers):
        if getattr(handler, "_hamlim_handler", False):
            logger.removeHandler(handler)
    logger.setLevel(logging.NOTSET)
