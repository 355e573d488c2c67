import numpy as np
import pytest

from cusp_atlas.core.config import settings


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(autouse=True)
def restore_settings():
    """The CLI overrides settings in place; undo that after every test."""
    saved = settings.model_copy()
    yield
    for name in ("SEED", "TAU_RANK", "LOG_LEVEL"):
        setattr(settings, name, getattr(saved, name))

