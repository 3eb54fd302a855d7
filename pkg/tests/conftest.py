import numpy as np
import pytest
from hypothesis import settings

# Deterministic property tests: same examples every run.
settings.register_profile("repro", derandomize=True, deadline=None)
settings.load_profile("repro")


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)
