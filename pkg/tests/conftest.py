import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def complex_vectors(min_size=2, max_size=6, bound=2.0):
    comp = st.builds(complex, st.floats(-bound, bound), st.floats(-bound, bound))
    return st.lists(comp, min_size=min_size, max_size=max_size).map(lambda v: np.array(v, dtype=complex))


def seeds():
    return st.integers(0, 2**32 - 1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
