import numpy as np
import pytest
from hypothesis import strategies as st

from edgeworth.economy import Allocation, UtilityParams
from edgeworth.networks import weights_from_probabilities


@pytest.fixture
def symmetric_pair():
    """x_1 = (3, 1), x_2 = (1, 3), both alpha = 0.5, single link."""
    return (
        Allocation.from_agents([(3.0, 1.0), (1.0, 3.0)]),
        UtilityParams.two_goods([0.5, 0.5]),
        weights_from_probabilities([0.5, 0.5]),
    )


def random_exponents(rng, m, n):
    raw = rng.uniform(0.2, 1.0, size=(m, n))
    return raw / raw.sum(axis=0)


def random_probabilities(rng, n):
    p = rng.dirichlet(np.ones(n))
    return p / p.sum()


positive = st.floats(min_value=0.05, max_value=20.0, allow_nan=False, allow_infinity=False)


@st.composite
def gradient_pairs(draw, m=None):
    m = draw(st.integers(2, 5)) if m is None else m
    a = draw(st.lists(positive, min_size=m, max_size=m))
    b = draw(st.lists(positive, min_size=m, max_size=m))
    return np.array(a), np.array(b)
