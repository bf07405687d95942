import numpy as np
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from stochnorm.distributions import DiscreteRV
from stochnorm.stats import ProductVector

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def rvs(draw, max_atoms=3, lo=0.0, hi=4.0):
    k = draw(st.integers(1, max_atoms))
    vals = draw(st.lists(st.floats(lo, hi, allow_nan=False), min_size=k, max_size=k))
    weights = draw(st.lists(st.floats(0.05, 1.0), min_size=k, max_size=k))
    p = np.array(weights) / sum(weights)
    return DiscreteRV(vals, p)


@st.composite
def product_vectors(draw, max_m=4, max_atoms=3):
    m = draw(st.integers(1, max_m))
    return ProductVector([draw(rvs(max_atoms)) for _ in range(m)])


@st.composite
def nonneg_vectors(draw, min_size=1, max_size=6):
    return np.array(draw(st.lists(st.floats(0.0, 10.0, allow_nan=False),
                                  min_size=min_size, max_size=max_size)))
