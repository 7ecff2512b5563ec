"""Hypothesis strategies shared by the test modules."""

import numpy as np
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hsf.scale import make_scale

# zero or magnitudes in [1e-100, 10]: subnormal coordinates have no relative precision to check
finite = st.one_of(st.just(0.0), st.floats(1e-100, 10), st.floats(-10, -1e-100))
indices = st.integers(-4, 4)


@st.composite
def weights(draw, min_n=1, max_n=12):
    n = draw(st.integers(min_n, max_n))
    return draw(arrays(np.float64, (n,), elements=st.floats(1.0, 50.0)))


@st.composite
def scales(draw, min_n=1, max_n=12):
    return make_scale("explicit", weights=draw(weights(min_n, max_n)))


def complex_arrays(shape):
    return st.tuples(
        arrays(np.float64, shape, elements=finite), arrays(np.float64, shape, elements=finite)
    ).map(lambda t: t[0] + 1j * t[1])


@st.composite
def scale_and_family(draw, min_n=1, max_n=10, max_count=14):
    sc = draw(scales(min_n, max_n))
    m = draw(st.integers(1, max_count))
    psi = draw(complex_arrays((sc.n, m)))
    return sc, psi
