from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from lcmodel.combinat import WeightDatum

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

F = Fraction


@st.composite
def weight_data(draw, min_n=5, max_n=7):
    n = draw(st.integers(min_n, max_n))
    ws = draw(st.lists(
        st.builds(lambda p, q: F(min(p, q), q), st.integers(1, 12), st.integers(1, 12)),
        min_size=n, max_size=n,
    ))
    if sum(ws) <= 2:
        ws = [F(1)] * 3 + ws[3:]
    return WeightDatum(ws)


@pytest.fixture
def a_sec():
    """Two light points that may collide."""
    return WeightDatum([1, 1, 1, F(1, 4), F(1, 4)])


@pytest.fixture
def a_con():
    """Three light points; the triple is contracted."""
    return WeightDatum([1, 1, F(1, 4), F(1, 4), F(1, 4)])
