import pytest
from hypothesis import settings, strategies as st

from qhyper.series import Monomial, Series

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

PARAMS = ("a", "b", "c")


@st.composite
def monomials(draw, lo=-5, hi=10):
    q = draw(st.integers(lo, hi))
    exps = {p: draw(st.integers(0, 2)) for p in draw(st.sets(st.sampled_from(PARAMS), max_size=2))}
    return Monomial.of(q, **exps)


@st.composite
def small_series(draw, lo=-5, hi=10, max_terms=8):
    terms = draw(st.dictionaries(monomials(lo, hi), st.integers(-9, 9), max_size=max_terms))
    return Series(terms)


@pytest.fixture
def q():
    return Series.monomial(1, 1)
