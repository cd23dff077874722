import pytest
from hypothesis import given, strategies as st

from qhyper.series import (
    InsufficientTruncation, Monomial, Series, coeff_of, dilate, divide_exact, equal_up_to, mul, parse,
    serialize, substitute, translate,
)

from conftest import small_series

M = Series.monomial


def test_add_cancels():
    assert (Series.one() + M(1, 1)) + (M(1, 1) - 1) == M(2, 1)


def test_add_zero_and_like_terms():
    s = M(3, 2, a=1) - M(1, -1)
    assert s + Series.zero() == s
    assert M(1, 1, a=1) + M(1, 1, a=1) == M(2, 1, a=1)


def test_mul_examples():
    assert (1 + M(1, 1)) * (1 - M(1, 1)) == 1 - M(1, 2)
    assert (1 + M(1, 1, c=1)) * (1 + M(1, 2, c=1)) == 1 + M(1, 1, c=1) + M(1, 2, c=1) + M(1, 3, c=2)


def test_validity_order_of_negative_shift():
    s = Series({Monomial(e): 1 for e in range(6)}, q_cap=5)
    assert (M(1, -1) * s).q_cap == 4


def test_mul_refuses_short_product():
    s = Series({Monomial(0): 1}, q_cap=5)
    with pytest.raises(InsufficientTruncation):
        mul(M(1, -1), s, require=5)


def test_no_zero_coefficients_stored():
    s = M(2, 1, a=1) + M(1, 2) + M(-2, 1, a=1)
    assert dict(s.items()) == {Monomial(2): 1}


def test_dilate_examples():
    assert dilate(M(1, 2), 3) == M(1, 6)
    assert dilate(1 + M(1, 1, a=1), 2) == 1 + M(1, 2, a=1)
    with pytest.raises(ValueError):
        dilate(Series.one(), 0)


def test_translate_examples():
    assert translate(M(1, 1, a=2), "a", -2) == M(1, -3, a=2)
    s = M(1, 1, a=1, b=1)
    assert translate(translate(dilate(s, 3), "a", -2), "b", -1) == M(1, 0, a=1, b=1)


def test_substitute_examples():
    ab = M(1, 0, a=1, b=1)
    assert substitute(M(1, 3, c=1), "c", ab) == M(1, 3, a=1, b=1)
    assert substitute(1 + M(1, 1, b=1) + M(1, 2, b=2), "b", 0) == Series.one()
    assert substitute(M(1, 1, a=1) + M(1, 2, a=2), "a", 1) == M(1, 1) + M(1, 2)


def test_coeff_of_inside_and_beyond():
    s = Series({Monomial(e): e for e in range(8)}, q_cap=7)
    assert coeff_of(s, Monomial(3)) == 3
    assert coeff_of(s, Monomial.of(3, a=1)) == 0
    with pytest.raises(InsufficientTruncation):
        coeff_of(s, Monomial(8))


def test_equal_up_to_cap_semantics():
    lhs = 1 + M(1, 1)
    rhs = lhs + M(1, 99)
    assert equal_up_to(lhs, rhs, 10)
    cmp = equal_up_to(lhs, rhs, 99)
    assert not cmp and cmp.monomial == Monomial(99) and (cmp.lhs, cmp.rhs) == (0, 1)
    with pytest.raises(InsufficientTruncation):
        equal_up_to(lhs.truncate(5), rhs, 10)


def test_first_mismatch_is_smallest_q_first():
    lhs = M(1, 2, a=3) + M(1, 1, b=1)
    rhs = M(2, 2, a=3)
    cmp = equal_up_to(lhs, rhs)
    assert cmp.monomial == Monomial.of(1, b=1)


def test_serialize_format():
    s = M(-3, -1, a=2, b=1) + M(5, 2)
    assert serialize(s) == "-3*a^2*b*q^-1 + 5*q^2"
    assert serialize(Series.zero()) == "0"


def test_divide_exact():
    num = (1 - M(1, 3)) * (1 + M(1, 1, a=1))
    assert divide_exact(num, 1 - M(1, 3)) == 1 + M(1, 1, a=1)
    with pytest.raises(ArithmeticError):
        divide_exact(num + 1, 1 - M(1, 1))


@given(small_series(), small_series(), small_series())
def test_ring_laws(x, y, z):
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z


@given(small_series(), small_series(), st.integers(1, 4))
def test_dilate_is_homomorphism(x, y, d):
    assert dilate(x * y, d) == dilate(x, d) * dilate(y, d)
    assert dilate(x + y, d) == dilate(x, d) + dilate(y, d)


@given(small_series(), st.integers(1, 3), st.integers(1, 3))
def test_dilate_composes(x, d, e):
    assert dilate(dilate(x, d), e) == dilate(x, d * e)


@given(small_series(), small_series(), st.sampled_from("abc"), st.integers(-3, 3))
def test_translate_is_homomorphism(x, y, var, t):
    assert translate(x * y, var, t) == translate(x, var, t) * translate(y, var, t)
    assert translate(x + y, var, t) == translate(x, var, t) + translate(y, var, t)
    assert translate(x, var, 0) == x


@given(small_series(lo=0), small_series(lo=0), st.integers(0, 12))
def test_truncation_soundness(x, y, Q):
    exact = (x * y).truncate(Q)
    approx = x.truncate(Q) * y.truncate(Q)
    assert approx.q_cap is not None and approx.q_cap >= Q
    assert equal_up_to(exact, approx, Q)


@given(small_series(), small_series(), st.integers(-2, 12))
def test_truncation_soundness_laurent(x, y, Q):
    # validity rule with negative exponents: the recorded order is honest
    approx = x.truncate(Q) * y.truncate(Q)
    cap = approx.q_cap
    assert equal_up_to((x * y).truncate(cap), approx, cap)


@given(small_series())
def test_serialize_round_trip(x):
    assert parse(serialize(x)) == x


@given(small_series(), st.integers(-3, 10))
def test_serialize_round_trip_truncated(x, Q):
    t = x.truncate(Q)
    back = parse(serialize(t))
    assert back == t and back.q_cap == Q


@given(small_series())
def test_canonical_form_has_no_zeros(x):
    assert all(c != 0 for _, c in (x - x + x).items())
    assert not (x - x)
