import math

import pytest
from hypothesis import given, strategies as st

from qhyper.gadgets import (
    PochSpec, gauss_binomial, poch, poch_finite, poch_infinite, poch_inverse, q_multinomial, qpoch, triangular,
)
from qhyper.series import Monomial, Series, equal_up_to

M = Series.monomial


def brute_binomial(n, k):
    """Pascal oracle built from plain integer lists (coefficient of q^i at index i)."""
    rows = {(0, 0): [1]}
    for m in range(1, n + 1):
        for j in range(m + 1):
            left = rows.get((m - 1, j - 1), [0])
            right = [0] * j + rows.get((m - 1, j), [0])
            size = max(len(left), len(right))
            rows[(m, j)] = [(left + [0] * size)[i] + (right + [0] * size)[i] for i in range(size)]
    coeffs = rows.get((n, k), [0])
    return Series({Monomial(i): c for i, c in enumerate(coeffs)})


def test_triangular():
    assert triangular(0) == 0
    assert triangular(3) == 6
    with pytest.raises(ValueError):
        triangular(-1)


def test_triangular_addition_law():
    for n in range(51):
        for m in range(51):
            assert triangular(n) + triangular(m) + n * m == triangular(n + m)


def test_poch_finite_examples():
    assert poch(M(1, 3, a=1), 0) == Series.one()
    assert poch(M(-1, 1, c=1), 2) == 1 + M(1, 1, c=1) + M(1, 2, c=1) + M(1, 3, c=2)


@pytest.mark.parametrize("k", range(1, 6))
def test_poch_at_one_vanishes(k):
    # (q^0; q)_k contains the factor 1 - 1
    assert not poch(Series.one(), k)
    assert not poch_finite(PochSpec(1, Monomial(0), 2, k))


def test_poch_infinite_examples():
    distinct = poch_infinite(PochSpec(-1, Monomial(1)), 6)
    assert distinct == Series({Monomial(e): c for e, c in enumerate((1, 1, 1, 2, 2, 3, 4))}, 6)
    assert poch(M(-1, 2, c=1), math.inf, 2, q_cap=4) == (1 + M(1, 2, c=1) + M(1, 4, c=1)).truncate(4)
    with pytest.raises(ValueError):
        poch(M(1, 0, c=1), math.inf, q_cap=5)


def test_poch_inverse_times_poch_is_one():
    for base in (1, 2, 3):
        spec = PochSpec(1, Monomial(1), base, 7)
        prod = poch_inverse(spec, 20) * poch_finite(spec)
        assert equal_up_to(prod, Series.one(), 20)


def test_gauss_binomial_examples():
    assert gauss_binomial(4, 2) == Series({Monomial(e): c for e, c in enumerate((1, 1, 2, 1, 1))})
    for n in range(-5, 8):
        assert gauss_binomial(n, 0) == Series.one()
    assert gauss_binomial(-1, 2) == M(1, -3)
    assert not gauss_binomial(3, 5)
    assert not gauss_binomial(3, -1)


def test_gauss_binomial_matches_integer_pascal_oracle():
    for n in range(10):
        for k in range(n + 1):
            assert gauss_binomial(n, k) == brute_binomial(n, k)


@given(st.integers(0, 14), st.data())
def test_gauss_binomial_degree_and_symmetry(n, data):
    m = data.draw(st.integers(0, n))
    g = gauss_binomial(n, m)
    assert g.max_q == m * (n - m)
    assert g.coeff(Monomial(0)) == 1
    assert g == gauss_binomial(n, n - m)


@given(st.integers(1, 14), st.data())
def test_pascal_recurrences(n, data):
    k = data.draw(st.integers(0, n))
    q = M(1, 1)
    assert gauss_binomial(n, k) == gauss_binomial(n - 1, k - 1) + q ** k * gauss_binomial(n - 1, k)
    assert gauss_binomial(n, k) == q ** (n - k) * gauss_binomial(n - 1, k - 1) + gauss_binomial(n - 1, k)


@given(st.integers(1, 8), st.integers(1, 3), st.data())
def test_dilated_binomial(n, d, data):
    from qhyper.series import dilate

    k = data.draw(st.integers(0, n))
    assert gauss_binomial(n, k, d) == dilate(gauss_binomial(n, k), d)


def test_expansion_of_finite_product():
    for n in range(31):
        lhs = poch(M(-1, 1, c=1), n)
        rhs = sum((M(1, triangular(k), c=k) * gauss_binomial(n, k) for k in range(n + 1)), Series.zero())
        assert lhs == rhs


def test_binomial_product_identity():
    for M_ in range(13):
        for i in range(M_ + 1):
            for k in range(i + 1):
                assert (gauss_binomial(i, k) * gauss_binomial(M_, i)
                        == gauss_binomial(M_ - i + k, k) * gauss_binomial(M_, i - k))


def test_geometric_to_pochhammer():
    for L in range(11):
        for N in range(L + 1):
            lhs = sum((M(1, triangular(k) + N * k, c=k) * gauss_binomial(L - N, k) for k in range(L - N + 1)),
                      Series.zero())
            assert lhs == poch(M(-1, N + 1, c=1), L - N)


def test_negative_index_ratio():
    for n in range(-6, 0):
        for k in range(7):
            direct = poch(M(1, n - k + 1), k)
            assert gauss_binomial(n, k) * qpoch(k) == direct


def test_binomial_tends_to_reciprocal():
    for k in range(5):
        inv = poch_inverse(PochSpec(1, Monomial(1), 1, k), 25)
        for Mb in range(k, 20):
            assert equal_up_to(gauss_binomial(Mb, k).truncate(Mb - k), inv, Mb - k)


def test_multinomial():
    assert q_multinomial(3, (1, 1, 1)) == gauss_binomial(3, 1) * gauss_binomial(2, 1)
    assert q_multinomial(5, (5,)) == Series.one()
    for Mb in range(7):
        for i in range(Mb + 1):
            for k in range(Mb - i + 1):
                assert q_multinomial(Mb, (i, k, Mb - i - k)) == gauss_binomial(Mb - i, k) * gauss_binomial(Mb, i)
    with pytest.raises(ValueError):
        q_multinomial(3, (2, 2))
