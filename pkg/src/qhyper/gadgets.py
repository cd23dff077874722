"""q-Pochhammer symbols, Gaussian binomials and q-multinomials."""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from functools import lru_cache

from .series import InsufficientTruncation, Monomial, Series, dilate

__all__ = [
    "triangular",
    "PochSpec",
    "poch",
    "poch_finite",
    "poch_infinite",
    "poch_inverse",
    "qpoch",
    "gauss_binomial",
    "q_multinomial",
]

INFINITE = "infinite"


def triangular(k: int) -> int:
    if k < 0:
        raise ValueError(f"triangular number of negative index {k}")
    return k * (k + 1) // 2


@dataclass(frozen=True)
class PochSpec:
    """``(coeff * monomial; q^base)_length``.

    The sign of the argument lives in ``coeff``: ``(-cq;q)_n`` is
    ``PochSpec(-1, Monomial.of(1, c=1), 1, n)``.
    """

    coeff: int
    monomial: Monomial = field(default_factory=Monomial)
    base: int = 1
    length: int | str = INFINITE

    def __post_init__(self):
        if self.base < 1:
            raise ValueError(f"base dilation must be >= 1, got {self.base}")

    @property
    def argument(self) -> Series:
        return Series({self.monomial: self.coeff})

    def evaluate(self, q_cap: int | None = None) -> Series:
        if self.length == INFINITE:
            if q_cap is None:
                raise InsufficientTruncation("an infinite product needs a truncation order")
            return poch_infinite(self, q_cap)
        return poch_finite(self)


def _factor(spec: PochSpec, j: int) -> Series:
    m = spec.monomial
    # built by subtraction so that x q^{base*j} = 1 gives the zero factor
    return Series.one() - Series({Monomial(m.q_exp + spec.base * j, m.params): spec.coeff})


def poch_finite(spec: PochSpec) -> Series:
    """Exact ``prod_{j<n} (1 - x q^{base*j})``; the empty product is 1."""
    n = spec.length
    if n == INFINITE or n < 0:
        raise ValueError("poch_finite needs a length n >= 0")
    out = Series.one()
    for j in range(n):
        out = out * _factor(spec, j)
    return out


def poch_infinite(spec: PochSpec, q_cap: int) -> Series:
    """``(x; q^base)_inf`` truncated at ``q^q_cap``.

    Only factors whose q-exponent is at most ``q_cap`` contribute below the cap.
    """
    e0 = spec.monomial.q_exp
    if e0 < 1:
        raise ValueError(f"(x;q)_inf needs x with q-exponent >= 1, got q^{e0}")
    out = Series.one().truncate(q_cap)
    j = 0
    while e0 + spec.base * j <= q_cap:
        out = out * _factor(spec, j)
        j += 1
    return out


def poch_inverse(spec: PochSpec, q_cap: int) -> Series:
    """``1 / (x; q^base)_n`` as a series truncated at ``q^q_cap``.

    Each factor ``1/(1 - x q^e)`` is expanded geometrically, so every factor
    must carry a positive q-exponent.
    """
    e0 = spec.monomial.q_exp
    if e0 < 1:
        raise ValueError(f"1/(x;q)_n needs x with q-exponent >= 1, got q^{e0}")
    n = spec.length
    out = Series.one().truncate(q_cap)
    j = 0
    m = spec.monomial
    while (n == INFINITE or j < n) and e0 + spec.base * j <= q_cap:
        e = e0 + spec.base * j
        geo = {}
        for p in range(q_cap // e + 1):
            geo[Monomial(e * p, tuple((nm, x * p) for nm, x in m.params))] = spec.coeff ** p
        out = out * Series(geo, q_cap)
        j += 1
    return out


def poch(x: Series, n, base: int = 1, q_cap: int | None = None) -> Series:
    """``(x; q^base)_n`` for a single-term series ``x``.

    ``n`` may be an int >= 0 or ``math.inf`` (then ``q_cap`` is required).
    """
    items = list(x.items())
    if len(items) != 1:
        raise ValueError("Pochhammer argument must be a single term")
    m, c = items[0]
    if n == math.inf or n == INFINITE:
        return PochSpec(c, m, base, INFINITE).evaluate(q_cap)
    if n < 0:
        raise ValueError("negative Pochhammer lengths are not supported")
    return poch_finite(PochSpec(c, m, base, int(n)))


def qpoch(n: int, base: int = 1) -> Series:
    """``(q^base; q^base)_n``."""
    return poch_finite(PochSpec(1, Monomial(base), base, n))


# -- Gaussian binomials ----------------------------------------------------

_row_lock = threading.Lock()
_rows: list[list[Series]] = [[Series.one()]]


def _pascal_row(n: int) -> list[Series]:
    # [n,k] = [n-1,k-1] + q^k [n-1,k]
    with _row_lock:
        while len(_rows) <= n:
            prev = _rows[-1]
            m = len(prev)
            row = [Series.one()]
            for k in range(1, m):
                row.append(prev[k - 1] + prev[k].shift(k))
            row.append(Series.one())
            _rows.append(row)
        return _rows[n]


@lru_cache(maxsize=None)
def gauss_binomial(n: int, k: int, d: int = 1) -> Series:
    """Gaussian binomial ``[n, k]`` in base ``q^d`` as an exact Laurent polynomial.

    For ``n < 0`` the reflection ``(-1)^k q^{nk - k(k-1)/2} [k-n-1, k]``
    is used; ``k < 0`` gives 0, as does ``k > n >= 0``.
    """
    if d < 1:
        raise ValueError("base dilation must be >= 1")
    if k < 0:
        return Series.zero()
    if n >= 0:
        if k > n:
            return Series.zero()
        out = _pascal_row(n)[k]
    else:
        sign = -1 if k % 2 else 1
        out = gauss_binomial(k - n - 1, k).shift(n * k - k * (k - 1) // 2).scale(sign)
    return dilate(out, d) if d > 1 else out


@lru_cache(maxsize=None)
def q_multinomial(n: int, parts: tuple[int, ...], d: int = 1) -> Series:
    """``(q^d;q^d)_n / prod (q^d;q^d)_p`` as a product of Gaussian binomials.

    When the parts sum to less than ``n`` the leftover ``(q^d;q^d)_rest``
    factor is kept in the numerator.
    """
    parts = tuple(parts)
    if any(p < 0 for p in parts):
        raise ValueError("q-multinomial parts must be nonnegative")
    if n < 0 or sum(parts) > n:
        raise ValueError(f"parts {parts} do not fit in {n}")
    out = Series.one()
    left = n
    for p in parts:
        out = out * gauss_binomial(left, p, d)
        left -= p
    if left:
        out = out * qpoch(left, d)
    return out
