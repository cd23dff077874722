"""Small building blocks shared by the identity builders.

Every builder receives a :class:`Ctx`.  ``ctx.Q is None`` asks for an exact
Laurent polynomial; otherwise the result only has to be valid up to
``q^Q`` and intermediate products are cut as early as that allows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Mapping

from .gadgets import PochSpec, gauss_binomial, poch_finite, poch_infinite, poch_inverse, q_multinomial, triangular
from .series import Monomial, Series, divide_exact, mul, sum_series, to_param

T = triangular


@dataclass(frozen=True)
class Ctx:
    Q: int | None = None
    param_caps: Mapping[str, int] = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return self.Q is None

    def beyond(self, min_degree: int) -> bool:
        """True when a summand of this minimal q-degree cannot reach ``q^Q``."""
        return self.Q is not None and min_degree > self.Q

    def cut(self, s: Series) -> Series:
        if self.Q is None or (s.q_cap is not None and s.q_cap <= self.Q):
            return s
        return s.truncate(self.Q)


@dataclass(frozen=True)
class Lazy:
    """A truncated factor built on demand at whatever order the product needs."""

    make: Callable[[int], Series]
    min_q: int = 0


def mono(coeff: int = 1, q: int = 0, **params: int) -> Series:
    return Series.monomial(coeff, q, **params)


@lru_cache(maxsize=None)
def _pf(coeff: int, q0: int, n: int, d: int, params: tuple) -> Series:
    return poch_finite(PochSpec(coeff, Monomial(q0, params), d, n))


def pf(coeff: int, q0: int, n: int, d: int = 1, **params: int) -> Series:
    """Exact ``(coeff * params * q^q0; q^d)_n`` for ``n >= 0``."""
    if n < 0:
        raise ValueError(f"Pochhammer of negative length {n}")
    return _pf(coeff, q0, n, d, tuple(sorted(params.items())))


@lru_cache(maxsize=None)
def _pinf(coeff: int, q0: int, d: int, Q: int, params: tuple) -> Series:
    return poch_infinite(PochSpec(coeff, Monomial(q0, params), d), Q)


def pinf(coeff: int, q0: int, d: int = 1, **params: int) -> Lazy:
    """Truncated ``(coeff * params * q^q0; q^d)_inf`` as a lazy factor."""
    key = tuple(sorted(params.items()))
    return Lazy(lambda Q: _pinf(coeff, q0, d, max(Q, 0), key), 0)


@lru_cache(maxsize=None)
def _inv(n, d: int, Q: int, coeff: int, q0: int, params: tuple) -> Series:
    length = "infinite" if n == math.inf else n
    return poch_inverse(PochSpec(coeff, Monomial(q0, params), d, length), Q)


def inv(n, d: int = 1, coeff: int = 1, q0: int | None = None, **params: int) -> Lazy:
    """Lazy ``1 / (coeff * params * q^q0; q^d)_n``; the default is ``1/(q^d;q^d)_n``."""
    q0 = d if q0 is None else q0
    key = tuple(sorted(params.items()))
    return Lazy(lambda Q: _inv(n, d, max(Q, 0), coeff, q0, key), 0)


def gb(n: int, k: int, d: int = 1) -> Series:
    return gauss_binomial(n, k, d)


def qmulti(n: int, parts: Iterable[int], d: int = 1) -> Series:
    return q_multinomial(n, tuple(parts), d)


@lru_cache(maxsize=None)
def gb_in(n: int, k: int, name: str) -> Series:
    """Gaussian binomial with its base carried by the parameter ``name``."""
    return to_param(gauss_binomial(n, k), name)


def prod(ctx: Ctx, *factors) -> Series:
    """Product of exact series and :class:`Lazy` factors, valid to ``ctx.Q``.

    Each partial product is cut at ``Q`` minus the least degree the
    remaining factors can contribute, so nothing needed is ever dropped.
    """
    factors = [f for f in factors if not (isinstance(f, Series) and f == Series.one())]
    if ctx.Q is None:
        out = Series.one()
        for f in factors:
            if isinstance(f, Lazy):
                raise ValueError("exact products cannot contain truncated factors")
            out = out * f
        return out
    mins = []
    for f in factors:
        if isinstance(f, Lazy):
            mins.append(f.min_q)
        else:
            if not f and f.is_exact:
                return Series.zero().truncate(ctx.Q)
            mins.append(int(f.low_q))
    total_min = sum(mins)
    if total_min > ctx.Q:
        return Series.zero().truncate(ctx.Q)
    out = None
    rest = total_min
    for f, m in zip(factors, mins):
        rest -= m
        if isinstance(f, Lazy):
            f = f.make(ctx.Q - (total_min - m))
        if out is None:
            out = f.truncate(ctx.Q - rest) if (f.q_cap is None or f.q_cap > ctx.Q - rest) else f
        else:
            out = mul(out, f)
            lim = ctx.Q - rest
            if out.q_cap is None or out.q_cap > lim:
                out = out.truncate(lim)
        if not out:
            return Series.zero().truncate(ctx.Q)
    if out is None:
        return Series.one().truncate(ctx.Q)
    return ctx.cut(out)


def total(ctx: Ctx, terms: Iterable[Series]) -> Series:
    out = sum_series(list(terms))
    if ctx.Q is None:
        return out
    if out.q_cap is None or out.q_cap > ctx.Q:
        out = out.truncate(ctx.Q)
    return out


def over(ctx: Ctx, numerator: Series, denominator: Series) -> Series:
    """``numerator / denominator`` for a parameter-free q-polynomial denominator.

    Exact when ``ctx.Q is None`` (a remainder raises); otherwise a power
    series division, valid to ``ctx.Q`` when the denominator's lowest
    exponent is 0.
    """
    return ctx.cut(divide_exact(numerator, denominator))


def with_caps(ctx: Ctx, s: Series) -> Series:
    caps = {k: v for k, v in ctx.param_caps.items()}
    return s.with_param_caps(**caps) if caps else s


def a_names(r: int) -> list[str]:
    return [f"a{i}" for i in range(1, r + 1)]


def tuples_bounded(r: int, bound: Callable[[tuple[int, ...]], bool], limit: int):
    """All r-tuples of nonnegative ints (each <= limit) passing ``bound`` on every prefix."""

    def rec(prefix):
        if len(prefix) == r:
            yield tuple(prefix)
            return
        for v in range(limit + 1):
            t = prefix + [v]
            if not bound(tuple(t)):
                break
            yield from rec(t)

    yield from rec([])
