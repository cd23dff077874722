"""The identity catalog: every entry carries builders for both sides.

Builders take an integer assignment and a :class:`~qhyper.kit.Ctx`.  Exact
entries return Laurent polynomials (or, when the context carries ``Q``, the
same polynomials cut at ``q^Q``; this is how limit checks reuse them).
Truncated entries sum infinite families and stop an outer index once the
summand's least q-degree passes ``Q``; each builder states that bound.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

from .kit import (
    Ctx, Lazy, T, a_names, gb, gb_in, inv, mono, over, pf, pinf, prod, qmulti, total, tuples_bounded, with_caps,
)
from .partitions import CONSTRAINTS, enumerate_partitions
from .series import Monomial, Series, to_param

Assignment = Mapping[str, int]
Builder = Callable[[Assignment, Ctx], Series]

EXACT = "exact"
TRUNCATED = "truncated"
IDENTITY = "identity"
NON_IDENTITY = "non-identity"


class DomainError(ValueError):
    """An integer assignment outside an entry's declared domain."""


@dataclass(frozen=True)
class IdentityEntry:
    id: str
    anchor: str
    mode: str
    lhs: Builder
    rhs: Builder
    int_params: Callable[[Assignment], tuple[str, ...]] | tuple[str, ...] = ()
    domain: Callable[[Assignment], bool] | None = None
    default: Mapping[str, int] = field(default_factory=dict)
    expected: str = IDENTITY
    symbols: tuple[str, ...] = ()
    param_caps: Mapping[str, int] = field(default_factory=dict)
    weights: Mapping[str, int] = field(default_factory=dict)
    sweep_r: tuple[int, ...] = ()
    sweep_hi: int = 6
    default_q: int = 20
    defaults_for: Callable[[int], dict] | None = None
    sweep_space: Mapping[str, Sequence[int]] | None = None
    note: str = ""

    def params_for(self, assignment: Assignment) -> tuple[str, ...]:
        p = self.int_params
        return tuple(p(assignment)) if callable(p) else tuple(p)

    def complete(self, assignment: Assignment | None = None) -> dict[str, int]:
        """Default assignment overridden by ``assignment``; validates the domain."""
        a = dict(self.default)
        a.update(assignment or {})
        if self.defaults_for is not None and "r" in a:
            for name, v in self.defaults_for(a["r"]).items():
                a.setdefault(name, v)
        missing = [n for n in self.params_for(a) if n not in a]
        if missing:
            raise DomainError(f"{self.id}: missing integer parameters {missing}")
        if self.domain is not None and not self.domain(a):
            raise DomainError(f"{self.id}: assignment {a} is outside the domain")
        return a

    def build(self, side: str, assignment: Assignment | None = None, Q: int | None = None,
              param_caps: Mapping[str, int] | None = None) -> Series:
        a = self.complete(assignment)
        if self.mode == TRUNCATED and Q is None:
            Q = self.default_q
        ctx = Ctx(Q, {**self.param_caps, **(param_caps or {})})
        fn = {"lhs": self.lhs, "rhs": self.rhs}[side.lower()]
        return with_caps(ctx, fn(a, ctx))

    def sweep(self) -> list[dict[str, int]]:
        """Default assignments to verify.

        Exact identities: every bound tuple in ``[0, sweep_hi]`` inside the
        domain plus three seeded random tuples from ``[0, 10]``.  Truncated
        entries use their default assignment (once per ``r`` in ``sweep_r``).
        Non-identities are checked at their default only.
        """
        rs = self.sweep_r or (None,)
        if self.expected == NON_IDENTITY:
            return [self.complete()]
        out = []
        rng = random.Random(self.id)
        for r in rs:
            base = {} if r is None else {"r": r}
            if self.mode == TRUNCATED:
                out.append(self.complete(base))
                continue
            names = [n for n in self.params_for({**self.default, **base}) if n != "r"]
            space = dict(self.sweep_space or {})
            ranges = [space.get(n, range(self.sweep_hi + 1)) for n in names]
            found = []
            for values in itertools.product(*ranges):
                a = {**base, **dict(zip(names, values))}
                if self.domain is None or self.domain(a):
                    found.append(a)
            extra = []
            for _ in range(2000):
                if len(extra) == 3 or self.sweep_space is not None:
                    break
                a = {**base, **{n: rng.randint(0, 10) for n in names}}
                if self.domain is None or self.domain(a):
                    extra.append(a)
            out.extend(found + extra)
        return out


_REGISTRY: dict[str, IdentityEntry] = {}


def register(entry: IdentityEntry) -> IdentityEntry:
    if entry.id in _REGISTRY:
        raise ValueError(f"duplicate identity id {entry.id}")
    _REGISTRY[entry.id] = entry
    return entry


def catalog() -> list[IdentityEntry]:
    """All entries in registration order."""
    return list(_REGISTRY.values())


def get(entry_id: str) -> IdentityEntry:
    try:
        return _REGISTRY[entry_id]
    except KeyError:
        raise KeyError(entry_id) from None


def ids() -> list[str]:
    return list(_REGISTRY)


def build_side(entry_id: str, side: str, assignment: Assignment | None = None, Q: int | None = None,
               param_caps: Mapping[str, int] | None = None) -> Series:
    return get(entry_id).build(side, assignment, Q, param_caps)


def _nonneg(*names):
    return lambda A: all(A[n] >= 0 for n in names)


# ---------------------------------------------------------------------------
# Lebesgue, Little Goellnitz, Schur key identity


def lebesgue_lhs(A, ctx):
    # summand i has least degree T_i
    terms = []
    i = 0
    while not ctx.beyond(T(i)):
        terms.append(prod(ctx, mono(q=T(i)), pf(-1, 1, i, c=1), inv(i)))
        i += 1
    return total(ctx, terms)


def lebesgue_rhs(A, ctx):
    return prod(ctx, pinf(-1, 1), pinf(-1, 2, 2, c=1))


register(IdentityEntry(
    "lebesgue-1.1", "Lebesgue's identity, series = product", TRUNCATED,
    lebesgue_lhs, lebesgue_rhs, symbols=("c",), weights={"c": 2}))


def _goellnitz_lhs(shift):
    def lhs(A, ctx):
        # (-c q^shift; q^2)_i has least degree min(0, shift), so the summand starts at i^2+i+min(0, shift)
        terms = []
        i = 0
        while not ctx.beyond(i * i + i + min(0, shift) * (i > 0)):
            terms.append(prod(ctx, mono(q=i * i + i), pf(-1, shift, i, 2, c=1), inv(i, 2)))
            i += 1
        return total(ctx, terms)
    return lhs


def _goellnitz_rhs(shift):
    def rhs(A, ctx):
        return prod(ctx, pinf(-1, 4, 4), pinf(-1, 2, 4), pinf(-1, shift, 4, c=1))
    return rhs


register(IdentityEntry(
    "gollnitz-1.2a", "Little Goellnitz series = product, odd parts = 1 mod 4", TRUNCATED,
    _goellnitz_lhs(-1), _goellnitz_rhs(1), symbols=("c",)))
register(IdentityEntry(
    "gollnitz-1.2b", "Little Goellnitz series = product, odd parts = 3 mod 4", TRUNCATED,
    _goellnitz_lhs(1), _goellnitz_rhs(3), symbols=("c",)))


def schur_triple(A, ctx, x="a", y="b"):
    # degree T_s + T_gamma with s = alpha + beta + gamma
    terms = []
    s = 0
    while not ctx.beyond(T(s)):
        for g in range(s + 1):
            if ctx.beyond(T(s) + T(g)):
                break
            for al in range(s - g + 1):
                be = s - g - al
                terms.append(prod(ctx, mono(q=T(s) + T(g), **{x: al + g, y: be + g}), inv(al), inv(be), inv(g)))
        s += 1
    return total(ctx, terms)


def schur_double(A, ctx):
    terms = []
    for i in itertools.count():
        if ctx.beyond(T(i)):
            break
        for j in itertools.count():
            if ctx.beyond(T(i) + T(j)):
                break
            terms.append(prod(ctx, mono(q=T(i) + T(j), a=i, b=j), inv(i), inv(j)))
    return total(ctx, terms)


def schur_product(A, ctx):
    return prod(ctx, pinf(-1, 1, a=1), pinf(-1, 1, b=1))


register(IdentityEntry(
    "schur-key-1.3", "Schur key identity, triple sum = product", TRUNCATED,
    schur_triple, schur_product, symbols=("a", "b"), weights={"a": 1, "b": 1}))
register(IdentityEntry(
    "schur-double-1.3", "Schur key identity, double sum = product", TRUNCATED,
    schur_double, schur_product, symbols=("a", "b"), weights={"a": 1, "b": 1}))


def binom_exp_lhs(A, ctx):
    return ctx.cut(pf(-1, 1, A["n"], c=1))


def binom_exp_rhs(A, ctx):
    n = A["n"]
    return total(ctx, [prod(ctx, mono(q=T(k), c=k), gb(n, k)) for k in range(n + 1)])


register(IdentityEntry(
    "binom-exp-1.6", "(-cq)_n expanded by Gaussian binomials", EXACT,
    binom_exp_lhs, binom_exp_rhs, ("n",), _nonneg("n"), {"n": 5}, symbols=("c",)))


def split_rhs(A, ctx):
    terms = []
    i = 0
    while not ctx.beyond(T(i)):
        terms.append(prod(ctx, mono(q=T(i), a=i), inv(i), pf(-1, 1, i, b=1), pinf(-1, i + 1, b=1)))
        i += 1
    return total(ctx, terms)


def expand_rhs(A, ctx):
    # both inner sums expanded; summand i starts at T_i
    terms = []
    i = 0
    while not ctx.beyond(T(i)):
        sub = Ctx(ctx.Q - T(i))
        first = total(sub, [prod(sub, mono(q=T(j), b=j), inv(j), inv(i - j)) for j in range(i + 1)])
        second = []
        l = 0
        while not sub.beyond(T(l) + i * l):
            second.append(prod(sub, mono(q=T(l) + i * l, b=l), inv(l)))
            l += 1
        terms.append(prod(ctx, mono(q=T(i), a=i), first, total(sub, second)))
        i += 1
    return total(ctx, terms)


register(IdentityEntry(
    "proof-split-2.1", "split of (-bq)_inf inside (-aq)_inf(-bq)_inf", TRUNCATED,
    schur_product, split_rhs, symbols=("a", "b")))
register(IdentityEntry(
    "proof-expand-2.2", "both split factors expanded as sums", TRUNCATED,
    schur_product, expand_rhs, symbols=("a", "b")))


# ---------------------------------------------------------------------------
# finite Lebesgue identities and the transformation formula


def fin_leb_lhs(A, ctx):
    M = A["M"]
    return total(ctx, [prod(ctx, mono(q=T(i)), pf(-1, 1, i, c=1), gb(M, i))
                       for i in range(M + 1) if not ctx.beyond(T(i))])


def fin_leb_rhs(A, ctx):
    # common denominator (q^2;q^2)_M; summand k gets the cofactor (q^{2k+2};q^2)_{M-k}
    M = A["M"]
    num = total(ctx, [prod(ctx, mono(q=2 * T(k), c=k), pf(1, M - k + 1, k), pf(1, 2 * k + 2, M - k, 2))
                      for k in range(M + 1) if not ctx.beyond(2 * T(k))])
    return over(ctx, prod(ctx, num, pf(-1, 1, M)), pf(1, 2, M, 2))


register(IdentityEntry(
    "finite-lebesgue-3.1", "polynomial Lebesgue identity with (q^{M-k+1})_k", EXACT,
    fin_leb_lhs, fin_leb_rhs, ("M",), _nonneg("M"), {"M": 5}, symbols=("c",)))


def alladi_lhs(A, ctx, var="b"):
    m, n = A["m"], A["n"]
    terms = []
    for N in range(m + n + 1):
        for k in range(min(m, N) + 1):
            if ctx.beyond(T(N) + T(k)) or N - k > n:
                continue
            terms.append(prod(ctx, mono(q=T(N) + T(k), **{var: k}), gb(m, k), gb(n, N - k)))
    return total(ctx, terms)


def alladi_rhs(A, ctx, var="b"):
    # (q)_m/(q)_{m-i} = (q^{m-i+1})_i; common denominator (q^2;q^2)_m
    m, n = A["m"], A["n"]
    num = total(ctx, [
        prod(ctx, mono(q=i * i + i, **{var: i}), pf(-1, n + 1, i), pf(1, m - i + 1, i), pf(1, 2 * i + 2, m - i, 2))
        for i in range(m + 1) if not ctx.beyond(i * i + i)])
    return over(ctx, prod(ctx, num, pf(-1, 1, n)), pf(1, 2, m, 2))


register(IdentityEntry(
    "finite-lebesgue-3.8", "two-bound finite Lebesgue identity", EXACT,
    alladi_lhs, alladi_rhs, ("m", "n"), _nonneg("m", "n"), {"m": 4, "n": 3}, symbols=("b",)))


def transform_lhs(A, ctx):
    terms = []
    n = 0
    while not ctx.beyond(n * n):
        terms.append(prod(ctx, mono(q=n * n, a=n), pf(-1, 1, n, 2, b=1), inv(n, 2)))
        n += 1
    return total(ctx, terms)


def transform_rhs(A, ctx):
    terms = []
    n = 0
    while not ctx.beyond(2 * n * n):
        terms.append(prod(ctx, mono(q=2 * n * n, a=n, b=n), pinf(-1, 2 * n + 1, 2, a=1), inv(n, 2)))
        n += 1
    return total(ctx, terms)


register(IdentityEntry(
    "transform-3.3", "transformation formula with (-bq;q^2)_n", TRUNCATED,
    transform_lhs, transform_rhs, symbols=("a", "b")))


def _fin_transform_lhs(literal: bool, lift: int = 0, base: int = 2):
    # lift=1 is the a->aq, b->bq version; base=1 replaces q^2 by q throughout
    def lhs(A, ctx):
        m, n = A["m"], A["n"]
        terms = []
        for N in range(m + n + 1):
            top = min(m, N, n) if literal else min(m, N)
            for k in range(top + 1):
                if N - k > n:
                    continue
                if base == 2:
                    e = N * N + lift * N + k * k + lift * k
                else:
                    e = T(N) + T(k)
                if ctx.beyond(e):
                    continue
                terms.append(prod(ctx, mono(q=e, a=N, b=k), gb(m, k, base), gb(n, N - k, base)))
        return total(ctx, terms)
    return lhs


def _fin_transform_rhs(lift: int = 0, base: int = 2):
    def rhs(A, ctx):
        m, n = A["m"], A["n"]
        terms = []
        for i in range(m + 1):
            if base == 2:
                e = 2 * i * i + 2 * lift * i
                tail = pf(-1, 2 * i + 1 + lift, n, 2, a=1)
            else:
                e = i * i + i
                tail = pf(-1, i + 1, n, a=1)
            if ctx.beyond(e):
                continue
            terms.append(prod(ctx, mono(q=e, a=i, b=i), gb(m, i, base), tail))
        return total(ctx, terms)
    return rhs


register(IdentityEntry(
    "finite-transform-3.4", "finite transformation formula, inner sum over all k", EXACT,
    _fin_transform_lhs(False), _fin_transform_rhs(), ("m", "n"), _nonneg("m", "n"), {"m": 3, "n": 3},
    symbols=("a", "b")))
register(IdentityEntry(
    "finite-transform-3.4-literal", "finite transformation formula with the inner sum stopped at k <= n",
    EXACT, _fin_transform_lhs(True), _fin_transform_rhs(), ("m", "n"), _nonneg("m", "n"), {"m": 2, "n": 0},
    expected=NON_IDENTITY, symbols=("a", "b"),
    note="cutting the inner sum at n loses the k > n terms whenever m > n"))
register(IdentityEntry(
    "finite-3.12", "finite transformation formula after a->aq, b->bq", EXACT,
    _fin_transform_lhs(False, lift=1), _fin_transform_rhs(lift=1), ("m", "n"), _nonneg("m", "n"),
    {"m": 3, "n": 3}, symbols=("a", "b")))
register(IdentityEntry(
    "finite-3.13", "finite transformation formula in base q", EXACT,
    _fin_transform_lhs(False, base=1), _fin_transform_rhs(base=1), ("m", "n"), _nonneg("m", "n"),
    {"m": 3, "n": 3}, symbols=("a", "b")))


def a_one_lhs(A, ctx):
    m, n = A["m"], A["n"]
    return total(ctx, [prod(ctx, mono(q=i * i + i, b=i), gb(m, i), pf(-1, i + 1, n))
                       for i in range(m + 1) if not ctx.beyond(i * i + i)])


register(IdentityEntry(
    "finite-3.14", "a=1 rewriting of the base-q finite transformation", EXACT,
    a_one_lhs, alladi_rhs, ("m", "n"), _nonneg("m", "n"), {"m": 3, "n": 3}, symbols=("b",)))


# ---------------------------------------------------------------------------
# the unifying three-parameter series


@lru_cache(maxsize=None)
def split_factor(i: int, x: str = "a", z: str = "c") -> Series:
    """``x^i (-(z/x) q)_i = prod_{t<i} (x + z q^{t+1})``, exact."""
    out = Series.one()
    for t in range(i):
        out = out * (mono(**{x: 1}) + mono(q=t + 1, **{z: 1}))
    return out


def unified_lhs_named(x: str, y: str):
    def lhs(A, ctx):
        terms = []
        i = 0
        while not ctx.beyond(T(i)):
            terms.append(prod(ctx, mono(q=T(i)), split_factor(i, x, "c"), inv(i), pinf(-1, i + 1, **{y: 1})))
            i += 1
        return total(ctx, terms)
    return lhs


def unified_rhs(A, ctx):
    # degree T_{t+l+j} + T_j
    terms = []
    s = 0
    while not ctx.beyond(T(s)):
        for j in range(s + 1):
            if ctx.beyond(T(s) + T(j)):
                break
            for t in range(s - j + 1):
                l = s - j - t
                terms.append(prod(ctx, mono(q=T(s) + T(j), a=t, b=l, c=j), inv(t), inv(l), inv(j)))
        s += 1
    return total(ctx, terms)


register(IdentityEntry(
    "unified-4.1", "three free parameters a, b, c unify Schur and Lebesgue", TRUNCATED,
    unified_lhs_named("a", "b"), unified_rhs, symbols=("a", "b", "c"), weights={"a": 1, "b": 1, "c": 2}))
register(IdentityEntry(
    "symmetry-4.7", "series side invariant under a <-> b", TRUNCATED,
    unified_lhs_named("a", "b"), unified_lhs_named("b", "a"), symbols=("a", "b", "c")))


def rv_lhs(A, ctx):
    terms = []
    i = 0
    while not ctx.beyond(T(i)):
        terms.append(with_caps(ctx, prod(ctx, mono(q=T(i), t=i), with_caps(ctx, pf(1, 0, i, z=1)), inv(i))))
        i += 1
    return with_caps(ctx, total(ctx, terms))


def rv_rhs(A, ctx):
    # (z)_inf: factors beyond q^Q cannot contribute; the z-sum stops at the z-cap
    zcap = ctx.param_caps.get("z", 8)
    zinf = with_caps(ctx, ctx.cut(pf(1, 0, ctx.Q + 1, z=1)))
    inner = total(ctx, [prod(ctx, mono(z=j), inv(j), inv(j, 1, -1, 1, t=1)) for j in range(zcap + 1)])
    return with_caps(ctx, prod(ctx, zinf, pinf(-1, 1, t=1), with_caps(ctx, inner)))


register(IdentityEntry(
    "rv-4.4", "Ramamani-Venkatachaliengar generalization with t, z", TRUNCATED,
    rv_lhs, rv_rhs, symbols=("t", "z"), param_caps={"z": 8}))


def sylvester_lhs(A, ctx):
    terms = []
    i = 0
    while not ctx.beyond(T(i)):
        terms.append(prod(ctx, mono(q=T(i)), pf(-1, 0, i, c=1), inv(i)))
        i += 1
    return total(ctx, terms)


def sylvester_rhs(A, ctx):
    return prod(ctx, pinf(-1, 1), pinf(-1, 1, 2, c=1))


register(IdentityEntry(
    "sylvester-4.5", "Lebesgue's identity after c -> c/q", TRUNCATED,
    sylvester_lhs, sylvester_rhs, symbols=("c",), weights={"c": 1}))


# ---------------------------------------------------------------------------
# the finite three-parameter identity and its offshoots


def _m_le_l(A):
    return 0 <= A["M"] <= A["L"]


def fin_schur_lhs(A, ctx):
    L, M = A["L"], A["M"]
    return total(ctx, [prod(ctx, mono(q=T(i)), split_factor(i), pf(-1, i + 1, L - i, b=1), gb(M, i))
                       for i in range(M + 1) if not ctx.beyond(T(i))])


def fin_schur_rhs(A, ctx):
    L, M = A["L"], A["M"]
    terms = []
    for i in range(M + 1):
        for k in range(M - i + 1):
            for j in range(L - i - k + 1):
                e = T(i + j + k) + T(k)
                if ctx.beyond(e):
                    break
                terms.append(prod(ctx, mono(q=e, a=i, b=j, c=k), gb(M - i, k), gb(M, i), gb(L - i - k, j)))
    return total(ctx, terms)


register(IdentityEntry(
    "finite-schur-5.1", "finite three-parameter Schur identity in L, M", EXACT,
    fin_schur_lhs, fin_schur_rhs, ("L", "M"), _m_le_l, {"L": 6, "M": 5}, symbols=("a", "b", "c"),
    note="domain 0 <= M <= L keeps (-bq^{i+1})_{L-i} of nonnegative length"))


def _box(K):
    return itertools.product(range(K + 1), repeat=3)


def form54_lhs(A, ctx):
    # right side of the three-parameter identity before the binomial swap, with M -> Mp - j - k
    L, Mp, K = A["L"], A["Mp"], A["K"]
    return total(ctx, [
        prod(ctx, mono(q=T(i + j + k) + T(k), a=i, b=j, c=k), gb(L - i - k, j), gb(i + k, k), gb(Mp - j - k, i + k))
        for i, j, k in _box(K) if not ctx.beyond(T(i + j + k) + T(k))])


def form54_rhs(A, ctx):
    L, Mp, K = A["L"], A["Mp"], A["K"]
    return total(ctx, [
        prod(ctx, mono(q=T(i + j + k) + T(k), a=i, b=j, c=k),
             gb(Mp - (i + j + k), k), gb(Mp - (j + k), i), gb(L - (i + k), j))
        for i, j, k in _box(K) if not ctx.beyond(T(i + j + k) + T(k))])


register(IdentityEntry(
    "rhs-form-5.4", "symmetric right side after M -> M'-j-k, compared monomial by monomial", EXACT,
    form54_lhs, form54_rhs, ("L", "Mp", "K"), _nonneg("L", "Mp", "K"), {"L": 5, "Mp": 6, "K": 4},
    symbols=("a", "b", "c"), sweep_hi=5))


def fin_leb54_rhs(A, ctx):
    M = A["M"]
    return total(ctx, [prod(ctx, mono(q=T(i) + 2 * T(k) + i * k, c=k), gb(M - i, k), gb(M, i))
                       for i in range(M + 1) for k in range(M - i + 1)
                       if not ctx.beyond(T(i) + 2 * T(k) + i * k)])


register(IdentityEntry(
    "finite-lebesgue-5.4c", "finite Lebesgue identity with a q-multinomial right side", EXACT,
    fin_leb_lhs, fin_leb54_rhs, ("M",), _nonneg("M"), {"M": 6}, symbols=("c",)))


def ab_key_lhs(A, ctx):
    L, M = A["L"], A["M"]
    K = max(L, M, 0)
    return total(ctx, [prod(ctx, mono(q=T(i) + T(j), a=i, b=j), gb(L, j), gb(M - j, i))
                       for i in range(K + 1) for j in range(K + 1)])


def ab_key_rhs(A, ctx):
    L, M = A["L"], A["M"]
    K = max(L, M, 0)
    terms = []
    for i in range(K + 1):
        for j in range(K + 1):
            for k in range(min(i, j) + 1):
                terms.append(prod(ctx, mono(q=T(i + j - k) + T(k), a=i, b=j),
                                  gb(M - i - j + k, k), gb(M - j, i - k), gb(L - i, j - k)))
    return total(ctx, terms)


register(IdentityEntry(
    "ab-key-5.6", "double bounded key identity, summed against a^i b^j over a box", EXACT,
    ab_key_lhs, ab_key_rhs, ("L", "M"), _nonneg("L", "M"), {"L": 4, "M": 5}, symbols=("a", "b")))


def schur_prod_lhs(A, ctx):
    return prod(ctx, pf(-1, 1, A["M"], a=1), pf(-1, 1, A["L"], b=1))


def schur_prod_rhs(A, ctx):
    L, M = A["L"], A["M"]
    terms = []
    for i in range(M + 1):
        for k in range(M - i + 1):
            for j in range(L - i - k + 1):
                e = T(i + j + k) + T(k)
                if ctx.beyond(e):
                    break
                terms.append(prod(ctx, mono(q=e, a=i + k, b=j + k), gb(M - i, k), gb(M, i), gb(L - i - k, j)))
    return total(ctx, terms)


register(IdentityEntry(
    "schur-prod-5.7", "c = ab in the finite three-parameter identity", EXACT,
    schur_prod_lhs, schur_prod_rhs, ("L", "M"), _m_le_l, {"L": 6, "M": 5}, symbols=("a", "b")))


def coeff58_lhs(A, ctx):
    L, M, i, j = A["L"], A["M"], A["i"], A["j"]
    return total(ctx, [prod(ctx, mono(q=T(i + j - k) + T(k)), gb(M - i + k, k), gb(M, i - k), gb(L - i, j - k))
                       for k in range(min(i, j) + 1)])


def coeff58_rhs(A, ctx):
    L, M, i, j = A["L"], A["M"], A["i"], A["j"]
    return prod(ctx, mono(q=T(i) + T(j)), gb(L, j), gb(M, i))


register(IdentityEntry(
    "coeff-5.8", "coefficient of a^i b^j after c = ab", EXACT,
    coeff58_lhs, coeff58_rhs, ("L", "M", "i", "j"), lambda A: _m_le_l(A) and A["i"] >= 0 and A["j"] >= 0,
    {"L": 6, "M": 5, "i": 2, "j": 3}))


def trinomial_lhs(A, ctx):
    M = A["M"]
    s = total(Ctx(), [prod(Ctx(), mono(q=T(i)), split_factor(i), gb(M, i)) for i in range(M + 1)])
    return s.at_q_one()


def trinomial_rhs(A, ctx):
    return (mono(a=1) + mono(c=1) + Series.one()) ** A["M"]


register(IdentityEntry(
    "trinomial-5.9", "b = 0 and q -> 1 gives the trinomial theorem", EXACT,
    trinomial_lhs, trinomial_rhs, ("M",), _nonneg("M"), {"M": 4}, symbols=("a", "c"), sweep_hi=8))


# ---------------------------------------------------------------------------
# products and series for the Alladi-Schur theorem


def _lazy_product(factor: Callable[[int], Series], start_degree: Callable[[int], int]) -> Lazy:
    """``prod_{m>=1} factor(m)`` where factor m has least positive degree ``start_degree(m)``."""

    def make(Q):
        out = Series.one().truncate(Q)
        m = 1
        while start_degree(m) <= Q:
            out = out * factor(m)
            m += 1
        return out

    return Lazy(make, 0)


def trinomial_product(x: str = "a", weight: int = 1) -> Lazy:
    # prod (1 + x q^{2m-1} + x^2 q^{4m-2})
    def factor(m):
        return Series.one() + mono(q=2 * m - 1, **{x: weight}) + mono(q=4 * m - 2, **{x: 2 * weight})
    return _lazy_product(factor, lambda m: 2 * m - 1)


def odd_mod3_product(A, ctx):
    return prod(ctx, pinf(-1, 1, 3), pinf(-1, 2, 3))


def mod6_inverse_product(A, ctx):
    return prod(ctx, inv(math.inf, 6, 1, 1), inv(math.inf, 6, 1, 5))


def plain_trinomial_product(A, ctx):
    return prod(ctx, trinomial_product("a", weight=0))


register(IdentityEntry(
    "as-products-6.1", "distinct parts = 1, 2 mod 3 against parts = 1, 5 mod 6", TRUNCATED,
    odd_mod3_product, mod6_inverse_product, default_q=40))
register(IdentityEntry(
    "as-products-6.1-6.2", "parts = 1, 5 mod 6 against odd parts repeated at most twice", TRUNCATED,
    mod6_inverse_product, plain_trinomial_product, default_q=40))


def kursungoz_series(weights: Callable[[int, int, int, int], dict]):
    """Series over pairs and singletons; ``weights`` maps (n11, n10, n21, n22) to parameter exponents."""

    def build(A, ctx):
        Q = ctx.Q
        terms = []
        for n21 in itertools.count():
            e21 = 6 * n21 * n21 - n21
            if e21 > Q:
                break
            for n22 in itertools.count():
                e22 = e21 + 6 * n22 * n22 + n22 + 12 * n21 * n22
                if e22 > Q:
                    break
                for n11 in itertools.count():
                    e11 = e22 + 2 * n11 * n11 - n11 + 6 * (n21 + n22) * n11
                    if e11 > Q:
                        break
                    for n10 in itertools.count():
                        e = e11 + 2 * n10 * n10 + 6 * (n21 + n22) * n10 + 4 * n11 * n10
                        if e > Q:
                            break
                        terms.append(prod(ctx, mono(q=e, **weights(n11, n10, n21, n22)),
                                          inv(n11, 2), inv(n10, 2), inv(n21, 6), inv(n22, 6)))
        return total(ctx, terms)

    return build


def schur_tally_series(stat_weights: Mapping[str, Callable]):
    """Generating function of Schur partitions, enumerated part by part."""

    def build(A, ctx):
        terms: dict = {}
        for n in range(ctx.Q + 1):
            for p in enumerate_partitions(n, CONSTRAINTS["schur"]):
                m = Monomial.of(n, **{k: f(p) for k, f in stat_weights.items()})
                terms[m] = terms.get(m, 0) + 1
        return Series(terms, ctx.Q)

    return build


def _odd(p):
    return sum(1 for x in p if x % 2)


def _even(p):
    return sum(1 for x in p if x % 2 == 0)


register(IdentityEntry(
    "kursungoz-6.5", "pairs-and-singletons series for Schur partitions by parity", TRUNCATED,
    kursungoz_series(lambda n11, n10, n21, n22: {"a": n21 + n22 + n11, "b": n21 + n22 + n10}),
    schur_tally_series({"a": _odd, "b": _even}), symbols=("a", "b")))
register(IdentityEntry(
    "alladi-schur-key-6.8", "key identity for Andrews' refinement, b = a^2", TRUNCATED,
    kursungoz_series(lambda n11, n10, n21, n22: {"a": 3 * n21 + 3 * n22 + n11 + 2 * n10}),
    lambda A, ctx: prod(ctx, trinomial_product("a")), symbols=("a",)))


def acl_series(square_on: int, b_separate: bool):
    """Alternating triple sum; ``square_on`` is 3 for the 9 n3^2 exponent, 2 for the 9 n2^2 one."""

    def build(A, ctx):
        Q = ctx.Q
        acap = ctx.param_caps.get("a")
        terms = []
        limit = Q if acap is None else acap
        for n1 in range(Q + 1):
            for n2 in range(Q + 1):
                for n3 in range(limit + 1):
                    e = 2 * n1 * n1 - n1 + 2 * n2 * n2 + 2 * n1 * n2 + 6 * n1 * n3 + 6 * n2 * n3
                    e += 9 * (n3 * n3 if square_on == 3 else n2 * n2)
                    if e > Q:
                        continue
                    if b_separate:
                        w = {"a": n1 + n2 + 2 * n3, "b": n2 + n3}
                    else:
                        w = {"a": n1 + 2 * n2 + 3 * n3}
                    if acap is not None and w["a"] > acap:
                        continue
                    terms.append(prod(ctx, mono((-1) ** n3, e, **w), inv(n1, 2), inv(n2, 2), inv(n3, 6)))
        return with_caps(ctx, total(ctx, terms))

    return build


register(IdentityEntry(
    "acl-6.9", "alternating triple sum for Schur partitions with a^{m1+m2} b^{m2}", TRUNCATED,
    acl_series(3, True), schur_tally_series({"a": len, "b": _even}), symbols=("a", "b"),
    note="m2 counts even parts; fixed by the enumeration cross-check"))
register(IdentityEntry(
    "acl-6.10", "alternating triple sum at a = b equals the trinomial product (9 n3^2 reading)", TRUNCATED,
    acl_series(3, False), lambda A, ctx: prod(ctx, trinomial_product("a")), symbols=("a",)))
register(IdentityEntry(
    "acl-6.10-literal", "alternating triple sum at a = b with the exponent printed as 9 n2^2", TRUNCATED,
    acl_series(2, False), lambda A, ctx: with_caps(ctx, prod(ctx, trinomial_product("a"))),
    expected=NON_IDENTITY, symbols=("a",), param_caps={"a": 9}, default_q=12,
    note="without an n3^2 term the sum does not converge q-adically; an a-cap makes it finite"))


# ---------------------------------------------------------------------------
# Capparelli


def capp_series_side(c_one: bool = False):
    """Sum over i, j of a^i b^j q^{2T_i+2T_j} (-q)_{i+j} (-c q^{i+j+1})_inf / ((q^2;q^2)_i (q^2;q^2)_j)."""

    def build(A, ctx):
        terms = []
        for i in itertools.count():
            if ctx.beyond(2 * T(i)):
                break
            for j in itertools.count():
                e = 2 * T(i) + 2 * T(j)
                if ctx.beyond(e):
                    break
                tail = pinf(-1, i + j + 1) if c_one else pinf(-1, i + j + 1, c=1)
                terms.append(prod(ctx, mono(q=e, a=i, b=j), pf(-1, 1, i + j), tail, inv(i, 2), inv(j, 2)))
        return total(ctx, terms)

    return build


def _capp_triples(ctx):
    for i in itertools.count():
        if ctx.beyond(2 * T(i)):
            return
        for j in itertools.count():
            if ctx.beyond(2 * T(i) + 2 * T(j)):
                break
            for k in itertools.count():
                e = 2 * T(i) + 2 * T(j) + T(k) + (i + j) * k
                if ctx.beyond(e):
                    break
                yield i, j, k, e


def capp_key_rhs(A, ctx):
    return total(ctx, [prod(ctx, mono(q=e, a=i, b=j, c=k), gb(i + j + k, k), gb(i + j, i, 2), inv(i + j + k))
                       for i, j, k, e in _capp_triples(ctx)])


def capp_rewrite_lhs(A, ctx):
    # (q^2;q^2)_{i+j} / ((q)_{i+j} (q)_k (q^2;q^2)_i (q^2;q^2)_j), nothing cancelled by hand
    return total(ctx, [prod(ctx, mono(q=e, a=i, b=j, c=k), pf(1, 2, i + j, 2),
                            inv(i + j), inv(k), inv(i, 2), inv(j, 2))
                       for i, j, k, e in _capp_triples(ctx)])


def capp_product(A, ctx):
    return prod(ctx, pinf(-1, 2, 2, a=1), pinf(-1, 2, 2, b=1), pinf(-1, 1))


register(IdentityEntry(
    "capparelli-key-7.1", "Capparelli key identity, split product = q-binomial triple sum", TRUNCATED,
    capp_series_side(), capp_key_rhs, symbols=("a", "b", "c"), weights={"a": 2, "b": 2}))
register(IdentityEntry(
    "capparelli-rewrite-7.2", "triple sum with (q^2;q^2)_{i+j}/(q)_{i+j} left uncancelled", TRUNCATED,
    capp_rewrite_lhs, capp_series_side(), symbols=("a", "b", "c")))
register(IdentityEntry(
    "capparelli-prod-7.3", "c = 1 turns the split side into a product", TRUNCATED,
    capp_series_side(c_one=True), capp_product, symbols=("a", "b"), weights={"a": 2, "b": 2}))


def capparelli_c_product(A, ctx):
    return prod(ctx, pinf(-1, 4, 6), pinf(-1, 2, 6), pinf(-1, 3, 3))


def capparelli_cstar_product(A, ctx):
    return prod(ctx, *(inv(math.inf, 12, 1, r) for r in (2, 3, 9, 10)))


def capparelli_a_product(A, ctx):
    return prod(ctx, pinf(-1, 1, 6), pinf(-1, 5, 6), pinf(-1, 3, 3))


def tally_series(constraint: str):
    def build(A, ctx):
        c = CONSTRAINTS[constraint]
        return Series({Monomial(n): len(enumerate_partitions(n, c)) for n in range(ctx.Q + 1)}, ctx.Q)
    return build


register(IdentityEntry(
    "capparelli-c-7.4", "distinct parts = 2, 3, 4, 6 mod 6 against parts = +-2, +-3 mod 12", TRUNCATED,
    capparelli_c_product, capparelli_cstar_product, default_q=40))
register(IdentityEntry(
    "capparelli-second-7.5", "distinct parts = 1, 3, 5, 6 mod 6 against the difference conditions without 2",
    TRUNCATED, capparelli_a_product, tally_series("capparelli-B2"), default_q=30))


def limit78_lhs(A, ctx):
    terms = []
    for i in itertools.count():
        if ctx.beyond(2 * T(i)):
            break
        for j in itertools.count():
            e = 2 * T(i) + 2 * T(j)
            if ctx.beyond(e):
                break
            terms.append(prod(ctx, mono(q=e, a=j, b=i, c=i), pf(-1, 1, i), pinf(-1, i + 1, c=1),
                              inv(i, 2), inv(j, 2)))
    return total(ctx, terms)


def limit78_rhs(A, ctx):
    terms = []
    N = 0
    while not ctx.beyond(T(N)):
        terms.append(prod(ctx, mono(q=T(N), c=N), pf(-1, 1, N, b=1), inv(N)))
        N += 1
    return prod(ctx, pinf(-1, 2, 2, a=1), total(ctx, terms))


register(IdentityEntry(
    "limit-7.8", "infinite two-bound Capparelli-Lebesgue identity", TRUNCATED,
    limit78_lhs, limit78_rhs, symbols=("a", "b", "c")))


def fin77_lhs(A, ctx):
    m, n, l = A["m"], A["n"], A["l"]
    return total(ctx, [prod(ctx, mono(q=2 * T(i) + 2 * T(j), a=j, b=i, c=i), gb(m, i), gb(n, j, 2),
                            pf(-1, i + 1, l + j, c=1))
                       for i in range(m + 1) for j in range(n + 1) if not ctx.beyond(2 * T(i) + 2 * T(j))])


def fin77_rhs(A, ctx):
    m, n, l = A["m"], A["n"], A["l"]
    terms = []
    for N in range(m + n + l + 1):
        for j in range(n + 1):
            for i in range(min(m, N) + 1):
                e = T(N) + T(i) + 2 * T(j)
                if N - i > l + j or ctx.beyond(e):
                    continue
                terms.append(prod(ctx, mono(q=e, a=j, b=i, c=N), gb(m, i), gb(n, j, 2), gb(l + j, N - i)))
    return total(ctx, terms)


register(IdentityEntry(
    "finite-7.7", "finite two-bound Capparelli-Lebesgue identity in m, n, l", EXACT,
    fin77_lhs, fin77_rhs, ("m", "n", "l"), _nonneg("m", "n", "l"), {"m": 3, "n": 3, "l": 2},
    symbols=("a", "b", "c")))


def _capp_bounds(A):
    return A["M1"] >= 0 and A["M2"] >= 0 and A["L"] >= A["M1"] + A["M2"]


def capp_finite_lhs(bound1: Callable[[Assignment, int], int] | None = None):
    """Sum of a^i b^j q^{2T_i+2T_j} [M1,i]_{q^2} [M2,j]_{q^2} (-q)_{i+j} (-cq^{i+j+1})_{L-i-j}."""

    def build(A, ctx):
        L = A["L"]
        terms = []
        for j in range(L + 1):
            M2 = A["M2"] if "M2" in A else L
            if j > M2:
                break
            M1 = bound1(A, j) if bound1 else A["M1"]
            for i in range(max(M1, -1) + 1):
                e = 2 * T(i) + 2 * T(j)
                if i + j > L or ctx.beyond(e):
                    break
                terms.append(prod(ctx, mono(q=e, a=i, b=j), gb(M1, i, 2), gb(M2, j, 2), pf(-1, 1, i + j),
                                  pf(-1, i + j + 1, L - i - j, c=1)))
        return total(ctx, terms)

    return build


def _m_factor(M: int, nu: int, literal: bool = False) -> Series:
    # (q^{2M-2nu+2}; q^2)_nu; the literal variant starts at q^{M-2nu+2}
    return pf(1, (M if literal else 2 * M) - 2 * nu + 2, nu, 2)


def capp710_rhs(literal: bool = False):
    def build(A, ctx):
        # common denominator (q)_L; summand (i,j,k) carries (q^{i+j+k+1})_{L-i-j-k}
        M1, M2, L = A["M1"], A["M2"], A["L"]
        terms = []
        for i in range(M1 + 1):
            for j in range(M2 + 1):
                for k in range(L - i - j + 1):
                    e = 2 * T(i) + 2 * T(j) + T(k) + (i + j) * k
                    if ctx.beyond(e):
                        break
                    terms.append(prod(ctx, mono(q=e, a=i, b=j, c=k), pf(1, L - i - j - k + 1, k),
                                      _m_factor(M1, i), _m_factor(M2, j, literal),
                                      gb(i + j + k, k), gb(i + j, i, 2), pf(1, i + j + k + 1, L - i - j - k)))
        return over(ctx, total(ctx, terms), pf(1, 1, L))
    return build


def capp711_rhs(A, ctx):
    # 1/(q^{L-i-j+1})_{i+j} = (q)_{L-i-j}/(q)_L
    M1, M2, L = A["M1"], A["M2"], A["L"]
    terms = []
    for i in range(M1 + 1):
        for j in range(M2 + 1):
            for k in range(L - i - j + 1):
                e = 2 * T(i) + 2 * T(j) + T(k) + (i + j) * k
                if ctx.beyond(e):
                    break
                terms.append(prod(ctx, mono(q=e, a=i, b=j, c=k), gb(L, i + j + k), gb(i + j + k, k),
                                  gb(i + j, i, 2), _m_factor(M1, i), _m_factor(M2, j), pf(1, 1, L - i - j)))
    return over(ctx, total(ctx, terms), pf(1, 1, L))


def capp712(A, ctx):
    M1, M2, L = A["M1"], A["M2"], A["L"]
    terms = []
    for i in range(M1 + 1):
        for j in range(M2 + 1):
            for k in range(L - i - j + 1):
                e = 2 * T(i) + 2 * T(j) + T(k) + (i + j) * k
                if ctx.beyond(e):
                    break
                terms.append(prod(ctx, mono(q=e, a=i, b=j, c=k), gb(M1, i, 2), gb(M2, j, 2), gb(L - i - j, k),
                                  pf(-1, 1, i + j)))
    return total(ctx, terms)


register(IdentityEntry(
    "finite-capparelli-7.10", "finite Capparelli key identity keeping the (q)_{i+j+k} form", EXACT,
    capp_finite_lhs(), capp710_rhs(), ("M1", "M2", "L"), _capp_bounds, {"M1": 2, "M2": 3, "L": 6},
    symbols=("a", "b", "c"), note="the second M-factor is read as (q^{2M2-2j+2};q^2)_j"))
register(IdentityEntry(
    "finite-capparelli-7.11", "finite Capparelli key identity with [L, i+j+k] for L >= M1+M2", EXACT,
    capp_finite_lhs(), capp711_rhs, ("M1", "M2", "L"), _capp_bounds, {"M1": 2, "M2": 3, "L": 6},
    symbols=("a", "b", "c")))
register(IdentityEntry(
    "rhs-cancel-7.12", "cancelled form of the finite Capparelli right side", EXACT,
    capp710_rhs(), capp712, ("M1", "M2", "L"), _capp_bounds, {"M1": 2, "M2": 3, "L": 6},
    symbols=("a", "b", "c")))


def coeff714_lhs(A, ctx):
    M1, M2, L, i, j = (A[k] for k in ("M1", "M2", "L", "i", "j"))
    return prod(ctx, mono(q=2 * T(i) + 2 * T(j), a=i, b=j), gb(M1, i, 2), gb(M2, j, 2), pf(-1, 1, i + j),
                pf(-1, i + j + 1, L - i - j, c=1))


def coeff714_rhs(A, ctx):
    M1, M2, L, i, j = (A[k] for k in ("M1", "M2", "L", "i", "j"))
    terms = []
    for k in range(L - i - j + 1):
        e = 2 * T(i) + 2 * T(j) + T(k) + (i + j) * k
        terms.append(prod(ctx, mono(q=e, a=i, b=j, c=k), pf(1, L - i - j - k + 1, k), _m_factor(M1, i),
                          _m_factor(M2, j), gb(i + j + k, k), gb(i + j, i, 2), pf(1, i + j + k + 1, L - i - j - k)))
    return over(ctx, total(ctx, terms), pf(1, 1, L))


register(IdentityEntry(
    "coeff-7.14", "a^i b^j coefficient of the finite Capparelli identity, any integer bounds", EXACT,
    coeff714_lhs, coeff714_rhs, ("M1", "M2", "L", "i", "j"),
    lambda A: A["i"] >= 0 and A["j"] >= 0 and A["L"] >= A["i"] + A["j"],
    {"M1": -2, "M2": 3, "L": 4, "i": 1, "j": 2}, symbols=("a", "b", "c"),
    sweep_space={"M1": range(-3, 6), "M2": range(-3, 6), "L": range(-3, 6), "i": range(0, 4), "j": range(0, 4)},
    note="L >= i+j keeps every Pochhammer of nonnegative length"))


def shifted715_rhs(A, ctx):
    L = A["L"]
    terms = []
    for i in range(L + 1):
        for j in range(L - i + 1):
            for k in range(L - i - j + 1):
                e = 2 * T(i) + 2 * T(j) + T(k) + (i + j) * k
                if ctx.beyond(e):
                    break
                terms.append(prod(ctx, mono(q=e, a=i, b=j, c=k), gb(L, i + j + k), gb(i + j + k, k),
                                  gb(i + j, i, 2), pf(-1, L - i - j + 1, i + j)))
    return total(ctx, terms)


register(IdentityEntry(
    "shifted-7.15", "bound-shifted finite Capparelli identity, M1 = L - j, M2 = L", EXACT,
    capp_finite_lhs(lambda A, j: A["L"] - j), shifted715_rhs, ("L",), _nonneg("L"), {"L": 5},
    symbols=("a", "b", "c")))


# ---------------------------------------------------------------------------
# The infinite hierarchy


def _nu_trunc(ctx: Ctx, r: int, weight: int = 2):
    return tuples_bounded(r, lambda t: not ctx.beyond(weight * sum(T(v) for v in t)), ctx.Q)


def _nu_box(bounds: Sequence[int], ctx: Ctx, weight: int = 2):
    """Tuples with ``0 <= nu_i <= bounds[i]``, pruned once ``weight * sum T`` passes ``ctx.Q``."""

    def rec(i, prefix, deg):
        if i == len(bounds):
            yield tuple(prefix)
            return
        for v in range(bounds[i] + 1):
            d = deg + weight * T(v)
            if ctx.beyond(d):
                break
            prefix.append(v)
            yield from rec(i + 1, prefix, d)
            prefix.pop()

    yield from rec(0, [], 0)


def _a(nu) -> dict[str, int]:
    return {f"a{i}": v for i, v in enumerate(nu, 1)}


def _hier_names(A):
    return ("r", *(f"M{i}" for i in range(1, A["r"] + 1)), "L")


def _hier_bounds(A):
    Ms = [A[f"M{i}"] for i in range(1, A["r"] + 1)]
    return A["r"] >= 0 and all(m >= 0 for m in Ms) and A["L"] >= sum(Ms)


def _hier_defaults(r):
    return {**{f"M{i}": 2 for i in range(1, r + 1)}, "L": 2 * r + 1}


def _Ms(A):
    return [A[f"M{i}"] for i in range(1, A["r"] + 1)]


def _hier_symbols(with_c: bool):
    # symbols depend on r; the entry lists the r = 4 superset
    return tuple(a_names(4)) + (("c",) if with_c else ())


def hier_lhs(with_c: bool = True):
    """Sum of a^nu c^k q^{2 sum T + T_k + kN} (-q)_N / (prod (q^2;q^2)_nu (q)_k)."""

    def build(A, ctx):
        terms = []
        for nu in _nu_trunc(ctx, A["r"]):
            N = sum(nu)
            base = 2 * sum(T(v) for v in nu)
            for k in itertools.count():
                e = base + T(k) + k * N
                if ctx.beyond(e):
                    break
                m = mono(q=e, **_a(nu), **({"c": k} if with_c else {}))
                terms.append(prod(ctx, m, pf(-1, 1, N), *(inv(v, 2) for v in nu), inv(k)))
        return total(ctx, terms)

    return build


def hier_rhs(A, ctx):
    terms = []
    for nu in _nu_trunc(ctx, A["r"]):
        N = sum(nu)
        terms.append(prod(ctx, mono(q=2 * sum(T(v) for v in nu), **_a(nu)), pf(-1, 1, N), pinf(-1, N + 1, c=1),
                          *(inv(v, 2) for v in nu)))
    return total(ctx, terms)


def hier_product(A, ctx):
    return prod(ctx, *(pinf(-1, 2, 2, **{n: 1}) for n in a_names(A["r"])), pinf(-1, 1))


def hier_form_lhs(A, ctx):
    terms = []
    for nu in _nu_trunc(ctx, A["r"]):
        N = sum(nu)
        base = 2 * sum(T(v) for v in nu)
        for k in itertools.count():
            e = base + T(k) + k * N
            if ctx.beyond(e):
                break
            terms.append(prod(ctx, mono(q=e, c=k, **_a(nu)), qmulti(N, nu, 2), gb(N + k, k), inv(N + k)))
    return total(ctx, terms)


_R_SWEEP = (0, 1, 2, 3, 4)
# every summand has q-degree >= 2 (nu_1 + ... + nu_r)
_HIER_WEIGHTS = {n: 2 for n in a_names(4)}

register(IdentityEntry(
    "hierarchy-8.1", "infinite hierarchy, level r", TRUNCATED,
    hier_lhs(), hier_rhs, ("r",), lambda A: A["r"] >= 0, {"r": 2}, symbols=_hier_symbols(True),
    sweep_r=_R_SWEEP, weights=_HIER_WEIGHTS))
register(IdentityEntry(
    "hierarchy-prod-8.2", "infinite hierarchy at c = 1 as a product", TRUNCATED,
    hier_lhs(with_c=False), hier_product, ("r",), lambda A: A["r"] >= 0, {"r": 2},
    symbols=_hier_symbols(False), sweep_r=_R_SWEEP, weights=_HIER_WEIGHTS,
    note="every factor of the product is (-a_i q^2; q^2)_inf"))
register(IdentityEntry(
    "hierarchy-form-8.1b", "infinite hierarchy written with a q^2-multinomial", TRUNCATED,
    hier_form_lhs, hier_rhs, ("r",), lambda A: A["r"] >= 0, {"r": 2}, symbols=_hier_symbols(True),
    sweep_r=_R_SWEEP, weights=_HIER_WEIGHTS))


def c5_sum_side(A, ctx):
    return prod(ctx, *(pinf(-1, j, 10) for j in (2, 4, 6, 8)), pinf(-1, 5, 5))


def c5_product_side(A, ctx):
    return prod(ctx, inv(math.inf, 10, 1, 5), *(inv(math.inf, 20, 1, j) for j in (2, 6, 14, 18)))


def capp_pair_side(A, ctx):
    return prod(ctx, inv(math.inf, 6, 1, 3), inv(math.inf, 12, 1, 2), inv(math.inf, 12, 1, 10))


register(IdentityEntry(
    "capparelli-products-8.9", "two product forms for Capparelli's first theorem", TRUNCATED,
    capp_pair_side, capparelli_cstar_product, default_q=40))
register(IdentityEntry(
    "c5-products-8.9-8.10", "distinct parts 2, 4, 6, 8 mod 10 and multiples of 5 as a modulus 20 product",
    TRUNCATED, c5_sum_side, c5_product_side, default_q=40))


@lru_cache(maxsize=None)
def _poch_in(M: int, name: str, a: str) -> Series:
    # (-a q_i; q_i)_M with q_i carried by ``name``
    return to_param(pf(-1, 1, M, **{a: 1}), name)


def fin811_lhs(A, ctx):
    Ms, L = _Ms(A), A["L"]
    terms = []
    for nu in _nu_box(Ms, ctx, weight=0):
        N = sum(nu)
        for k in range(L - N + 1):
            factors = [gb_in(M, v, f"q{i}") for i, (M, v) in enumerate(zip(Ms, nu), 1)]
            bases = {f"q{i}": T(v) for i, v in enumerate(nu, 1)}
            terms.append(prod(ctx, mono(q=T(k) + k * N, **_a(nu), **bases), *factors, gb(L - N, k), pf(-1, 1, N)))
    return total(ctx, terms)


def fin811_rhs(A, ctx):
    Ms = _Ms(A)
    return prod(ctx, *(_poch_in(M, f"q{i}", f"a{i}") for i, M in enumerate(Ms, 1)), pf(-1, 1, A["L"]))


def fin815_lhs(A, ctx):
    Ms, L = _Ms(A), A["L"]
    terms = []
    for nu in _nu_box(Ms, ctx):
        N = sum(nu)
        base = 2 * sum(T(v) for v in nu)
        for k in range(L - N + 1):
            terms.append(prod(ctx, mono(q=base + T(k) + k * N, **_a(nu)),
                              *(gb(M, v, 2) for M, v in zip(Ms, nu)), gb(L - N, k), pf(-1, 1, N)))
    return total(ctx, terms)


def fin815_rhs(A, ctx):
    return prod(ctx, *(pf(-1, 2, M, 2, **{f"a{i}": 1}) for i, M in enumerate(_Ms(A), 1)), pf(-1, 1, A["L"]))


def _hier_m_factors(Ms, nu):
    return [_m_factor(M, v) for M, v in zip(Ms, nu)]


def fin816_lhs(A, ctx):
    # common denominator (q)_L; the summand carries (q^{N+k+1})_{L-N-k}
    Ms, L = _Ms(A), A["L"]
    terms = []
    for nu in _nu_box(Ms, ctx):
        N = sum(nu)
        base = 2 * sum(T(v) for v in nu)
        for k in range(L - N + 1):
            terms.append(prod(ctx, mono(q=base + T(k) + k * N, c=k, **_a(nu)), pf(1, L - N - k + 1, k),
                              qmulti(N, nu, 2), gb(N + k, k), *_hier_m_factors(Ms, nu),
                              pf(1, N + k + 1, L - N - k)))
    return over(ctx, total(ctx, terms), pf(1, 1, L))


def fin817_lhs(A, ctx):
    # 1/(q^{L-N+1})_N = (q)_{L-N}/(q)_L
    Ms, L = _Ms(A), A["L"]
    terms = []
    for nu in _nu_box(Ms, ctx):
        N = sum(nu)
        base = 2 * sum(T(v) for v in nu)
        for k in range(L - N + 1):
            e = base + T(k) + k * N
            if ctx.beyond(e):
                break
            terms.append(prod(ctx, mono(q=e, c=k, **_a(nu)), gb(L, N + k), qmulti(N, nu, 2), gb(N + k, k),
                              *_hier_m_factors(Ms, nu), pf(1, 1, L - N)))
    return over(ctx, total(ctx, terms), pf(1, 1, L))


def fin816_rhs(A, ctx):
    Ms, L = _Ms(A), A["L"]
    terms = []
    for nu in _nu_box(Ms, ctx):
        N = sum(nu)
        e = 2 * sum(T(v) for v in nu)
        if ctx.beyond(e):
            continue
        terms.append(prod(ctx, mono(q=e, **_a(nu)), *(gb(M, v, 2) for M, v in zip(Ms, nu)), pf(-1, 1, N),
                          pf(-1, N + 1, L - N, c=1)))
    return total(ctx, terms)



def shifted818_lhs(A, ctx):
    r, L = A["r"], A["L"]
    terms = []
    for nu in tuples_bounded(r, lambda t: sum(t) <= L, L):
        N = sum(nu)
        base = 2 * sum(T(v) for v in nu)
        for k in range(L - N + 1):
            terms.append(prod(ctx, mono(q=base + T(k) + k * N, c=k, **_a(nu)), gb(L, N + k), qmulti(N, nu, 2),
                              gb(N + k, k), pf(-1, L - N + 1, N)))
    return total(ctx, terms)


def shifted818_rhs(A, ctx):
    r, L = A["r"], A["L"]
    terms = []
    for nu in tuples_bounded(r, lambda t: sum(t) <= L, L):
        N = sum(nu)
        # the i-th binomial has top L - (nu_{i+1} + ... + nu_r)
        tops = [L - sum(nu[i + 1:]) for i in range(r)]
        terms.append(prod(ctx, mono(q=2 * sum(T(v) for v in nu), **_a(nu)),
                          *(gb(t, v, 2) for t, v in zip(tops, nu)), pf(-1, 1, N), pf(-1, N + 1, L - N, c=1)))
    return total(ctx, terms)


_HIER_R = (1, 2, 3)

register(IdentityEntry(
    "finite-hierarchy-8.11", "finite hierarchy with an independent base for each a_i", EXACT,
    fin811_lhs, fin811_rhs, _hier_names, _hier_bounds, {"r": 2}, symbols=_hier_symbols(False),
    sweep_r=_HIER_R, defaults_for=_hier_defaults, sweep_hi=5,
    note="q_1..q_r are extra parameters; no c on either side"))
register(IdentityEntry(
    "finite-hierarchy-8.15", "finite hierarchy with every base equal to q^2", EXACT,
    fin815_lhs, fin815_rhs, _hier_names, _hier_bounds, {"r": 2}, symbols=_hier_symbols(False),
    sweep_r=_HIER_R, defaults_for=_hier_defaults))
register(IdentityEntry(
    "finite-8.16", "finite hierarchy keeping the (q)_{N+k} form", EXACT,
    fin816_lhs, fin816_rhs, _hier_names, _hier_bounds, {"r": 2}, symbols=_hier_symbols(True),
    sweep_r=_HIER_R, defaults_for=_hier_defaults))
register(IdentityEntry(
    "finite-8.17", "finite hierarchy with [L, N+k] for L >= M_1 + ... + M_r", EXACT,
    fin817_lhs, fin816_rhs, _hier_names, _hier_bounds, {"r": 2}, symbols=_hier_symbols(True),
    sweep_r=_HIER_R, defaults_for=_hier_defaults))
register(IdentityEntry(
    "shifted-8.18", "bound-shifted finite hierarchy", EXACT,
    shifted818_lhs, shifted818_rhs, ("r", "L"), lambda A: A["r"] >= 0 and A["L"] >= 0, {"r": 2, "L": 4},
    symbols=_hier_symbols(True), sweep_r=_HIER_R))


def negq3_lhs(A, ctx):
    # bounds M_1 = ... = L = Q + 1 are stable to q^Q; epsilon = 1
    r, B = A["r"], ctx.Q + 1
    terms = []
    for nu in _nu_trunc(ctx, r, 3):
        N = sum(nu)
        base = 3 * sum(T(v) for v in nu)
        for k in range(B - N + 1):
            e = base + T(k) + k * N
            if ctx.beyond(e):
                break
            terms.append(prod(ctx, mono(q=e, c=k, **_a(nu)), gb(B, N + k), qmulti(N, nu, 3), gb(N + k, k)))
    return total(ctx, terms)


def negq3_rhs(A, ctx):
    r, B = A["r"], ctx.Q + 1
    terms = []
    for nu in _nu_trunc(ctx, r, 3):
        N = sum(nu)
        terms.append(prod(ctx, mono(q=3 * sum(T(v) for v in nu), **_a(nu)), *(gb(B, v, 3) for v in nu),
                          pf(-1, 1, N), pf(-1, N + 1, B - N, c=1)))
    return total(ctx, terms)


register(IdentityEntry(
    "neg-q3-form", "the q^3 analog of the multinomial form is not an identity", TRUNCATED,
    negq3_lhs, negq3_rhs, ("r",), lambda A: A["r"] >= 1, {"r": 1}, expected=NON_IDENTITY,
    symbols=("a1", "c"), default_q=8,
    note="all bounds equal Q + 1, which is stable to q^Q"))
