"""Exact sparse Laurent series in q with nonnegative-exponent parameters.

A :class:`Series` maps monomials ``q^e * a^i * b^j * ...`` to Python integers.
Only ``q`` may carry a negative exponent.  A series is either exact (a
Laurent polynomial) or truncated: its coefficients are known for all
``q``-exponents up to ``q_cap`` and nothing beyond is stored.  Optional
per-parameter caps quotient out high powers of a parameter.

Internally a monomial is packed into one integer: the ``q`` exponent sits in
the high bits and every parameter gets a 16-bit slot below it, the first
parameter name in the most significant slot.  Multiplying monomials is then
integer addition and sorting the packed keys orders terms by ``q`` first,
then by parameter exponents in name order.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

BITS = 16
SLOT = 1 << BITS
MAX_PARAM_EXP = SLOT - 1

__all__ = [
    "InsufficientTruncation",
    "Monomial",
    "Series",
    "Comparison",
    "add",
    "mul",
    "dilate",
    "translate",
    "substitute",
    "coeff_of",
    "equal_up_to",
    "parse",
    "serialize",
    "sum_series",
    "divide_exact",
    "to_param",
    "product_cap",
]


class InsufficientTruncation(ValueError):
    """Raised when a result or query would reach past a series' validity order.

    ``required`` is the smallest truncation order that would have sufficed,
    when it can be determined.
    """

    def __init__(self, message: str, required: int | None = None):
        super().__init__(message)
        self.required = required


@dataclass(frozen=True, order=False)
class Monomial:
    """A monomial ``q^q_exp * prod(name^exp)`` with only nonzero exponents stored."""

    q_exp: int = 0
    params: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        items = tuple(sorted((n, e) for n, e in dict(self.params).items() if e != 0))
        for name, e in items:
            if name == "q":
                raise ValueError("'q' is not a parameter name")
            if e < 0:
                raise ValueError(f"parameter exponent must be nonnegative: {name}^{e}")
        object.__setattr__(self, "params", items)

    @classmethod
    def of(cls, q: int = 0, **params: int) -> "Monomial":
        return cls(q, tuple(params.items()))

    def exp(self, name: str) -> int:
        return dict(self.params).get(name, 0)

    def sort_key(self) -> tuple:
        return (self.q_exp, self.params)

    def __str__(self) -> str:
        s = _format_factors(self.params, self.q_exp)
        return s or "1"


def _format_factors(params: Iterable[tuple[str, int]], q_exp: int) -> str:
    out = []
    for name, e in params:
        out.append(name if e == 1 else f"{name}^{e}")
    if q_exp:
        out.append("q" if q_exp == 1 else f"q^{q_exp}")
    return "*".join(out)


# -- key packing -----------------------------------------------------------

def _encode(q_exp: int, exps: tuple[int, ...]) -> int:
    key = q_exp
    for e in exps:
        if e > MAX_PARAM_EXP:
            raise OverflowError(f"parameter exponent {e} too large")
        key = (key << BITS) | e
    return key


def _decode(key: int, nv: int) -> tuple[int, tuple[int, ...]]:
    exps = [0] * nv
    for i in range(nv - 1, -1, -1):
        exps[i] = key & MAX_PARAM_EXP
        key >>= BITS
    return key, tuple(exps)


def _q_of(key: int, nv: int) -> int:
    return key >> (BITS * nv)


def _reencode(terms: Mapping[int, int], old: tuple[str, ...], new: tuple[str, ...]) -> dict[int, int]:
    if old == new:
        return dict(terms)
    pos = [new.index(v) for v in old]
    nn = len(new)
    out = {}
    for key, c in terms.items():
        q_exp, exps = _decode(key, len(old))
        full = [0] * nn
        for p, e in zip(pos, exps):
            full[p] = e
        out[_encode(q_exp, tuple(full))] = c
    return out


def _min_cap(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _merge_param_caps(a: Mapping[str, int], b: Mapping[str, int]) -> dict[str, int]:
    out = dict(a)
    for k, v in b.items():
        out[k] = min(v, out[k]) if k in out else v
    return out


class Series:
    """Immutable exact or truncated multivariate Laurent series over the integers.

    ``q_cap is None`` means exact.  Otherwise every coefficient with
    ``q``-exponent ``<= q_cap`` is correct and no term above it is stored.
    """

    __slots__ = ("_vars", "_terms", "_q_cap", "_param_caps", "_min_q")

    def __init__(
        self,
        terms: Mapping[Monomial, int] | None = None,
        q_cap: int | None = None,
        param_caps: Mapping[str, int] | None = None,
    ):
        terms = terms or {}
        names = sorted({n for m in terms for n, _ in m.params} | set(param_caps or {}))
        vars_ = tuple(names)
        packed: dict[int, int] = {}
        for m, c in terms.items():
            exps = tuple(m.exp(v) for v in vars_)
            key = _encode(m.q_exp, exps)
            packed[key] = packed.get(key, 0) + c
        self._init(vars_, packed, q_cap, dict(param_caps or {}))

    def _init(self, vars_, packed, q_cap, param_caps, clean=True):
        if clean:
            nv = len(vars_)
            slot_caps = [(i, param_caps[v]) for i, v in enumerate(vars_) if v in param_caps]
            out = {}
            for key, c in packed.items():
                if not c:
                    continue
                if q_cap is not None and _q_of(key, nv) > q_cap:
                    continue
                if slot_caps:
                    _, exps = _decode(key, nv)
                    if any(exps[i] > cap for i, cap in slot_caps):
                        continue
                out[key] = c
            packed = out
        self._vars = vars_
        self._terms = packed
        self._q_cap = q_cap
        self._param_caps = param_caps
        self._min_q = None

    @classmethod
    def _raw(cls, vars_, packed, q_cap=None, param_caps=None, clean=True) -> "Series":
        s = cls.__new__(cls)
        s._init(tuple(vars_), packed, q_cap, dict(param_caps or {}), clean)
        return s

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "Series":
        return cls._raw((), {})

    @classmethod
    def one(cls) -> "Series":
        return cls.const(1)

    @classmethod
    def const(cls, c: int) -> "Series":
        return cls._raw((), {0: c})

    @classmethod
    def monomial(cls, coeff: int = 1, q: int = 0, **params: int) -> "Series":
        """``coeff * q^q * prod(name^exp)``; e.g. ``Series.monomial(-1, 1, c=1)`` is ``-cq``."""
        m = Monomial.of(q, **params)
        return cls({m: coeff})

    @classmethod
    def var(cls, name: str) -> "Series":
        return cls.monomial(1, 0, **{name: 1})

    # -- inspection --------------------------------------------------------

    @property
    def q_cap(self) -> int | None:
        return self._q_cap

    @property
    def param_caps(self) -> dict[str, int]:
        return dict(self._param_caps)

    @property
    def is_exact(self) -> bool:
        return self._q_cap is None

    @property
    def params(self) -> tuple[str, ...]:
        """Parameter names that occur in some stored term."""
        nv = len(self._vars)
        used = [False] * nv
        for key in self._terms:
            _, exps = _decode(key, nv)
            for i, e in enumerate(exps):
                if e:
                    used[i] = True
        return tuple(v for v, u in zip(self._vars, used) if u)

    @property
    def min_q(self) -> float | int:
        """Minimum stored q-exponent; ``math.inf`` for the zero series."""
        if self._min_q is None:
            if self._terms:
                self._min_q = _q_of(min(self._terms), len(self._vars))
            else:
                self._min_q = math.inf
        return self._min_q

    @property
    def low_q(self) -> float | int:
        """Lower bound on the q-exponents of the series this value stands for.

        A truncated series may hide terms just above its order, so the bound
        is ``min(min_q, q_cap + 1)`` there.
        """
        if self._q_cap is None:
            return self.min_q
        return min(self.min_q, self._q_cap + 1)

    @property
    def max_q(self) -> float | int:
        if not self._terms:
            return -math.inf
        return _q_of(max(self._terms), len(self._vars))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def items(self) -> Iterator[tuple[Monomial, int]]:
        """Terms in canonical order: by q-exponent, then parameter exponents."""
        nv = len(self._vars)
        for key in sorted(self._terms):
            q_exp, exps = _decode(key, nv)
            yield Monomial(q_exp, tuple(zip(self._vars, exps))), self._terms[key]

    def to_dict(self) -> dict[Monomial, int]:
        return dict(self.items())

    def coeff(self, m: Monomial) -> int:
        return coeff_of(self, m)

    def coefficients(self, **fixed: int) -> dict[int, int]:
        """Map q-exponent -> coefficient of the given parameter monomial.

        Parameters not mentioned are taken with exponent 0.
        """
        target = tuple(fixed.get(v, 0) for v in self._vars)
        extra = set(fixed) - set(self._vars)
        if any(fixed[v] for v in extra):
            return {}
        nv = len(self._vars)
        out = {}
        for key, c in self._terms.items():
            q_exp, exps = _decode(key, nv)
            if exps == target:
                out[q_exp] = c
        return dict(sorted(out.items()))

    def split_by(self, name: str) -> dict[int, "Series"]:
        """Decompose into ``{e: S_e}`` with ``self = sum S_e * name^e``."""
        if name not in self._vars:
            return {0: self} if self._terms else {}
        nv = len(self._vars)
        idx = self._vars.index(name)
        shift = BITS * (nv - 1 - idx)
        rest = self._vars[:idx] + self._vars[idx + 1:]
        caps = {k: v for k, v in self._param_caps.items() if k != name}
        groups: dict[int, dict[int, int]] = {}
        for key, c in self._terms.items():
            e = (key >> shift) & MAX_PARAM_EXP
            q_exp, exps = _decode(key, nv)
            k2 = _encode(q_exp, exps[:idx] + exps[idx + 1:])
            groups.setdefault(e, {})[k2] = c
        return {
            e: Series._raw(rest, g, self._q_cap, caps, clean=False)
            for e, g in sorted(groups.items())
        }

    # -- arithmetic --------------------------------------------------------

    def _aligned(self, other: "Series"):
        if self._vars == other._vars:
            return self._vars, self._terms, other._terms
        vars_ = tuple(sorted(set(self._vars) | set(other._vars)))
        return vars_, _reencode(self._terms, self._vars, vars_), _reencode(other._terms, other._vars, vars_)

    def __add__(self, other) -> "Series":
        return add(self, _coerce(other))

    __radd__ = __add__

    def __neg__(self) -> "Series":
        return Series._raw(self._vars, {k: -c for k, c in self._terms.items()},
                           self._q_cap, self._param_caps, clean=False)

    def __sub__(self, other) -> "Series":
        return add(self, -_coerce(other))

    def __rsub__(self, other) -> "Series":
        return add(_coerce(other), -self)

    def __mul__(self, other) -> "Series":
        if isinstance(other, int):
            return self.scale(other)
        return mul(self, other)

    def __rmul__(self, other) -> "Series":
        if isinstance(other, int):
            return self.scale(other)
        return mul(_coerce(other), self)

    def __pow__(self, n: int) -> "Series":
        if n < 0:
            raise ValueError("negative powers are not supported")
        result = Series.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, k: int) -> "Series":
        if k == 0:
            return Series._raw(self._vars, {}, self._q_cap, self._param_caps, clean=False)
        return Series._raw(self._vars, {key: c * k for key, c in self._terms.items()},
                           self._q_cap, self._param_caps, clean=False)

    def shift(self, t: int) -> "Series":
        """Multiply by ``q^t``; the validity order moves with it."""
        off = t << (BITS * len(self._vars))
        cap = None if self._q_cap is None else self._q_cap + t
        return Series._raw(self._vars, {k + off: c for k, c in self._terms.items()},
                           cap, self._param_caps, clean=False)

    def truncate(self, q_cap: int) -> "Series":
        """Forget everything above ``q^q_cap``."""
        cap = _min_cap(self._q_cap, q_cap)
        return Series._raw(self._vars, self._terms, cap, self._param_caps)

    def with_param_caps(self, **caps: int) -> "Series":
        merged = _merge_param_caps(self._param_caps, caps)
        vars_ = tuple(sorted(set(self._vars) | set(merged)))
        return Series._raw(vars_, _reencode(self._terms, self._vars, vars_), self._q_cap, merged)

    def at_q_one(self) -> "Series":
        """Evaluate at ``q = 1`` (exact series only)."""
        if not self.is_exact:
            raise InsufficientTruncation("q -> 1 needs an exact series")
        nv = len(self._vars)
        mask = (1 << (BITS * nv)) - 1
        out: dict[int, int] = {}
        for key, c in self._terms.items():
            k = key & mask
            out[k] = out.get(k, 0) + c
        return Series._raw(self._vars, out, None, self._param_caps)

    # -- comparison / hashing ----------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Series.const(other)
        if not isinstance(other, Series):
            return NotImplemented
        if self._q_cap != other._q_cap or self._param_caps != other._param_caps:
            return False
        return self.to_dict() == other.to_dict()

    def __hash__(self):
        return hash((tuple(self.items()), self._q_cap, tuple(sorted(self._param_caps.items()))))

    def __str__(self) -> str:
        return serialize(self)

    def __repr__(self) -> str:
        return f"Series({serialize(self)!r})"


def _coerce(x) -> Series:
    if isinstance(x, Series):
        return x
    if isinstance(x, int):
        return Series.const(x)
    raise TypeError(f"cannot use {type(x).__name__} as a series")


# -- operations ------------------------------------------------------------

def add(lhs: Series, rhs: Series) -> Series:
    """Coefficientwise sum; the result is valid where both operands are."""
    vars_, a, b = lhs._aligned(rhs)
    out = dict(a)
    for k, c in b.items():
        out[k] = out.get(k, 0) + c
    cap = _min_cap(lhs._q_cap, rhs._q_cap)
    pcaps = _merge_param_caps(lhs._param_caps, rhs._param_caps)
    return Series._raw(vars_, out, cap, pcaps)


def product_cap(lhs: Series, rhs: Series) -> int | None:
    """Validity order of ``lhs * rhs``: ``min(Q_l + low_q(r), Q_r + low_q(l))``."""
    caps = []
    if lhs._q_cap is not None:
        caps.append(lhs._q_cap + rhs.low_q)
    if rhs._q_cap is not None:
        caps.append(rhs._q_cap + lhs.low_q)
    cap = min(caps) if caps else None
    if cap is None or cap == math.inf:
        return None
    return int(cap)


def mul(lhs: Series, rhs: Series, require: int | None = None) -> Series:
    """Ring product with validity-order propagation.

    If either side is truncated the result is truncated at
    :func:`product_cap`.  ``require`` is the comparison order the caller
    needs; a product valid only below it raises
    :class:`InsufficientTruncation`.
    """
    rhs = _coerce(rhs)
    cap = product_cap(lhs, rhs)
    if require is not None and cap is not None and cap < require:
        raise InsufficientTruncation(
            f"product valid only up to q^{cap}, need q^{require}", required=require - cap)
    vars_, a, b = lhs._aligned(rhs)
    pcaps = _merge_param_caps(lhs._param_caps, rhs._param_caps)
    if len(a) > len(b):
        a, b = b, a
    out: dict[int, int] = {}
    get = out.get
    if cap is None:
        for ka, ca in a.items():
            for kb, cb in b.items():
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
    else:
        limit = (cap + 1) << (BITS * len(vars_))
        bs = sorted(b.items())
        for ka, ca in a.items():
            bound = limit - ka
            for kb, cb in bs:
                if kb >= bound:
                    break
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
    return Series._raw(vars_, out, cap, pcaps)


def dilate(s: Series, d: int) -> Series:
    """Substitute ``q -> q^d``."""
    if d <= 0:
        raise ValueError(f"dilation factor must be positive, got {d}")
    nv = len(s._vars)
    width = BITS * nv
    mask = (1 << width) - 1
    out = {}
    for key, c in s._terms.items():
        out[((key >> width) * d << width) | (key & mask)] = c
    # a tail term q^{Q+1} lands on q^{(Q+1)d}
    cap = None if s._q_cap is None else (s._q_cap + 1) * d - 1
    return Series._raw(s._vars, out, cap, s._param_caps, clean=False)


def _tail_cap(s: Series, var: str, low: int, weight: int | None) -> int | None:
    """Validity order after a substitution that can lower q-degree by ``low`` per unit of ``var``.

    Unknown tail terms have ``q > Q``.  A bound on their ``var`` exponent comes
    either from a parameter cap or from the caller's guarantee that every
    term of the full series satisfies ``q_exp >= weight * exp(var)``.
    """
    Q = s._q_cap
    if Q is None or low >= 0:
        return Q
    caps = []
    if var in s._param_caps:
        caps.append(Q + low * s._param_caps[var])
    if weight is not None:
        if weight + low <= 0:
            raise InsufficientTruncation(
                f"translation by q^{low} per {var} is not bounded by weight {weight}")
        # smallest q' reachable from a tail term q >= Q+1 is (Q+1)(w+low)/w
        caps.append(-((-(Q + 1) * (weight + low)) // weight) - 1)
    if not caps:
        raise InsufficientTruncation(
            f"cannot bound the truncated tail under {var} -> {var}*q^{low}; "
            f"declare a cap or weight for {var}")
    return max(caps)


def translate(s: Series, var: str, t: int, weight: int | None = None) -> Series:
    """Substitute ``var -> var * q^t``.

    For a truncated series and ``t < 0`` the new validity order needs a bound
    on how much ``var`` the unseen tail carries: either a parameter cap on
    ``var`` or ``weight`` (every term has ``q_exp >= weight * exp(var)``).
    """
    if t == 0:
        return s
    cap = _tail_cap(s, var, t, weight)
    if var not in s._vars:
        return s if cap == s._q_cap else s.truncate(cap)
    nv = len(s._vars)
    idx = s._vars.index(var)
    shift = BITS * (nv - 1 - idx)
    qshift = BITS * nv
    out = {}
    for key, c in s._terms.items():
        e = (key >> shift) & MAX_PARAM_EXP
        out[key + ((t * e) << qshift)] = c
    return Series._raw(s._vars, out, cap, s._param_caps, clean=cap is not None)


def substitute(s: Series, var: str, replacement, weight: int | None = None,
               require: int | None = None) -> Series:
    """Homomorphic substitution ``var -> replacement``.

    ``replacement`` may be an int or a series.  ``b -> 0`` keeps the
    ``b^0`` terms.  ``weight`` plays the same role as in :func:`translate`
    when the replacement has negative q-exponents.
    """
    r = _coerce(replacement)
    parts = s.split_by(var)
    low = r.low_q if r else 0
    tail = _tail_cap(s, var, int(low) if low != math.inf else 0, weight) if s._q_cap is not None else None
    if not parts:
        return Series._raw((), {}, tail, {k: v for k, v in s._param_caps.items() if k != var})
    total = Series._raw((), {}, None, {})
    power = Series.one()
    last = 0
    for e, part in parts.items():
        while last < e:
            power = power * r
            last += 1
        total = total + mul(part, power)
    if tail is not None:
        if total._q_cap is None or total._q_cap > tail:
            total = total.truncate(tail)
    if require is not None and total._q_cap is not None and total._q_cap < require:
        raise InsufficientTruncation(
            f"substitution valid only up to q^{total._q_cap}, need q^{require}",
            required=require - total._q_cap)
    return total


def coeff_of(s: Series, m: Monomial) -> int:
    """Coefficient of ``m``; refuses queries outside the validity region."""
    if s._q_cap is not None and m.q_exp > s._q_cap:
        raise InsufficientTruncation(
            f"q^{m.q_exp} is beyond the validity order q^{s._q_cap}", required=m.q_exp)
    for name, e in m.params:
        cap = s._param_caps.get(name)
        if cap is not None and e > cap:
            raise InsufficientTruncation(f"{name}^{e} is beyond the {name}-cap {cap}")
    if any(n not in s._vars for n, _ in m.params):
        return 0
    d = dict(m.params)
    key = _encode(m.q_exp, tuple(d.get(v, 0) for v in s._vars))
    return s._terms.get(key, 0)


@dataclass(frozen=True)
class Comparison:
    equal: bool
    monomial: Monomial | None = None
    lhs: int = 0
    rhs: int = 0

    def __bool__(self) -> bool:
        return self.equal


def equal_up_to(lhs: Series, rhs: Series, q_cap: int | str | None = "exact",
                param_caps: Mapping[str, int] | None = None) -> Comparison:
    """Compare coefficients on the region ``q_exp <= q_cap`` (and param caps).

    ``q_cap="exact"`` (or ``None``) compares everything and needs both sides
    exact.  On disagreement the smallest mismatching monomial (q-exponent
    first) is reported with both coefficients.
    """
    if q_cap in ("exact", None):
        if not (lhs.is_exact and rhs.is_exact):
            raise InsufficientTruncation("exact comparison of a truncated series")
        cap = None
    else:
        cap = int(q_cap)
        for side in (lhs, rhs):
            if side._q_cap is not None and side._q_cap < cap:
                raise InsufficientTruncation(
                    f"comparison to q^{cap} beyond validity order q^{side._q_cap}", required=cap)
    pcaps = dict(param_caps or {})
    for side in (lhs, rhs):
        for name, c in side._param_caps.items():
            if name in pcaps and pcaps[name] > c:
                raise InsufficientTruncation(f"{name}-cap {pcaps[name]} exceeds series cap {c}")
    vars_, a, b = lhs._aligned(rhs)
    nv = len(vars_)
    slot_caps = [(i, pcaps[v]) for i, v in enumerate(vars_) if v in pcaps]
    limit = None if cap is None else (cap + 1) << (BITS * nv)
    for key in sorted(set(a) | set(b)):
        if limit is not None and key >= limit:
            break
        ca, cb = a.get(key, 0), b.get(key, 0)
        if ca == cb:
            continue
        q_exp, exps = _decode(key, nv)
        if slot_caps and any(exps[i] > c for i, c in slot_caps):
            continue
        return Comparison(False, Monomial(q_exp, tuple(zip(vars_, exps))), ca, cb)
    return Comparison(True)


# -- text form -------------------------------------------------------------

def serialize(s: Series) -> str:
    """Deterministic text form, e.g. ``-3*a^2*b*q^-1 + 5*q^2 + O(q^11)``."""
    parts = []
    for m, c in s.items():
        body = _format_factors(m.params, m.q_exp)
        if not body:
            txt = str(c)
        elif c == 1:
            txt = body
        elif c == -1:
            txt = "-" + body
        else:
            txt = f"{c}*{body}"
        parts.append(txt)
    if s.q_cap is not None:
        parts.append(f"O(q^{s.q_cap + 1})")
    for name, cap in sorted(s.param_caps.items()):
        parts.append(f"O({name}^{cap + 1})")
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


_FACTOR = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*)(?:\^(-?\d+))?$")


def _split_terms(text: str) -> list[tuple[int, str]]:
    text = text.strip()
    out = []
    i, sign, buf = 0, 1, ""
    while i < len(text):
        ch = text[i]
        if ch in "+-" and buf.strip() and not buf.rstrip().endswith("^"):
            out.append((sign, buf.strip()))
            sign, buf = (1 if ch == "+" else -1), ""
        elif ch in "+-" and not buf.strip():
            sign = sign * (1 if ch == "+" else -1)
        else:
            buf += ch
        i += 1
    if buf.strip():
        out.append((sign, buf.strip()))
    return out


def parse(text: str) -> Series:
    """Inverse of :func:`serialize`."""
    if text.strip() == "0":
        return Series.zero()
    terms: dict[Monomial, int] = {}
    q_cap = None
    pcaps: dict[str, int] = {}
    for sign, body in _split_terms(text):
        if body.startswith("O(") and body.endswith(")"):
            m = _FACTOR.match(body[2:-1])
            if not m:
                raise ValueError(f"bad order term {body!r}")
            name, e = m.group(1), int(m.group(2) or 1)
            if name == "q":
                q_cap = e - 1
            else:
                pcaps[name] = e - 1
            continue
        coeff = sign
        q_exp = 0
        params: dict[str, int] = {}
        for factor in body.split("*"):
            factor = factor.strip()
            if re.fullmatch(r"\d+", factor):
                coeff *= int(factor)
                continue
            m = _FACTOR.match(factor)
            if not m:
                raise ValueError(f"bad factor {factor!r} in {text!r}")
            name, e = m.group(1), int(m.group(2) or 1)
            if name == "q":
                q_exp += e
            else:
                params[name] = params.get(name, 0) + e
        mono = Monomial.of(q_exp, **params)
        terms[mono] = terms.get(mono, 0) + coeff
    return Series(terms, q_cap, pcaps)


def sum_series(terms: Iterable[Series]) -> Series:
    """Sum many series in one pass (avoids quadratic re-copying)."""
    terms = list(terms)
    if not terms:
        return Series.zero()
    vars_ = tuple(sorted(set().union(*(t._vars for t in terms))))
    out: dict[int, int] = {}
    get = out.get
    cap = None
    pcaps: dict[str, int] = {}
    for t in terms:
        cap = _min_cap(cap, t._q_cap)
        pcaps = _merge_param_caps(pcaps, t._param_caps)
        packed = t._terms if t._vars == vars_ else _reencode(t._terms, t._vars, vars_)
        for k, c in packed.items():
            out[k] = get(k, 0) + c
    return Series._raw(vars_, out, cap, pcaps)


def divide_exact(num: Series, den: Series) -> Series:
    """Divide by a parameter-free q-polynomial whose lowest coefficient is +-1.

    For an exact numerator the quotient must be a Laurent polynomial; a
    nonzero remainder raises ``ArithmeticError``.  For a truncated numerator
    this is power-series division and the quotient keeps the numerator's
    validity order shifted by the denominator's lowest exponent.
    """
    if not den.is_exact or den.params:
        raise ValueError("divisor must be an exact q-polynomial without parameters")
    if not den:
        raise ZeroDivisionError("division by the zero series")
    dcoef = den.coefficients()
    d0 = min(dcoef)
    lead = dcoef[d0]
    if lead not in (1, -1):
        raise ArithmeticError("divisor's lowest coefficient must be +-1")
    dlist = [(e - d0, c) for e, c in sorted(dcoef.items()) if e != d0]
    dtop = max(dcoef) - d0
    nv = len(num._vars)
    width = BITS * nv
    mask = (1 << width) - 1
    groups: dict[int, dict[int, int]] = {}
    for key, c in num._terms.items():
        groups.setdefault(key & mask, {})[key >> width] = c
    out: dict[int, int] = {}
    cap = None if num._q_cap is None else num._q_cap - d0
    for pkey, poly in groups.items():
        lo = min(poly)
        hi = max(poly) if num.is_exact else num._q_cap
        qhi = hi - d0 - (dtop if num.is_exact else 0)
        rem = dict(poly)
        quot: dict[int, int] = {}
        for e in range(lo - d0, qhi + 1):
            c = rem.pop(e + d0, 0)
            if not c:
                continue
            c = c * lead  # lead is +-1, so this is c / lead
            quot[e] = c
            for off, dc in dlist:
                k = e + d0 + off
                if num.is_exact or k <= num._q_cap:
                    rem[k] = rem.get(k, 0) - c * dc
        if num.is_exact and any(rem.values()):
            raise ArithmeticError("division leaves a nonzero remainder")
        for e, c in quot.items():
            out[(e << width) | pkey] = c
    return Series._raw(num._vars, out, cap, num._param_caps)


def to_param(s: Series, name: str) -> Series:
    """Rename the q of an exact, nonnegative-exponent series to parameter ``name``."""
    if not s.is_exact:
        raise ValueError("only exact series can be moved into a parameter")
    if s and s.min_q < 0:
        raise ValueError("negative q-exponents cannot become a parameter")
    terms = {}
    for m, c in s.items():
        terms[Monomial(0, m.params + ((name, m.q_exp),))] = c
    return Series(terms)
