"""Partition theorems checked by enumeration, and generating-function cross-checks.

A theorem is a list of equalities between *sides*; each side enumerates one
partition family and condenses every ``n`` to a comparable value (usually a
tally by some statistics).  A cross-check compares the ``q^n`` coefficients
of a catalog series, after optional dilations and translations, with a
weighted tally of a partition family.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Mapping, Sequence

from . import catalog as cat
from .engine import Step, apply_steps, dil, tr
from .partitions import (
    CONSTRAINTS, PartitionConstraint, hierarchy_a, hierarchy_b, hierarchy_stats, tally, weighted_tally,
)
from .series import Series

PASS = "pass"
FAIL = "fail"


@dataclass(frozen=True)
class Side:
    name: str
    constraint: PartitionConstraint
    stats: tuple = ()
    condense: Callable[[Counter], object] | None = None

    def value(self, n: int):
        t = tally(n, self.constraint, self.stats)
        if self.condense is not None:
            return self.condense(t)
        return {k: v for k, v in sorted(t.items())} if self.stats else sum(t.values())


@dataclass(frozen=True)
class Theorem:
    id: str
    anchor: str
    equalities: tuple[tuple[Side, ...], ...]
    n_max: int = 30

    def sides(self) -> list[Side]:
        return [s for group in self.equalities for s in group]


@dataclass
class TheoremReport:
    id: str
    n_max: int
    status: str
    first_failure: dict | None = None
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> dict:
        return {"id": self.id, "n_max": self.n_max, "status": self.status,
                "first_failure": self.first_failure, "detail": self.detail}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), default=_jsonable)


def _jsonable(x):
    return {str(k): v for k, v in x.items()} if isinstance(x, dict) else str(x)


def _printable(v):
    if isinstance(v, dict):
        return {",".join(map(str, k)) if isinstance(k, tuple) else str(k): c for k, c in v.items()}
    return v


def _one_plus_c(t: Counter) -> dict[int, int]:
    """``sum_j D(n, j) (1 + c)^j`` as ``{power of c: coefficient}``."""
    out: Counter = Counter()
    for (j,), count in t.items():
        for e in range(j + 1):
            out[e] += count * comb(j, e)
    return {e: v for e, v in sorted(out.items()) if v}


def _by_power(t: Counter) -> dict[int, int]:
    return {k: v for (k,), v in sorted(t.items())}


def _c(name: str) -> PartitionConstraint:
    return CONSTRAINTS[name]


THEOREMS: dict[str, Theorem] = {t.id: t for t in (
    Theorem("thm-L", "weighted Lebesgue theorem, sum_j D(n;j)(1+c)^j = sum_k C(n;k) c^k", (
        (Side("D", _c("distinct"), ("gaps",), _one_plus_c),
         Side("C", _c("even-distinct"), ("even",), _by_power)),), 25),
    Theorem("thm-G", "Little Goellnitz theorems g_i(n;k) = G_i(n;k), refined by k", (
        (Side("g1", _c("gollnitz-g1"), ("odd",)), Side("G1", _c("gollnitz-G1"), ("mod4_1",))),
        (Side("g2", _c("gollnitz-g2"), ("odd",)), Side("G2", _c("gollnitz-G2"), ("mod4_3",)))), 30),
    Theorem("thm-S", "Schur's theorem S(n) = B(n)", (
        (Side("S", _c("schur")), Side("B", _c("schur-B"))),), 40),
    Theorem("gleissburg", "Gleissburg's refinement B(n;k) = S(n;k), multiples of 3 counted twice", (
        (Side("S", _c("schur"), ("parts_mult3_twice",)), Side("B", _c("schur-B"), ("parts",))),), 40),
    Theorem("thm-AG", "Alladi-Gordon refinement by parts = 1 and 2 mod 3", (
        (Side("S", _c("schur"), ("schur_a", "schur_b")), Side("B", _c("schur-B"), ("mod3_1", "mod3_2"))),), 30),
    Theorem("thm-A", "Andrews' refinement A(n;k) = s(n;k), even parts counted twice", (
        (Side("A", _c("odd-at-most-twice"), ("parts",)), Side("s", _c("schur"), ("parts_even_twice",))),), 30),
    Theorem("thm-C", "Capparelli's theorem C*(n) = D(n)", (
        (Side("C*", _c("capparelli-Cstar")), Side("D", _c("capparelli-D"))),), 35),
    Theorem("thm-CR", "Alladi-Andrews-Gordon refinement C(n;i,j,k) = D(n;i,j,k)", (
        (Side("C", _c("capparelli-C"), ("mod6_4", "mod6_2", "cr_big3")),
         Side("D", _c("capparelli-D"), ("mod3_1", "mod3_2", "mod3_0"))),), 30),
    Theorem("thm-C5", "level-four Capparelli analog A(n) = C(n) = D(n)", (
        (Side("A", _c("c5-A")), Side("C", _c("c5-C")), Side("D", _c("c5-D"))),), 40),
    Theorem("capparelli-window", "the multiple-of-m window rule is redundant for m = 3", (
        (Side("D", _c("capparelli-D")), Side("D+window", _c("capparelli-D-window3"))),), 30),
)}

#: Theorem H instances: (m, residues) -> default n_max
H_INSTANCES: dict[tuple[int, tuple[int, ...]], int] = {(2, (1,)): 28, (3, (4, 2)): 28}
FLOORS = ("parts", "residues")


def hierarchy_theorem(m: int, residues: Sequence[int], floor: str = "parts") -> Theorem:
    residues = tuple(residues)
    a = Side("A", hierarchy_a(m, residues), tuple(hierarchy_stats(m, residues, 2 * m)))
    b = Side("B", hierarchy_b(m, residues, floor), tuple(hierarchy_stats(m, residues, m)))
    return Theorem(f"thm-H(m={m},j={residues},floor={floor})",
                   "infinite hierarchy partition theorem A(n;nu;2m) = B(n;nu;m)", ((a, b),), 28)


def theorem_ids() -> list[str]:
    return [*THEOREMS, "thm-H"]


def _run(th: Theorem, n_max: int) -> TheoremReport:
    for n in range(n_max + 1):
        for group in th.equalities:
            values = {s.name: s.value(n) for s in group}
            first = next(iter(values.values()))
            if any(v != first for v in values.values()):
                return TheoremReport(th.id, n_max, FAIL,
                                     {"n": n, "sides": {k: _printable(v) for k, v in values.items()}})
    return TheoremReport(th.id, n_max, PASS)


def theorem_check(theorem_id: str, n_max: int | None = None, m: int | None = None,
                  residues: Sequence[int] | None = None, floor: str | None = None) -> TheoremReport:
    """Check a partition theorem for every ``n <= n_max``.

    ``thm-H`` takes ``m`` and ``residues`` (default: every instance in
    :data:`H_INSTANCES`).  Without ``floor`` both readings of the floor on
    the multiples of ``m`` are run; the check passes when at least one
    reading holds, and ``detail`` records the outcome of each.
    """
    if theorem_id == "thm-H":
        return _check_h(n_max, m, residues, floor)
    try:
        th = THEOREMS[theorem_id]
    except KeyError:
        raise KeyError(theorem_id) from None
    return _run(th, th.n_max if n_max is None else n_max)


def _check_h(n_max, m, residues, floor) -> TheoremReport:
    if (m is None) != (residues is None):
        raise ValueError("thm-H needs both m and residues, or neither")
    instances = [(m, tuple(residues))] if m is not None else list(H_INSTANCES)
    floors = (floor,) if floor else FLOORS
    detail: dict = {}
    failure = None
    ok_all = True
    for inst in instances:
        n = n_max if n_max is not None else H_INSTANCES.get(inst, 28)
        readings = {}
        for fl in floors:
            rep = _run(hierarchy_theorem(inst[0], inst[1], fl), n)
            readings[fl] = PASS if rep.passed else f"fails at n={rep.first_failure['n']}"
            if not rep.passed and failure is None:
                failure = {"m": inst[0], "residues": list(inst[1]), "floor": fl, **rep.first_failure}
        detail[f"m={inst[0]},j={','.join(map(str, inst[1]))}"] = readings
        ok_all &= any(v == PASS for v in readings.values())
    worst = max(n_max if n_max is not None else H_INSTANCES.get(i, 28) for i in instances)
    return TheoremReport("thm-H", worst, PASS if ok_all else FAIL, None if ok_all else failure, detail)


def count(theorem_id: str, n: int, m: int | None = None, residues: Sequence[int] | None = None,
          floor: str = "parts") -> dict[str, object]:
    """Each side's value at ``n``."""
    if theorem_id == "thm-H":
        m, residues = (m, residues) if m is not None else next(iter(H_INSTANCES))
        th = hierarchy_theorem(m, residues, floor)
    else:
        th = THEOREMS[theorem_id]
    return {s.name: _printable(s.value(n)) for s in th.sides()}


# -- generating-function cross-checks --------------------------------------


@dataclass(frozen=True)
class CrossCheck:
    name: str
    identity: str
    side: str
    constraint: PartitionConstraint
    weights: Mapping[str, object] = field(default_factory=dict)
    steps: tuple[Step, ...] = ()
    assignment: Mapping[str, int] = field(default_factory=dict)
    n_max: int = 20
    expected: str = cat.IDENTITY


@dataclass
class CrossCheckReport:
    id: str
    n_max: int
    status: str
    first_failure: dict | None = None
    expected: str = cat.IDENTITY

    @property
    def passed(self) -> bool:
        return (self.status == PASS) == (self.expected == cat.IDENTITY)

    def to_dict(self) -> dict:
        return {"id": self.id, "n_max": self.n_max, "status": self.status, "first_failure": self.first_failure}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _by_q(s: Series, n_max: int) -> dict[int, dict]:
    out: dict[int, dict] = {}
    for m, c in s.items():
        if m.q_exp <= n_max:
            out.setdefault(m.q_exp, {})[m.params] = c
    return out


def _fmt_weight(key) -> str:
    return "*".join(f"{n}^{e}" if e != 1 else n for n, e in key) or "1"


def gf_cross_check(identity_id: str, side: str, steps: Sequence[Step], constraint: PartitionConstraint | str,
                   weights: Mapping[str, object], n_max: int = 20, assignment: Mapping[str, int] | None = None,
                   name: str | None = None, expected: str = cat.IDENTITY) -> CrossCheckReport:
    """Compare ``q^n`` coefficients of a (transformed) catalog side with a weighted tally.

    ``weights`` maps a series parameter to a partition statistic; the series
    is built at increasing orders until the transformed result is valid to
    ``q^n_max``.
    """
    entry = cat.get(identity_id)
    if isinstance(constraint, str):
        constraint = CONSTRAINTS[constraint]
    order = n_max
    for _ in range(64):
        raw = entry.build(side, assignment, None if entry.mode == cat.EXACT else order)
        s = apply_steps(raw, tuple(steps), entry.weights)
        if s.q_cap is None or s.q_cap >= n_max:
            break
        order += max(1, n_max - s.q_cap)
    else:
        raise ValueError(f"could not reach q^{n_max}")
    if s.params and set(s.params) - set(weights):
        raise ValueError(f"parameters {sorted(set(s.params) - set(weights))} have no statistic")
    coeffs = _by_q(s, n_max)
    if any(e < 0 for e in coeffs):
        raise ValueError("the transformed series has negative q-exponents")
    label = name or f"{identity_id}:{side}"
    for n in range(n_max + 1):
        got = coeffs.get(n, {})
        want = weighted_tally(n, constraint, weights)
        if got != want:
            diff = sorted(set(got) | set(want), key=lambda k: (len(k), k))
            bad = next(k for k in diff if got.get(k, 0) != want.get(k, 0))
            return CrossCheckReport(label, n_max, FAIL, {
                "n": n, "weight": _fmt_weight(bad), "series": got.get(bad, 0), "tally": want.get(bad, 0)},
                expected)
    return CrossCheckReport(label, n_max, PASS, None, expected)


def _mod_weights(m: int, residues: Sequence[int], modulus: int) -> dict[str, object]:
    return {f"a{i}": f for i, f in enumerate(hierarchy_stats(m, residues, modulus), 1)}


_AG = (dil(3), tr("a", -2), tr("b", -1))
_CR = (dil(3), tr("a", -2), tr("b", -4))


def _h_steps(m: int, residues: Sequence[int]) -> tuple[Step, ...]:
    return (dil(m), *(tr(f"a{i}", j - 2 * m) for i, j in enumerate(residues, 1)))


CROSSCHECKS: tuple[CrossCheck, ...] = (
    CrossCheck("lebesgue-series", "lebesgue-1.1", "lhs", _c("even-distinct"), {"c": "even"}),
    CrossCheck("lebesgue-product", "lebesgue-1.1", "rhs", _c("even-distinct"), {"c": "even"}),
    CrossCheck("gollnitz-a-series", "gollnitz-1.2a", "lhs", _c("gollnitz-g1"), {"c": "odd"}, n_max=25),
    CrossCheck("gollnitz-a-product", "gollnitz-1.2a", "rhs", _c("gollnitz-G1"), {"c": "mod4_1"}, n_max=25),
    CrossCheck("gollnitz-b-series", "gollnitz-1.2b", "lhs", _c("gollnitz-g2"), {"c": "odd"}, n_max=25),
    CrossCheck("gollnitz-b-product", "gollnitz-1.2b", "rhs", _c("gollnitz-G2"), {"c": "mod4_3"}, n_max=25),
    CrossCheck("schur-key-product", "schur-key-1.3", "rhs", _c("schur-B"), {"a": "mod3_1", "b": "mod3_2"}, _AG),
    CrossCheck("schur-key-triple", "schur-key-1.3", "lhs", _c("schur"), {"a": "schur_a", "b": "schur_b"}, _AG),
    CrossCheck("kursungoz-series", "kursungoz-6.5", "lhs", _c("schur"), {"a": "odd", "b": "even"}),
    CrossCheck("andrews-key-series", "alladi-schur-key-6.8", "lhs", _c("schur"),
               {"a": "odd_plus_twice_even"}, n_max=25),
    CrossCheck("andrews-key-product", "alladi-schur-key-6.8", "rhs", _c("schur"),
               {"a": "odd_plus_twice_even"}, n_max=25),
    CrossCheck("andrews-key-product-odd", "alladi-schur-key-6.8", "rhs", _c("odd-at-most-twice"),
               {"a": "parts"}, n_max=25),
    CrossCheck("acl-two-parameter", "acl-6.9", "lhs", _c("schur"), {"a": "parts", "b": "even"}),
    CrossCheck("acl-a=b", "acl-6.10", "lhs", _c("schur"), {"a": "odd_plus_twice_even"}),
    CrossCheck("acl-a=b-literal", "acl-6.10-literal", "lhs", _c("schur"), {"a": "odd_plus_twice_even"},
               expected=cat.NON_IDENTITY),
    CrossCheck("capparelli-key-split", "capparelli-key-7.1", "lhs", _c("capparelli-C"),
               {"a": "mod6_4", "b": "mod6_2", "c": "cr_big3"}, _CR, n_max=25),
    CrossCheck("capparelli-key-binomial", "capparelli-key-7.1", "rhs", _c("capparelli-D"),
               {"a": "mod3_1", "b": "mod3_2", "c": "mod3_0"}, _CR, n_max=25),
    CrossCheck("capparelli-first-product", "capparelli-c-7.4", "lhs", _c("capparelli-C"), n_max=35),
    CrossCheck("capparelli-first-modular", "capparelli-c-7.4", "rhs", _c("capparelli-Cstar"), n_max=35),
    CrossCheck("capparelli-second-product", "capparelli-second-7.5", "lhs", _c("capparelli-A2"), n_max=30),
    CrossCheck("odd-twice-product", "as-products-6.1-6.2", "rhs", _c("odd-at-most-twice"), n_max=30),
    CrossCheck("c5-distinct", "c5-products-8.9-8.10", "lhs", _c("c5-A"), n_max=40),
    CrossCheck("c5-modular", "c5-products-8.9-8.10", "rhs", _c("c5-C"), n_max=40),
    *(CrossCheck(f"hierarchy-{side}-m{m}", "hierarchy-prod-8.2", side,
                 hierarchy_b(m, js) if side == "lhs" else hierarchy_a(m, js),
                 _mod_weights(m, js, m if side == "lhs" else 2 * m), _h_steps(m, js), {"r": len(js)}, n_max=24)
      for m, js in ((2, (1,)), (3, (4, 2))) for side in ("lhs", "rhs")),
)


def crosschecks_for(identity_id: str) -> list[CrossCheck]:
    return [c for c in CROSSCHECKS if c.identity == identity_id]


def run_crosscheck(c: CrossCheck, n_max: int | None = None) -> CrossCheckReport:
    return gf_cross_check(c.identity, c.side, c.steps, c.constraint, c.weights,
                          c.n_max if n_max is None else n_max, c.assignment, c.name, c.expected)
