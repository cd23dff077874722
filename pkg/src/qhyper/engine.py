"""Verification engine: direct checks, limit stabilization and specialization chains.

Every check produces a :class:`VerificationReport`.  Reports are plain data
and serialize to one JSON object per line; ``elapsed_ms`` is only filled in
when timing is requested so that repeated runs produce identical bytes.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from . import catalog as cat
from .series import (
    InsufficientTruncation, Monomial, Series, dilate, equal_up_to, serialize, substitute, translate,
)

VERIFIED = "verified"
MISMATCH = "mismatch"
ERROR = "error"


@dataclass
class VerificationReport:
    id: str
    assignment: dict
    caps: dict
    status: str
    first_mismatch: dict | None = None
    elapsed_ms: float | None = None
    expected: str = cat.IDENTITY
    message: str = ""

    def __post_init__(self):
        if (self.status == MISMATCH) != (self.first_mismatch is not None):
            raise ValueError("a mismatch report needs exactly one first_mismatch")

    @property
    def passed(self) -> bool:
        if self.status == ERROR:
            return False
        if self.expected == cat.NON_IDENTITY:
            return self.status == MISMATCH
        return self.status == VERIFIED

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "assignment": self.assignment,
            "caps": self.caps,
            "status": self.status,
            "first_mismatch": self.first_mismatch,
            "elapsed_ms": self.elapsed_ms,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False, separators=(", ", ": "))


def _caps(Q: int | None, param_caps: Mapping[str, int] | None = None) -> dict:
    out = {"Q": "exact" if Q is None else Q}
    out.update(sorted((param_caps or {}).items()))
    return out


def _mismatch(cmp) -> dict:
    return {"monomial": str(cmp.monomial), "lhs": cmp.lhs, "rhs": cmp.rhs}


def _compare(lhs: Series, rhs: Series, Q: int | None, param_caps: Mapping[str, int] | None = None):
    return equal_up_to(lhs, rhs, "exact" if Q is None else Q, param_caps)


def verify(entry_id: str, assignment: Mapping[str, int] | None = None, Q: int | None = None,
           param_caps: Mapping[str, int] | None = None, timing: bool = False) -> VerificationReport:
    """Build both sides of a catalog entry and compare them.

    Exact entries are compared exactly and ignore ``Q``.  Truncated entries
    use ``Q`` or the entry's default order.  Builder errors propagate.
    """
    entry = cat.get(entry_id)
    start = time.perf_counter()
    A = entry.complete(assignment)
    if entry.mode == cat.EXACT:
        Q = None
    elif Q is None:
        Q = entry.default_q
    caps = {**entry.param_caps, **(param_caps or {})}
    lhs = entry.build("lhs", A, Q, caps)
    rhs = entry.build("rhs", A, Q, caps)
    cmp = _compare(lhs, rhs, Q, caps)
    elapsed = round((time.perf_counter() - start) * 1000, 3) if timing else None
    return VerificationReport(
        entry_id, dict(A), _caps(Q, caps), VERIFIED if cmp else MISMATCH,
        None if cmp else _mismatch(cmp), elapsed, entry.expected)


# -- limits ----------------------------------------------------------------


@dataclass(frozen=True)
class LimitSpec:
    """How the bounds of a finite entry grow with one integer ``B``."""

    finite: str
    infinite: str
    bounds: Callable[[int], dict]
    infinite_assignment: Mapping[str, int] = field(default_factory=dict)
    rename: Mapping[str, str] = field(default_factory=dict)


def _hier_bounds(r: int) -> Callable[[int], dict]:
    return lambda B: {"r": r, **{f"M{i}": B for i in range(1, r + 1)}, "L": r * B}


LIMITS: dict[tuple[str, str], LimitSpec] = {
    (s.finite, s.infinite): s for s in (
        LimitSpec("finite-lebesgue-3.1", "lebesgue-1.1", lambda B: {"M": B}),
        LimitSpec("finite-lebesgue-3.8", "lebesgue-1.1", lambda B: {"m": B, "n": B}, rename={"b": "c"}),
        LimitSpec("finite-schur-5.1", "unified-4.1", lambda B: {"L": B, "M": B}),
        LimitSpec("finite-7.7", "limit-7.8", lambda B: {"m": B, "n": B, "l": B}),
        LimitSpec("finite-capparelli-7.10", "capparelli-key-7.1", lambda B: {"M1": B, "M2": B, "L": 2 * B}),
        LimitSpec("finite-8.17", "hierarchy-form-8.1b", _hier_bounds(3), {"r": 3}),
    )
}


def _rename(s: Series, mapping: Mapping[str, str]) -> Series:
    for old, new in mapping.items():
        s = substitute(s, old, Series.var(new))
    return s


def verify_limit(finite_id: str, infinite_id: str, Q: int = 12, bounds: Sequence[int] | None = None,
                 r: int | None = None, timing: bool = False) -> VerificationReport:
    """Check that the finite identity's sides agree with the infinite ones to ``q^Q``.

    ``bounds`` defaults to ``(Q, Q + 4, Q + 8)``; each value ``B`` is turned
    into an assignment of the finite entry.  The first bound at which either
    side differs is reported.
    """
    try:
        spec = LIMITS[(finite_id, infinite_id)]
    except KeyError:
        raise KeyError(f"no limit relation {finite_id} -> {infinite_id}") from None
    bounds = tuple(bounds) if bounds is not None else (Q, Q + 4, Q + 8)
    if min(bounds) < Q:
        raise ValueError("every bound must be at least Q")
    bounds_fn, inf_assign = spec.bounds, dict(spec.infinite_assignment)
    if r is not None:
        bounds_fn, inf_assign = _hier_bounds(r), {"r": r}
    fin, inf = cat.get(finite_id), cat.get(infinite_id)
    start = time.perf_counter()
    targets = {side: inf.build(side, inf_assign, Q) for side in ("lhs", "rhs")}
    name = f"{finite_id}->{infinite_id}"
    for B in bounds:
        A = bounds_fn(B)
        for side in ("lhs", "rhs"):
            got = _rename(fin.build(side, A, Q), spec.rename)
            cmp = _compare(got, targets[side], Q)
            if not cmp:
                return VerificationReport(
                    name, {**A, "side": side}, _caps(Q), MISMATCH, _mismatch(cmp),
                    _elapsed(start, timing))
    return VerificationReport(name, {"bounds": list(bounds), **inf_assign}, _caps(Q), VERIFIED,
                              None, _elapsed(start, timing))


def _elapsed(start: float, timing: bool) -> float | None:
    return round((time.perf_counter() - start) * 1000, 3) if timing else None


# -- specialization --------------------------------------------------------


@dataclass(frozen=True)
class Step:
    """One substitution step: ``dilate``, ``translate``, ``subst`` or ``q_to_one``."""

    kind: str
    var: str | None = None
    value: object = None

    def __str__(self) -> str:
        if self.kind == "dilate":
            return f"q->q^{self.value}"
        if self.kind == "translate":
            return f"{self.var}->{self.var}*q^{self.value}"
        if self.kind == "subst":
            v = self.value
            return f"{self.var}->{serialize(v) if isinstance(v, Series) else v}"
        return "q->1"


def dil(d: int) -> Step:
    return Step("dilate", value=d)


def tr(var: str, t: int) -> Step:
    return Step("translate", var, t)


def sub(var: str, value) -> Step:
    return Step("subst", var, value)


Q_TO_ONE = Step("q_to_one")


def apply_steps(s: Series, steps: Sequence[Step], weights: Mapping[str, int]) -> Series:
    """Apply ``steps`` to ``s`` while tracking the linear degree bound ``weights``.

    ``weights`` promises ``q_exp >= sum(w_v * exp(v))`` for every term of the
    full (untruncated) series; it is what lets a negative translation keep a
    known validity order.
    """
    w = dict(weights)
    for st in steps:
        if st.kind == "dilate":
            s = dilate(s, st.value)
            w = {k: v * st.value for k, v in w.items()}
        elif st.kind == "translate":
            s = translate(s, st.var, st.value, w.get(st.var))
            if st.var in w:
                w[st.var] += st.value
        elif st.kind == "subst":
            value = st.value if isinstance(st.value, Series) else Series.const(st.value)
            s = substitute(s, st.var, value, w.get(st.var))
            w.pop(st.var, None)
            for p in value.params:
                # the bound no longer separates p from the substituted variable
                w.pop(p, None)
        elif st.kind == "q_to_one":
            s = s.at_q_one()
        else:
            raise ValueError(f"unknown step {st.kind!r}")
    return s


@dataclass(frozen=True)
class Chain:
    name: str
    source: str
    steps: tuple[Step, ...]
    target: str
    source_assignment: Mapping[str, int] = field(default_factory=dict)
    target_assignment: Mapping[str, int] = field(default_factory=dict)
    Q: int | None = 20
    expected: str = cat.IDENTITY


def specialize_check(source_id: str, steps: Sequence[Step], target_id: str, Q: int | None = 20,
                     source_assignment: Mapping[str, int] | None = None,
                     target_assignment: Mapping[str, int] | None = None,
                     name: str | None = None, expected: str = cat.IDENTITY,
                     timing: bool = False) -> VerificationReport:
    """Specialize both sides of ``source`` and compare them with ``target``'s sides.

    For truncated sources the build order is raised until the specialized
    series is valid to ``q^Q``.  ``Q=None`` compares exactly.
    """
    src, tgt = cat.get(source_id), cat.get(target_id)
    start = time.perf_counter()
    steps = tuple(steps)
    exact = src.mode == cat.EXACT and Q is None
    if Q is None and src.mode != cat.EXACT:
        raise ValueError("a truncated source needs a target order Q")
    got = {}
    for side in ("lhs", "rhs"):
        order = None if src.mode == cat.EXACT else Q
        for _ in range(64):
            s = apply_steps(src.build(side, source_assignment, order), steps, src.weights)
            if exact or s.q_cap is None or s.q_cap >= Q:
                break
            order += max(1, Q - s.q_cap)
        else:
            raise InsufficientTruncation(f"could not reach q^{Q} after {steps}", required=Q)
        got[side] = s
    tQ = None if exact else Q
    want = {side: tgt.build(side, target_assignment, tQ) for side in ("lhs", "rhs")}
    label = name or f"{source_id}->{target_id}"
    assignment = {"steps": [str(st) for st in steps], **dict(source_assignment or {})}
    for side in ("lhs", "rhs"):
        cmp = _compare(got[side], want[side], tQ)
        if not cmp:
            return VerificationReport(label, {**assignment, "side": side}, _caps(tQ), MISMATCH,
                                      _mismatch(cmp), _elapsed(start, timing), expected)
    return VerificationReport(label, assignment, _caps(tQ), VERIFIED, None, _elapsed(start, timing), expected)


def _q(e: int, **p) -> Series:
    return Series.monomial(1, e, **p)


CHAINS: tuple[Chain, ...] = (
    Chain("unified-c=ab", "unified-4.1", (sub("c", _q(0, a=1, b=1)),), "schur-key-1.3"),
    Chain("unified-b=0-a=1", "unified-4.1", (sub("b", 0), sub("a", 1)), "lebesgue-1.1"),
    Chain("lebesgue-to-gollnitz-b", "lebesgue-1.1", (dil(2), tr("c", -1)), "gollnitz-1.2b"),
    Chain("lebesgue-to-gollnitz-a", "lebesgue-1.1", (dil(2), tr("c", -3)), "gollnitz-1.2a"),
    Chain("sylvester-to-gollnitz-a", "sylvester-4.5", (dil(2), tr("c", -1)), "gollnitz-1.2a"),
    Chain("sylvester-to-gollnitz-b", "sylvester-4.5", (dil(2), tr("c", 1)), "gollnitz-1.2b"),
    Chain("capparelli-first", "capparelli-prod-7.3", (dil(3), sub("a", _q(-2)), sub("b", _q(-4))),
          "capparelli-c-7.4"),
    Chain("capparelli-second", "capparelli-prod-7.3", (dil(3), sub("a", _q(-5)), sub("b", _q(-1))),
          "capparelli-second-7.5"),
    *(Chain(f"trinomial-M{M}", "finite-schur-5.1", (sub("b", 0), Q_TO_ONE), "trinomial-5.9",
            {"L": M, "M": M}, {"M": M}, None) for M in range(9)),
    Chain("kursungoz-b=a^2", "kursungoz-6.5", (sub("b", _q(0, a=2)),), "alladi-schur-key-6.8"),
    # controls: the other translations do not land on the first Goellnitz identity
    Chain("lebesgue-c/q-is-not-gollnitz-a", "lebesgue-1.1", (dil(2), tr("c", -1)), "gollnitz-1.2a",
          expected=cat.NON_IDENTITY),
    Chain("lebesgue-cq-is-not-gollnitz-a", "lebesgue-1.1", (dil(2), tr("c", 1)), "gollnitz-1.2a",
          expected=cat.NON_IDENTITY),
)


def chain(name: str) -> Chain:
    for c in CHAINS:
        if c.name == name:
            return c
    raise KeyError(name)


def run_chain(c: Chain, Q: int | None = None, timing: bool = False) -> VerificationReport:
    order = c.Q if c.Q is None else (Q or c.Q)
    return specialize_check(c.source, c.steps, c.target, order, c.source_assignment, c.target_assignment,
                            c.name, c.expected, timing)


# -- batch runs ------------------------------------------------------------


def work_items(Q: int = 20, sweep: bool = True) -> list[tuple]:
    """Every check of a full run, in a fixed order."""
    items: list[tuple] = []
    for entry in cat.catalog():
        assignments = entry.sweep() if sweep else [entry.complete()]
        for A in assignments:
            items.append(("entry", entry.id, A, Q))
    for fin, inf in LIMITS:
        items.append(("limit", fin, inf, min(Q, 12)))
    for c in CHAINS:
        items.append(("chain", c.name, None, Q))
    return items


def run_item(item: tuple, timing: bool = False) -> VerificationReport:
    kind, a, b, Q = item
    try:
        if kind == "entry":
            return verify(a, b, Q, timing=timing)
        if kind == "limit":
            return verify_limit(a, b, Q, timing=timing)
        return run_chain(chain(a), Q, timing=timing)
    except (ValueError, KeyError, ArithmeticError) as exc:
        label = a if kind != "limit" else f"{a}->{b}"
        expected = cat.get(a).expected if kind == "entry" else cat.IDENTITY
        assignment = dict(b) if kind == "entry" and b else {}
        return VerificationReport(label, assignment, _caps(Q), ERROR, None, None, expected, str(exc))


def _run_item_plain(item):
    return run_item(item)


def _run_item_timed(item):
    return run_item(item, timing=True)


def verify_all(Q: int = 20, sweep: bool = True, jobs: int = 1, timing: bool = False,
               items: Iterable[tuple] | None = None) -> list[VerificationReport]:
    """Run every check; the result order never depends on ``jobs``."""
    items = list(items) if items is not None else work_items(Q, sweep)
    fn = _run_item_timed if timing else _run_item_plain
    if jobs <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=4))
