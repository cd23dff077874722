"""Brute-force partition enumeration under declarative constraints.

Partitions are tuples of positive integers in weakly decreasing order.  A
:class:`PartitionConstraint` says which parts are admissible, how often
they may repeat, which neighbouring pairs are allowed and, optionally, a
whole-partition condition.  Residue classes use the convention that
"``p = j (mod M)``" means ``p = j + lam*M`` with ``lam >= 0``, so ``4 (mod 3)``
admits 4, 7, 10, ... but not 1.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

Partition = tuple[int, ...]

__all__ = [
    "Partition",
    "PartitionConstraint",
    "in_class",
    "level_parity",
    "enumerate_partitions",
    "tally",
    "weighted_tally",
    "partition_numbers",
    "STATS",
    "CONSTRAINTS",
]


def in_class(p: int, j: int, modulus: int) -> bool:
    """``p = j + lam*modulus`` for some ``lam >= 0``."""
    return p >= j and (p - j) % modulus == 0


def level_parity(p: int, j: int, modulus: int) -> int:
    """Parity of ``lam`` in ``p = j + lam*modulus``."""
    if not in_class(p, j, modulus):
        raise ValueError(f"{p} is not a {j} (mod {modulus}) part")
    return ((p - j) // modulus) % 2


@dataclass(frozen=True)
class PartitionConstraint:
    """Admissibility rules for a family of partitions.

    ``residues`` lists ``(j, M)`` classes a part must belong to (None admits
    every positive integer).  ``max_mult`` bounds the multiplicity of a part
    (``distinct`` is shorthand for 1).  ``adjacent(x, y)`` is checked for
    every pair of consecutive parts ``x >= y``; ``last(y)`` for the smallest
    part.  ``whole`` sees the finished partition and is the place for
    non-local rules.
    """

    name: str
    distinct: bool = False
    residues: tuple[tuple[int, int], ...] | None = None
    min_part: int = 1
    exclude: frozenset[int] = frozenset()
    max_mult: Callable[[int], int] | None = None
    adjacent: Callable[[int, int], bool] | None = None
    last: Callable[[int], bool] | None = None
    whole: Callable[[Partition], bool] | None = None

    def part_ok(self, p: int) -> bool:
        if p < self.min_part or p in self.exclude:
            return False
        if self.residues is None:
            return True
        return any(in_class(p, j, m) for j, m in self.residues)

    def mult_cap(self, p: int) -> int | None:
        if self.distinct:
            return 1
        if self.max_mult is not None:
            return self.max_mult(p)
        return None

    def admits(self, parts: Sequence[int]) -> bool:
        """Check a partition against every rule (independent of enumeration)."""
        parts = tuple(parts)
        if any(x < y for x, y in zip(parts, parts[1:])):
            return False
        if not all(self.part_ok(p) for p in parts):
            return False
        for p, k in Counter(parts).items():
            cap = self.mult_cap(p)
            if cap is not None and k > cap:
                return False
        if self.adjacent is not None:
            if not all(self.adjacent(x, y) for x, y in zip(parts, parts[1:])):
                return False
        if parts and self.last is not None and not self.last(parts[-1]):
            return False
        if self.whole is not None and not self.whole(parts):
            return False
        return True


def enumerate_partitions(n: int, c: PartitionConstraint) -> list[Partition]:
    """All partitions of ``n`` admitted by ``c``, largest parts first, in lexicographically decreasing order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out: list[Partition] = []
    allowed = [p for p in range(n, 0, -1) if c.part_ok(p)]

    def rec(rest: int, prefix: list[int], mult: int):
        if rest == 0:
            parts = tuple(prefix)
            if parts and c.last is not None and not c.last(parts[-1]):
                return
            if c.whole is not None and not c.whole(parts):
                return
            out.append(parts)
            return
        prev = prefix[-1] if prefix else None
        for p in allowed:
            if p > rest:
                continue
            if prev is not None:
                if p > prev:
                    continue
                if p == prev:
                    cap = c.mult_cap(p)
                    if cap is not None and mult + 1 > cap:
                        continue
                if c.adjacent is not None and not c.adjacent(prev, p):
                    continue
            prefix.append(p)
            rec(rest - p, prefix, mult + 1 if p == prev else 1)
            prefix.pop()

    rec(n, [], 0)
    return out


def _stat_fn(stat) -> Callable[[Partition], int]:
    if callable(stat):
        return stat
    return STATS[stat]


def tally(n: int, c: PartitionConstraint, stats: Sequence) -> Counter:
    """Group the admitted partitions of ``n`` by a vector of statistics."""
    fns = [_stat_fn(s) for s in stats]
    return Counter(tuple(f(p) for f in fns) for p in enumerate_partitions(n, c))


def weighted_tally(n: int, c: PartitionConstraint, weights: Mapping[str, object]) -> dict[tuple[tuple[str, int], ...], int]:
    """Sum over admitted partitions of ``prod(param^stat(pi))``.

    Returns a map from sorted ``((param, exponent), ...)`` with zero exponents
    dropped to the number of partitions carrying that weight.
    """
    names = sorted(weights)
    fns = [_stat_fn(weights[k]) for k in names]
    out: Counter = Counter()
    for p in enumerate_partitions(n, c):
        key = tuple((k, e) for k, f in zip(names, fns) if (e := f(p)))
        out[key] += 1
    return dict(out)


@lru_cache(maxsize=None)
def partition_numbers(n_max: int) -> tuple[int, ...]:
    """p(0..n_max) from Euler's pentagonal-number recurrence."""
    p = [1] + [0] * n_max
    for n in range(1, n_max + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[n - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p[n] = total
    return tuple(p)


# -- statistics ------------------------------------------------------------

def lebesgue_gaps(p: Partition) -> int:
    """Number of gaps ``b_i - b_{i+1} >= 2`` counting a final gap to 0."""
    ext = tuple(p) + (0,)
    return sum(1 for x, y in zip(ext, ext[1:]) if x - y >= 2)


def count_class(j: int, m: int) -> Callable[[Partition], int]:
    def f(p: Partition) -> int:
        return sum(1 for x in p if x % m == j % m)
    f.__name__ = f"count_{j}_mod_{m}"
    return f


def _parts_big_multiples_of_3(p: Partition) -> int:
    # C-R statistic: multiples of 3 exceeding 3*(#parts = 4 mod 6 + #parts = 2 mod 6)
    ij = sum(1 for x in p if x % 6 in (2, 4))
    return sum(1 for x in p if x % 3 == 0 and x > 3 * ij)


STATS: dict[str, Callable[[Partition], int]] = {
    "parts": len,
    "gaps": lebesgue_gaps,
    "even": lambda p: sum(1 for x in p if x % 2 == 0),
    "odd": lambda p: sum(1 for x in p if x % 2),
    "mod3_0": count_class(0, 3),
    "mod3_1": count_class(1, 3),
    "mod3_2": count_class(2, 3),
    "mod4_1": count_class(1, 4),
    "mod4_3": count_class(3, 4),
    "mod6_2": count_class(2, 6),
    "mod6_4": count_class(4, 6),
    "parts_mult3_twice": lambda p: len(p) + sum(1 for x in p if x % 3 == 0),
    "parts_even_twice": lambda p: len(p) + sum(1 for x in p if x % 2 == 0),
    "odd_plus_twice_even": lambda p: sum(1 if x % 2 else 2 for x in p),
    "schur_a": lambda p: sum(1 for x in p if x % 3 != 2),   # alpha + gamma
    "schur_b": lambda p: sum(1 for x in p if x % 3 != 1),   # beta + gamma
    "cr_big3": _parts_big_multiples_of_3,
}


# -- the paper's partition families ---------------------------------------

def _schur_adj(x: int, y: int) -> bool:
    d = x - y
    return d > 3 or (d == 3 and x % 3 != 0)


def _gollnitz_adj(x: int, y: int) -> bool:
    d = x - y
    return d > 2 or (d == 2 and x % 2 == 0 and y % 2 == 0)


def _capparelli_adj(x: int, y: int) -> bool:
    d = x - y
    if d < 2:
        return False
    if d >= 4:
        return True
    return (x % 3 == 0 and y % 3 == 0) or (x + y) % 6 == 0


def _c5_adj(x: int, y: int) -> bool:
    d = x - y
    if d < 1:
        return False
    special = (x - y) % 2 == 1 or x % 5 == 0 or y % 5 == 0
    if not special:
        return True
    if d < 5:
        return False
    if d == 5:
        return x % 5 == 0 and y % 5 == 0
    return True


def c5_window(m: int) -> Callable[[Partition], bool]:
    """Whenever ``m | p_i``: ``p_i - p_{i+j} >= m*j`` for every later index."""

    def check(p: Partition) -> bool:
        for i, x in enumerate(p):
            if x % m:
                continue
            for j in range(1, len(p) - i):
                if x - p[i + j] < m * j:
                    return False
        return True

    return check


def _odd_at_most_twice(p: int) -> int:
    return 2


def _capparelli_d(window: int | None = None) -> PartitionConstraint:
    return PartitionConstraint(
        "capparelli-D" if window is None else f"capparelli-D+window{window}",
        distinct=True, min_part=2, adjacent=_capparelli_adj,
        whole=None if window is None else c5_window(window))


CONSTRAINTS: dict[str, PartitionConstraint] = {
    "unrestricted": PartitionConstraint("unrestricted"),
    "distinct": PartitionConstraint("distinct", distinct=True),
    "even-distinct": PartitionConstraint(
        "even-distinct", max_mult=lambda p: 1 if p % 2 == 0 else None),
    "gollnitz-g1": PartitionConstraint("gollnitz-g1", distinct=True, min_part=1, adjacent=_gollnitz_adj),
    "gollnitz-g2": PartitionConstraint("gollnitz-g2", distinct=True, min_part=2, adjacent=_gollnitz_adj),
    "gollnitz-G1": PartitionConstraint("gollnitz-G1", distinct=True, residues=((2, 4), (4, 4), (1, 4))),
    "gollnitz-G2": PartitionConstraint("gollnitz-G2", distinct=True, residues=((2, 4), (4, 4), (3, 4))),
    "schur": PartitionConstraint("schur", distinct=True, adjacent=_schur_adj),
    "schur-B": PartitionConstraint("schur-B", distinct=True, residues=((1, 3), (2, 3))),
    "odd-at-most-twice": PartitionConstraint(
        "odd-at-most-twice", residues=((1, 2),), max_mult=_odd_at_most_twice),
    "capparelli-Cstar": PartitionConstraint(
        "capparelli-Cstar", residues=((2, 12), (3, 12), (9, 12), (10, 12))),
    "capparelli-C": PartitionConstraint(
        "capparelli-C", distinct=True, residues=((2, 6), (3, 6), (4, 6), (6, 6))),
    "capparelli-D": _capparelli_d(),
    "capparelli-D-window3": _capparelli_d(3),
    "capparelli-A2": PartitionConstraint(
        "capparelli-A2", distinct=True, residues=((1, 6), (3, 6), (5, 6), (6, 6))),
    "capparelli-B2": PartitionConstraint(
        "capparelli-B2", distinct=True, exclude=frozenset({2}), adjacent=_capparelli_adj),
    "c5-A": PartitionConstraint(
        "c5-A", distinct=True, residues=((10, 10), (2, 10), (4, 10), (5, 10), (6, 10), (8, 10))),
    "c5-C": PartitionConstraint(
        "c5-C", residues=((2, 20), (5, 20), (6, 20), (14, 20), (15, 20), (18, 20))),
    "c5-D": PartitionConstraint(
        "c5-D", distinct=True, exclude=frozenset({1, 3}), adjacent=_c5_adj, whole=c5_window(5)),
}


def hierarchy_a(m: int, residues: Sequence[int]) -> PartitionConstraint:
    """Distinct parts in the classes ``j_i (mod 2m)`` plus distinct multiples of ``m``."""
    classes = tuple((j, 2 * m) for j in residues) + ((m, m),)
    return PartitionConstraint(f"H-A(m={m},j={tuple(residues)})", distinct=True, residues=classes)


def hierarchy_b(m: int, residues: Sequence[int], floor: str = "parts") -> PartitionConstraint:
    """Embedding-stage partitions of the infinite hierarchy.

    Parts ``j_i (mod m)`` are distinct; two such parts of different level
    parity differ by more than ``m``; multiples of ``m`` are distinct and each
    exceeds ``F*m`` where ``F`` is the number of non-multiple parts
    (``floor="parts"``) or the residue sum ``j_1 + ... + j_r``
    (``floor="residues"``).
    """
    residues = tuple(residues)
    if floor not in ("parts", "residues"):
        raise ValueError(f"unknown floor reading {floor!r}")

    def cls(p: int) -> int | None:
        for j in residues:
            if in_class(p, j, m):
                return j
        return None

    def whole(p: Partition) -> bool:
        tagged = [(x, cls(x)) for x in p if x % m]
        for a in range(len(tagged)):
            x, jx = tagged[a]
            for b in range(a + 1, len(tagged)):
                y, jy = tagged[b]
                if x - y > m:
                    break
                if level_parity(x, jx, m) != level_parity(y, jy, m):
                    return False
        f = len(tagged) if floor == "parts" else sum(residues)
        return all(x > f * m for x in p if x % m == 0)

    classes = tuple((j, m) for j in residues) + ((m, m),)
    return PartitionConstraint(
        f"H-B(m={m},j={residues},floor={floor})", distinct=True, residues=classes, whole=whole)


def hierarchy_stats(m: int, residues: Sequence[int], modulus: int) -> list[Callable[[Partition], int]]:
    """``nu_i`` = number of parts in class ``j_i (mod modulus)``."""
    fns = []
    for j in residues:
        def f(p: Partition, j=j) -> int:
            return sum(1 for x in p if x % m and in_class(x, j, modulus))
        fns.append(f)
    return fns
