from collections import Counter

from hypothesis import given, strategies as st

from qhyper.partitions import (
    CONSTRAINTS, enumerate_partitions, hierarchy_a, hierarchy_b, hierarchy_stats, in_class, level_parity,
    partition_numbers, tally, weighted_tally,
)

C = CONSTRAINTS


def all_partitions(n, largest=None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for p in range(min(n, largest), 0, -1):
        for rest in all_partitions(n - p, p):
            yield (p,) + rest


def test_empty_partition():
    for c in C.values():
        assert enumerate_partitions(0, c) == [()]


def test_partition_numbers():
    expected = (1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135, 176, 231, 297, 385, 490, 627)
    assert partition_numbers(20) == expected
    assert tuple(len(enumerate_partitions(n, C["unrestricted"])) for n in range(21)) == expected


def test_schur_six():
    assert sorted(enumerate_partitions(6, C["schur"])) == [(5, 1), (6,)]


def test_capparelli_d_five():
    assert enumerate_partitions(5, C["capparelli-D"]) == [(5,)]


def test_tallies():
    assert tally(3, C["distinct"], ("gaps",)) == Counter({(1,): 1, (0,): 1})
    assert len(enumerate_partitions(6, C["schur-B"])) == 2
    assert tally(4, C["odd-at-most-twice"], ("parts",))[(2,)] == 1


def test_weighted_tally_keys():
    got = weighted_tally(4, C["even-distinct"], {"c": "even"})
    # 4, 3+1, 2+1+1, 1+1+1+1
    assert got == {(("c", 1),): 2, (): 2}


@given(st.integers(0, 16), st.sampled_from(["schur", "capparelli-D", "gollnitz-g1", "c5-D", "even-distinct"]))
def test_enumeration_is_a_filter_of_all_partitions(n, name):
    c = C[name]
    got = enumerate_partitions(n, c)
    assert len(set(got)) == len(got)
    assert all(sum(p) == n and list(p) == sorted(p, reverse=True) and min(p, default=1) >= 1 for p in got)
    assert set(got) <= set(all_partitions(n))


def test_schur_rule_against_direct_filter():
    def ok(p):
        return all(x - y >= 3 and not (x - y == 3 and x % 3 == 0) for x, y in zip(p, p[1:]))

    for n in range(20):
        want = {p for p in all_partitions(n) if ok(p)}
        assert set(enumerate_partitions(n, C["schur"])) == want


def test_residue_convention():
    assert in_class(7, 1, 6) and not in_class(1, 7, 6)
    assert level_parity(7, 1, 6) == 1 and level_parity(13, 1, 6) == 0


def test_level_parity_admits_consecutive_multiples():
    b = hierarchy_b(2, (1,), "parts")
    assert b.admits((6, 4)) and b.admits((6, 4, 1))
    assert not b.admits((4, 2, 1))


def test_hierarchy_stats():
    fns = hierarchy_stats(3, (4, 2), 6)
    assert [f((10, 8, 6, 4)) for f in fns] == [2, 1]
    a = hierarchy_a(3, (4, 2))
    assert a.admits((10, 8, 4)) and not a.admits((7,))
