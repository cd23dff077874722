import pytest

from qhyper import theorems as th
from qhyper.engine import dil, tr
from qhyper.partitions import CONSTRAINTS


def test_spot_values():
    assert th.count("thm-S", 6) == {"S": 2, "B": 2}
    # both sides of the weighted Lebesgue theorem are 2 + c at n = 3
    assert th.count("thm-L", 3) == {"D": {"0": 2, "1": 1}, "C": {"0": 2, "1": 1}}
    assert th.count("thm-C", 5) == {"C*": 1, "D": 1}


@pytest.mark.parametrize("tid", list(th.THEOREMS))
def test_theorems_hold_at_small_n(tid):
    assert th.theorem_check(tid, 18).passed


def test_unknown_theorem():
    with pytest.raises(KeyError):
        th.theorem_check("thm-nope", 5)


def test_broken_theorem_reports_first_failure():
    bad = th.Theorem("bad", "", ((th.Side("S", CONSTRAINTS["schur"]), th.Side("D", CONSTRAINTS["distinct"])),))
    rep = th._run(bad, 10)
    assert not rep.passed and rep.first_failure == {"n": 3, "sides": {"S": 1, "D": 2}}


def test_hierarchy_floor_readings_are_reported():
    rep = th.theorem_check("thm-H", 16)
    assert rep.passed
    assert rep.detail["m=2,j=1"]["parts"] == "pass"
    assert rep.detail["m=2,j=1"]["residues"].startswith("fails")
    assert not th.theorem_check("thm-H", 16, 2, (1,), "residues").passed


def test_hierarchy_needs_m_and_residues_together():
    with pytest.raises(ValueError):
        th.theorem_check("thm-H", 5, m=2)


@pytest.mark.parametrize("check", th.CROSSCHECKS, ids=lambda c: c.name)
def test_crosschecks(check):
    assert th.run_crosscheck(check, min(check.n_max, 16)).passed


def test_crosscheck_detects_wrong_weight():
    rep = th.gf_cross_check("lebesgue-1.1", "rhs", (), "even-distinct", {"c": "odd"}, 10)
    assert rep.status == th.FAIL and rep.first_failure["n"] == 1


def test_crosscheck_detects_wrong_translation():
    rep = th.gf_cross_check("schur-key-1.3", "rhs", (dil(3), tr("a", -1), tr("b", -2)), "schur-B",
                            {"a": "mod3_1", "b": "mod3_2"}, 10)
    assert rep.status == th.FAIL


def test_crosscheck_needs_statistics_for_every_parameter():
    with pytest.raises(ValueError):
        th.gf_cross_check("lebesgue-1.1", "rhs", (), "even-distinct", {}, 5)
