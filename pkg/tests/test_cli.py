import dataclasses
import io
import json

import pytest

from qhyper import catalog as cat
from qhyper.cli import run
from qhyper.series import Series, substitute


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_verify_lebesgue():
    code, out, _ = call("verify", "lebesgue-1.1", "--qmax", "25")
    assert code == 0 and "verified" in out


def test_check_schur():
    code, out, _ = call("check", "thm-S", "--nmax", "40")
    assert code == 0 and "pass" in out


def test_negative_control_exits_zero_with_monomial():
    code, out, _ = call("verify", "neg-q3-form", "--qmax", "8", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["status"] == "mismatch"
    assert rep["first_mismatch"] == {"monomial": "a1*q^5", "lhs": 1, "rhs": 0}


def test_unknown_id_lists_valid_ids():
    code, _, err = call("verify", "not-an-id")
    assert code == 2 and "lebesgue-1.1" in err
    assert call("check", "thm-X")[0] == 2
    assert call("crosscheck", "finite-schur-5.1")[0] == 2


def test_usage_errors():
    assert call()[0] == 2
    assert call("verify", "finite-schur-5.1", "--set", "L")[0] == 2
    assert call("verify", "finite-schur-5.1", "--set", "L=x")[0] == 2
    assert call("frobnicate")[0] == 2


def test_insufficient_cap():
    code, _, err = call("series", "schur-key-1.3", "--qmax", "6", "--coeff", "9")
    assert code == 3 and "required minimum: 9" in err


def test_series_output_round_trips():
    from qhyper.series import parse

    code, out, _ = call("series", "lebesgue-1.1", "--side", "rhs", "--qmax", "8")
    assert code == 0
    assert parse(out.strip()) == cat.build_side("lebesgue-1.1", "rhs", {}, 8)


def test_series_coefficient():
    code, out, _ = call("series", "lebesgue-1.1", "--side", "rhs", "--qmax", "8", "--coeff", "4", "--json")
    assert code == 0 and json.loads(out)["coefficients"] == {"1": 2, "c": 2}


def test_count_and_check_hierarchy():
    code, out, _ = call("count", "thm-S", "--n", "6", "--json")
    assert code == 0 and json.loads(out)["sides"] == {"S": 2, "B": 2}
    code, out, _ = call("check", "thm-H", "--nmax", "12", "--m", "2", "--residues", "1")
    assert code == 0 and "floor=residues fails" in out
    assert call("check", "thm-H", "--nmax", "12", "--m", "2", "--residues", "1", "--floor", "residues")[0] == 1


def test_crosscheck_command():
    code, out, _ = call("crosscheck", "lebesgue-1.1", "--nmax", "12")
    assert code == 0 and out.count("ok") == 2


def test_catalog_lists_everything():
    code, out, _ = call("catalog", "--json")
    rows = [json.loads(line) for line in out.splitlines()]
    assert code == 0
    assert {r["id"] for r in rows if r["kind"] == "identity"} == set(cat.ids())
    assert any(r["kind"] == "theorem" and r["id"] == "thm-H" for r in rows)


def test_verify_chain_and_limit():
    assert call("verify", "unified-c=ab")[0] == 0
    assert call("verify", "finite-lebesgue-3.1->lebesgue-1.1", "--qmax", "10")[0] == 0


def test_verify_all_subset_is_deterministic_across_jobs():
    args = ("verify-all", "--qmax", "12", "--sweep-default", "--json",
            "--only", "finite-lebesgue-3.1", "--only", "capparelli-key-7.1", "--only", "trinomial-M3")
    one = call(*args, "--jobs", "1")
    many = call(*args, "--jobs", "3")
    assert one[0] == many[0] == 0
    assert one[1] == many[1] and one[1].count("\n") > 10


def _flip(entry_id, side, var):
    entry = cat.get(entry_id)
    orig = getattr(entry, side)

    def mutated(A, ctx):
        return substitute(orig(A, ctx), var, -Series.var(var))

    return dataclasses.replace(entry, **{side: mutated})


@pytest.mark.parametrize("entry_id, side, var", [
    ("lebesgue-1.1", "lhs", "c"),
    ("finite-schur-5.1", "rhs", "a"),
    ("capparelli-key-7.1", "lhs", "b"),
    ("finite-hierarchy-8.15", "lhs", "a1"),
    ("hierarchy-prod-8.2", "lhs", "a2"),
])
def test_injected_sign_error_flips_exit_code(monkeypatch, entry_id, side, var):
    args = ("verify-all", "--qmax", "12", "--sweep-default", "--only", entry_id)
    assert call(*args)[0] == 0
    monkeypatch.setitem(cat._REGISTRY, entry_id, _flip(entry_id, side, var))
    assert call(*args)[0] == 1
