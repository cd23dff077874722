import pytest

from qhyper import catalog as cat
from qhyper.engine import verify
from qhyper.gadgets import gauss_binomial, triangular
from qhyper.kit import Ctx
from qhyper.partitions import CONSTRAINTS, weighted_tally
from qhyper.series import Monomial, Series, equal_up_to, substitute

M = Series.monomial


def test_ids_are_unique_and_mandatory_entries_present():
    ids = cat.ids()
    assert len(ids) == len(set(ids))
    assert cat.get("lebesgue-1.1").mode == cat.TRUNCATED
    e = cat.get("finite-schur-5.1")
    assert e.mode == cat.EXACT and e.params_for(e.complete()) == ("L", "M")
    assert cat.get("neg-q3-form").expected == cat.NON_IDENTITY


def test_unknown_id():
    with pytest.raises(KeyError):
        cat.get("no-such-identity")


def test_lebesgue_product_coefficients_match_tally():
    rhs = cat.build_side("lebesgue-1.1", "rhs", {}, 4)
    expected = Series.one() + M(1, 1)
    for n in range(2, 5):
        for key, count in weighted_tally(n, CONSTRAINTS["even-distinct"], {"c": "even"}).items():
            expected = expected + M(count, n, **dict(key))
    assert equal_up_to(rhs, expected, 4)
    # 1 + q + (1+c)q^2 + (1+c)q^3 + (2+2c)q^4
    assert rhs.coefficients(c=1) == {2: 1, 3: 1, 4: 2}


def test_finite_schur_trivial_bounds():
    assert cat.build_side("finite-schur-5.1", "lhs", {"L": 0, "M": 0}) == Series.one()


def test_trinomial_at_q_one():
    rhs = cat.build_side("trinomial-5.9", "rhs", {"M": 2}).at_q_one()
    a, c = Series.var("a"), Series.var("c")
    assert rhs == (1 + a + c) ** 2


def test_default_assignments_behave_as_expected():
    for e in cat.catalog():
        rep = verify(e.id)
        assert rep.passed, (e.id, rep.first_mismatch)


def test_domain_errors():
    with pytest.raises(cat.DomainError):
        cat.get("finite-capparelli-7.11").complete({"M1": 3, "M2": 3, "L": 2})
    with pytest.raises(cat.DomainError):
        cat.get("coeff-7.14").complete({"i": -1})


def test_coefficient_extraction_of_product_form():
    entry = cat.get("schur-prod-5.7")
    for L in range(9):
        for Mb in range(9):
            if entry.domain and not entry.domain({"L": L, "M": Mb}):
                continue
            rhs = cat.build_side("schur-prod-5.7", "rhs", {"L": L, "M": Mb})
            for i in range(6):
                for j in range(6):
                    want = M(1, triangular(i) + triangular(j)) * gauss_binomial(L, j) * gauss_binomial(Mb, i)
                    got = Series({Monomial(m.q_exp): c for m, c in rhs.items() if dict(m.params) == (
                        {k: v for k, v in (("a", i), ("b", j)) if v})})
                    assert got == want


def test_double_bounded_key_identity_from_shift():
    # the a^i b^j coefficient identity with M -> M - j is the double bounded key identity
    for L in range(7):
        for Mb in range(7):
            assert verify("ab-key-5.6", {"L": L, "M": Mb}).passed


def test_key_series_coefficients_are_nonnegative():
    lhs = cat.build_side("alladi-schur-key-6.8", "lhs", {}, 30)
    assert lhs.q_cap >= 30
    assert all(c >= 0 for m, c in lhs.items() if m.q_exp <= 30)


def test_unified_series_is_symmetric_in_a_and_b():
    lhs = cat.build_side("unified-4.1", "lhs", {}, 20)
    swapped = substitute(substitute(substitute(lhs, "a", Series.var("x")), "b", Series.var("a")), "x",
                         Series.var("b"))
    assert equal_up_to(lhs, swapped, 20)


def test_capparelli_rhs_forms_agree():
    for m1 in range(5):
        for m2 in range(5):
            for L in range(m1 + m2, m1 + m2 + 5):
                assert verify("rhs-cancel-7.12", {"M1": m1, "M2": m2, "L": L}).passed


def test_coefficient_identity_at_negative_integers():
    rep = [verify("coeff-7.14", A) for A in cat.get("coeff-7.14").sweep() if min(A.values()) < 0]
    assert rep and all(r.passed for r in rep)


def test_literal_m2_reading_fails():
    e = cat.get("finite-capparelli-7.10")
    A = e.complete({"M1": 2, "M2": 3, "L": 6})
    # exactly, the literal numerator is not even divisible by the common denominator
    with pytest.raises(ArithmeticError):
        cat.capp710_rhs(literal=True)(A, Ctx(None))
    literal = cat.capp710_rhs(literal=True)(A, Ctx(12))
    assert not equal_up_to(e.build("lhs", A).truncate(12), literal, 12)


def test_literal_inner_limit_reading_fails():
    assert verify("finite-transform-3.4-literal").status == "mismatch"


def test_truncated_zero_factor_keeps_its_order():
    # a truncated zero stands for an unknown tail above its order
    z = Series.zero().truncate(0)
    assert (z * z).q_cap == 1
    assert (M(1, -1) * z).q_cap == -1
