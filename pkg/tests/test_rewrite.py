import random

import pytest

from innerscope.exactmath import GF, QQ
from innerscope.rewrite import (
    AntisymmetryViolation,
    BudgetExceeded,
    CharacteristicZero,
    LengthMismatch,
    LieData,
    NcPolynomial,
    NonzeroAugmentation,
    RewriteSystem,
    ValidationFailure,
    abelian_lie,
    ad_power_check,
    augmentation,
    check_endo_fp,
    fp_witness_checks,
    heisenberg,
    leavitt_system,
    lie_inner_derivation_check,
    pbw_system,
    scalar_unit_search,
    sl2,
)

F2 = GF(2)
F3 = GF(3)
F5 = GF(5)


def mono(field, word, coeff=1):
    return NcPolynomial.monomial(field, word, coeff)


def test_polynomial_arithmetic():
    p = mono(QQ, ("a", "b")) + mono(QQ, ("b",), 2)
    q = mono(QQ, ("b",), -2) + NcPolynomial.one(QQ)
    assert (p + q).terms == {("a", "b"): 1, (): 1}
    assert (p - p).is_zero()
    prod = mono(QQ, ("a",)) * mono(QQ, ("b",), 3)
    assert prod.terms == {("a", "b"): 3}
    assert p.degree() == 2
    assert NcPolynomial.zero(QQ).degree() == -1
    assert p.coefficient(("b",)) == 2
    assert augmentation(q) == 1
    assert augmentation(p) == 0


def test_polynomial_parse():
    gens = ["x1", "x2", "y1", "y2"]
    p = NcPolynomial.parse(QQ, "x1*y1 - 1", gens)
    assert p.terms == {("x1", "y1"): 1, (): -1}
    q = NcPolynomial.parse(QQ, "2*x1^2 + 1/2", gens)
    assert q.terms == {("x1", "x1"): 2, (): QQ.coerce("1/2")}
    r = NcPolynomial.parse(F3, "-x1 + 2*y2*x1", gens)
    assert r.terms == {("x1",): 2, ("y2", "x1"): 2}
    assert NcPolynomial.parse(QQ, "0", gens).is_zero()
    with pytest.raises(ValidationFailure):
        NcPolynomial.parse(QQ, "w3", gens)
    with pytest.raises(ValidationFailure):
        NcPolynomial.parse(QQ, "", gens)
    with pytest.raises(ValidationFailure):
        NcPolynomial.parse(QQ, "x1 + - x2", gens)
    with pytest.raises(ValidationFailure):
        NcPolynomial.parse(QQ, "x1^-1", gens)


def test_polynomial_json_round_trip():
    p = mono(QQ, ("a", "b"), "2/3") + NcPolynomial.one(QQ).scale(-1)
    data = p.to_json()
    assert NcPolynomial.from_json(QQ, data) == p
    q = mono(F3, ("a",), 2)
    assert NcPolynomial.from_json(F3, q.to_json()) == q


def test_system_validates_termination():
    x = "x"
    with pytest.raises(ValidationFailure):
        # length increases
        RewriteSystem(QQ, [x], [((x,), mono(QQ, (x, x)))])
    with pytest.raises(ValidationFailure):
        # same word: not strictly decreasing
        RewriteSystem(QQ, [x], [((x,), mono(QQ, (x,)))])
    with pytest.raises(ValidationFailure):
        RewriteSystem(QQ, [x], [((), NcPolynomial.one(QQ))])
    with pytest.raises(ValidationFailure):
        RewriteSystem(QQ, [x], [(("y",), NcPolynomial.zero(QQ))])
    with pytest.raises(ValidationFailure):
        RewriteSystem(QQ, [x, x], [])
    # equal length but lexicographically smaller right side is fine
    rs = RewriteSystem(QQ, ["a", "b"], [(("b", "a"), mono(QQ, ("a", "b")))])
    assert rs.normal_form(mono(QQ, ("b", "a"))).terms == {("a", "b"): 1}


def test_leavitt_normal_forms():
    lv = leavitt_system(2, QQ)
    assert len(lv.rules) == 5
    nf = lv.normal_form
    assert nf(mono(QQ, ("y1", "x1"))) == NcPolynomial.one(QQ)
    assert nf(mono(QQ, ("y1", "x2"))).is_zero()
    assert nf(mono(QQ, ("x2", "y2"))).terms == {(): 1, ("x1", "y1"): -1}
    # irreducible words of degree <= 1
    assert lv.irreducible_monomials(1) == [(), ("x1",), ("x2",), ("y1",), ("y2",)]
    assert not lv.preserves_augmentation
    assert len(leavitt_system(3, QQ).rules) == 10
    with pytest.raises(ValidationFailure):
        leavitt_system(1, QQ)


def test_leavitt_confluent():
    assert leavitt_system(2, QQ).is_confluent()
    assert leavitt_system(2, F2).is_confluent()
    assert leavitt_system(3, QQ).is_confluent()


def test_pbw_frozen_normal_form():
    rs = pbw_system(sl2(QQ))
    out = rs.normal_form(mono(QQ, ("f", "e", "h")))
    assert out.terms == {("e", "f", "h"): 1, ("h", "h"): -1}
    assert rs.is_confluent()
    assert rs.preserves_augmentation
    # ordered monomials of degree <= 2 over a 3-dimensional algebra: 1 + 3 + 6
    assert len(rs.irreducible_monomials(2)) == 10


def test_pbw_confluent_across_fields():
    for field in (QQ, F3, F5):
        lie = sl2(field)
        assert lie.jacobi_ok()
        assert pbw_system(lie).is_confluent()
    assert pbw_system(abelian_lie(3, QQ)).is_confluent()
    assert pbw_system(heisenberg(F2)).is_confluent()


def test_broken_jacobi_not_confluent():
    z, o = F5.zero, F5.one
    zero = (z, z, z)
    # sl2-like table with [h,e] perturbed: antisymmetric but not Jacobi
    brackets = [
        [zero, (z, z, o), (o, z, z)],
        [(z, z, F5.neg(o)), zero, (z, o, z)],
        [(F5.neg(o), z, z), (z, F5.neg(o), z), zero],
    ]
    lie = LieData(F5, brackets)
    assert not lie.jacobi_ok()
    failures = pbw_system(lie).confluence_check()
    assert failures
    first = failures[0]
    assert first.branch_i != first.branch_j
    assert len(first.word) == 3


def test_jacobi_iff_confluent_random():
    rng = random.Random(9)
    for _ in range(20):
        brackets = [[[F5.zero] * 3 for _ in range(3)] for _ in range(3)]
        for i in range(3):
            for j in range(i + 1, 3):
                vec = [rng.randrange(5) for _ in range(3)]
                brackets[i][j] = vec
                brackets[j][i] = [F5.neg(c) for c in vec]
        lie = LieData(F5, brackets)
        assert lie.jacobi_ok() == pbw_system(lie).is_confluent()


def test_strategy_independence():
    rng = random.Random(5)
    rs = pbw_system(sl2(QQ))
    lv = leavitt_system(2, QQ)
    inputs = [
        (rs, mono(QQ, ("f", "e", "h")) + mono(QQ, ("h", "f", "e"), 2) + NcPolynomial.one(QQ)),
        (rs, mono(QQ, ("h", "h", "e", "f"))),
        (lv, mono(QQ, ("x2", "y2", "x2", "y2"))),
        (lv, mono(QQ, ("y2", "x2", "y1", "x1")) + mono(QQ, ("x1", "y1"))),
    ]
    for system, p in inputs:
        base = system.normal_form(p)
        for _ in range(100):
            assert system.normal_form(p, rng=rng) == base


def test_antisymmetry_enforced():
    z, o = QQ.zero, QQ.one
    with pytest.raises(AntisymmetryViolation):
        LieData(QQ, [[(o, z), (z, z)], [(z, z), (z, z)]])
    with pytest.raises(AntisymmetryViolation):
        LieData(QQ, [[(z, z), (z, o)], [(z, o), (z, z)]])


def test_lie_bracket_facts():
    lie = sl2(QQ)
    e, f, h = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    assert lie.bracket_vec(e, f) == (0, 0, 1)
    assert lie.bracket_vec(h, e) == (2, 0, 0)
    assert lie.bracket_vec(h, f) == (0, -2, 0)
    heis = heisenberg(QQ)
    assert heis.bracket_vec((1, 0, 0), (0, 1, 0)) == (0, 0, 1)
    assert heis.bracket_vec((0, 0, 1), (1, 1, 0)) == (0, 0, 0)
    data = lie.to_json()
    again = LieData.from_json(data)
    assert again.brackets == lie.brackets
    assert again.names == ["e", "f", "h"]


def test_system_json_round_trip():
    lv = leavitt_system(2, F2)
    data = lv.to_json()
    again = RewriteSystem.from_json(data)
    assert again.generators == lv.generators
    assert again.rules == lv.rules
    assert RewriteSystem.from_json(data, F2).field == F2


def test_check_endo_fp_leavitt():
    lv = leavitt_system(2, QQ)
    a_list = [mono(QQ, ("x1",)), mono(QQ, ("x2",))]
    b_list = [mono(QQ, ("y1",)), mono(QQ, ("y2",))]
    assert check_endo_fp(a_list, b_list, lv).passed
    identity = check_endo_fp([NcPolynomial.one(QQ)], [NcPolynomial.one(QQ)], lv)
    assert identity.passed
    bad = check_endo_fp([mono(QQ, ("x1",))], [mono(QQ, ("y1",))], lv)
    assert not bad.passed and bad.reason == "unit-sum"
    with pytest.raises(LengthMismatch):
        check_endo_fp(a_list, b_list[:1], lv)


def test_check_endo_fp_multiplicativity_failure():
    # a = (1, e), b = (1 - e, 1): unit sum is 1 but r + [e, r] is not
    # multiplicative
    rs = pbw_system(sl2(QQ))
    one = NcPolynomial.one(QQ)
    e = mono(QQ, ("e",))
    verdict = check_endo_fp([one, e], [one - e, one], rs)
    assert not verdict.passed
    assert verdict.reason == "multiplicativity"


def test_fp_witness_checks():
    lv = leavitt_system(2, QQ)
    a_list = [mono(QQ, ("x1",)), mono(QQ, ("x2",))]
    b_list = [mono(QQ, ("y1",)), mono(QQ, ("y2",))]
    samples = [
        NcPolynomial.one(QQ),
        mono(QQ, ("x1",)),
        mono(QQ, ("y1",)),
        mono(QQ, ("x2",)),
        mono(QQ, ("x1", "y2")),
        mono(QQ, ("x2", "y2")),
    ]
    report = fp_witness_checks(a_list, b_list, lv, samples)
    assert report["passed"]
    assert report["rank"] == 4
    with pytest.raises(ValidationFailure):
        fp_witness_checks([mono(QQ, ("x1",))], [mono(QQ, ("y1",))], lv, samples)


def test_ad_power_sl2_gf3():
    lie = sl2(F3)
    basis = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    for a in basis:
        for u in basis:
            report = ad_power_check(lie, a, u)
            assert report["passed"], (a, u, report)
    # frozen values
    assert ad_power_check(lie, (0, 0, 1), (1, 0, 0))["ad_power"] == (2, 0, 0)
    assert ad_power_check(lie, (1, 0, 0), (0, 1, 0))["ad_power"] == (0, 0, 0)


def test_ad_power_heisenberg():
    for field in (F2, F3):
        lie = heisenberg(field)
        basis = [tuple(field.one if t == i else field.zero for t in range(3))
                 for i in range(3)]
        for a in basis:
            for u in basis:
                assert ad_power_check(lie, a, u)["passed"]


def test_ad_power_guards():
    with pytest.raises(CharacteristicZero):
        ad_power_check(sl2(QQ), (0, 0, 1), (1, 0, 0))
    with pytest.raises(BudgetExceeded):
        ad_power_check(sl2(GF(11)), (0, 0, 1), (1, 0, 0), degree_cap=8)


def test_lie_inner_derivation_check():
    # anything already in the algebra works
    lie = sl2(QQ)
    assert lie_inner_derivation_check(lie, mono(QQ, ("e",))).passed
    # the characteristic-p power phenomenon
    lie3 = sl2(F3)
    verdict = lie_inner_derivation_check(lie3, mono(F3, ("h", "h", "h")))
    assert verdict.passed
    assert verdict.details["images"][0] == "2 mod 3*e"
    # frozen counterexample in characteristic zero
    bad = lie_inner_derivation_check(lie, mono(QQ, ("e", "f")))
    assert not bad.passed
    assert bad.details == {"basis": "e", "normal_form": "-1*e*h"}
    with pytest.raises(NonzeroAugmentation):
        lie_inner_derivation_check(lie, NcPolynomial.one(QQ) + mono(QQ, ("e",)))


def test_augmentation_is_multiplicative_on_normal_forms():
    rng = random.Random(13)
    rs = pbw_system(sl2(QQ))
    monomials = rs.irreducible_monomials(2)
    for _ in range(25):
        p = NcPolynomial(QQ, {rng.choice(monomials): rng.randint(-2, 2) for _ in range(3)})
        q = NcPolynomial(QQ, {rng.choice(monomials): rng.randint(-2, 2) for _ in range(3)})
        lhs = augmentation(rs.normal_form(p * q))
        rhs = QQ.mul(augmentation(rs.normal_form(p)), augmentation(rs.normal_form(q)))
        assert lhs == rhs


def test_scalar_unit_search_enveloping():
    rs = pbw_system(sl2(QQ))
    report = scalar_unit_search(rs, degree_cap=2, budget=1 << 17, coeffs=(0, 1))
    assert report["all_scalar"]
    assert len(report["solutions"]) == 1
    a, b = report["solutions"][0]
    assert a == NcPolynomial.one(QQ) and b == NcPolynomial.one(QQ)
    report1 = scalar_unit_search(rs, degree_cap=1, budget=1 << 10)
    assert report1["all_scalar"]
    trivial = scalar_unit_search(rs, degree_cap=0, budget=100)
    assert trivial["all_scalar"]


def test_scalar_unit_search_leavitt_contrast():
    report = scalar_unit_search(leavitt_system(2, QQ), degree_cap=1,
                                budget=1 << 12, coeffs=(0, 1))
    assert not report["all_scalar"]
    found = {(a.display(), b.display()) for a, b in report["solutions"]}
    assert ("x1", "y1") in found
    assert ("x2", "y2") in found


def test_scalar_unit_search_guards():
    rs = pbw_system(sl2(QQ))
    with pytest.raises(BudgetExceeded):
        scalar_unit_search(rs, degree_cap=2, budget=10)
    with pytest.raises(ValidationFailure):
        scalar_unit_search(rs, degree_cap=1, budget=1 << 10, coeffs=(1, 2))
