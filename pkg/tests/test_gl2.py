import itertools
import time
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import gamma_to_sympy
from yangian.gl2 import (
    GENERIC_INTEGER_DIFF,
    Gl2Params,
    asymptotics_report,
    block_exchange,
    check_psi0,
    check_psi_minus,
    classify,
    combos,
    consistency_sweep,
    degeneracy_determinant,
    degeneracy_triple,
    degeneracy_witness,
    displayed_psi0_weights,
    displayed_T12,
    displayed_T12_symmetric,
    displayed_T21,
    displayed_T21_symmetric,
    four_factor_params,
    generator_coefficients,
    gl2_monodromy,
    perm_coeff,
    pi_1234,
    pi_IJ_u,
    psi0_weights,
    s12_coefficient,
    sigma1,
    sigma12_1,
    sigma12_2,
    sigma_tilde,
    stated_checks,
)
from yangian.symbolics import AffineForm, GammaProduct, aux, beta

SYM = Gl2Params.symbolic(2)
ints = st.integers(-3, 6)


def _combo_values(p: Gl2Params) -> tuple:
    return tuple(v.const for v in combos(p).values())


# ---------------------------------------------------------------- combinations


def test_combos_example():
    assert _combo_values(Gl2Params.of([3, 0, 2, -2])) == (2, 3, 1, 4)


def test_combos_equal_parameters():
    assert _combo_values(Gl2Params.of([5, 5, 5, 5])) == (-1, -1, -1, -1)


def test_combos_symbolic_identity():
    c = combos(SYM)
    assert c.twoL1 + c.twoL2 == c.twoM12 + c.twoM21
    assert not c.twoL1.is_constant()


def test_sigma_covariance():
    c = combos(SYM)
    s1 = combos(sigma12_1(SYM))
    assert (s1.twoL1, s1.twoL2, s1.twoM12, s1.twoM21) == (c.twoM21, c.twoM12, c.twoL2, c.twoL1)
    s2 = combos(sigma12_2(SYM))
    assert (s2.twoL1, s2.twoL2, s2.twoM12, s2.twoM21) == (c.twoM12, c.twoM21, c.twoL1, c.twoL2)
    g = combos(sigma1(SYM))
    assert g.twoM12 + 1 == -(c.twoM12 + 1) and g.twoM21 == c.twoM21
    t = combos(sigma_tilde(SYM))
    assert t.twoM21 == c.twoM12 and t.twoM12 + 1 == -(c.twoM21 + 1)


# ---------------------------------------------------------------- generators and vectors


def test_displayed_generators():
    gens = generator_coefficients(gl2_monodromy(SYM))
    t1, t2 = displayed_T12(SYM)
    assert gens[(1, 2)][1] == t1 and gens[(1, 2)][2] == t2
    assert displayed_T12_symmetric(SYM) == t2
    r1, r2 = displayed_T21(SYM)
    assert gens[(2, 1)][1] == r1 and gens[(2, 1)][2] == r2
    assert displayed_T21_symmetric(SYM) == r2


def test_psi0_is_highest_weight_symbolically():
    chk = check_psi0(SYM)
    assert chk.annihilated and chk.eigen


def test_psi0_quoted_weights_differ_in_second_entry():
    lam = psi0_weights(SYM)
    quoted = displayed_psi0_weights(SYM)
    assert lam[0] == quoted[0]
    assert lam[1] != quoted[1]


PSI_MINUS_CASES = [
    (3, 0, 2, -2), (2, 0, 3, -2), (1, 0, 1, 0), (4, 1, 3, 0), (2, 1, 5, 1),
    (5, 0, 2, 1), (3, 1, 4, 2), (6, 2, 3, -1), (1, 0, 4, 0), (7, 3, 2, 0), (4, 0, 4, 0),
]


@pytest.mark.parametrize("vals", PSI_MINUS_CASES)
def test_lowest_weight_vector(vals):
    p = Gl2Params.of(vals)
    L1, L2, _, _ = _combo_values(p)
    assert L1 >= 0 and L2 >= 0 and L1.denominator == 1 and L2.denominator == 1
    assert check_psi_minus(p)


# ---------------------------------------------------------------- degeneracy


def test_degeneracy_determinant_is_triple_product():
    for m1, m2 in [(0, 0), (1, 2), (3, 1)]:
        assert degeneracy_determinant(SYM, m1, m2) == -degeneracy_triple(SYM, m1, m2)
    m1, m2 = AffineForm.of(aux("m1")), AffineForm.of(aux("m2"))
    assert degeneracy_determinant(SYM, m1, m2) == -degeneracy_triple(SYM, m1, m2)


@pytest.mark.parametrize("vals", [(3, 0, 2, -2), (2, 0, 3, -2), (Fraction(1, 2), 0, Fraction(1, 3), 0), (4, 1, 1, -3)])
def test_degeneracy_zero_locus(vals):
    p = Gl2Params.of(vals)
    for m1, m2 in itertools.product(range(7), repeat=2):
        wit = degeneracy_witness(p, m1, m2)
        assert (wit is not None) == (degeneracy_triple(p, m1, m2).constant_value() == 0)


def test_degeneracy_examples():
    p = Gl2Params.of([3, 0, 2, -2])
    L1, L2, M12, M21 = (int(v) for v in _combo_values(p))
    assert degeneracy_witness(p, L1, 5) is not None
    assert degeneracy_witness(p, 1, M21 - 1) is not None
    g = Gl2Params.of([Fraction(1, 2), 0, Fraction(1, 3), 0])
    assert all(degeneracy_witness(g, a, b) is None for a in range(7) for b in range(7))


# ---------------------------------------------------------------- permutation coefficients


@pytest.mark.parametrize("which", ["pi1", "pi2", "pi"])
def test_raw_and_combo_forms_agree(which):
    assert perm_coeff(SYM, which, "raw").equals(perm_coeff(SYM, which, "combo"))


def test_exchange_coefficients_are_pair_betas():
    assert s12_coefficient(SYM, 1).equals(perm_coeff(SYM, "pi1"))
    assert s12_coefficient(SYM, 2).equals(perm_coeff(SYM, "pi2"))


def test_pair_beta_value():
    # 2l^2_1 - 2l^1_1 = 3, 2l^1_1 - 2l^2_2 + 1 = 2
    p = Gl2Params.of([0, 0, -1, 3])
    assert perm_coeff(p, "pi1").evaluate().as_rational() == Fraction(1, 12)


def test_permuted_pair_coefficient():
    c = combos(SYM)
    assert perm_coeff(sigma12_1(SYM), "pi1").equals(beta(c.twoL2 - c.twoM12, -c.twoL2))


def test_full_coefficient_is_product_of_pair_betas():
    # pi = pi1 * pi2(sigma12_1 2l)
    assert perm_coeff(SYM, "pi").equals(perm_coeff(SYM, "pi1") * perm_coeff(sigma12_1(SYM), "pi2"))


def test_four_factor_block_exchange():
    p4 = four_factor_params(Gl2Params.of([Fraction(1, 2), 0, Fraction(1, 3), 0]))
    coeff, steps, after = block_exchange(p4)
    assert steps == [(2, 3), (1, 2), (3, 4), (2, 3)]
    assert after.factors == p4.factors[2:] + p4.factors[:2]
    assert coeff.equals(pi_1234(p4))


# ---------------------------------------------------------------- classification


def test_classify_examples():
    rep = classify(combos(Gl2Params.of([3, 0, 2, -2])))
    assert (rep.configuration, rep.on_constant, rep.on_psi0) == ("M12LLM", "finite-reducible", "finite-irreducible")
    rep = classify(combos(Gl2Params.of([2, 0, 3, -2])))
    assert (rep.configuration, rep.on_constant, rep.on_psi0) == ("L1MML", "finite-irreducible", "infinite-degenerate")
    rep = classify(combos(Gl2Params.of([Fraction(1, 2), 0, Fraction(1, 3), 0])))
    assert (rep.configuration, rep.on_constant, rep.on_psi0) == ("generic", "infinite-hw", "infinite-hw")
    # 2M12 = 2L2 here, so the point carries the integer-difference flag
    assert rep.stratum == GENERIC_INTEGER_DIFF
    rep = classify(combos(Gl2Params.of([Fraction(1, 2), 0, Fraction(1, 4), Fraction(1, 3)])))
    assert (rep.configuration, rep.stratum) == ("generic", "generic")


def test_classify_limits_before_strict():
    # all combos zero
    assert classify(combos(Gl2Params.of([1, 0, 1, 0]))).configuration == "limit-all-equal"
    # 2L1 = 2M12 = 2 > 2L2 = 1
    p = Gl2Params.of([3, 0, 3, 1])
    assert _combo_values(p)[:3] == (2, 1, 2)
    assert classify(combos(p)).configuration == "limit-L1=M12"


def test_generic_with_integer_difference_is_flagged():
    p = Gl2Params.of([Fraction(1, 2), 0, Fraction(1, 2), 0])
    rep = classify(combos(p))
    assert rep.configuration == "generic" and rep.stratum == GENERIC_INTEGER_DIFF


@settings(max_examples=300, deadline=None)
@given(ints, ints, ints, ints)
def test_classify_is_total(a, b, c, d):
    rep = classify(combos(Gl2Params.of([a, b, c, d])))
    assert rep.configuration
    assert set(dict(rep.witnesses)) == {"2L1", "2L2", "2M12", "2M21"}


# ---------------------------------------------------------------- asymptotics


@pytest.mark.parametrize("twoL1,sign", [(Fraction(1, 2), 1), (Fraction(-2, 3), 1), (3, -1), (2, -1), (0, -1)])
def test_shift_all_sign(twoL1, sign):
    p = Gl2Params.of([twoL1 + 1, 0, 7, 5])
    rep = asymptotics_report(p, "shift-all")
    lead = rep.leading["pi"]
    assert (lead.order, lead.coefficient) == (-2, sign)


def test_shift_second_m12llm():
    rep = asymptotics_report(Gl2Params.of([3, 0, 2, -2]), "shift-second")
    lead = rep.leading["pi12"]
    assert (lead.order, lead.sign) == (-2, -1)
    assert rep.label == "M12LLM"


def test_shift_second_middle_cases_sign_swapped():
    # the stated signs of the two middle cases are exchanged
    rep = asymptotics_report(Gl2Params.of([2, 0, 3, -2]), "shift-second")
    assert rep.label == "L2MML"
    (chk,) = [c for c in stated_checks(Gl2Params.of([2, 0, 3, -2])) if c.source == "shift-second"]
    assert chk.order_ok and not chk.sign_ok


def _sympy_leading(g: GammaProduct, order: int):
    u = sympy.Symbol("u")
    return sympy.nsimplify(sympy.limit(gamma_to_sympy(g, u) * u ** (-order), u, 0))


@pytest.mark.parametrize("vals", [(3, 0, 2, -2), (2, 0, 3, -2), (3, 0, 3, 1), (3, 0, 0, -4)])
def test_four_factor_leading_terms_against_sympy(vals):
    p = Gl2Params.of(vals)
    rep = asymptotics_report(p, "four-factor")
    for name, lead in rep.leading.items():
        g = pi_IJ_u(p, int(name[2]), int(name[3]))
        assert _sympy_leading(g, lead.order) == sympy.Rational(lead.coefficient.numerator, lead.coefficient.denominator)


def test_four_factor_middle_case_order_and_sign():
    p = Gl2Params.of([2, 0, 3, -2])
    checks = [c for c in stated_checks(p) if c.source == "four-factor"]
    assert {c.coefficient for c in checks} == {"pi12", "pi21"}
    assert all(c.order_ok and c.sign_ok for c in checks)


def test_four_factor_magnitudes_differ_from_stated():
    p = Gl2Params.of([2, 0, 3, -2])
    rep = asymptotics_report(p, "four-factor")
    assert rep.leading["pi12"].coefficient == Fraction(3, 2)
    assert rep.leading["pi21"].coefficient == Fraction(-1, 3)
    assert rep.magnitude_checks == {"L1MML:pi21": False, "L1MML:pi12": False}


def test_limit_case_pi21_sign():
    # 2L1 = 2M12 = a, 2L2 = 2M21 = b: pi21 ~ -C(a, b) u^-2 for every parity of a + b
    for vals in [(3, 0, 3, 1), (4, 0, 4, 1), (4, 0, 4, 2)]:
        p = Gl2Params.of(vals)
        a, b, m12, _ = (int(v) for v in _combo_values(p))
        assert a == m12
        lead = asymptotics_report(p, "four-factor").leading["pi21"]
        assert lead.order == -2
        assert lead.coefficient < 0


def test_negative_m_order():
    rep = asymptotics_report(Gl2Params.of([3, 0, 0, -4]), "shift-second")
    lead = rep.leading["pi12"]
    assert (lead.order, lead.coefficient) == (-1, -5)


def test_consistency_sweep():
    start = time.perf_counter()
    res = consistency_sweep()
    elapsed = time.perf_counter() - start
    assert res.compared >= 200
    assert res.all_agree, res.mismatches[:5]
    assert elapsed < 30
    kinds = {(src, cfg, coeff) for _, src, cfg, coeff in res.stated_failures}
    assert kinds == {
        ("four-factor", "limit-L1=M12", "pi21"),
        ("shift-second", "L1MML", "pi12"),
        ("shift-second", "L2MML", "pi12"),
    }


def test_sweep_excludes_unstated_strata():
    res = consistency_sweep(
        [Gl2Params.of(v) for v in [(3, 0, 0, -4), (Fraction(1, 2), 0, Fraction(1, 2), 0), (3, Fraction(1, 2), 0, 0)]]
    )
    assert res.compared == 0
    assert sum(res.excluded.values()) == 3
