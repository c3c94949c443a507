"""Second-order (and four-factor) gl(2) evaluations: parameter combinations,
representation types, permutation coefficients and their u -> 0 asymptotics.

Factor I carries the pair (2l^I_2, 2l^I_1) and acts on one variable x^I. The
two-site combinations are

    2L1  = 2l^1_2 - 2l^1_1 - 1,   2L2  = 2l^2_2 - 2l^2_1 - 1,
    2M12 = 2l^2_2 - 2l^1_1 - 1,   2M21 = 2l^1_2 - 2l^2_1 - 1,

with 2L1 + 2L2 = 2M12 + 2M21 identically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import NonGenericResidual
from .hwfunctions import HWFunction, run_sequence
from .intertwiners import (
    CoordinatePermOp,
    GammaFn,
    IntertwiningReport,
    Shift,
    ShiftGenerator,
    compose_apply,
    verify_intertwining,
)
from .loperators import LMatrix, Monodromy, biedenharn_L, monodromy, weight_prediction
from .symbolics import (
    U,
    AffineForm,
    GammaProduct,
    GammaSum,
    LaurentLeading,
    ParamPoly,
    beta,
    gamma_pole_order,
    two_ell,
)
from .weyl import Fn, VarId, WeylOp, apply, gen_mono, substitute_generators, weyl_mul

Y1 = VarId((0,), 1)  # x^1 - x^2
Y2 = VarId((0,), 2)  # x^2


def xvar(I: int) -> VarId:
    return VarId((I, 1), 1)


# ---------------------------------------------------------------- parameters


@dataclass(frozen=True)
class Gl2Params:
    factors: tuple  # ((2l^I_2, 2l^I_1), ...)

    def __post_init__(self):
        object.__setattr__(
            self, "factors", tuple((AffineForm.of(a), AffineForm.of(b)) for a, b in self.factors)
        )

    @staticmethod
    def of(values: Sequence) -> "Gl2Params":
        """Flat list 2l^1_2, 2l^1_1, 2l^2_2, 2l^2_1, ..."""
        if len(values) % 2:
            raise ValueError("need pairs (2l_2, 2l_1) per factor")
        vals = list(values)
        return Gl2Params(tuple((vals[i], vals[i + 1]) for i in range(0, len(vals), 2)))

    @staticmethod
    def symbolic(N: int = 2) -> "Gl2Params":
        return Gl2Params(tuple((two_ell(2, I), two_ell(1, I)) for I in range(1, N + 1)))

    @property
    def N(self) -> int:
        return len(self.factors)

    def ell(self, I: int, a: int) -> AffineForm:
        return self.factors[I - 1][0 if a == 2 else 1]

    def flat(self) -> tuple:
        return tuple(v for pair in self.factors for v in pair)

    def pair(self, I: int, J: int) -> "Gl2Params":
        return Gl2Params((self.factors[I - 1], self.factors[J - 1]))

    def shifted(self, I: int, delta) -> "Gl2Params":
        f = list(self.factors)
        a, b = f[I - 1]
        f[I - 1] = (a + delta, b + delta)
        return Gl2Params(tuple(f))

    def with_ell(self, I: int, a: int, value) -> "Gl2Params":
        f = [list(p) for p in self.factors]
        f[I - 1][0 if a == 2 else 1] = value
        return Gl2Params(tuple(tuple(p) for p in f))

    def is_rational(self) -> bool:
        return all(v.is_constant() for v in self.flat())

    def __str__(self) -> str:
        return "; ".join(f"{a}, {b}" for a, b in self.factors)


def swap_ells(p: Gl2Params, a: tuple, b: tuple) -> Gl2Params:
    va, vb = p.ell(*a), p.ell(*b)
    return p.with_ell(*a, vb).with_ell(*b, va)


def sigma12_1(p: Gl2Params) -> Gl2Params:
    """2l^1_1 <-> 2l^2_1."""
    return swap_ells(p, (1, 1), (2, 1))


def sigma12_2(p: Gl2Params) -> Gl2Params:
    """2l^1_2 <-> 2l^2_2."""
    return swap_ells(p, (1, 2), (2, 2))


def sigma12(p: Gl2Params) -> Gl2Params:
    return sigma12_1(sigma12_2(p))


def sigma1(p: Gl2Params) -> Gl2Params:
    """Exchange of the neighbouring array entries 2l^1_1 and 2l^2_2."""
    return swap_ells(p, (1, 1), (2, 2))


def sigma_tilde(p: Gl2Params) -> Gl2Params:
    return sigma1(sigma12(p))


@dataclass(frozen=True)
class ParamCombos:
    twoL1: AffineForm
    twoL2: AffineForm
    twoM12: AffineForm
    twoM21: AffineForm

    def __post_init__(self):
        if self.twoL1 + self.twoL2 != self.twoM12 + self.twoM21:
            raise AssertionError("2L1 + 2L2 != 2M12 + 2M21")

    def values(self) -> tuple:
        return (self.twoL1, self.twoL2, self.twoM12, self.twoM21)

    def as_dict(self) -> dict:
        return dict(zip(("2L1", "2L2", "2M12", "2M21"), self.values()))


def combos(p: Gl2Params, I: int = 1, J: int = 2) -> ParamCombos:
    return ParamCombos(
        p.ell(I, 2) - p.ell(I, 1) - 1,
        p.ell(J, 2) - p.ell(J, 1) - 1,
        p.ell(J, 2) - p.ell(I, 1) - 1,
        p.ell(I, 2) - p.ell(J, 1) - 1,
    )


# ---------------------------------------------------------------- monodromy


def gl2_L(p: Gl2Params, I: int, u=U) -> LMatrix:
    return biedenharn_L(2, [p.ell(I, 1), p.ell(I, 2)], (I,), u)


def gl2_monodromy(p: Gl2Params, u=U) -> Monodromy:
    return monodromy([gl2_L(p, I, u) for I in range(1, p.N + 1)], 2, u)


def generator_coefficients(T, u=U) -> dict:
    """{(a,b): {k: T^[k]_ab}} with T_ab(u) = sum_k u^(N-k) T^[k]_ab."""
    M = T.product if isinstance(T, Monodromy) else T
    N = len(T.factors) if isinstance(T, Monodromy) else M.order
    out = {}
    for a in range(2):
        for b in range(2):
            by_power = M.entries[a][b].expand_in(u)
            out[(a + 1, b + 1)] = {N - k: op for k, op in by_power.items()}
    return out


def _x(I):
    return WeylOp.x(xvar(I))


def _d(I):
    return WeylOp.d(xvar(I))


def _c(v):
    return WeylOp.const(ParamPoly.of(v))


def displayed_T12(p: Gl2Params) -> tuple[WeylOp, WeylOp]:
    """Hand-written T^[1]_12 and T^[2]_12 of the second-order evaluation."""
    x1, x2, d1, d2 = _x(1), _x(2), _d(1), _d(2)
    t1 = -d1 - d2
    t2 = weyl_mul(_c(2 + p.ell(1, 1)) + weyl_mul(x1, d1), d2) + weyl_mul(
        d1, _c(1 + p.ell(2, 2)) - weyl_mul(x2, d2)
    )
    return t1, t2


def displayed_T12_symmetric(p: Gl2Params) -> WeylOp:
    """The same T^[2]_12 written through d1 +- d2."""
    x1, x2, d1, d2 = _x(1), _x(2), _d(1), _d(2)
    e1, e2 = weyl_mul(x1, d1), weyl_mul(x2, d2)
    half = Fraction(1, 2)
    a = weyl_mul(d1 + d2, (_c(3 + p.ell(1, 1) + p.ell(2, 2)) + e1 - e2).scale(half))
    b = weyl_mul(d1 - d2, (_c(1 + p.ell(1, 1) - p.ell(2, 2)) + e1 + e2).scale(half))
    return a - b


def displayed_T21(p: Gl2Params) -> tuple[WeylOp, WeylOp]:
    c = combos(p)
    x1, x2, d1, d2 = _x(1), _x(2), _d(1), _d(2)
    r1 = weyl_mul(x1, _c(c.twoL1) - weyl_mul(x1, d1))
    r2 = weyl_mul(x2, _c(c.twoL2) - weyl_mul(x2, d2))
    t1 = -r1 - r2
    t2 = weyl_mul(r1, _c(2 + p.ell(2, 1)) + weyl_mul(x2, d2)) + weyl_mul(
        r2, _c(p.ell(1, 2) + 1) - weyl_mul(x1, d1)
    )
    return t1, t2


def displayed_T21_symmetric(p: Gl2Params) -> WeylOp:
    c = combos(p)
    x1, x2, d1, d2 = _x(1), _x(2), _d(1), _d(2)
    e1, e2 = weyl_mul(x1, d1), weyl_mul(x2, d2)
    r1 = weyl_mul(x1, _c(c.twoL1) - e1)
    r2 = weyl_mul(x2, _c(c.twoL2) - e2)
    half = Fraction(1, 2)
    a = weyl_mul((r1 - r2).scale(half), _c(1 + p.ell(2, 1) - p.ell(1, 2)) + e1 + e2)
    b = weyl_mul((r1 + r2).scale(half), _c(3 + p.ell(2, 1) + p.ell(1, 2)) + e2 - e1)
    return a + b


# ---------------------------------------------------------------- y coordinates

_TO_Y_X = {xvar(1): WeylOp.x(Y1) + WeylOp.x(Y2), xvar(2): WeylOp.x(Y2)}
_TO_Y_D = {xvar(1): WeylOp.d(Y1), xvar(2): WeylOp.d(Y2) - WeylOp.d(Y1)}


def to_y(op: WeylOp) -> WeylOp:
    """Rewrite in y1 = x^1 - x^2, y2 = x^2."""
    return substitute_generators(op, _TO_Y_X, _TO_Y_D)


def matrix_to_y(T) -> LMatrix:
    M = T.product if isinstance(T, Monodromy) else T
    return M.map(to_y)


def x_monomial_in_y(m1: int, m2: int) -> dict:
    """(x^1)^m1 (x^2)^m2 = (y1 + y2)^m1 y2^m2 as {(e1, e2): coeff}."""
    return {(k, m1 - k + m2): math.comb(m1, k) for k in range(m1 + 1)}


def psi0(p: Gl2Params) -> Fn:
    return Fn.monomial({Y1: combos(p).twoM12 + 1})


def psi0_weights(p: Gl2Params) -> tuple[ParamPoly, ParamPoly]:
    """Weights of psi0: those of the constant for the sigma1-permuted array."""
    lam = weight_prediction(gl2_monodromy(sigma1(p)))
    return lam[0], lam[1]


def displayed_psi0_weights(p: Gl2Params, u=U) -> tuple[ParamPoly, ParamPoly]:
    """(u-2-2l^2_2)(u-2-2l^2_1), (u-2-2l^1_2)(u-2-2l^1_1) as commonly quoted."""
    uu = ParamPoly.of(u)
    lam1 = (uu - 2 - p.ell(2, 2).to_poly()) * (uu - 2 - p.ell(2, 1).to_poly())
    lam2 = (uu - 2 - p.ell(1, 2).to_poly()) * (uu - 2 - p.ell(1, 1).to_poly())
    return lam1, lam2


def psi_minus(p: Gl2Params) -> Fn:
    c = combos(p)
    return Fn.monomial({xvar(1): c.twoL1, xvar(2): c.twoL2})


@dataclass
class VectorCheck:
    annihilated: bool
    eigen: bool
    detail: str = ""


def check_psi0(p: Gl2Params) -> VectorCheck:
    """T_12(u) psi0 = 0 and T_aa(u) psi0 = lambda~_a(u) psi0, in y coordinates."""
    Ty = matrix_to_y(gl2_monodromy(p))
    v = psi0(p)
    r12 = apply(Ty.entries[0][1], v)
    lam = psi0_weights(p)
    eig = all((apply(Ty.entries[a][a], v) - v.scale(lam[a])).is_zero() for a in range(2))
    return VectorCheck(r12.is_zero(), eig, "" if r12.is_zero() else str(r12))


def check_psi_minus(p: Gl2Params) -> bool:
    T = gl2_monodromy(p).product
    return apply(T.entries[1][0], psi_minus(p)).is_zero()


# ---------------------------------------------------------------- degeneracy


def degeneracy_matrix(p: Gl2Params, m1, m2) -> tuple:
    """Coefficients (a1, a2), (b1, b2) of x^1 mono, x^2 mono in T^[1]_21 mono, T^[2]_21 mono."""
    gens = generator_coefficients(gl2_monodromy(p))
    t1, t2 = gens[(2, 1)][1], gens[(2, 1)][2]
    mono = {xvar(1): AffineForm.of(m1), xvar(2): AffineForm.of(m2)}
    f = Fn.monomial(mono)

    def coeffs(op):
        r = apply(op, f).terms
        k1 = gen_mono({**mono, xvar(1): mono[xvar(1)] + 1})
        k2 = gen_mono({**mono, xvar(2): mono[xvar(2)] + 1})
        extra = set(r) - {k1, k2}
        if extra:
            raise AssertionError("unexpected monomials in the lowering action")
        zero = ParamPoly()
        return r.get(k1, zero), r.get(k2, zero)

    return coeffs(t1), coeffs(t2)


def degeneracy_determinant(p: Gl2Params, m1, m2) -> ParamPoly:
    (a1, a2), (b1, b2) = degeneracy_matrix(p, m1, m2)
    return a1 * b2 - a2 * b1


def degeneracy_triple(p: Gl2Params, m1, m2) -> ParamPoly:
    c = combos(p)
    m1, m2 = ParamPoly.of(m1), ParamPoly.of(m2)
    return (c.twoL1.to_poly() - m1) * (c.twoL2.to_poly() - m2) * (c.twoM21.to_poly() - m1 - m2)


def degeneracy_witness(p: Gl2Params, m1: int, m2: int) -> tuple | None:
    """Nonzero (A, B) with A T^[1]_21 m + B T^[2]_21 m = 0, or None."""
    (a1, a2), (b1, b2) = degeneracy_matrix(p, m1, m2)
    vals = [v.constant_value() for v in (a1, a2, b1, b2)]
    a1, a2, b1, b2 = vals
    if a1 * b2 - a2 * b1 != 0:
        return None
    for A, B in ((b1, -a1), (b2, -a2), (1, 0), (0, 1)):
        if (A, B) != (0, 0) and A * a1 + B * b1 == 0 and A * a2 + B * b2 == 0:
            return (Fraction(A), Fraction(B))
    raise AssertionError("singular system without a witness")


# ---------------------------------------------------------------- intertwiners in y coordinates

WITHIN_SITE1 = ShiftGenerator((Shift(Y1, None, Fraction(1)),))
WITHIN_SITE2 = ShiftGenerator((Shift(Y2, None, Fraction(1)), Shift(Y1, None, Fraction(-1))))


def coordinate_ops(action: Sequence[tuple], p: Gl2Params) -> tuple[list[CoordinatePermOp], Gl2Params]:
    """Coordinate operators (rightmost acts first) for steps in action order.

    Arguments follow the same slot rule as the determinant calculus; the final
    parameters are read off the permuted slot array.
    """
    h = HWFunction.one(2, [p.ell(1, 2), p.ell(1, 1), p.ell(2, 2), p.ell(2, 1)])
    _, trace = run_sequence(action, h)
    ops = []
    for st in trace:
        if st.kind == "between":
            ops.append(CoordinatePermOp("between", st.argument, carrier=Y1, label="S12"))
        else:
            gen = WITHIN_SITE1 if st.kind == "S1" else WITHIN_SITE2
            ops.append(CoordinatePermOp("within", st.argument, generator=gen, label=st.label()))
    final = trace[-1].params
    after = Gl2Params(((final[0], final[1]), (final[2], final[3])))
    return list(reversed(ops)), after


def s12_action(i: int) -> list[tuple]:
    """Exchange of 2l^1_i and 2l^2_i as between / within / between."""
    if i == 2:
        return [("between",), ("S1", 1), ("between",)]
    if i == 1:
        return [("between",), ("S2", 1), ("between",)]
    raise ValueError("i must be 1 or 2")


def s12_ops(p: Gl2Params, i: int) -> tuple[list[CoordinatePermOp], Gl2Params]:
    return coordinate_ops(s12_action(i), p)


def verify_s12_intertwining(p: Gl2Params, i: int, d: int = 2, after: Gl2Params | None = None) -> IntertwiningReport:
    from .weyl import monomial_basis

    ops, expected_after = s12_ops(p, i)
    after = expected_after if after is None else after
    Tb = matrix_to_y(gl2_monodromy(p))
    Ta = matrix_to_y(gl2_monodromy(after))
    return verify_intertwining(ops, Tb, Ta, monomial_basis([Y1, Y2], d), p.flat(), after.flat())


def s12_on_monomial(p: Gl2Params, i: int, m1: int, m2: int) -> GammaFn:
    """Engine action on (x^1)^m1 (x^2)^m2, result in y coordinates."""
    f = GammaFn()
    for (e1, e2), c in x_monomial_in_y(m1, m2).items():
        f = f.add_term(gen_mono({Y1: e1, Y2: e2}), c)
    ops, _ = s12_ops(p, i)
    return compose_apply(ops, f)


def s12_monomial_closed_form(p: Gl2Params, i: int, m1: int, m2: int) -> GammaFn:
    """sum_k C(m_i', k) (x^i')^(m_i'-k) (x^i - x^i')^k (x^i)^m_i
    * Gamma(2l^1_1-2l^2_2+1) Gamma(2l^2_i-2l^1_i+k) / Gamma(2l^i'_1-2l^i'_2+1+k)."""
    j = 3 - i
    m = {1: m1, 2: m2}
    lead = GammaProduct.gamma(p.ell(1, 1) - p.ell(2, 2) + 1)
    out = GammaFn()
    sign = 1 if i == 1 else -1  # x^i - x^i' = +-y1
    for k in range(m[j] + 1):
        g = lead * GammaProduct(
            math.comb(m[j], k) * sign**k,
            factors=[(p.ell(2, i) - p.ell(1, i) + k, 1), (p.ell(j, 1) - p.ell(j, 2) + 1 + k, -1)],
        )
        # (x^i')^(m_i'-k) (x^i)^m_i in y, times y1^k
        rest = {j: m[j] - k, i: m[i]}
        for (e1, e2), c in x_monomial_in_y(rest[1], rest[2]).items():
            out = out.add_term(gen_mono({Y1: e1 + k, Y2: e2}), g * c)
    return out


# ---------------------------------------------------------------- permutation coefficients


def pi_raw(p: Gl2Params, which: str, I: int = 1, J: int = 2) -> GammaProduct:
    l1_1, l1_2, l2_1, l2_2 = p.ell(I, 1), p.ell(I, 2), p.ell(J, 1), p.ell(J, 2)
    if which == "pi1":
        return beta(l2_1 - l1_1, l1_1 - l2_2 + 1)
    if which == "pi2":
        return beta(l2_2 - l1_2, l1_1 - l2_2 + 1)
    if which == "pi":
        return GammaProduct(
            factors=[(l2_2 - l1_2, 1), (l2_1 - l1_1, 1), (l1_1 - l2_2 + 1, 1), (l2_1 - l1_2 + 1, -1)]
        )
    raise ValueError(which)


def pi_combo(c: ParamCombos, which: str) -> GammaProduct:
    """Same coefficients through the combinations. pi1 pairs with 2L2 and pi2 with 2L1."""
    if which == "pi1":
        return beta(c.twoM12 - c.twoL2, -c.twoM12)
    if which == "pi2":
        return beta(c.twoM12 - c.twoL1, -c.twoM12)
    if which == "pi":
        return GammaProduct(
            factors=[(c.twoM12 - c.twoL1, 1), (c.twoM12 - c.twoL2, 1), (-c.twoM12, 1), (-c.twoM21, -1)]
        )
    raise ValueError(which)


def perm_coeff(p: Gl2Params, which: str, form: str = "raw") -> GammaProduct:
    if form == "raw":
        return pi_raw(p, which)
    if form == "combo":
        return pi_combo(combos(p), which)
    raise ValueError(form)


def s12_coefficient(p: Gl2Params, i: int) -> GammaProduct:
    """Accumulated coefficient of the exchange sequence acting on 1."""
    h = HWFunction.one(2, [p.ell(1, 2), p.ell(1, 1), p.ell(2, 2), p.ell(2, 1)])
    out, _ = run_sequence(s12_action(i), h)
    if not out.is_one():
        raise AssertionError(f"exchange of index {i} does not map 1 to a constant")
    return out.coefficient


def _with_copy(p: Gl2Params, I: int, u) -> Gl2Params:
    a, b = p.factors[I - 1]
    return Gl2Params(((a, b), (a + AffineForm.of(u), b + AffineForm.of(u))))


def four_factor_params(p: Gl2Params, u=U) -> Gl2Params:
    """(2l^1, 2l^2, 2l^1 + u, 2l^2 + u)."""
    uu = AffineForm.of(u)
    (a1, b1), (a2, b2) = p.factors[:2]
    return Gl2Params(((a1, b1), (a2, b2), (a1 + uu, b1 + uu), (a2 + uu, b2 + uu)))


def block_exchange(p4: Gl2Params) -> tuple[GammaProduct, list[tuple], Gl2Params]:
    """Exchange the pairs (1,2) and (3,4) by the neighbour swaps 23, 12, 34, 23.

    Each swap of neighbouring factors multiplies by the two-factor coefficient
    read off the current array.
    """
    arr = list(p4.factors)
    coeff = GammaProduct.one()
    steps = []
    for K in (2, 1, 3, 2):
        pair = Gl2Params((arr[K - 1], arr[K]))
        coeff = coeff * pi_raw(pair, "pi")
        steps.append((K, K + 1))
        arr[K - 1], arr[K] = arr[K], arr[K - 1]
    return coeff, steps, Gl2Params(tuple(arr))


def pi_1234(p4: Gl2Params) -> GammaProduct:
    """pi(l2,l3) pi(l1,l3) pi(l2,l4) pi(l1,l4)."""
    return pi_raw(p4, "pi", 2, 3) * pi_raw(p4, "pi", 1, 3) * pi_raw(p4, "pi", 2, 4) * pi_raw(p4, "pi", 1, 4)


def pi_IJ_u(p: Gl2Params, I: int, J: int, u=U) -> GammaProduct:
    """pi(2l^I, 2l^J + u) with I, J in {1, 2} referring to the base factors."""
    p4 = four_factor_params(p, u)
    return pi_raw(p4, "pi", I, J + 2)


# ---------------------------------------------------------------- classification

NONNEG, NEG, NONINT = "nonneg-integer", "negative-integer", "non-integer"
UNCLASSIFIED = "unclassified-by-paper"
GENERIC_INTEGER_DIFF = "generic-integer-weight-difference"


def _status(v: Fraction) -> str:
    if v.denominator != 1:
        return NONINT
    return NONNEG if v >= 0 else NEG


def _rational(v) -> Fraction:
    v = AffineForm.of(v)
    if not v.is_constant():
        raise NonGenericResidual(f"combination {v} is not rational")
    return v.const


@dataclass(frozen=True)
class RepTypeReport:
    configuration: str
    on_constant: str
    on_psi0: str
    witnesses: tuple  # ((name, status), ...)
    stratum: str

    def as_dict(self) -> dict:
        return {
            "configuration": self.configuration,
            "onConstant": self.on_constant,
            "onPsi0": self.on_psi0,
            "witnesses": dict(self.witnesses),
            "stratum": self.stratum,
        }


def ordering_configuration(L1: Fraction, L2: Fraction, M12: Fraction) -> tuple[str, bool]:
    """Configuration of integer combos and whether it is a strict one.

    Ties are resolved before strict inequalities: all equal, then L1 = M12 > L2,
    then the tie extensions M12 = min(L1, L2), L1 = L2 < M12.
    """
    if L1 == L2 == M12:
        return "limit-all-equal", True
    if L1 == M12 and L2 < M12:
        return "limit-L1=M12", True
    if M12 < min(L1, L2):
        return "M12LLM", True
    if (M12 == L1 and L1 <= L2) or (M12 == L2 and L2 <= L1):
        return "M12LLM", False
    if L1 < M12 < L2:
        return "L1MML", True
    if L2 < M12 < L1:
        return "L2MML", True
    if M12 > max(L1, L2):
        return "M21LLM", True
    return UNCLASSIFIED, False


_VERDICTS = {
    "generic": ("infinite-hw", "infinite-hw"),
    "L1MML": ("finite-irreducible", "infinite-degenerate"),
    "L2MML": ("finite-irreducible", "infinite-degenerate"),
    "M12LLM": ("finite-reducible", "finite-irreducible"),
    "limit-L1=M12": ("finite-irreducible", "infinite-degenerate"),
    "limit-all-equal": ("finite-irreducible", "infinite-hw"),
    "mixed-irreducible": ("finite-irreducible", UNCLASSIFIED),
}


def classify(c: ParamCombos) -> RepTypeReport:
    L1, L2, M12, M21 = (_rational(v) for v in c.values())
    names = ("2L1", "2L2", "2M12", "2M21")
    st = dict(zip(names, (_status(v) for v in (L1, L2, M12, M21))))
    wit = tuple(st.items())
    if all(s == NONINT for s in st.values()):
        # the two remaining weight differences decide whether the shifted
        # coefficients stay free of zeros and poles
        free = (M12 - L1).denominator != 1 and (M12 - L2).denominator != 1
        return RepTypeReport("generic", *_VERDICTS["generic"], wit, "generic" if free else GENERIC_INTEGER_DIFF)
    if st["2L1"] != NONNEG or st["2L2"] != NONNEG:
        return RepTypeReport(UNCLASSIFIED, UNCLASSIFIED, UNCLASSIFIED, wit, "partial")
    if st["2M12"] == NONINT:
        # finite-dimensional on 1 with non-integer M: the sign rules on
        # 2l^2_2 - 2l^1_2 = 2M12 - 2L1 and 2l^2_1 - 2l^1_1 = 2M12 - 2L2
        a, b = M12 - L1, M12 - L2
        if (a < 0) != (b < 0):
            return RepTypeReport("mixed-irreducible", *_VERDICTS["mixed-irreducible"], wit, "L-integer-M-generic")
        return RepTypeReport(UNCLASSIFIED, UNCLASSIFIED, UNCLASSIFIED, wit, "L-integer-M-generic")
    config, strict = ordering_configuration(L1, L2, M12)
    stratum = "all-nonneg-integer" if M12 >= 0 and M21 >= 0 else "negative-M"
    verdict = _VERDICTS.get(config) if strict and stratum == "all-nonneg-integer" else None
    if verdict is None:
        verdict = (UNCLASSIFIED, UNCLASSIFIED)
    return RepTypeReport(config, *verdict, wit, stratum)


# ---------------------------------------------------------------- asymptotics


def laurent(g: GammaProduct, u=U) -> LaurentLeading:
    return gamma_pole_order(g, {}, u)


@dataclass(frozen=True)
class Prediction:
    order: int
    sign: int
    magnitude: Fraction | None = None  # None: the statement fixes order and sign only

    def matches(self, got: LaurentLeading) -> bool:
        return got.order == self.order and got.sign == self.sign

    def magnitude_matches(self, got: LaurentLeading) -> bool | None:
        if self.magnitude is None:
            return None
        return got.exact and abs(got.coefficient) == self.magnitude


def _pm(e: int) -> int:
    return -1 if e % 2 else 1


class _OutsideDomain(Exception):
    pass


def _f(n: int) -> Fraction:
    if n < 0:
        raise _OutsideDomain(n)
    return Fraction(math.factorial(n))


def shift_second_predictions(config: str, L1: int, L2: int, M12: int, M21: int) -> Prediction | None:
    """Leading term of pi^12(u) = pi(2l^1, 2l^2 + u) per configuration (all combos nonneg integer)."""
    if config == "M12LLM":
        return Prediction(-2, -1)
    if config == "L1MML":
        return Prediction(-1, _pm(M12 + L2 + 1))
    if config == "L2MML":
        return Prediction(-1, _pm(M12 + L1 + 1))
    if config == "M21LLM":
        return Prediction(0, _pm(L1 + L2 + 1))
    return None


def four_factor_predictions(config: str, L1: int, L2: int, M12: int, M21: int) -> dict | None:
    """Leading terms of pi^21(u), pi^12(u) per configuration (all combos nonneg integer).

    L2MML and M21LLM are the images of L1MML and M12LLM under exchanging the
    two factors, which swaps pi^12 <-> pi^21, L1 <-> L2 and M12 <-> M21.
    """
    if config == "L1MML":
        return {
            "pi21": Prediction(-1, _pm(L2 - M12 - 1), _f(L2 - M12 - 1)),
            "pi12": Prediction(-1, _pm(M12 - L1 - 1), _f(M12 - L1 - 1)),
        }
    if config == "M12LLM":
        return {
            "pi21": Prediction(0, _pm(L1 + L2 + 1), _f(L2 - M12 - 1) * _f(L1 - M12 - 1)),
            "pi12": Prediction(-2, -1),
        }
    if config == "limit-L1=M12":
        return {
            "pi21": Prediction(-2, _pm(M12 + L2 + 1)),
            "pi12": Prediction(-1, _pm(M12 - L2 - 1), _f(M12 - L2 - 1)),
        }
    if config == "limit-all-equal":
        return {"pi21": Prediction(-2, -1), "pi12": Prediction(-2, -1)}
    if config in ("L2MML", "M21LLM"):
        mirror = {"L2MML": "L1MML", "M21LLM": "M12LLM"}[config]
        pr = four_factor_predictions(mirror, L2, L1, M21, M12)
        return {"pi21": pr["pi12"], "pi12": pr["pi21"]}
    return None


SHIFT_ALL_LABELS = ("L1-generic", "L1-nonneg-integer")


@dataclass
class AsymptoticsReport:
    mode: str
    leading: dict  # name -> LaurentLeading
    label: str
    candidates: tuple = ()
    magnitude_checks: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "mode": self.mode,
            "label": self.label,
            "candidates": list(self.candidates),
            "leading": {k: _laurent_dict(v) for k, v in sorted(self.leading.items())},
            "magnitudeChecks": {k: v for k, v in sorted(self.magnitude_checks.items())},
        }


def _laurent_dict(l: LaurentLeading) -> dict:
    return {
        "order": l.order,
        "coefficient": l.coefficient,
        "transcendental": None if l.exact else str(l.transcendental),
        "sign": l.sign,
    }


_CONFIGS = ("M12LLM", "L1MML", "L2MML", "M21LLM", "limit-L1=M12", "limit-all-equal")


def _integer_combos(p: Gl2Params) -> tuple[int, int, int, int] | None:
    vals = [_rational(v) for v in combos(p).values()]
    if all(v.denominator == 1 and v >= 0 for v in vals):
        return tuple(int(v) for v in vals)
    return None


def asymptotics_report(p: Gl2Params, mode: str) -> AsymptoticsReport:
    """Leading u -> 0 data of the shifted coefficients and the configurations it fits.

    shift-all:    pi(2l^1, 2l^1 + u)
    shift-second: pi^12(u) = pi(2l^1, 2l^2 + u), matched against the stated
                  order and sign per configuration
    four-factor:  pi^21(u) pi^11(u) pi^22(u) pi^12(u), labelled from the orders
                  and the signs of pi^11, pi^22 alone
    """
    if mode == "shift-all":
        got = laurent(pi_raw(_with_copy(p, 1, U), "pi"))
        label = SHIFT_ALL_LABELS[1] if got.sign == -1 else SHIFT_ALL_LABELS[0]
        return AsymptoticsReport(mode, {"pi": got}, label, (label,))
    if mode == "shift-second":
        got = laurent(pi_IJ_u(p, 1, 2))
        cands = []
        ints = _integer_combos(p)
        if ints is not None:
            for cfg in _CONFIGS:
                pr = shift_second_predictions(cfg, *ints)
                if pr is not None and pr.matches(got):
                    cands.append(cfg)
        return AsymptoticsReport(mode, {"pi12": got}, _join(cands), tuple(cands))
    if mode == "four-factor":
        lead = {f"pi{I}{J}": laurent(pi_IJ_u(p, I, J)) for I in (1, 2) for J in (1, 2)}
        cands = four_factor_candidates(lead)
        return AsymptoticsReport(mode, lead, _join(cands), tuple(cands), _magnitude_checks(p, lead, cands))
    raise ValueError(mode)


def _join(cands: Sequence[str]) -> str:
    return "|".join(cands) if cands else UNCLASSIFIED


def four_factor_candidates(lead: dict) -> list[str]:
    """Configurations read off from Laurent orders of pi^21, pi^12 and signs of pi^11, pi^22.

    pi^11, pi^22 are negative exactly when 2L1, 2L2 are nonnegative integers.
    pi^12 has a double pole for M12 <= min(L1, L2), pi^21 symmetrically;
    simple poles on both sides mark M strictly between L1 and L2; both regular
    marks a non-integer M.
    """
    s11, s22 = lead["pi11"].sign, lead["pi22"].sign
    o21, o12 = lead["pi21"].order, lead["pi12"].order
    if s11 == 1 and s22 == 1:
        total = o21 + o12 + lead["pi11"].order + lead["pi22"].order
        return ["generic"] if total == -4 else []
    if not (s11 == -1 and s22 == -1):
        return []
    table = {
        (-2, -2): ["limit-all-equal"],
        (0, -2): ["M12LLM"],
        (-1, -2): ["M12LLM"],
        (-2, -1): ["limit-L1=M12"],
        (-2, 0): ["M21LLM"],
        (-1, -1): ["L1MML", "L2MML"],
        (0, 0): ["mixed-irreducible"],
    }
    return list(table.get((o21, o12), []))


def _magnitude_checks(p: Gl2Params, lead: dict, cands: Sequence[str]) -> dict:
    ints = _integer_combos(p)
    out: dict = {}
    if ints is None:
        return out
    for cfg in cands:
        try:
            pr = four_factor_predictions(cfg, *ints)
        except _OutsideDomain:
            continue
        for k, v in (pr or {}).items():
            mm = v.magnitude_matches(lead[k])
            if mm is not None:
                out[f"{cfg}:{k}"] = mm
    return out


@dataclass(frozen=True)
class StatedCheck:
    source: str  # "shift-second" or "four-factor"
    configuration: str
    coefficient: str
    stated: Prediction
    got: LaurentLeading

    @property
    def order_ok(self) -> bool:
        return self.got.order == self.stated.order

    @property
    def sign_ok(self) -> bool:
        return self.got.sign == self.stated.sign

    @property
    def magnitude_ok(self) -> bool | None:
        return self.stated.magnitude_matches(self.got)


def stated_checks(p: Gl2Params) -> list[StatedCheck]:
    """Compare the stated leading terms for the configuration of p with the computed ones."""
    ints = _integer_combos(p)
    if ints is None:
        return []
    config, strict = ordering_configuration(*(Fraction(v) for v in ints[:3]))
    if not strict:
        return []
    out = []
    pr = shift_second_predictions(config, *ints)
    if pr is not None:
        out.append(StatedCheck("shift-second", config, "pi12", pr, laurent(pi_IJ_u(p, 1, 2))))
    try:
        ff = four_factor_predictions(config, *ints)
    except _OutsideDomain:
        ff = None
    for k, v in (ff or {}).items():
        I, J = int(k[2]), int(k[3])
        out.append(StatedCheck("four-factor", config, k, v, laurent(pi_IJ_u(p, I, J))))
    return out


@dataclass
class SweepResult:
    points: int
    compared: int
    agreed: int
    excluded: dict
    mismatches: list
    magnitude_failures: list
    stated_failures: list  # order or sign of a stated leading term disagrees

    @property
    def all_agree(self) -> bool:
        return self.compared > 0 and self.agreed == self.compared


def sweep_points(values: Iterable = None) -> list[Gl2Params]:
    """Deterministic grid of rational two-factor parameter arrays."""
    import itertools

    if values is None:
        values = [Fraction(v) for v in range(-1, 6)] + [
            Fraction(1, 2), Fraction(3, 2), Fraction(1, 3), Fraction(2, 3), Fraction(1, 4)
        ]
    values = list(values)
    pts = []
    for a, b, c, d in itertools.product(values, repeat=4):
        pts.append(Gl2Params.of([a, b, c, d]))
    return pts


def consistency_sweep(points: Sequence[Gl2Params] | None = None) -> SweepResult:
    """classify() label versus the four-factor asymptotic candidates.

    Stated leading terms (order and sign) and factorial magnitudes are
    checked alongside and recorded separately.

    Points in strata without a stated asymptotic behaviour (partially integer
    combinations, negative integer M, generic combinations with an integer
    difference 2l^2_a - 2l^1_a) are counted as excluded.
    """
    pts = sweep_points() if points is None else points
    compared = agreed = 0
    excluded: dict[str, int] = {}
    mism, magfail, stated_fail = [], [], []
    for p in pts:
        rep = classify(combos(p))
        if rep.configuration == UNCLASSIFIED or rep.stratum in ("negative-M", "partial", GENERIC_INTEGER_DIFF):
            key = rep.stratum if rep.configuration != UNCLASSIFIED else UNCLASSIFIED
            excluded[key] = excluded.get(key, 0) + 1
            continue
        ar = asymptotics_report(p, "four-factor")
        compared += 1
        if rep.configuration in ar.candidates:
            agreed += 1
        else:
            mism.append((str(p), rep.configuration, ar.label))
        for k, ok in ar.magnitude_checks.items():
            if not ok and k.startswith(rep.configuration + ":"):
                magfail.append((str(p), k))
        for chk in stated_checks(p):
            if not (chk.order_ok and chk.sign_ok):
                stated_fail.append((str(p), chk.source, chk.configuration, chk.coefficient))
    return SweepResult(len(pts), compared, agreed, excluded, mism, magfail, stated_fail)
