from fractions import Fraction

import sympy
from hypothesis import strategies as st

from yangian.symbolics import U, AffineForm, GammaProduct, ParamPoly, aux, two_ell
from yangian.weyl import VarId, WeylOp

PARAMS = [two_ell(1).terms[0][0], two_ell(2).terms[0][0], aux("a")]
WVARS = [VarId((1,), 1), VarId((1,), 2), VarId((2,), 1)]

small_fracs = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


@st.composite
def param_polys(draw, max_terms: int = 4, max_deg: int = 3) -> ParamPoly:
    n = draw(st.integers(0, max_terms))
    out = ParamPoly()
    for _ in range(n):
        c = draw(small_fracs)
        mono = ParamPoly.of(c)
        for p in PARAMS:
            mono = mono * ParamPoly.of(p) ** draw(st.integers(0, max_deg))
        out = out + mono
    return out


@st.composite
def affine_forms(draw) -> AffineForm:
    return AffineForm(draw(small_fracs), {p: draw(small_fracs) for p in PARAMS[:2]})


@st.composite
def weyl_ops(draw, max_terms: int = 3, max_deg: int = 3) -> WeylOp:
    n = draw(st.integers(0, max_terms))
    out = WeylOp()
    for _ in range(n):
        term = WeylOp.const(draw(st.integers(-3, 3)))
        for v in WVARS:
            k = draw(st.integers(0, 1))
            if k:
                term = _mul(term, WeylOp.x(v, draw(st.integers(1, max_deg))))
        for v in WVARS:
            k = draw(st.integers(0, 1))
            if k:
                term = _mul(term, WeylOp.d(v, draw(st.integers(1, max_deg))))
        out = out + term
    return out


def _mul(a, b):
    from yangian.weyl import weyl_mul

    return weyl_mul(a, b)


def gamma_to_sympy(g: GammaProduct, u):
    """The Gamma product in the single variable U as a sympy expression in u."""

    def aff(a: AffineForm):
        out = sympy.Rational(a.const.numerator, a.const.denominator)
        for p, c in a.terms:
            assert p == U
            out += sympy.Rational(c.numerator, c.denominator) * u
        return out

    num = 0
    for m, c in g.num.terms.items():
        t = sympy.Rational(c.numerator, c.denominator)
        for p, e in m:
            assert p == U
            t *= u ** e
        num += t
    expr = num
    for d in g.den:
        expr /= aff(d)
    for a, pw in g.factors:
        expr *= sympy.gamma(aff(a)) ** pw
    return expr * (-1) ** aff(g.phase)
