"""Shift operators int dc c^(w-1) exp(-c D) and the identities they satisfy.

``D`` is a linear vector field sum_i k_i s_i d/dt_i: each target coordinate t_i is
shifted to t_i - c k_i s_i, where the source s_i is another coordinate or the
constant 1. The c-integral is never materialized. It is evaluated by two rules:

* one factor t^e with e not a nonnegative integer (or the only shifted factor
  present) is the branch factor, and c^(w-1+K) (t - c k s)^e integrates to
  B(w+K, e+1) t^(e+w+K) k^(-K) s^(-w-K) (the constant k^(-w) is normalized away);
* all other shifted factors are nonnegative integer powers and are expanded
  binomially, contributing the powers c^K;
* with no shifted factor at all, c^(w-1) integrates to Gamma(w).

Coefficients are exact ``GammaSum`` values, so two states are equal iff their
difference cancels after Gamma canonicalization.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import DegenerateArgument, ParameterMismatch, UnsupportedTarget
from .loperators import LMatrix, Monodromy, _as_lmatrix
from .symbolics import U, V, AffineForm, GammaProduct, GammaSum, Param, ParamPoly, aux, beta
from .weyl import Fn, GenMono, VarId, WeylOp, act_on_mono, gen_mono, mono_str, monomial_basis, weyl_mul


# ---------------------------------------------------------------- states


class GammaFn:
    """Finite sum of generalized monomials with GammaSum coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[GenMono, GammaSum] | None = None):
        self.terms = {m: c for m, c in (terms or {}).items() if not c.is_zero()}

    @staticmethod
    def from_fn(f: Fn) -> "GammaFn":
        return GammaFn({m: GammaSum.of(GammaProduct(c)) for m, c in f.terms.items()})

    @staticmethod
    def monomial(exps: Mapping[VarId, object] | None = None, coeff=1) -> "GammaFn":
        return GammaFn({gen_mono(exps or {}): GammaSum.of(GammaProduct.of(coeff))})

    def add_term(self, m: GenMono, c) -> "GammaFn":
        c = c if isinstance(c, GammaSum) else GammaSum.of(GammaProduct.of(c))
        t = dict(self.terms)
        t[m] = t[m] + c if m in t else c
        return GammaFn(t)

    def __add__(self, other: "GammaFn") -> "GammaFn":
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t[m] + c if m in t else c
        return GammaFn(t)

    def __neg__(self):
        return GammaFn({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, g) -> "GammaFn":
        return GammaFn({m: c.scale(g) for m, c in self.terms.items()})

    def times_mono(self, exps: Mapping[VarId, object]) -> "GammaFn":
        out: dict[GenMono, GammaSum] = {}
        for m, c in self.terms.items():
            d = dict(m)
            for v, e in exps.items():
                d[v] = d.get(v, AffineForm(0)) + e
            mm = gen_mono(d)
            out[mm] = out[mm] + c if mm in out else c
        return GammaFn(out)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, GammaFn) and (self - other).is_zero()

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"[{c}]*{mono_str(m)}" for m, c in sorted(self.terms.items(), key=lambda t: str(t[0])))


def act(op: WeylOp, f: GammaFn) -> GammaFn:
    """Action of a Weyl operator on a GammaFn."""
    out: dict[GenMono, GammaSum] = {}
    for m, c in f.terms.items():
        for mm, cc in act_on_mono(op, m):
            t = c.scale(cc)
            out[mm] = out[mm] + t if mm in out else t
    return GammaFn(out)


# ---------------------------------------------------------------- shift operators


@dataclass(frozen=True)
class Shift:
    """target -> target - c * coeff * source (source None means the constant 1)."""

    target: VarId
    source: VarId | None
    coeff: Fraction = Fraction(1)


@dataclass(frozen=True)
class ShiftGenerator:
    shifts: tuple  # tuple[Shift, ...]

    def __post_init__(self):
        targets = [s.target for s in self.shifts]
        if len(set(targets)) != len(targets):
            raise ValueError("targets must be distinct")
        if set(targets) & {s.source for s in self.shifts}:
            raise ValueError("a target may not also be a source")

    @staticmethod
    def dot(xs: Sequence[VarId], ds: Sequence[VarId]) -> "ShiftGenerator":
        """The generator sum_a x_a d_(a) of paired variables: d-variable shifted by x."""
        return ShiftGenerator(tuple(Shift(d, x) for x, d in zip(xs, ds)))

    def operator(self) -> WeylOp:
        out = WeylOp()
        for s in self.shifts:
            src = WeylOp.const(1) if s.source is None else WeylOp.x(s.source)
            out = out + weyl_mul(src, WeylOp.d(s.target)).scale(s.coeff)
        return out


@dataclass(frozen=True)
class ROpSpec:
    generator: ShiftGenerator
    w: AffineForm
    direction: str = "12"


def _is_poly_exponent(e: AffineForm) -> bool:
    return e.is_constant() and e.const.denominator == 1 and e.const >= 0


def _source_power(s: Shift, w: AffineForm, K: int) -> tuple[dict, Fraction]:
    """(k*s)^(-w-K) as (monomial exponents, rational factor k^(-K)).

    The w-dependent constant k^(-w) is the same for every term of one
    application and is absorbed into the contour normalization.
    """
    exps = {} if s.source is None else {s.source: -(w + K)}
    return exps, Fraction(s.coeff) ** (-K)


def shift_monomial(spec: ROpSpec, mono: GenMono) -> GammaFn:
    """Evaluate int dc c^(w-1) exp(-c D) on one generalized monomial."""
    w = AffineForm.of(spec.w)
    by_target = {s.target: s for s in spec.generator.shifts}
    exps = dict(mono)
    active = [v for v in exps if v in by_target]
    branch = [v for v in active if not _is_poly_exponent(exps[v])]
    if len(branch) > 1:
        raise UnsupportedTarget(f"{len(branch)} branch factors in {mono_str(mono)}")
    if not branch and len(active) == 1:
        branch = active
    if not branch and active:
        raise UnsupportedTarget(f"no branch factor among {len(active)} polynomial factors")
    polys = [v for v in active if v not in branch]
    base = {v: e for v, e in exps.items() if v not in active}
    # binomial expansion of the polynomial factors: (t - c k s)^p
    expansions: list[tuple[int, dict, Fraction]] = [(0, {}, Fraction(1))]
    for v in polys:
        p = int(exps[v].const)
        s = by_target[v]
        nxt = []
        for K, ex, coef in expansions:
            for j in range(p + 1):
                e2 = dict(ex)
                e2[v] = e2.get(v, 0) + (p - j)
                if j and s.source is not None:
                    e2[s.source] = e2.get(s.source, 0) + j
                c2 = coef * math.comb(p, j) * (-s.coeff) ** j
                nxt.append((K + j, e2, c2))
        expansions = nxt
    out = GammaFn()
    for K, ex, coef in expansions:
        m = dict(base)
        for v, e in ex.items():
            m[v] = AffineForm.of(m.get(v, 0)) + e
        if branch:
            t = branch[0]
            e = exps[t]
            if (w + K).is_constant() and (w + K).const.denominator == 1 and (w + K).const <= 0:
                raise DegenerateArgument(f"Beta argument {w + K} at a pole")
            g = beta(w + K, e + 1) * coef
            m[t] = AffineForm.of(m.get(t, 0)) + e + w + K
            src_exps, factor = _source_power(by_target[t], w, K)
            for v2, e2 in src_exps.items():
                m[v2] = AffineForm.of(m.get(v2, 0)) + e2
            g = g * factor
        else:
            if (w + K).is_constant() and (w + K).const.denominator == 1 and (w + K).const <= 0:
                raise DegenerateArgument(f"Gamma argument {w + K} at a pole")
            g = GammaProduct(coef, factors=[(w + K, 1)])
        out = out.add_term(gen_mono(m), g)
    return out


def r_apply(spec: ROpSpec, state) -> GammaFn:
    """Apply the shift operator to a GammaFn (or Fn)."""
    if isinstance(state, Fn):
        state = GammaFn.from_fn(state)
    w = AffineForm.of(spec.w)
    if w.is_constant() and w.const.denominator == 1 and w.const <= 0:
        raise DegenerateArgument(f"argument {w} gives a Beta pole")
    out = GammaFn()
    for m, c in state.terms.items():
        for mm, g in shift_monomial(spec, m).terms.items():
            out = out.add_term(mm, _mul_sums(g, c))
    return out


def _mul_sums(a: GammaSum, b: GammaSum) -> GammaSum:
    out = GammaSum()
    for t in b.terms():
        out = out + a.scale(t)
    return out


# ---------------------------------------------------------------- Yang-Baxter checks


@dataclass
class RLLReport:
    relation: str
    passed: bool
    checked: int
    mismatch: str | None = None
    argument: str | None = None


def verify_fundamental_yb(L: LMatrix, v: Param = V, p_sign: int = -1) -> RLLReport:
    """R(u-v) T1(u) T2(v) = T2(v) T1(u) R(u-v) with R(u) = u*1 + p_sign*P.

    Index form with T1 = L x 1, T2 = 1 x L on the same Weyl algebra:
    sum R_{a1a2,b1b2} L_{b1c1}(u) L_{b2c2}(v) = sum L_{a2b2}(v) L_{a1b1}(u) R_{b1b2,c1c2}.
    """
    n, u = L.n, L.u
    Lv = L.map(lambda e: e.subs({u: AffineForm.of(v)}))
    diff = ParamPoly.of(u) - ParamPoly.of(v)
    checked = 0
    for a1, a2, c1, c2 in itertools.product(range(n), repeat=4):
        lhs = weyl_mul(L.entries[a1][c1], Lv.entries[a2][c2]).scale(diff) + weyl_mul(
            L.entries[a2][c1], Lv.entries[a1][c2]).scale(p_sign)
        rhs = weyl_mul(Lv.entries[a2][c2], L.entries[a1][c1]).scale(diff) + weyl_mul(
            Lv.entries[a2][c1], L.entries[a1][c2]).scale(p_sign)
        checked += 1
        if lhs != rhs:
            return RLLReport("fundYB", False, checked, f"entry {(a1+1, a2+1, c1+1, c2+1)}: {lhs - rhs}")
    return RLLReport("fundYB", True, checked)


@dataclass(frozen=True)
class HomogeneousSite:
    """Variables of one JS site with the leading one carrying symbolic degree."""

    variables: tuple  # tuple[VarId, ...]
    lead: VarId
    degree: AffineForm

    def others(self) -> list[VarId]:
        return [v for v in self.variables if v != self.lead]


def homogeneous_basis(sites: Sequence[HomogeneousSite], d: int) -> list[GenMono]:
    """lead^(deg - |m|) * x^m over all sites, |m| <= d in total."""
    free = [v for s in sites for v in s.others()]
    out = []
    for m in monomial_basis(free, d):
        exps = dict(m)
        for s in sites:
            used = sum((exps.get(v, AffineForm(0)) for v in s.others()), AffineForm(0))
            exps[s.lead] = s.degree - used
        out.append(gen_mono(exps))
    return out


def verify_rll(
    L1: LMatrix,
    L2: LMatrix,
    relation: str = "v-minus",
    d: int = 3,
    lead: int | None = None,
    shift_w: int = 0,
    degrees: tuple | None = None,
) -> RLLReport:
    """Check R L1 L2 = L1' L2' R on homogeneous test functions of total free degree <= d.

    relation:
      ``u-plus``  R12(u-v) L1(u) L2(v) = L1(v) L2(u) R12(u-v), R12 shifts x^2 by x^1;
      ``v-minus`` R21(u_- - v_-) L1(u) L2(v) = L1(u) L2(v) R21(u_- - v_-), R21 shifts x^1 by x^2,
                  with u_- = u - 2l_1, v_- = v - 2l_2 and 2l_I the degree of site I.
    The restriction to homogeneous functions is realized by the test functions:
    the leading variable of each site carries the symbolic degree. ``shift_w``
    adds an integer to the argument (negative controls).
    """
    if L1.n != L2.n:
        raise ValueError("ranks differ")
    n = L1.n
    u, v = L1.u, L2.u
    if L1.kind == "identity" and L2.kind == "identity":
        return RLLReport(relation, True, 0, argument="trivial")
    x1 = sorted(L1.variables())
    x2 = sorted(L2.variables())
    if len(x1) != n or len(x2) != n:
        raise ValueError("JS factors with n variables each are required")
    lead = n if lead is None else lead
    if degrees is None:
        degrees = (AffineForm.of(aux("2l_1")), AffineForm.of(aux("2l_2")))
    s1 = HomogeneousSite(tuple(x1), x1[lead - 1], AffineForm.of(degrees[0]))
    s2 = HomogeneousSite(tuple(x2), x2[lead - 1], AffineForm.of(degrees[1]))
    uu, vv = AffineForm.of(u), AffineForm.of(v)
    if relation == "u-plus":
        w = uu - vv + shift_w
        spec = ROpSpec(ShiftGenerator.dot(x1, x2), w, "12")
        L1r = L1.map(lambda e: e.subs({u: vv}))
        L2r = L2.map(lambda e: e.subs({v: uu}))
    elif relation == "v-minus":
        w = (uu - s1.degree) - (vv - s2.degree) + shift_w
        spec = ROpSpec(ShiftGenerator.dot(x2, x1), w, "21")
        L1r, L2r = L1, L2
    else:
        raise ValueError(f"unknown relation {relation}")
    basis = homogeneous_basis([s1, s2], d)
    checked = 0
    for a in range(n):
        for b in range(n):
            left_op = WeylOp()
            right_op = WeylOp()
            for c in range(n):
                left_op = left_op + weyl_mul(L1.entries[a][c], L2.entries[c][b])
                right_op = right_op + weyl_mul(L1r.entries[a][c], L2r.entries[c][b])
            for m in basis:
                f = GammaFn({m: GammaSum.of(GammaProduct.one())})
                lhs = r_apply(spec, act(left_op, f))
                rhs = act(right_op, r_apply(spec, f))
                checked += 1
                diff = lhs - rhs
                if not diff.is_zero():
                    return RLLReport(relation, False, checked,
                                     f"entry ({a+1},{b+1}) on {mono_str(m)}: remainder {diff}", str(w))
    return RLLReport(relation, True, checked, argument=str(w))


# ---------------------------------------------------------------- intertwining on coordinates


@dataclass(frozen=True)
class CoordinatePermOp:
    """Elementary permutation operator acting on coordinate functions.

    kind ``between``: multiply by carrier^argument (carrier a coordinate);
    kind ``within``: the shift operator with the given generator and argument.
    """

    kind: str
    argument: AffineForm
    generator: ShiftGenerator | None = None
    carrier: VarId | None = None
    label: str = ""

    def apply(self, f: GammaFn) -> GammaFn:
        if self.kind == "between":
            return f.times_mono({self.carrier: self.argument})
        if self.kind == "within":
            return r_apply(ROpSpec(self.generator, self.argument), f)
        raise ValueError(self.kind)


def compose_apply(ops: Sequence[CoordinatePermOp], f: GammaFn) -> GammaFn:
    """Apply ops right-to-left (the last element acts first)."""
    for op in reversed(ops):
        f = op.apply(f)
    return f


@dataclass
class IntertwiningReport:
    passed: bool
    checked: int
    mismatch: str | None = None


def is_permutation(before: Sequence, after: Sequence) -> bool:
    before = [AffineForm.of(b) for b in before]
    after = [AffineForm.of(a) for a in after]
    if len(before) != len(after):
        return False
    rest = list(after)
    for b in before:
        if b not in rest:
            return False
        rest.remove(b)
    return True


def verify_intertwining(
    ops: Sequence[CoordinatePermOp],
    T_before,
    T_after,
    basis: Iterable[GenMono],
    before_params: Sequence | None = None,
    after_params: Sequence | None = None,
) -> IntertwiningReport:
    """S T_before(u) f = T_after(u) S f for every f in the basis, entrywise."""
    if before_params is None and isinstance(T_before, Monodromy):
        before_params = T_before.params
    if after_params is None and isinstance(T_after, Monodromy):
        after_params = T_after.params
    if before_params is not None and after_params is not None:
        if not is_permutation(before_params, after_params):
            raise ParameterMismatch("parameter arrays are not related by a permutation")
    A, B = _as_lmatrix(T_before), _as_lmatrix(T_after)
    n = A.n
    checked = 0
    basis = list(basis)
    images = {m: compose_apply(ops, GammaFn({m: GammaSum.of(GammaProduct.one())})) for m in basis}
    for a in range(n):
        for b in range(n):
            for m in basis:
                f = GammaFn({m: GammaSum.of(GammaProduct.one())})
                lhs = compose_apply(ops, act(A.entries[a][b], f))
                rhs = act(B.entries[a][b], images[m])
                checked += 1
                diff = lhs - rhs
                if not diff.is_zero():
                    return IntertwiningReport(False, checked, f"entry ({a+1},{b+1}) on {mono_str(m)}: {diff}")
    return IntertwiningReport(True, checked)
