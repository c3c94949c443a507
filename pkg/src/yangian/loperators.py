"""L-matrices, monodromies, quantum determinants and highest-weight checks.

Three builders live here:

* ``js_L``: the bilinear (Jordan-Schwinger) matrix u*1 - d_a x_b (or u*1 + x_a d_b);
* ``restricted_L``: the same matrix acting on functions of fixed degree 2l, written in
  ratio ("normal") coordinates;
* ``biedenharn_L``: the first-order matrix for generic gl(n) representations, obtained
  from an n-site product by solving the first-class constraints.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import (
    CentralityFailure,
    NonAffineResidual,
    NonTriangular,
    NotHighestWeight,
    RankTooSmall,
    SiteCollision,
)
from .symbolics import U, AffineForm, Param, ParamPoly, aux
from .weyl import Fn, GenMono, VarId, WeylOp, act_on_mono, apply, gen_mono, weyl_mul


@dataclass(frozen=True)
class LMatrix:
    n: int
    entries: tuple  # n x n tuple of WeylOp
    kind: str = "composite"
    params: tuple = ()
    order: int = 1
    u: Param = U

    def __post_init__(self):
        if len(self.entries) != self.n or any(len(r) != self.n for r in self.entries):
            raise ValueError("entries must be n x n")

    def __getitem__(self, ab: tuple[int, int]) -> WeylOp:
        a, b = ab
        return self.entries[a - 1][b - 1]

    def map(self, fn) -> "LMatrix":
        return LMatrix(self.n, tuple(tuple(fn(e) for e in row) for row in self.entries),
                       self.kind, self.params, self.order, self.u)

    def shifted(self, delta) -> "LMatrix":
        """Substitute u -> u + delta."""
        if AffineForm.of(delta) == 0:
            return self
        img = AffineForm.of(self.u) + delta
        return self.map(lambda e: e.subs({self.u: img}))

    def variables(self) -> set[VarId]:
        out = set()
        for row in self.entries:
            for e in row:
                out |= e.variables()
        return out

    def __matmul__(self, other: "LMatrix") -> "LMatrix":
        return matmul(self, other)

    def __eq__(self, other):
        return isinstance(other, LMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __str__(self) -> str:
        return "\n".join(f"({a+1},{b+1}): {e}" for a, row in enumerate(self.entries) for b, e in enumerate(row))


def matmul(A: LMatrix, B: LMatrix) -> LMatrix:
    n = A.n
    rows = []
    for a in range(n):
        row = []
        for b in range(n):
            acc = WeylOp()
            for c in range(n):
                acc = acc + weyl_mul(A.entries[a][c], B.entries[c][b])
            row.append(acc)
        rows.append(tuple(row))
    return LMatrix(n, tuple(rows), "composite", A.params + B.params, A.order + B.order, A.u)


def identity_matrix(n: int, u: Param = U, scalar=None) -> LMatrix:
    diag = WeylOp.const(1 if scalar is None else scalar)
    return LMatrix(n, tuple(tuple(diag if a == b else WeylOp() for b in range(n)) for a in range(n)),
                   "identity", (), 0, u)


def site_vars(n: int, site: tuple) -> list[VarId]:
    return [VarId(tuple(site), a) for a in range(1, n + 1)]


def js_L(n: int, sign: int = -1, site: tuple = (), u: Param = U) -> LMatrix:
    """u*1 - d_a x_b  (sign=-1)  or  u*1 + x_a d_b  (sign=+1), normal ordered."""
    if n < 2:
        raise RankTooSmall(f"rank {n} < 2")
    vs = site_vars(n, site)
    uu = WeylOp.const(ParamPoly.of(u))
    rows = []
    for a in range(n):
        row = []
        for b in range(n):
            if sign < 0:
                e = -weyl_mul(WeylOp.d(vs[a]), WeylOp.x(vs[b]))
            else:
                e = weyl_mul(WeylOp.x(vs[a]), WeylOp.d(vs[b]))
            if a == b:
                e = e + uu
            row.append(e)
        rows.append(tuple(row))
    kind = "JS_minus" if sign < 0 else "JS_plus"
    return LMatrix(n, tuple(rows), kind, (), 1, u)


# ---------------------------------------------------------------- normal coordinates


@dataclass(frozen=True)
class SiteLayout:
    """Homogeneous site: leading variable with fixed degree, other variables become ratios."""

    leading: VarId
    degree: AffineForm
    others: tuple  # VarIds kept as normal coordinates (same ids are reused)


_STIRLING: dict = {}


def stirling2(k: int, j: int) -> int:
    if (k, j) in _STIRLING:
        return _STIRLING[(k, j)]
    if k == j:
        r = 1
    elif j == 0 or j > k:
        r = 0
    else:
        r = j * stirling2(k - 1, j) + stirling2(k - 1, j - 1)
    _STIRLING[(k, j)] = r
    return r


def project_to_normal(op: WeylOp, layout: Sequence[SiteLayout]) -> WeylOp:
    """Operator induced on ratio coordinates by a degree-preserving operator.

    op is applied to prod_s y_s^(D_s - sum m) prod_a x_a^(m_a) with symbolic m; the
    coefficient polynomial in m is rewritten in falling factorials, and
    [m]_beta x^(m+delta) is read back as x^(beta+delta) d^beta.
    """
    mparams: dict[VarId, Param] = {}
    exps: dict[VarId, AffineForm] = {}
    for k, site in enumerate(layout):
        total = AffineForm(0)
        for v in site.others:
            p = aux(f"m[{v}]")
            mparams[v] = p
            exps[v] = AffineForm.of(p)
            total = total + p
        exps[site.leading] = site.degree - total
    generic = gen_mono(exps)
    known = set(exps)
    by_shift: dict[tuple, ParamPoly] = {}
    for mono, coeff in act_on_mono(op, generic):
        out = dict(mono)
        if set(out) - known:
            raise NonAffineResidual("operator involves variables outside the layout")
        shift = []
        for site in layout:
            moved = AffineForm(0)
            for v in site.others:
                d = out.get(v, AffineForm(0)) - mparams[v]
                if not d.is_integer():
                    raise NonAffineResidual(f"non-integer shift for {v}")
                shift.append((v, int(d.const)))
                moved = moved + d
            lead = out.get(site.leading, AffineForm(0))
            if lead != exps[site.leading] - moved:
                raise NonAffineResidual(f"operator changes the degree of site {site.leading.site}")
        key = tuple(shift)
        by_shift[key] = by_shift[key] + coeff if key in by_shift else coeff
    result: dict = {}
    inverse = {p: v for v, p in mparams.items()}
    for shift, poly in by_shift.items():
        delta = dict(shift)
        for mono, c in poly.terms.items():
            mpart = [(inverse[p], e) for p, e in mono if p in inverse]
            rest = tuple((p, e) for p, e in mono if p not in inverse)
            rest_poly = ParamPoly({rest: c})
            # expand prod m^k into falling factorials
            expansions = [[(j, stirling2(k, j)) for j in range(1, k + 1)] for _, k in mpart]
            for choice in itertools.product(*expansions) if mpart else [()]:
                weight = 1
                beta = {}
                for (v, _), (j, s) in zip(mpart, choice):
                    weight *= s
                    beta[v] = j
                if not weight:
                    continue
                xs = {v: delta.get(v, 0) + beta.get(v, 0) for v in set(delta) | set(beta)}
                xkey = tuple(sorted((v, e) for v, e in xs.items() if e))
                dkey = tuple(sorted((v, e) for v, e in beta.items() if e))
                key = (xkey, dkey)
                term = rest_poly * weight
                result[key] = result[key] + term if key in result else term
    return WeylOp(result)


def project_matrix(L: LMatrix, layout: Sequence[SiteLayout], kind: str, params: tuple) -> LMatrix:
    M = L.map(lambda e: project_to_normal(e, layout))
    return LMatrix(M.n, M.entries, kind, params, L.order, L.u)


def restricted_L(n: int, k: int, twoEll, site: tuple = (), u: Param = U) -> LMatrix:
    """JS matrix on functions homogeneous of degree 2l, leading component n-k."""
    twoEll = AffineForm.of(twoEll)
    if not 0 <= k < n:
        raise ValueError("0 <= k < n required")
    vs = site_vars(n, site)
    lead = vs[n - k - 1]
    others = tuple(v for v in vs if v != lead)
    L = js_L(n, -1, site, u)
    return project_matrix(L, [SiteLayout(lead, twoEll, others)], f"JS_restricted({k})", (twoEll,))


def restricted_L_gl2(twoEll, site: tuple = (), u: Param = U) -> LMatrix:
    return restricted_L(2, 0, twoEll, site, u)


# ---------------------------------------------------------------- Biedenharn construction


def _bvar(site: tuple, s: int, a: int) -> VarId:
    return VarId(tuple(site) + (s,), a)


def solved_derivatives(n: int, site: tuple = ()) -> dict[VarId, WeylOp]:
    """Eliminated derivatives d^s_a (a > n-s+1) solved from the triangular constraints.

    For site s the constraints read sum_a x^j_a d^s_a = 0, j < s, with gauge
    x^j_a = 0 for a > n-j+1. Row j = s-1 has one unknown; back-substitution
    upward gives Laurent expressions in the x^j with the remaining d^s on the right.
    """
    sol: dict[VarId, WeylOp] = {}
    for s in range(2, n + 1):
        lead_s = n - s + 1
        for j in range(s - 1, 0, -1):
            unknown = n - j + 1
            if not lead_s < unknown <= n:
                raise NonTriangular(f"unexpected pivot {unknown} for site {s}")
            rhs = WeylOp()
            for a in range(1, unknown):
                xja = WeylOp.x(_bvar(site, j, a))
                if a <= lead_s:
                    rhs = rhs + weyl_mul(xja, WeylOp.d(_bvar(site, s, a)))
                else:
                    rhs = rhs + weyl_mul(xja, sol[_bvar(site, s, a)])
            pivot_inv = WeylOp.x(_bvar(site, j, unknown), -1)
            sol[_bvar(site, s, unknown)] = -weyl_mul(pivot_inv, rhs)
    return sol


def biedenharn_layout(n: int, twoEll: Sequence, site: tuple = ()) -> list[SiteLayout]:
    layout = []
    for s in range(1, n + 1):
        lead = n - s + 1
        layout.append(SiteLayout(_bvar(site, s, lead), AffineForm.of(twoEll[lead - 1]),
                                 tuple(_bvar(site, s, a) for a in range(1, lead))))
    return layout


def biedenharn_zero_part(n: int, site: tuple = ()) -> list[list[WeylOp]]:
    """sum_s L^s(0) with gauge and solved constraints, still in homogeneous variables."""
    sol = solved_derivatives(n, site)
    M = [[WeylOp() for _ in range(n)] for _ in range(n)]
    for s in range(1, n + 1):
        lead = n - s + 1
        for a in range(1, n + 1):
            da = sol[_bvar(site, s, a)] if a > lead else WeylOp.d(_bvar(site, s, a))
            for b in range(1, lead + 1):
                M[a - 1][b - 1] = M[a - 1][b - 1] - weyl_mul(da, WeylOp.x(_bvar(site, s, b)))
    return M


def biedenharn_L(n: int, twoEll: Sequence, site: tuple = (), u: Param = U) -> LMatrix:
    """First-order L-matrix for a generic gl(n) representation with labels 2l_1..2l_n.

    Site s (1..n) keeps x^s_1..x^s_(n-s+1); its leading variable carries degree
    2l_(n-s+1). The forced factor u^(n-1) of the constrained product has already
    been divided out: the result is u*1 + sum_s L^s(0).
    """
    if n < 2:
        raise RankTooSmall(f"rank {n} < 2")
    if len(twoEll) != n:
        raise ValueError("need n labels")
    twoEll = tuple(AffineForm.of(t) for t in twoEll)
    zero = biedenharn_zero_part(n, site)
    layout = biedenharn_layout(n, twoEll, site)
    uu = ParamPoly.of(u)
    rows = []
    for a in range(n):
        row = []
        for b in range(n):
            e = project_to_normal(zero[a][b], layout)
            if a == b:
                e = e + WeylOp.const(uu)
            row.append(e)
        rows.append(tuple(row))
    return LMatrix(n, tuple(rows), "Biedenharn", twoEll, 1, u)


def biedenharn_variables(n: int, site: tuple = ()) -> list[VarId]:
    return [_bvar(site, s, a) for s in range(1, n + 1) for a in range(1, n - s + 1)]


def constraint_operator(n: int, j: int, s: int, site: tuple = ()) -> WeylOp:
    """(x^j . d^s) after gauge fixing and substitution of the solved derivatives."""
    sol = solved_derivatives(n, site)
    out = WeylOp()
    for a in range(1, n - j + 2):
        da = sol.get(_bvar(site, s, a), WeylOp.d(_bvar(site, s, a))) if a > n - s + 1 else WeylOp.d(_bvar(site, s, a))
        out = out + weyl_mul(WeylOp.x(_bvar(site, j, a)), da)
    return out


def constraint_residual(n: int, j: int, s: int, a: int, b: int, site: tuple = (), ordered: bool = True) -> WeylOp:
    """d^j_a (x^j . d^s) x^s_b with the solved constraint substituted.

    With ``ordered`` the substitution keeps d^j_a to the left of the coefficients of
    the solved d^s; otherwise d^j_a is moved to the right first, which is the
    ordering that does not preserve the constraint.
    """
    lead_s = n - s + 1
    if b > lead_s:
        return WeylOp()
    xb = WeylOp.x(_bvar(site, s, b))
    dja = WeylOp.d(_bvar(site, j, a))
    if ordered:
        return weyl_mul(weyl_mul(dja, constraint_operator(n, j, s, site)), xb)
    # naive: normal-order the raw product first, then substitute the solved d^s as
    # commuting symbols (their x^j coefficients placed left of d^j_a)
    sol = solved_derivatives(n, site)
    raw = WeylOp()
    for c in range(1, n - j + 2):
        raw = raw + weyl_mul(weyl_mul(dja, WeylOp.x(_bvar(site, j, c))), WeylOp.d(_bvar(site, s, c)))
    out = WeylOp()
    ssite = tuple(site) + (s,)
    for (xs, ds), coeff in raw.terms.items():
        keep = tuple((v, e) for v, e in ds if v.site != ssite)
        term = WeylOp({(xs, keep): coeff})
        for v, e in ds:
            if v.site != ssite:
                continue
            rep = sol[v] if v.comp > lead_s else WeylOp.d(v)
            for _ in range(e):
                acc = WeylOp()
                for (xr, dr), cr in rep.terms.items():
                    acc = acc + weyl_mul(weyl_mul(WeylOp({(xr, ()): cr}), term), WeylOp({((), dr): 1}))
                term = acc
        out = out + term
    return weyl_mul(out, xb)


def biedenharn_weight_prediction(n: int, twoEll: Sequence, u: Param = U) -> list[ParamPoly]:
    """lambda_a(u) = u - n - 1 + a - 2l_a."""
    return [ParamPoly.of(u) + (a - n - 1) - AffineForm.of(twoEll[a - 1]).to_poly() for a in range(1, n + 1)]


# ---------------------------------------------------------------- monodromy and qdet


@dataclass(frozen=True)
class Monodromy:
    factors: tuple  # ((LMatrix, shift), ...)
    product: LMatrix = field(compare=False)

    @property
    def n(self) -> int:
        return self.product.n

    @property
    def params(self) -> tuple:
        return tuple(p for L, _ in self.factors for p in L.params)


def monodromy(factors: Sequence, n: int | None = None, u: Param = U) -> Monodromy:
    """Ordered product L^1(u+d^1) ... L^N(u+d^N). Factors are LMatrix or (LMatrix, shift)."""
    norm = []
    seen: set[VarId] = set()
    for f in factors:
        L, delta = (f, 0) if isinstance(f, LMatrix) else f
        vs = L.variables()
        if vs & seen:
            raise SiteCollision(f"shared variables {sorted(map(str, vs & seen))}")
        seen |= vs
        norm.append((L, AffineForm.of(delta)))
    if not norm:
        if n is None:
            raise ValueError("rank needed for an empty monodromy")
        return Monodromy((), identity_matrix(n, u))
    prod = None
    for L, delta in norm:
        Ls = L.shifted(delta)
        prod = Ls if prod is None else matmul(prod, Ls)
    prod = LMatrix(prod.n, prod.entries, "monodromy", tuple(p for L, _ in norm for p in L.params),
                   sum(L.order for L, _ in norm), u)
    return Monodromy(tuple(norm), prod)


def _as_lmatrix(T) -> LMatrix:
    return T.product if isinstance(T, Monodromy) else T


def qdet_orderings(T) -> tuple[WeylOp, WeylOp]:
    """The two expressions: rows with decreasing shifts, and columns with increasing shifts."""
    L = _as_lmatrix(T)
    n, u = L.n, L.u
    shifted = {k: L.shifted(-k) for k in range(n)}
    first = WeylOp()
    second = WeylOp()
    for perm in itertools.permutations(range(n)):
        sign = _perm_sign(perm)
        t1 = WeylOp.const(sign)
        t2 = WeylOp.const(sign)
        for r in range(n):
            t1 = weyl_mul(t1, shifted[n - 1 - r].entries[r][perm[r]])
            t2 = weyl_mul(t2, shifted[r].entries[perm[r]][r])
        first = first + t1
        second = second + t2
    return first, second


def qdet(T) -> WeylOp:
    """Quantum determinant; raises CentralityFailure if the two orderings differ."""
    a, b = qdet_orderings(T)
    if a != b:
        raise CentralityFailure(f"orderings differ by {a - b}")
    return a


def _perm_sign(p) -> int:
    sign = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


# ---------------------------------------------------------------- highest weight


@dataclass(frozen=True)
class WeightFunctionList:
    weights: tuple  # ParamPoly per a

    def __getitem__(self, a: int) -> ParamPoly:
        return self.weights[a - 1]

    def __str__(self) -> str:
        return "; ".join(f"lambda_{a+1}(u) = {w}" for a, w in enumerate(self.weights))


def check_hw(T, vector: Fn | None = None) -> WeightFunctionList:
    """Verify T_ab vector = 0 (a<b) and read off the diagonal eigenvalues."""
    L = _as_lmatrix(T)
    vector = Fn.one() if vector is None else vector
    if vector.is_zero():
        raise ValueError("the zero vector is not a highest-weight candidate")
    mono, c0 = next(iter(sorted(vector.terms.items(), key=lambda t: str(t[0]))))
    if not c0.is_constant():
        raise ValueError("vector needs a rational leading coefficient")
    c0 = c0.constant_value()
    weights = []
    for a in range(1, L.n + 1):
        for b in range(a + 1, L.n + 1):
            image = apply(L[a, b], vector)
            if not image.is_zero():
                raise NotHighestWeight(a, b, str(image))
        image = apply(L[a, a], vector)
        lam = image.terms.get(mono, ParamPoly()) * (1 / c0)
        if image != vector.scale(lam):
            raise NotHighestWeight(a, a, "diagonal entry does not act by a scalar")
        weights.append(lam)
    return WeightFunctionList(tuple(weights))


def weight_prediction(T: Monodromy) -> list[ParamPoly]:
    """Product over factors of the single-factor Biedenharn weights, shifted."""
    n = T.n
    preds = [ParamPoly.of(1)] * n
    for L, delta in T.factors:
        if L.kind != "Biedenharn":
            raise ValueError("weight prediction implemented for Biedenharn factors")
        single = biedenharn_weight_prediction(n, L.params, L.u)
        img = AffineForm.of(L.u) + delta
        preds = [p * w.subs({L.u: img}) for p, w in zip(preds, single)]
    return preds
