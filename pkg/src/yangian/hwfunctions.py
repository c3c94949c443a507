"""Determinant-power highest-weight functions and beta sequences for two gl(n) factors.

Columns are labelled by (site, slot). In normal coordinates the slot-i column of a
site has components 1..n-i+1 with the last one equal to 1, so any n columns with
pairwise distinct slots form an anti-triangular matrix with unit anti-diagonal:
such a determinant is the constant +-1. Everything else stays symbolic.

The parameter array has 2n entries in slot order (1,1..n), (2,1..n); slot (I,i)
initially carries 2l^I_(n-i+1). Elementary operators and their arguments:

* between:   swaps (1,n) <-> (2,1), multiplies by f(x^{1,n}, x^{2,1})^w,
             w = p(1,n) - p(2,1);
* within 1k: swaps (1,k) <-> (1,k+1), shift x^{1,k} -> x^{1,k} - c x^{1,k+1},
             w = p(1,k+1) - p(1,k);
* within 2k: swaps (2,k) <-> (2,k+1), shift x^{2,k} -> x^{2,k} - c x^{2,k+1},
             w = p(2,k+1) - p(2,k).

f(x^{1,i}, x^{2,j}) denotes det(x^{1,1}, ..., x^{1,n} without x^{1,i}, x^{2,j}).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DegenerateArgument, NonUnitResidual, NotBetaAdmissible
from .symbolics import U, AffineForm, GammaProduct, LaurentLeading, ParamPoly, aux, beta, gamma_pole_order, two_ell


@dataclass(frozen=True, order=True)
class ColumnVector:
    site: int
    slot: int

    def is_unit(self, n: int) -> bool:
        """The slot-n column is the constant first unit vector."""
        return self.slot == n

    def __str__(self) -> str:
        return f"x^{{{self.site},{self.slot}}}"


def f_columns(n: int, omit: int, second: int) -> tuple:
    """Columns of f(x^{1,omit}, x^{2,second})."""
    return tuple(ColumnVector(1, j) for j in range(1, n + 1) if j != omit) + (ColumnVector(2, second),)


@dataclass(frozen=True)
class DetFactor:
    columns: tuple
    exponent: AffineForm

    def __post_init__(self):
        if len(set(self.columns)) != len(self.columns):
            raise ValueError("columns must be distinct")

    def __str__(self) -> str:
        return f"det({', '.join(map(str, self.columns))})^({self.exponent})"


def constant_sign(columns: Sequence[ColumnVector], n: int) -> int | None:
    """+-1 if the determinant is constant, else None."""
    slots = [c.slot for c in columns]
    if sorted(slots) != list(range(1, n + 1)):
        return None
    inv = sum(1 for i in range(n) for j in range(i + 1, n) if slots[i] > slots[j])
    return (-1) ** (inv + n * (n - 1) // 2)


def f_label(columns: Sequence[ColumnVector], n: int) -> str:
    """Render as f(x^{1,i}, x^{2,j}) when the columns have that shape."""
    ones = [c.slot for c in columns if c.site == 1]
    twos = [c.slot for c in columns if c.site == 2]
    if len(ones) == n - 1 and len(twos) == 1 and tuple(columns) == f_columns(n, _missing(ones, n), twos[0]):
        return f"f({_missing(ones, n)},{twos[0]})"
    return "det(" + ",".join(f"{c.site}.{c.slot}" for c in columns) + ")"


def _missing(slots: Sequence[int], n: int) -> int:
    return (set(range(1, n + 1)) - set(slots)).pop()


@dataclass(frozen=True)
class HWFunction:
    n: int
    factors: tuple  # sorted tuple[(columns, exponent)]
    coefficient: GammaProduct
    params: tuple  # 2n AffineForms

    @staticmethod
    def one(n: int, params: Sequence | None = None) -> "HWFunction":
        if params is None:
            params = standard_params(n)
        params = tuple(AffineForm.of(p) for p in params)
        if len(params) != 2 * n:
            raise ValueError("parameter array must have 2n entries")
        return HWFunction(n, (), GammaProduct.one(), params)

    def factor_map(self) -> dict:
        return dict(self.factors)

    def det_factors(self) -> list[DetFactor]:
        return [DetFactor(c, e) for c, e in self.factors]

    def with_factor(self, columns: tuple, exponent) -> "HWFunction":
        d = self.factor_map()
        d[columns] = d.get(columns, AffineForm(0)) + exponent
        return replace(self, factors=_sorted_factors(d))

    def times(self, g: GammaProduct) -> "HWFunction":
        return replace(self, coefficient=self.coefficient * g)

    def p(self, site: int, slot: int) -> AffineForm:
        return self.params[(site - 1) * self.n + slot - 1]

    def swapped(self, a: tuple, b: tuple) -> "HWFunction":
        arr = list(self.params)
        i, j = (a[0] - 1) * self.n + a[1] - 1, (b[0] - 1) * self.n + b[1] - 1
        arr[i], arr[j] = arr[j], arr[i]
        return replace(self, params=tuple(arr))

    def is_one(self) -> bool:
        return not self.factors

    def describe(self) -> str:
        if not self.factors:
            return "1"
        return " * ".join(f"{f_label(c, self.n)}^({e})" for c, e in self.factors)


def _sorted_factors(d: dict) -> tuple:
    return tuple(sorted(((c, e) for c, e in d.items() if e != 0), key=lambda t: t[0]))


def standard_params(n: int) -> tuple:
    """Slot (I,i) carries 2l^I_(n-i+1)."""
    return tuple(two_ell(n - i + 1, I) for I in (1, 2) for i in range(1, n + 1))


def det_normalize(h: HWFunction) -> HWFunction:
    """Drop constant determinants, moving their sign into the coefficient phase."""
    coeff = h.coefficient
    keep = {}
    for cols, e in h.factors:
        if e == 0:
            continue
        s = constant_sign(cols, h.n)
        if s is None:
            keep[cols] = keep.get(cols, AffineForm(0)) + e
        elif s < 0:
            coeff = coeff * GammaProduct(phase=e)
    return replace(h, factors=_sorted_factors(keep), coefficient=coeff)


# ---------------------------------------------------------------- elementary steps


@dataclass(frozen=True)
class Step:
    kind: str  # "between", "S1", "S2"
    k: int = 0
    argument: AffineForm | None = None
    beta: GammaProduct | None = None
    state: str = ""
    params: tuple = ()

    def label(self) -> str:
        return "S12" if self.kind == "between" else f"{self.kind}_{self.k},{self.k + 1}"


def between_step(h: HWFunction) -> tuple[HWFunction, Step]:
    n = h.n
    w = h.p(1, n) - h.p(2, 1)
    out = h.with_factor(f_columns(n, n, 1), w).swapped((1, n), (2, 1))
    out = det_normalize(out)
    return out, Step("between", 0, w, None, out.describe(), out.params)


def _within(site: int, k: int, h: HWFunction) -> tuple[HWFunction, Step]:
    n = h.n
    if not 1 <= k < n:
        raise ValueError(f"slot index {k} out of range")
    w = h.p(site, k + 1) - h.p(site, k)
    if w.is_constant() and w.const.denominator == 1 and w.const <= 0:
        raise DegenerateArgument(f"argument {w} gives a Beta pole")
    moved, fixed = ColumnVector(site, k), ColumnVector(site, k + 1)
    active = [(c, e) for c, e in h.factors if moved in c and fixed not in c]
    if len(active) != 1:
        raise NotBetaAdmissible(f"{len(active)} active factors for the site-{site} shift {k},{k + 1}")
    cols, v = active[0]
    source = tuple(fixed if c == moved else c for c in cols)
    b = beta(w, v + 1)
    d = h.factor_map()
    d[cols] = v + w
    if constant_sign(source, n) is None:
        d[source] = d.get(source, AffineForm(0)) - w
    # a constant source only contributes a w-dependent constant: contour normalization
    out = replace(h, factors=_sorted_factors(d), coefficient=h.coefficient * b)
    out = det_normalize(out.swapped((site, k), (site, k + 1)))
    return out, Step(f"S{site}", k, w, b, out.describe(), out.params)


def beta_step_S1(k: int, h: HWFunction) -> tuple[HWFunction, Step]:
    return _within(1, k, h)


def beta_step_S2(k: int, h: HWFunction) -> tuple[HWFunction, Step]:
    return _within(2, k, h)


def run_sequence(ops: Iterable[tuple], h: HWFunction) -> tuple[HWFunction, list[Step]]:
    """Apply ("between",), ("S1", k), ("S2", k) in the listed order (first acts first)."""
    trace = []
    for op in ops:
        if op[0] == "between":
            h, st = between_step(h)
        elif op[0] == "S1":
            h, st = beta_step_S1(op[1], h)
        elif op[0] == "S2":
            h, st = beta_step_S2(op[1], h)
        else:
            raise ValueError(op)
        trace.append(st)
    return h, trace


# ---------------------------------------------------------------- sequences


def ops_i1(n: int, i: int) -> list[tuple]:
    """Swap slot (1,i) with (2,1), 1 <= i <= n-1, through (1,n)."""
    if not 1 <= i <= n - 1:
        raise ValueError("1 <= i <= n-1 required")
    ops: list[tuple] = [("between",)]
    ops += [("S1", n - k) for k in range(1, n - i)]
    ops += [("S1", i)]
    ops += [("S1", i + j) for j in range(1, n - i)]
    ops += [("between",)]
    return ops


def ops_i2(n: int, i: int) -> list[tuple]:
    """Swap slot (1,n) with (2,i), 2 <= i <= n, through (2,1)."""
    if not 2 <= i <= n:
        raise ValueError("2 <= i <= n required")
    ops: list[tuple] = [("between",)]
    ops += [("S2", k) for k in range(1, i - 1)]
    ops += [("S2", i - 1)]
    ops += [("S2", k) for k in range(i - 2, 0, -1)]
    ops += [("between",)]
    return ops


def closed_form_i1(h: HWFunction, i: int) -> GammaProduct:
    """Product of Betas for ops_i1 read off the array before the sequence."""
    n = h.n
    q = {s: h.p(1, s) for s in range(1, n + 1)}
    lb, la = q[i], h.p(2, 1)
    g = GammaProduct.one()
    for k in range(1, n - i):
        g = g * beta(la - q[n - k], q[n - k + 1] - la + 1)
    g = g * beta(la - lb, q[i + 1] - la + 1)
    for j in range(1, n - i):
        g = g * beta(q[i + j] - lb, q[i + j + 1] - q[i + j] + 1)
    return g


def closed_form_i2(h: HWFunction, i: int) -> GammaProduct:
    n = h.n
    r = {s: h.p(2, s) for s in range(1, n + 1)}
    la_bar, lb = h.p(1, n), r[i]
    g = GammaProduct.one()
    for k in range(1, i - 1):
        g = g * beta(r[k + 1] - la_bar, la_bar - r[k] + 1)
    g = g * beta(lb - la_bar, la_bar - r[i - 1] + 1)
    for k in range(1, i - 1):
        g = g * beta(lb - r[k + 1], r[k + 1] - r[k] + 1)
    return g


@dataclass
class SequenceResult:
    state: HWFunction
    coefficient: GammaProduct
    closed_form: GammaProduct
    trace: list = field(default_factory=list)
    permutation: tuple = ()

    @property
    def agrees(self) -> bool:
        return strip_phase(self.coefficient).equals(strip_phase(self.closed_form))

    @property
    def sign_phase(self) -> AffineForm:
        return self.coefficient.phase - self.closed_form.phase


def strip_phase(g: GammaProduct) -> GammaProduct:
    return GammaProduct(g.num, g.den, g.factors, 0)


def _start(n: int, params) -> HWFunction:
    return HWFunction.one(n, params)


def beta_sequence_S12_i1(n: int, i: int, params: Sequence | None = None, start: HWFunction | None = None) -> SequenceResult:
    h0 = start if start is not None else _start(n, params)
    h, trace = run_sequence(ops_i1(n, i), h0)
    perm = ((1, i), (2, 1))
    _check_permutation(h0, h, [perm])
    return SequenceResult(h, h.coefficient / h0.coefficient, closed_form_i1(h0, i), trace, perm)


def beta_sequence_S12_i2(n: int, i: int, params: Sequence | None = None, start: HWFunction | None = None) -> SequenceResult:
    h0 = start if start is not None else _start(n, params)
    h, trace = run_sequence(ops_i2(n, i), h0)
    perm = ((1, n), (2, i))
    _check_permutation(h0, h, [perm])
    return SequenceResult(h, h.coefficient / h0.coefficient, closed_form_i2(h0, i), trace, perm)


def _check_permutation(before: HWFunction, after: HWFunction, swaps: Sequence[tuple]) -> None:
    expected = before
    for a, b in swaps:
        expected = expected.swapped(a, b)
    if expected.params != after.params:
        raise AssertionError("parameter array is not the declared permutation")


def beta_sequence_S12_i(n: int, i: int, params: Sequence | None = None) -> SequenceResult:
    """1-to-1 sequence exchanging 2l^1_i and 2l^2_i (parameter index i, slot n-i+1)."""
    if not 1 <= i <= n:
        raise ValueError("1 <= i <= n required")
    h0 = _start(n, params)
    s = n - i + 1
    if s == 1:
        res = beta_sequence_S12_i1(n, 1, start=h0)
        h, trace, closed = res.state, res.trace, res.closed_form
    elif s == n:
        res = beta_sequence_S12_i2(n, n, start=h0)
        h, trace, closed = res.state, res.trace, res.closed_form
    else:
        # block 1: (1,s) <-> (2,1)
        h1, t1 = run_sequence(ops_i1(n, s), h0)
        c1 = closed_form_i1(h0, s)
        # block 2: (2,1) <-> (2,s) as the within-site-2 part of ops_i2
        ops2 = ops_i2(n, s)[1:-1]
        h2, t2 = run_sequence(ops2, h1)
        c2 = _closed_form_site2_block(h1, s)
        # between, then (1,s) <-> (1,n) as the within-site-1 part of ops_i1, then between
        h3, t3 = run_sequence([("between",)], h2)
        ops4 = ops_i1(n, s)[1:-1]
        h4, t4 = run_sequence(ops4, h3)
        c3 = _closed_form_site1_block(h3, s)
        h, t5 = run_sequence([("between",)], h4)
        trace = t1 + t2 + t3 + t4 + t5
        closed = c1 * c2 * c3
    perm = ((1, s), (2, s))
    _check_permutation(h0, h, [perm])
    if not h.is_one():
        raise NonUnitResidual(f"final state {h.describe()}")
    return SequenceResult(h, h.coefficient, closed, trace, perm)


def _closed_form_site2_block(h: HWFunction, i: int) -> GammaProduct:
    """Betas of the site-2 chain moving the value at (2,1) to (2,i) on F_i.

    Same shape as ``closed_form_i2`` with the partner p(1,i) in place of the
    value that the opening between step parked at (1,n)."""
    n = h.n
    r = {s: h.p(2, s) for s in range(1, n + 1)}
    r[1] = h.p(1, i)
    mover, lb = h.p(2, 1), h.p(2, i)
    g = GammaProduct.one()
    for k in range(1, i - 1):
        g = g * beta(r[k + 1] - mover, mover - r[k] + 1)
    g = g * beta(lb - mover, mover - r[i - 1] + 1)
    for k in range(1, i - 1):
        g = g * beta(lb - r[k + 1], r[k + 1] - r[k] + 1)
    return g


def _closed_form_site1_block(h: HWFunction, i: int) -> GammaProduct:
    """Betas of the site-1 chain exchanging (1,i) and (1,n) on F_n; p(2,1) is the partner."""
    n = h.n
    q = {s: h.p(1, s) for s in range(1, n + 1)}
    mover, lb = q[n], q[i]
    q[n] = h.p(2, 1)
    g = GammaProduct.one()
    for k in range(1, n - i):
        g = g * beta(mover - q[n - k], q[n - k + 1] - mover + 1)
    g = g * beta(mover - lb, q[i + 1] - mover + 1)
    for j in range(1, n - i):
        g = g * beta(q[i + j] - lb, q[i + j + 1] - q[i + j] + 1)
    return g


def s12n_closed_form(n: int, params: Sequence | None = None) -> GammaProduct:
    """Full swap 2l^1_n <-> 2l^2_n: prod_{k=1}^{n-1} B(2l^2_n-2l^1_(k+1), 2l^1_k-2l^2_n+1)
    * prod_{k=1}^{n-2} B(2l^1_(k+1)-2l^1_n, 2l^1_k-2l^1_(k+1)+1)."""
    h = _start(n, params)
    l1 = {n - s + 1: h.p(1, s) for s in range(1, n + 1)}
    l2n = h.p(2, 1)
    g = GammaProduct.one()
    for k in range(1, n):
        g = g * beta(l2n - l1[k + 1], l1[k] - l2n + 1)
    for k in range(1, n - 1):
        g = g * beta(l1[k + 1] - l1[n], l1[k] - l1[k + 1] + 1)
    return g


def s12n_sequence(n: int, params: Sequence | None = None) -> SequenceResult:
    res = beta_sequence_S12_i(n, n, params)
    return SequenceResult(res.state, res.coefficient, s12n_closed_form(n, params), res.trace, res.permutation)


def coefficient_at(coefficient: GammaProduct, n: int, values: Sequence, var=U) -> LaurentLeading:
    """Leading term of a symbolic sequence coefficient at a rational parameter point.

    ``values`` follow the slot order of ``standard_params``. The point is
    approached along slot j -> value_j + (j+1) var, so coinciding parameters
    appear as poles or zeros of definite order instead of a failure.
    """
    if len(values) != 2 * n:
        raise ValueError("parameter array must have 2n entries")
    assignment = {}
    for j, (sym, val) in enumerate(zip(standard_params(n), values)):
        (param,) = sym.params()
        assignment[param] = AffineForm.of(val) + AffineForm.of(var) * (j + 1)
    return gamma_pole_order(coefficient, assignment, var)


# ---------------------------------------------------------------- coordinate expansion


def column_entries(c: ColumnVector, n: int) -> list[ParamPoly]:
    """x^{I,i} = (x_1, ..., x_(n-i), 1, 0, ..., 0) with coordinate symbols."""
    out = []
    for a in range(1, n + 1):
        if a <= n - c.slot:
            out.append(ParamPoly.of(aux(f"x{c.site}.{c.slot}_{a}")))
        else:
            out.append(ParamPoly.of(1 if a == n - c.slot + 1 else 0))
    return out


def _perm_parity(p: Sequence[int]) -> int:
    inv = sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])
    return -1 if inv % 2 else 1


def expand_det(columns: Sequence[ColumnVector], n: int) -> ParamPoly:
    """Determinant of the listed columns as a polynomial in the coordinates."""
    cols = [column_entries(c, n) for c in columns]
    total = ParamPoly()
    for p in itertools.permutations(range(n)):
        term = ParamPoly.of(_perm_parity(p))
        for j, row in enumerate(p):
            term = term * cols[j][row]
            if term.is_zero():
                break
        total = total + term
    return total


def between_shift_form(n: int) -> ParamPoly:
    """x^{2,1}_1 - X with X = row * U^(-1) * col built from the unit upper-triangular
    matrix U[k][j] = x^{1,k}_(n+1-j), row_j = x^{2,1}_(n+1-j), col_k = x^{1,k}_1."""
    c1 = [column_entries(ColumnVector(1, k), n) for k in range(1, n)]
    y = column_entries(ColumnVector(2, 1), n)
    m = n - 1
    Umat = [[c1[k][n - j - 1] for j in range(m)] for k in range(m)]
    col = [c1[k][0] for k in range(m)]
    z = [ParamPoly()] * m
    for k in reversed(range(m)):
        acc = col[k]
        for j in range(k + 1, m):
            acc = acc - Umat[k][j] * z[j]
        z[k] = acc
    X = ParamPoly()
    for j in range(m):
        X = X + y[n - j - 1] * z[j]
    return y[0] - X


def between_det_constant(n: int) -> Fraction:
    """The constant c in x^{2,1}_1 - X = c det(x^{1,1}, ..., x^{1,n-1}, x^{2,1})."""
    d = expand_det(f_columns(n, n, 1), n)
    lhs = between_shift_form(n)
    for c in (Fraction(1), Fraction(-1)):
        if (lhs - d * c).is_zero():
            return c
    raise AssertionError("shift form is not proportional to the determinant")
