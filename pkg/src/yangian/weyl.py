"""Normal-ordered Weyl algebra with Laurent x-powers, acting on generalized monomials.

A ``WeylOp`` is a finite sum of c * x^a d^b with all x to the left. The x-exponents
may be negative (needed for solved constraints); the product rule
d^k x^m = sum_j C(k,j) [m]_j x^(m-j) d^(k-j) holds for any integer m.

Functions are sums of generalized monomials prod_v x_v^(e_v) whose exponents are
affine forms, so symbolic degrees such as x^(2l) act exactly.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from .symbolics import AffineForm, Param, ParamPoly, falling


@dataclass(frozen=True, order=True)
class VarId:
    """A canonical pair (x, d). ``site`` is a tuple such as (I,) or (I, i)."""

    site: tuple
    comp: int

    def __str__(self) -> str:
        s = ",".join(map(str, self.site))
        return f"x{s}_{self.comp}" if s else f"x_{self.comp}"

    def dname(self) -> str:
        return "d" + str(self)[1:]


def var(comp: int, *site: int) -> VarId:
    return VarId(tuple(site), comp)


Exps = tuple  # sorted tuple[(VarId, int)]
Key = tuple  # (xexps, dexps)


def _merge(a: Exps, b: Exps) -> Exps:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted((v, e) for v, e in d.items() if e))


@lru_cache(maxsize=200_000)
def _mono_product(k1: Key, k2: Key) -> tuple[tuple[Key, Fraction], ...]:
    """(x^a d^b)(x^c d^e) in normal order, as (key, rational coefficient) pairs."""
    xa, da = k1
    xc, de = k2
    dmap = dict(da)
    xmap = dict(xc)
    shared = [v for v in dmap if v in xmap]
    if not shared:
        return (((_merge(xa, xc), _merge(da, de)), Fraction(1)),)
    options = []
    for v in shared:
        k, m = dmap[v], xmap[v]
        top = min(k, m) if m >= 0 else k
        opts = []
        for j in range(top + 1):
            c = math.comb(k, j) * _int_falling(m, j)
            if c:
                opts.append((j, c))
        options.append(opts)
    out: dict[Key, Fraction] = {}
    for choice in itertools.product(*options):
        coeff = Fraction(1)
        xs = dict(xmap)
        ds = dict(dmap)
        for v, (j, c) in zip(shared, choice):
            coeff *= c
            xs[v] -= j
            ds[v] -= j
        xn = _merge(xa, tuple(sorted((v, e) for v, e in xs.items() if e)))
        dn = _merge(tuple(sorted((v, e) for v, e in ds.items() if e)), de)
        key = (xn, dn)
        out[key] = out.get(key, 0) + coeff
    return tuple((k, c) for k, c in out.items() if c)


def _int_falling(m: int, j: int) -> int:
    r = 1
    for t in range(j):
        r *= m - t
    return r


class WeylOp:
    """Sparse sum of normal-ordered monomials with ParamPoly coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Key, object] | None = None):
        t = {}
        for k, c in (terms or {}).items():
            c = ParamPoly.of(c)
            if not c.is_zero():
                t[k] = c
        self.terms = t

    # constructors
    @staticmethod
    def const(c) -> "WeylOp":
        return WeylOp({((), ()): c})

    @staticmethod
    def x(v: VarId, power: int = 1) -> "WeylOp":
        return WeylOp({(((v, power),), ()): 1}) if power else WeylOp.const(1)

    @staticmethod
    def d(v: VarId, power: int = 1) -> "WeylOp":
        return WeylOp({((), ((v, power),)): 1}) if power else WeylOp.const(1)

    @staticmethod
    def of(x) -> "WeylOp":
        return x if isinstance(x, WeylOp) else WeylOp.const(x)

    # algebra
    def __add__(self, other):
        other = WeylOp.of(other)
        t = dict(self.terms)
        for k, c in other.terms.items():
            t[k] = t[k] + c if k in t else c
        return WeylOp(t)

    __radd__ = __add__

    def __neg__(self):
        return WeylOp({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-WeylOp.of(other))

    def __rsub__(self, other):
        return WeylOp.of(other) - self

    def scale(self, c) -> "WeylOp":
        c = ParamPoly.of(c)
        return WeylOp({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, WeylOp):
            return weyl_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, WeylOp):
            other = WeylOp.of(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def subs(self, mapping: Mapping[Param, object]) -> "WeylOp":
        return WeylOp({k: c.subs(mapping) for k, c in self.terms.items()})

    def variables(self) -> set[VarId]:
        out = set()
        for xs, ds in self.terms:
            out.update(v for v, _ in xs)
            out.update(v for v, _ in ds)
        return out

    def params(self) -> set[Param]:
        out = set()
        for c in self.terms.values():
            out |= c.params()
        return out

    def expand_in(self, p: Param) -> dict[int, "WeylOp"]:
        """Split by powers of the parameter p."""
        out: dict[int, dict] = {}
        for k, c in self.terms.items():
            for e, cc in c.collect(p).items():
                out.setdefault(e, {})[k] = cc
        return {e: WeylOp(t) for e, t in out.items()}

    def scalar_value(self) -> ParamPoly | None:
        """The coefficient if self is a multiple of the identity, else None."""
        if not self.terms:
            return ParamPoly()
        if set(self.terms) == {((), ())}:
            return self.terms[((), ())]
        return None

    def max_x_gain(self) -> int:
        return max(
            (sum(e for _, e in xs) - sum(e for _, e in ds) for xs, ds in self.terms),
            default=0,
        )

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda t: (t[0][0], t[0][1]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (xs, ds), c in self.sorted_items():
            body = [f"{v}" if e == 1 else f"{v}^{e}" for v, e in xs]
            body += [v.dname() if e == 1 else f"{v.dname()}^{e}" for v, e in ds]
            ctext = str(c)
            if body:
                if ctext == "1":
                    parts.append("*".join(body))
                elif ctext == "-1":
                    parts.append("-" + "*".join(body))
                else:
                    parts.append(f"({ctext})*" + "*".join(body))
            else:
                parts.append(f"({ctext})")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"WeylOp({self})"


def weyl_mul(f: WeylOp, g: WeylOp) -> WeylOp:
    """Normal-ordered product f*g."""
    out: dict[Key, ParamPoly] = {}
    for k1, c1 in f.terms.items():
        for k2, c2 in g.terms.items():
            c12 = c1 * c2
            for key, r in _mono_product(k1, k2):
                t = c12 * r
                out[key] = out[key] + t if key in out else t
    return WeylOp(out)


def op_product(ops: Iterable[WeylOp]) -> WeylOp:
    out = WeylOp.const(1)
    for o in ops:
        out = weyl_mul(out, o)
    return out


def commutator(f: WeylOp, g: WeylOp) -> WeylOp:
    return weyl_mul(f, g) - weyl_mul(g, f)


def substitute_generators(
    op: WeylOp, xmap: Mapping[VarId, WeylOp], dmap: Mapping[VarId, WeylOp]
) -> WeylOp:
    """Image of op under an algebra map given on generators (x-powers must be >= 0)."""
    out = WeylOp()
    for (xs, ds), c in op.terms.items():
        term = WeylOp.const(c)
        for v, e in xs:
            if e < 0:
                raise ValueError("negative power in generator substitution")
            img = xmap.get(v, WeylOp.x(v))
            for _ in range(e):
                term = weyl_mul(term, img)
        for v, e in ds:
            img = dmap.get(v, WeylOp.d(v))
            for _ in range(e):
                term = weyl_mul(term, img)
        out = out + term
    return out


# ---------------------------------------------------------------- functions

GenMono = tuple  # sorted tuple[(VarId, AffineForm)] with nonzero exponents


def gen_mono(exps: Mapping[VarId, object]) -> GenMono:
    items = []
    for v, e in exps.items():
        e = AffineForm.of(e)
        if e != 0:
            items.append((v, e))
    return tuple(sorted(items, key=lambda t: t[0]))


def mono_str(m: GenMono) -> str:
    if not m:
        return "1"
    parts = []
    for v, e in m:
        parts.append(str(v) if e == 1 else f"{v}^({e})")
    return "*".join(parts)


def act_on_mono(op: WeylOp, mono: GenMono) -> list[tuple[GenMono, ParamPoly]]:
    """Exact action of op on a single generalized monomial (terms not merged)."""
    exps = dict(mono)
    out = []
    for (xs, ds), c in op.terms.items():
        coeff = c
        new = dict(exps)
        dead = False
        for v, k in ds:
            e = new.get(v, AffineForm(0))
            if e.is_constant() and e.const.denominator == 1 and 0 <= e.const < k:
                dead = True
                break
            coeff = coeff * falling(e, k)
            new[v] = e - k
        if dead or coeff.is_zero():
            continue
        for v, k in xs:
            new[v] = new.get(v, AffineForm(0)) + k
        out.append((gen_mono(new), coeff))
    return out


class Fn:
    """Finite linear combination of generalized monomials with ParamPoly coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[GenMono, object] | None = None):
        t = {}
        for m, c in (terms or {}).items():
            c = ParamPoly.of(c)
            if not c.is_zero():
                t[m] = c
        self.terms = t

    @staticmethod
    def monomial(exps: Mapping[VarId, object] | None = None, coeff=1) -> "Fn":
        return Fn({gen_mono(exps or {}): coeff})

    @staticmethod
    def one() -> "Fn":
        return Fn.monomial()

    def __add__(self, other: "Fn") -> "Fn":
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t[m] + c if m in t else c
        return Fn(t)

    def __neg__(self):
        return Fn({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Fn":
        c = ParamPoly.of(c)
        return Fn({m: v * c for m, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, Fn) and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def subs(self, mapping) -> "Fn":
        out = Fn()
        for m, c in self.terms.items():
            mm = gen_mono({v: e.subs(mapping) for v, e in m})
            out = out + Fn({mm: c.subs(mapping)})
        return out

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*{mono_str(m)}" for m, c in sorted(self.terms.items(), key=lambda t: str(t[0])))


def apply(op: WeylOp, f: Fn) -> Fn:
    """Action of a Weyl operator on a function."""
    out: dict[GenMono, ParamPoly] = {}
    for m, c in f.terms.items():
        for mm, cc in act_on_mono(op, m):
            t = cc * c
            out[mm] = out[mm] + t if mm in out else t
    return Fn(out)


def monomial_basis(variables: Iterable[VarId], degree: int) -> list[GenMono]:
    """All monomials with nonnegative integer exponents and total degree <= degree."""
    vs = sorted(variables)
    basis = []
    for total in range(degree + 1):
        for combo in itertools.combinations_with_replacement(vs, total):
            exps: dict = {}
            for v in combo:
                exps[v] = exps.get(v, 0) + 1
            basis.append(gen_mono(exps))
    return basis


@dataclass(frozen=True)
class ActionMatrix:
    rows: tuple  # output basis
    cols: tuple  # input basis
    entries: dict  # (row, col) -> ParamPoly

    def dense(self) -> list[list[ParamPoly]]:
        return [[self.entries.get((r, c), ParamPoly()) for c in range(len(self.cols))] for r in range(len(self.rows))]


def matrix_of_action(op: WeylOp, variables: Iterable[VarId], degree: int) -> ActionMatrix:
    """Matrix of op from the degree-<=d monomial basis into the spanned output monomials."""
    variables = sorted(set(variables))
    cols = monomial_basis(variables, degree)
    gain = max(op.max_x_gain(), 0)
    rows = monomial_basis(variables, degree + gain)
    index = {m: i for i, m in enumerate(rows)}
    entries = {}
    for j, m in enumerate(cols):
        image = apply(op, Fn({m: 1}))
        for mm, c in image.terms.items():
            if mm not in index:
                index[mm] = len(rows)
                rows.append(mm)
            entries[(index[mm], j)] = c
    return ActionMatrix(tuple(rows), tuple(cols), entries)
