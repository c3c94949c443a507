"""Exact coefficient arithmetic: parameters, affine forms, polynomials and Gamma products.

Everything here is immutable and works over ``fractions.Fraction``; no floats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import NonAffineResidual, NonGenericResidual

_KIND_RANK = {"ell": 0, "u": 1, "v": 2, "aux": 3}


@dataclass(frozen=True)
class Param:
    """A named symbol. ``ell`` parameters carry (site, pos) indices."""

    kind: str
    site: int = 0
    pos: int = 0
    name: str = ""

    def __post_init__(self):
        if self.kind not in _KIND_RANK:
            raise ValueError(f"unknown parameter kind {self.kind!r}")

    def sort_key(self):
        return (_KIND_RANK[self.kind], self.site, self.pos, self.name)

    def __lt__(self, other: "Param") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        if self.kind == "ell":
            return f"2l^{self.site}_{self.pos}" if self.site else f"2l_{self.pos}"
        if self.name:
            return self.name
        return self.kind


def two_ell(pos: int, site: int = 0) -> "AffineForm":
    """The representation label 2l^site_pos as an affine form."""
    return AffineForm.of(Param("ell", site, pos))


U = Param("u")
V = Param("v")


def aux(name: str) -> Param:
    return Param("aux", name=name)


Scalar = Union[int, Fraction]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


# ---------------------------------------------------------------- affine forms


class AffineForm:
    """constant + sum_p c_p * p, with rational coefficients and no zero entries."""

    __slots__ = ("const", "terms", "_hash")

    def __init__(self, const: Scalar = 0, terms: Mapping[Param, Scalar] | None = None):
        self.const = _frac(const)
        items = []
        if terms:
            for p, c in terms.items():
                c = _frac(c)
                if c:
                    items.append((p, c))
        items.sort(key=lambda t: t[0].sort_key())
        self.terms = tuple(items)
        self._hash = None

    @staticmethod
    def of(x) -> "AffineForm":
        if isinstance(x, AffineForm):
            return x
        if isinstance(x, Param):
            return AffineForm(0, {x: 1})
        return AffineForm(_frac(x))

    def is_constant(self) -> bool:
        return not self.terms

    def is_integer(self) -> bool:
        return not self.terms and self.const.denominator == 1

    def coeff(self, p: Param) -> Fraction:
        for q, c in self.terms:
            if q == p:
                return c
        return Fraction(0)

    def params(self) -> set[Param]:
        return {p for p, _ in self.terms}

    def linear_part(self) -> "AffineForm":
        return AffineForm(0, dict(self.terms))

    def _combine(self, other, sign: int) -> "AffineForm":
        other = AffineForm.of(other)
        d = dict(self.terms)
        for p, c in other.terms:
            d[p] = d.get(p, 0) + sign * c
        return AffineForm(self.const + sign * other.const, d)

    def __add__(self, other):
        if isinstance(other, ParamPoly):
            return self.to_poly() + other
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, ParamPoly):
            return self.to_poly() - other
        return self._combine(other, -1)

    def __rsub__(self, other):
        return AffineForm.of(other)._combine(self, -1)

    def __neg__(self):
        return AffineForm(-self.const, {p: -c for p, c in self.terms})

    def __mul__(self, other):
        if isinstance(other, (AffineForm, ParamPoly, Param)):
            return self.to_poly() * ParamPoly.of(other)
        k = _frac(other)
        return AffineForm(self.const * k, {p: c * k for p, c in self.terms})

    __rmul__ = __mul__

    def __truediv__(self, other):
        k = _frac(other)
        return AffineForm(self.const / k, {p: c / k for p, c in self.terms})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Param)):
            other = AffineForm.of(other)
        if not isinstance(other, AffineForm):
            return NotImplemented
        return self.const == other.const and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.const, self.terms))
        return self._hash

    def sort_key(self):
        return (tuple((p.sort_key(), c) for p, c in self.terms), self.const)

    def subs(self, mapping: Mapping[Param, object]) -> "AffineForm":
        out = AffineForm(self.const)
        rest = {}
        for p, c in self.terms:
            if p in mapping:
                out = out + AffineForm.of(mapping[p]) * c
            else:
                rest[p] = c
        return out + AffineForm(0, rest)

    def evaluate(self, mapping: Mapping[Param, Scalar]) -> Fraction:
        r = self.subs(mapping)
        if not r.is_constant():
            raise NonAffineResidual(f"unassigned parameters in {r}")
        return r.const

    def to_poly(self) -> "ParamPoly":
        d = {(): self.const} if self.const else {}
        for p, c in self.terms:
            d[((p, 1),)] = c
        return ParamPoly(d)

    def __str__(self) -> str:
        parts = []
        for p, c in self.terms:
            parts.append(_term_str(c, str(p), bool(parts)))
        if self.const or not parts:
            parts.append(_term_str(self.const, "", bool(parts)))
        return "".join(parts)

    def __repr__(self) -> str:
        return f"AffineForm({self})"


def _term_str(c: Fraction, body: str, follow: bool) -> str:
    sign = "-" if c < 0 else ("+" if follow else "")
    mag = abs(c)
    if not body:
        s = str(mag)
    elif mag == 1:
        s = body
    else:
        s = f"{mag}*{body}"
    return sign + s


def af(x) -> AffineForm:
    return AffineForm.of(x)


# ---------------------------------------------------------------- polynomials

Mono = tuple  # tuple[tuple[Param, int], ...] sorted by parameter


def _mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for p, e in b:
        d[p] = d.get(p, 0) + e
    return tuple(sorted(d.items(), key=lambda t: t[0].sort_key()))


class ParamPoly:
    """Sparse multivariate polynomial in Params with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Mono, Scalar] | None = None):
        self._terms = {m: _frac(c) for m, c in (terms or {}).items() if c}
        self._hash = None

    @staticmethod
    def of(x) -> "ParamPoly":
        if isinstance(x, ParamPoly):
            return x
        if isinstance(x, AffineForm):
            return x.to_poly()
        if isinstance(x, Param):
            return ParamPoly({((x, 1),): 1})
        c = _frac(x)
        return ParamPoly({(): c} if c else {})

    @property
    def terms(self) -> dict:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(m == () for m in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise NonAffineResidual(f"{self} is not constant")
        return self._terms.get((), Fraction(0))

    def params(self) -> set[Param]:
        return {p for m in self._terms for p, _ in m}

    def __add__(self, other):
        other = ParamPoly.of(other)
        d = dict(self._terms)
        for m, c in other._terms.items():
            d[m] = d.get(m, 0) + c
        return ParamPoly(d)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-ParamPoly.of(other))

    def __rsub__(self, other):
        return ParamPoly.of(other) - self

    def __mul__(self, other):
        if not isinstance(other, ParamPoly):
            if isinstance(other, (int, Fraction)):
                k = _frac(other)
                return ParamPoly({m: c * k for m, c in self._terms.items()})
            other = ParamPoly.of(other)
        d: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                d[m] = d.get(m, 0) + c1 * c2
        return ParamPoly(d)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = ParamPoly.of(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, AffineForm, Param)):
            other = ParamPoly.of(other)
        if not isinstance(other, ParamPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def subs(self, mapping: Mapping[Param, object]) -> "ParamPoly":
        cache: dict = {}
        out: dict = {}
        acc = ParamPoly()
        for m, c in self._terms.items():
            fixed = []
            term = ParamPoly.of(c)
            for p, e in m:
                if p in mapping:
                    key = (p, e)
                    if key not in cache:
                        cache[key] = ParamPoly.of(mapping[p]) ** e
                    term = term * cache[key]
                else:
                    fixed.append((p, e))
            if fixed:
                term = term * ParamPoly({tuple(fixed): 1})
            if term.is_constant() and not fixed:
                v = term._terms.get((), 0)
                if v:
                    out[()] = out.get((), 0) + v
            else:
                acc = acc + term
        return acc + ParamPoly(out)

    def evaluate(self, mapping: Mapping[Param, Scalar]) -> Fraction:
        total = Fraction(0)
        for m, c in self._terms.items():
            t = c
            for p, e in m:
                if p not in mapping:
                    raise NonAffineResidual(f"parameter {p} unassigned")
                t *= _frac(mapping[p]) ** e
            total += t
        return total

    def degree(self, p: Param) -> int:
        return max((dict(m).get(p, 0) for m in self._terms), default=0)

    def collect(self, p: Param) -> dict[int, "ParamPoly"]:
        """Coefficients as a polynomial in p: {power: coefficient polynomial}."""
        out: dict[int, dict] = {}
        for m, c in self._terms.items():
            e = 0
            rest = []
            for q, k in m:
                if q == p:
                    e = k
                else:
                    rest.append((q, k))
            out.setdefault(e, {})
            out[e][tuple(rest)] = out[e].get(tuple(rest), 0) + c
        return {e: ParamPoly(d) for e, d in out.items() if ParamPoly(d)._terms}

    def as_affine(self) -> AffineForm | None:
        d = {}
        const = Fraction(0)
        for m, c in self._terms.items():
            if m == ():
                const = c
            elif len(m) == 1 and m[0][1] == 1:
                d[m[0][0]] = c
            else:
                return None
        return AffineForm(const, d)

    def sorted_items(self):
        return sorted(
            self._terms.items(),
            key=lambda t: (-sum(e for _, e in t[0]), [(p.sort_key(), -e) for p, e in t[0]]),
        )

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.sorted_items():
            body = "*".join(str(p) if e == 1 else f"{p}^{e}" for p, e in m)
            parts.append(_term_str(c, body, bool(parts)))
        return "".join(parts)

    def __repr__(self) -> str:
        return f"ParamPoly({self})"


def falling(a, k: int) -> ParamPoly:
    """Falling factorial a(a-1)...(a-k+1) as a polynomial."""
    a = ParamPoly.of(a)
    out = ParamPoly.of(1)
    for j in range(k):
        out = out * (a - j)
    return out


def binomial_poly(a, k: int) -> ParamPoly:
    return falling(a, k) * Fraction(1, math.factorial(k))


# ---------------------------------------------------------------- Gamma products


def _floor(c: Fraction) -> int:
    return c.numerator // c.denominator


def _is_pole(a: AffineForm) -> bool:
    return a.is_constant() and a.const.denominator == 1 and a.const <= 0


def _shift_class(a: AffineForm) -> tuple[AffineForm, int]:
    """Split a = base + k with k integer; base fixed per shift class."""
    c = a.const
    if a.terms:
        k = _floor(c)
    elif c.denominator == 1:
        if c <= 0:
            return a, 0
        k = int(c) - 1
    else:
        k = _floor(c)
    return a - k, k


class GammaProduct:
    """(num / prod(den)) * (-1)^phase * prod Gamma(arg)^power.

    ``den`` is a multiset of affine factors, which keeps common denominators
    trivial to form. ``phase`` is an affine exponent of -1; integer parts are
    folded into the sign of ``num``.
    """

    __slots__ = ("num", "den", "factors", "phase")

    def __init__(
        self,
        num=1,
        den: Iterable[AffineForm] = (),
        factors: Mapping[AffineForm, int] | Iterable[tuple[AffineForm, int]] = (),
        phase=0,
    ):
        num = ParamPoly.of(num)
        dens = []
        for d in den:
            d = AffineForm.of(d)
            if d.is_constant() and d.const != 0:
                num = num * (1 / d.const)
            else:
                dens.append(d)
        dens.sort(key=AffineForm.sort_key)
        merged: dict[AffineForm, int] = {}
        items = factors.items() if isinstance(factors, Mapping) else factors
        for arg, pw in items:
            arg = AffineForm.of(arg)
            merged[arg] = merged.get(arg, 0) + pw
        self.factors = tuple(
            sorted(((a, p) for a, p in merged.items() if p), key=lambda t: t[0].sort_key())
        )
        phase = AffineForm.of(phase)
        c = phase.const
        if c.denominator == 1:
            if c % 2:
                num = -num
            c = Fraction(0)
        else:
            c = c - 2 * _floor(c / 2)
        self.phase = AffineForm(c, dict(phase.terms))
        self.num = num
        self.den = tuple(dens)

    # constructors
    @staticmethod
    def one() -> "GammaProduct":
        return GammaProduct()

    @staticmethod
    def gamma(arg, power: int = 1) -> "GammaProduct":
        return GammaProduct(factors=[(AffineForm.of(arg), power)])

    @staticmethod
    def of(x) -> "GammaProduct":
        if isinstance(x, GammaProduct):
            return x
        return GammaProduct(num=x)

    # algebra
    def __mul__(self, other):
        other = GammaProduct.of(other)
        return GammaProduct(
            self.num * other.num,
            self.den + other.den,
            list(self.factors) + list(other.factors),
            self.phase + other.phase,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GammaProduct.of(other)
        if not other.num.is_constant():
            extra = other.num.as_affine()
            if extra is None:
                raise ValueError("division by a non-linear polynomial prefactor")
            inv_num, den_add = ParamPoly.of(1), [extra]
        else:
            cv = other.num.constant_value()
            if cv == 0:
                raise ZeroDivisionError("division by zero prefactor")
            inv_num, den_add = ParamPoly.of(1 / cv), []
        num = self.num * inv_num
        for d in other.den:
            num = num * d.to_poly()
        return GammaProduct(
            num,
            list(self.den) + den_add,
            list(self.factors) + [(a, -p) for a, p in other.factors],
            self.phase - other.phase,
        )

    def __neg__(self):
        return GammaProduct(-self.num, self.den, self.factors, self.phase)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def params(self) -> set[Param]:
        s = set(self.num.params()) | self.phase.params()
        for d in self.den:
            s |= d.params()
        for a, _ in self.factors:
            s |= a.params()
        return s

    def subs(self, mapping: Mapping[Param, object]) -> "GammaProduct":
        return GammaProduct(
            self.num.subs(mapping),
            [d.subs(mapping) for d in self.den],
            [(a.subs(mapping), p) for a, p in self.factors],
            self.phase.subs(mapping),
        )

    def canonical(self) -> "GammaProduct":
        """Rewrite every Gamma argument into its shift-class representative.

        Uses Gamma(z+1) = z Gamma(z); positive-integer constants become
        factorials and disappear. Idempotent.
        """
        num = self.num
        den = list(self.den)
        facs: list[tuple[AffineForm, int]] = []
        for a, pw in self.factors:
            base, k = _shift_class(a)
            if base.is_constant() and base.const == 1:
                # Gamma(1 + k) = k!
                num = num * Fraction(math.factorial(k)) ** pw
                continue
            if k == 0:
                facs.append((a, pw))
                continue
            facs.append((base, pw))
            if k > 0:
                lin = [base + j for j in range(k)]
            else:
                lin = [base - j for j in range(1, -k + 1)]
            up = (k > 0) == (pw > 0)
            for _ in range(abs(pw)):
                if up:
                    for f in lin:
                        num = num * f.to_poly()
                else:
                    den.extend(lin)
        return GammaProduct(num, den, facs, self.phase)

    def signature(self):
        c = self.canonical()
        return (c.factors, c.phase)

    def rational_part(self) -> tuple[ParamPoly, tuple[AffineForm, ...]]:
        c = self.canonical()
        return c.num, c.den

    def equals(self, other: "GammaProduct") -> bool:
        a, b = self.canonical(), GammaProduct.of(other).canonical()
        if (a.factors, a.phase) != (b.factors, b.phase):
            return a.num.is_zero() and b.num.is_zero()
        return _cross(a.num, b.den) == _cross(b.num, a.den)

    def evaluate(self, mapping: Mapping[Param, Scalar] | None = None) -> "GammaProduct":
        """Substitute and canonicalize; see ``as_rational`` for the exact value."""
        g = self.subs(mapping or {})
        if g.params():
            raise NonAffineResidual(f"unassigned parameters {sorted(map(str, g.params()))}")
        for d in g.den:
            if d.const == 0:
                raise ZeroDivisionError("prefactor pole at this point")
        for a, pw in g.factors:
            if _is_pole(a) and pw > 0:
                raise ZeroDivisionError(f"Gamma pole at argument {a}")
        return g.canonical()

    def as_rational(self) -> Fraction | None:
        c = self.canonical()
        if c.factors or c.phase != 0 or c.params():
            return None
        value = c.num.constant_value()
        for d in c.den:
            value /= d.const
        return value

    def __str__(self) -> str:
        parts = []
        numtxt = str(self.num)
        if self.den:
            dtxt = "*".join(f"({d})" for d in self.den)
            parts.append(f"({numtxt})/({dtxt})")
        elif numtxt != "1" or not (self.factors or self.phase != 0):
            parts.append(f"({numtxt})" if ("+" in numtxt[1:] or "-" in numtxt[1:]) else numtxt)
        if self.phase != 0:
            parts.append(f"(-1)^({self.phase})")
        for a, p in self.factors:
            g = "sqrt(pi)" if a == AffineForm(Fraction(1, 2)) else f"Gamma({a})"
            parts.append(g if p == 1 else f"{g}^{p}")
        return "*".join(parts) if parts else "1"

    def __repr__(self) -> str:
        return f"GammaProduct({self})"


def _cross(num: ParamPoly, den: Iterable[AffineForm]) -> ParamPoly:
    out = num
    for d in den:
        out = out * d.to_poly()
    return out


def beta(a, b) -> GammaProduct:
    """Euler Beta B(a,b) = Gamma(a) Gamma(b) / Gamma(a+b)."""
    a, b = AffineForm.of(a), AffineForm.of(b)
    return GammaProduct(factors=[(a, 1), (b, 1), (a + b, -1)])


class GammaSum:
    """Exact linear combination of Gamma products, grouped by canonical signature."""

    __slots__ = ("groups",)

    def __init__(self, groups: dict | None = None):
        self.groups = dict(groups or {})

    @staticmethod
    def of(*items: GammaProduct) -> "GammaSum":
        s = GammaSum()
        for g in items:
            s = s.add(g)
        return s

    def add(self, g: GammaProduct) -> "GammaSum":
        c = GammaProduct.of(g).canonical()
        if c.num.is_zero():
            return self
        key = (c.factors, c.phase)
        groups = dict(self.groups)
        if key in groups:
            n0, d0 = groups[key]
            groups[key] = _add_fractions(n0, d0, c.num, c.den)
        else:
            groups[key] = (c.num, c.den)
        if groups[key][0].is_zero():
            del groups[key]
        return GammaSum(groups)

    def __add__(self, other: "GammaSum") -> "GammaSum":
        out = self
        for (facs, ph), (n, d) in other.groups.items():
            out = out.add(GammaProduct(n, d, facs, ph))
        return out

    def __neg__(self):
        return GammaSum({k: (-n, d) for k, (n, d) in self.groups.items()})

    def __sub__(self, other: "GammaSum") -> "GammaSum":
        return self + (-other)

    def is_zero(self) -> bool:
        return not self.groups

    def scale(self, g) -> "GammaSum":
        """Multiply every term by a Gamma product or polynomial."""
        g = GammaProduct.of(g)
        out = GammaSum()
        for t in self.terms():
            out = out.add(t * g)
        return out

    def terms(self) -> list[GammaProduct]:
        return [GammaProduct(n, d, f, ph) for (f, ph), (n, d) in self.groups.items()]

    def __str__(self) -> str:
        if not self.groups:
            return "0"
        return " + ".join(str(t) for t in self.terms())


def _multiset_union(a: tuple, b: tuple) -> tuple[list, list, list]:
    """Return (lcm, lcm/a, lcm/b) for multisets of affine factors."""
    from collections import Counter

    ca, cb = Counter(a), Counter(b)
    lcm = ca | cb
    return list(lcm.elements()), list((lcm - ca).elements()), list((lcm - cb).elements())


def _add_fractions(n1, d1, n2, d2):
    lcm, fa, fb = _multiset_union(d1, d2)
    num = _cross(n1, fa) + _cross(n2, fb)
    return num, tuple(sorted(lcm, key=AffineForm.sort_key))


# ---------------------------------------------------------------- asymptotics


@dataclass(frozen=True)
class LaurentLeading:
    """Leading term coefficient * var**order of a Gamma product as var -> 0.

    ``coefficient`` is the rational part; ``transcendental`` collects constant
    Gamma values with arguments in (0,1) (all positive) and any residual phase.
    """

    order: int
    coefficient: Fraction
    transcendental: GammaProduct = GammaProduct()

    @property
    def exact(self) -> bool:
        return not self.transcendental.factors and self.transcendental.phase == 0

    @property
    def sign(self) -> int | None:
        if self.transcendental.phase != 0:
            return None
        return 1 if self.coefficient > 0 else -1

    def __str__(self) -> str:
        tail = "" if self.exact else f"*{self.transcendental}"
        return f"{self.coefficient}{tail} * u^{self.order}"


def gamma_pole_order(g: GammaProduct, assignment: Mapping[Param, Scalar], var: Param) -> LaurentLeading:
    """Exact leading Laurent term of g as var -> 0 after substituting assignment."""
    h = g.subs(assignment)
    extra = h.params() - {var}
    if extra:
        raise NonAffineResidual(f"free parameters remain: {sorted(map(str, extra))}")
    order = 0
    coeff = Fraction(1)
    if h.num.is_zero():
        raise NonGenericResidual("coefficient vanishes identically")
    low = min(h.num.collect(var).items())
    order += low[0]
    coeff *= low[1].constant_value()
    for d in h.den:
        a0, b = d.const, d.coeff(var)
        if a0 != 0:
            coeff /= a0
        elif b != 0:
            order -= 1
            coeff /= b
        else:
            raise NonGenericResidual("prefactor denominator vanishes identically")
    consts: list[tuple[AffineForm, int]] = []
    for arg, pw in h.factors:
        a0, b = arg.const, arg.coeff(var)
        if a0.denominator == 1 and a0 <= 0:
            if b == 0:
                raise NonGenericResidual(f"Gamma argument {arg} is a fixed pole")
            m = int(-a0)
            residue = Fraction((-1) ** m, math.factorial(m)) / b
            order -= pw
            coeff *= residue ** pw
        else:
            consts.append((AffineForm(a0), pw))
    ph = h.phase
    phase0 = AffineForm(ph.const)
    rest = GammaProduct(1, (), consts, phase0).canonical()
    coeff *= rest.num.constant_value()
    for d in rest.den:
        coeff /= d.const
    return LaurentLeading(order, coeff, GammaProduct(1, (), rest.factors, rest.phase))
