"""Exact arithmetic in Q(x1, ..., xn): polynomials, rational functions, parsing.

Polynomials are sparse maps from monomials to nonzero ``Fraction``
coefficients.  A monomial is a tuple of ``(name, exponent)`` pairs sorted by
the global variable order (``t``, ``alpha``, ``beta``, then every other name
alphabetically), so polynomials in different variable sets mix freely.

Rational functions are kept reduced with a monic denominator (leading
coefficient 1 under graded-lexicographic order), which makes ``==`` a
structural comparison.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import cmp_to_key, reduce
from math import gcd as _gcd
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

Monomial = Tuple[Tuple[str, int], ...]
Number = Union[int, Fraction]

_RANK = {"t": 0, "alpha": 1, "beta": 2}


def var_key(name: str) -> tuple:
    return (_RANK.get(name, 3), name)


class DivisionByZero(ZeroDivisionError):
    pass


class PoleError(ArithmeticError):
    """Limit at zero does not exist; ``valuation`` is the (negative) order."""

    def __init__(self, var: str, valuation: int):
        super().__init__(f"pole of order {-valuation} at {var}=0")
        self.var = var
        self.valuation = valuation


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


class UnknownIdentifier(ExprSyntaxError):
    pass


# -- monomials ---------------------------------------------------------------

def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        va, ea = a[i]
        vb, eb = b[j]
        if va == vb:
            e = ea + eb
            if e:
                out.append((va, e))
            i += 1
            j += 1
        elif var_key(va) < var_key(vb):
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def _mono_div(a: Monomial, b: Monomial) -> Monomial | None:
    """a / b if b divides a, else None."""
    if not b:
        return a
    da = dict(a)
    for v, e in b:
        if da.get(v, 0) < e:
            return None
        da[v] -= e
    return tuple((v, da[v]) for v, _ in a if da[v])


def _mono_gcd(a: Monomial, b: Monomial) -> Monomial:
    db = dict(b)
    return tuple((v, min(e, db[v])) for v, e in a if v in db)


def _mono_cmp(a: Monomial, b: Monomial) -> int:
    """Graded lexicographic comparison."""
    da = sum(e for _, e in a)
    db = sum(e for _, e in b)
    if da != db:
        return -1 if da < db else 1
    for (va, ea), (vb, eb) in zip(a, b):
        if va != vb:
            return 1 if var_key(va) < var_key(vb) else -1
        if ea != eb:
            return -1 if ea < eb else 1
    if len(a) != len(b):
        return -1 if len(a) < len(b) else 1
    return 0


_mono_sort_key = cmp_to_key(_mono_cmp)


def _mono_str(m: Monomial) -> str:
    return "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)


# -- polynomials -------------------------------------------------------------

class Polynomial:
    """Sparse multivariate polynomial over Q.  Immutable."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Number] | None = None):
        if terms:
            self.terms: Dict[Monomial, Fraction] = {
                m: Fraction(c) for m, c in terms.items() if c
            }
        else:
            self.terms = {}
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Fraction]) -> "Polynomial":
        p = cls.__new__(cls)
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c: Number) -> "Polynomial":
        return cls._raw({(): Fraction(c)} if c else {})

    @classmethod
    def var(cls, name: str, exp: int = 1) -> "Polynomial":
        return cls._raw({((name, exp),): Fraction(1)})

    # predicates and accessors
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def is_one(self) -> bool:
        return len(self.terms) == 1 and self.terms.get(()) == 1

    def constant_value(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    @property
    def indeterminates(self) -> list[str]:
        names = {v for m in self.terms for v, _ in m}
        return sorted(names, key=var_key)

    def degree(self, var: str | None = None) -> int:
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e for _, e in m) for m in self.terms)
        return max(dict(m).get(var, 0) for m in self.terms)

    def leading_monomial(self) -> Monomial:
        return max(self.terms, key=_mono_sort_key)

    def leading_coefficient(self) -> Fraction:
        return self.terms[self.leading_monomial()]

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        lc = self.leading_coefficient()
        if lc == 1:
            return self
        return self._raw({m: c / lc for m, c in self.terms.items()})

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda mc: _mono_sort_key(mc[0]), reverse=True)

    # ring operations
    def __add__(self, other: "Polynomial") -> "Polynomial":
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s += c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return self._raw(out)

    def __neg__(self) -> "Polynomial":
        return self._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if not self.terms or not other.terms:
            return ZERO_POLY
        if len(other.terms) == 1 and () in other.terms:
            return self.scale(other.terms[()])
        if len(self.terms) == 1 and () in self.terms:
            return other.scale(self.terms[()])
        out: Dict[Monomial, Fraction] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = _mono_mul(ma, mb)
                s = out.get(m, 0) + ca * cb
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return self._raw(out)

    def scale(self, c: Number) -> "Polynomial":
        if not c:
            return ZERO_POLY
        if c == 1:
            return self
        return self._raw({m: v * c for m, v in self.terms.items()})

    def mul_monomial(self, mono: Monomial, c: Fraction = Fraction(1)) -> "Polynomial":
        return self._raw({_mono_mul(m, mono): v * c for m, v in self.terms.items()})

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = ONE_POLY
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        """Quotient of an exact division; raises ArithmeticError otherwise."""
        if not other.terms:
            raise DivisionByZero("polynomial division by zero")
        if len(other.terms) == 1:
            (mb, cb), = other.terms.items()
            out = {}
            for m, c in self.terms.items():
                q = _mono_div(m, mb)
                if q is None:
                    raise ArithmeticError("inexact polynomial division")
                out[q] = c / cb
            return self._raw(out)
        lm_b = other.leading_monomial()
        lc_b = other.terms[lm_b]
        rem = self
        quot: Dict[Monomial, Fraction] = {}
        while rem.terms:
            lm = rem.leading_monomial()
            q = _mono_div(lm, lm_b)
            if q is None:
                raise ArithmeticError("inexact polynomial division")
            c = rem.terms[lm] / lc_b
            quot[q] = c
            rem = rem - other.mul_monomial(q, c)
        return self._raw(quot)

    # views as a univariate polynomial in one variable
    def coefficients_in(self, var: str) -> Dict[int, "Polynomial"]:
        out: Dict[int, Dict[Monomial, Fraction]] = {}
        for m, c in self.terms.items():
            e = 0
            rest = []
            for v, k in m:
                if v == var:
                    e = k
                else:
                    rest.append((v, k))
            out.setdefault(e, {})[tuple(rest)] = c
        return {e: self._raw(d) for e, d in out.items()}

    def monomial_content(self) -> Monomial:
        return reduce(_mono_gcd, self.terms)

    # evaluation
    def substitute(self, assignment: Mapping[str, "RationalFunction"]) -> "RationalFunction":
        touched = {v for m in self.terms for v, _ in m if v in assignment}
        if not touched:
            return RationalFunction.from_poly(self)
        cache: Dict[Tuple[str, int], RationalFunction] = {}
        total = RF_ZERO
        groups: Dict[Monomial, Dict[Monomial, Fraction]] = {}
        for m, c in self.terms.items():
            kept = tuple((v, e) for v, e in m if v not in assignment)
            subbed = tuple((v, e) for v, e in m if v in assignment)
            groups.setdefault(subbed, {})[kept] = c
        for subbed, rest in groups.items():
            factor = RationalFunction.from_poly(self._raw(rest))
            for v, e in subbed:
                key = (v, e)
                if key not in cache:
                    cache[key] = assignment[v] ** e
                factor = factor * cache[key]
            total = total + factor
        return total

    def evaluate(self, values: Mapping[str, Number]) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            for v, e in m:
                c = c * Fraction(values[v]) ** e
            total += c
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not m:
                body = str(a)
            elif a == 1:
                body = _mono_str(m)
            else:
                body = f"{a}*{_mono_str(m)}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"Polynomial({self})"


ZERO_POLY = Polynomial._raw({})
ONE_POLY = Polynomial._raw({(): Fraction(1)})


# -- gcd ---------------------------------------------------------------------

def _content(p: Polynomial, var: str) -> Polynomial:
    g = None
    for c in p.coefficients_in(var).values():
        g = c if g is None else poly_gcd(g, c)
        if g.is_constant():
            return ONE_POLY
    return g.monic()


def _prem(a: Polynomial, b: Polynomial, var: str) -> Polynomial:
    db = b.degree(var)
    lcb = b.coefficients_in(var)[db]
    r = a
    while not r.is_zero():
        dr = r.degree(var)
        if dr < db:
            break
        lcr = r.coefficients_in(var)[dr]
        shift = ((var, dr - db),) if dr > db else ()
        r = r * lcb - (b * lcr).mul_monomial(shift)
    return r


def _integral(p: Polynomial) -> Polynomial:
    """Scale to integer coefficients with no common factor; keeps PRS coefficients small."""
    den = reduce(lambda x, y: x * y // _gcd(x, y), (c.denominator for c in p.terms.values()), 1)
    num = reduce(_gcd, (c.numerator for c in p.terms.values()), 0)
    return p.scale(Fraction(den, num)) if (den, num) != (1, 1) else p


def _primitive_gcd(a: Polynomial, b: Polynomial, var: str) -> Polynomial:
    if a.degree(var) < b.degree(var):
        a, b = b, a
    a, b = _integral(a), _integral(b)
    while True:
        r = _prem(a, b, var)
        if r.is_zero():
            return b
        if r.degree(var) == 0:
            return ONE_POLY
        a, b = b, _integral(r.exact_div(_content(r, var)))


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic greatest common divisor over Q."""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.is_constant() or b.is_constant():
        return ONE_POLY
    if a == b:
        return a.monic()
    ma, mb = a.monomial_content(), b.monomial_content()
    mono = _mono_gcd(ma, mb)
    if len(a.terms) == 1 or len(b.terms) == 1:
        return Polynomial._raw({mono: Fraction(1)})
    if ma:
        a = a.exact_div(Polynomial._raw({ma: Fraction(1)}))
    if mb:
        b = b.exact_div(Polynomial._raw({mb: Fraction(1)}))
    core = _gcd_core(a, b)
    if mono:
        core = core.mul_monomial(mono)
    return core.monic()


def _gcd_core(a: Polynomial, b: Polynomial) -> Polynomial:
    if a.is_constant() or b.is_constant():
        return ONE_POLY
    va, vb = set(a.indeterminates), set(b.indeterminates)
    if not va & vb:
        return ONE_POLY
    x = min(va | vb, key=var_key)
    if x not in va:
        return poly_gcd(a, _content(b, x))
    if x not in vb:
        return poly_gcd(_content(a, x), b)
    ca, cb = _content(a, x), _content(b, x)
    pa, pb = a.exact_div(ca), b.exact_div(cb)
    g = _primitive_gcd(pa, pb, x)
    g = g.exact_div(_content(g, x))
    return (poly_gcd(ca, cb) * g).monic()


# -- rational functions ------------------------------------------------------

class RationalFunction:
    """Reduced fraction num/den of polynomials with monic denominator."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Polynomial | Number = 0, den: Polynomial | Number = 1):
        if not isinstance(num, Polynomial):
            num = Polynomial.const(num)
        if not isinstance(den, Polynomial):
            den = Polynomial.const(den)
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if num.is_zero():
            num, den = ZERO_POLY, ONE_POLY
        elif not den.is_one():
            g = poly_gcd(num, den)
            if not g.is_one():
                num, den = num.exact_div(g), den.exact_div(g)
            lc = den.leading_coefficient()
            if lc != 1:
                num, den = num.scale(1 / lc), den.scale(1 / lc)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def _raw(cls, num: Polynomial, den: Polynomial) -> "RationalFunction":
        r = cls.__new__(cls)
        r.num = num
        r.den = den
        r._hash = None
        return r

    @classmethod
    def from_poly(cls, p: Polynomial) -> "RationalFunction":
        return cls._raw(p, ONE_POLY)

    @classmethod
    def const(cls, c: Number) -> "RationalFunction":
        return cls._raw(Polynomial.const(c), ONE_POLY)

    @classmethod
    def var(cls, name: str) -> "RationalFunction":
        return cls._raw(Polynomial.var(name), ONE_POLY)

    # predicates
    def is_zero(self) -> bool:
        return not self.num.terms

    def is_constant(self) -> bool:
        return self.den.is_one() and self.num.is_constant()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.constant_value()

    @property
    def indeterminates(self) -> list[str]:
        names = set(self.num.indeterminates) | set(self.den.indeterminates)
        return sorted(names, key=var_key)

    def __bool__(self) -> bool:
        return bool(self.num.terms)

    # arithmetic
    def __add__(self, other) -> "RationalFunction":
        other = as_rf(other)
        if not other.num.terms:
            return self
        if not self.num.terms:
            return other
        if self.den.is_one() and other.den.is_one():
            return self._raw(self.num + other.num, ONE_POLY)
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        g = poly_gcd(self.den, other.den)
        if g.is_one():
            return RationalFunction(
                self.num * other.den + other.num * self.den, self.den * other.den
            )
        da, db = self.den.exact_div(g), other.den.exact_div(g)
        return RationalFunction(self.num * db + other.num * da, da * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return self._raw(-self.num, self.den)

    def __sub__(self, other) -> "RationalFunction":
        return self + (-as_rf(other))

    def __rsub__(self, other) -> "RationalFunction":
        return as_rf(other) + (-self)

    def __mul__(self, other) -> "RationalFunction":
        other = as_rf(other)
        if not self.num.terms or not other.num.terms:
            return RF_ZERO
        if self.den.is_one() and other.den.is_one():
            return self._raw(self.num * other.num, ONE_POLY)
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        n = self.num.exact_div(g1) * other.num.exact_div(g2)
        d = self.den.exact_div(g2) * other.den.exact_div(g1)
        lc = d.leading_coefficient()
        if lc != 1:
            n, d = n.scale(1 / lc), d.scale(1 / lc)
        return self._raw(n, d)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if not self.num.terms:
            raise DivisionByZero("inverse of zero")
        lc = self.num.leading_coefficient()
        return self._raw(self.den.scale(1 / lc), self.num.scale(1 / lc))

    def __truediv__(self, other) -> "RationalFunction":
        return self * as_rf(other).inverse()

    def __rtruediv__(self, other) -> "RationalFunction":
        return as_rf(other) * self.inverse()

    def __pow__(self, n: int) -> "RationalFunction":
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return RF_ONE
        return self._raw(self.num ** n, self.den ** n)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RationalFunction.const(other)
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # substitution and limits
    def substitute(self, assignment: Mapping[str, "RationalFunction | Number"]) -> "RationalFunction":
        amap = {k: as_rf(v) for k, v in assignment.items()}
        num = self.num.substitute(amap)
        den = self.den.substitute(amap)
        if den.is_zero():
            raise DivisionByZero(f"denominator of {self} vanishes under {_fmt_assign(amap)}")
        return num / den

    def valuation(self, var: str) -> int:
        """Order of vanishing along ``var = 0`` (negative for a pole)."""
        if self.is_zero():
            raise ValueError("valuation of zero")
        return _poly_valuation(self.num, var) - _poly_valuation(self.den, var)

    def limit_at_zero(self, var: str = "t") -> "RationalFunction":
        if self.is_zero():
            return self
        v = self.valuation(var)
        if v > 0:
            return RF_ZERO
        if v < 0:
            raise PoleError(var, v)
        n0 = _strip_var(self.num, var).coefficients_in(var)[0]
        d0 = _strip_var(self.den, var).coefficients_in(var)[0]
        return RationalFunction(n0, d0)

    def evaluate(self, values: Mapping[str, Number]) -> Fraction:
        d = self.den.evaluate(values)
        if d == 0:
            raise DivisionByZero(f"{self} has a pole at {values}")
        return self.num.evaluate(values) / d

    def __str__(self) -> str:
        if self.den.is_one():
            return str(self.num)
        num = str(self.num)
        if len(self.num.terms) > 1:
            num = f"({num})"
        den = str(self.den)
        single_power = len(self.den.terms) == 1 and len(self.den.leading_monomial()) == 1
        if not single_power:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self) -> str:
        return f"RationalFunction({self})"


def _poly_valuation(p: Polynomial, var: str) -> int:
    return min(dict(m).get(var, 0) for m in p.terms)


def _strip_var(p: Polynomial, var: str) -> Polynomial:
    v = _poly_valuation(p, var)
    if not v:
        return p
    return p.exact_div(Polynomial.var(var, v))


def _fmt_assign(a: Mapping[str, RationalFunction]) -> str:
    return "{" + ", ".join(f"{k}={v}" for k, v in a.items()) + "}"


RF_ZERO = RationalFunction._raw(ZERO_POLY, ONE_POLY)
RF_ONE = RationalFunction._raw(ONE_POLY, ONE_POLY)


def as_rf(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, Polynomial):
        return RationalFunction.from_poly(x)
    if isinstance(x, (int, Fraction)):
        return RationalFunction.const(x)
    if isinstance(x, str):
        return parse_expr(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to RationalFunction")


def rf_arithmetic(lhs: RationalFunction, rhs, op: str) -> RationalFunction:
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "div":
        return lhs / rhs
    if op == "pow":
        return lhs ** int(rhs)
    raise ValueError(f"unknown operation {op!r}")


def substitute(value: RationalFunction, assignment: Mapping[str, RationalFunction | Number]) -> RationalFunction:
    return value.substitute(assignment)


def limit_at_zero(value: RationalFunction, var: str = "t") -> RationalFunction:
    return value.limit_at_zero(var)


def content_in(p: Polynomial, var: str) -> Polynomial:
    """Monic gcd of the coefficients of ``p`` viewed as a polynomial in ``var``."""
    if p.is_zero():
        return ZERO_POLY
    return _content(p, var)


def lowest_coefficient(p: Polynomial, var: str) -> Polynomial:
    """Coefficient of the lowest power of ``var`` occurring in ``p``."""
    if p.is_zero():
        return ZERO_POLY
    return _strip_var(p, var).coefficients_in(var)[0]


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [d for d in range(1, int(n ** 0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def rational_roots(p: Polynomial, var: str) -> list[Fraction]:
    """Distinct rational roots of a univariate polynomial, ascending."""
    others = set(p.indeterminates) - {var}
    if others:
        raise ValueError(f"{p} is not univariate in {var}")
    if p.is_zero():
        raise ValueError("every value is a root of the zero polynomial")
    coeffs = {e: c.constant_value() for e, c in p.coefficients_in(var).items()}
    roots = set()
    low = min(coeffs)
    if low > 0:
        roots.add(Fraction(0))
    coeffs = {e - low: c for e, c in coeffs.items()}
    scale = reduce(lambda a, b: a * b // _gcd(a, b), (c.denominator for c in coeffs.values()), 1)
    ints = {e: int(c * scale) for e, c in coeffs.items()}
    top = max(ints)
    if top:
        for q in _divisors(ints[top]):
            for r in _divisors(ints[0]):
                for cand in (Fraction(r, q), Fraction(-r, q)):
                    if sum(c * cand ** e for e, c in ints.items()) == 0:
                        roots.add(cand)
    return sorted(roots)


# -- parsing -----------------------------------------------------------------

CATALOG_NAMES = ("t", "alpha", "beta")

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(1):
            tokens.append(("int", m.group(1), m.start(1)))
        elif m.group(2):
            tokens.append(("name", m.group(2), m.start(2)))
        elif m.group(3):
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ExprSyntaxError(f"unexpected character {ch!r}", text, m.start(3))
            tokens.append(("op", ch, m.start(3)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, allowed: Iterable[str] | None):
        self.text = text
        self.allowed = None if allowed is None else set(allowed)
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg: str, tok=None):
        tok = tok or self.peek()
        return ExprSyntaxError(msg, self.text, tok[2])

    def parse(self) -> RationalFunction:
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        value = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected token {self.peek()[1]!r}")
        return value

    def expr(self) -> RationalFunction:
        value = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> RationalFunction:
        value = self.factor()
        while True:
            kind, tok, _ = self.peek()
            if kind == "op" and tok in "*/":
                self.take()
                rhs = self.factor()
                if tok == "*":
                    value = value * rhs
                else:
                    if rhs.is_zero():
                        raise DivisionByZero(f"division by zero in {self.text!r}")
                    value = value / rhs
            elif kind == "name" or (kind == "op" and tok == "("):
                # implicit multiplication is allowed only right after an integer
                prev = self.tokens[self.i - 1]
                if prev[0] != "int":
                    raise self.error(f"unexpected token {tok!r}")
                value = value * self.factor()
            else:
                return value

    def factor(self) -> RationalFunction:
        neg = False
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.take()
            neg = True
        value = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            sign = 1
            if self.peek()[0] == "op" and self.peek()[1] == "-":
                self.take()
                sign = -1
            kind, tok, _ = self.peek()
            if kind != "int":
                raise self.error("expected integer exponent")
            self.take()
            exp = sign * int(tok)
            if exp < 0 and value.is_zero():
                raise DivisionByZero(f"negative power of zero in {self.text!r}")
            value = value ** exp
        return -value if neg else value

    def atom(self) -> RationalFunction:
        tok = self.take()
        kind, val, _ = tok
        if kind == "int":
            return RationalFunction.const(int(val))
        if kind == "name":
            if self.allowed is not None and val not in self.allowed:
                raise UnknownIdentifier(f"unknown identifier {val!r}", self.text, tok[2])
            return RationalFunction.var(val)
        if kind == "op" and val == "(":
            value = self.expr()
            close = self.take()
            if close[:2] != ("op", ")"):
                raise self.error("expected ')'", close)
            return value
        raise self.error(f"unexpected token {val!r}" if val else "unexpected end of input", tok)


def parse_expr(text: str, allowed_indeterminates: Sequence[str] | None = CATALOG_NAMES) -> RationalFunction:
    """Parse a coefficient expression.

    Grammar (whitespace-insensitive)::

        expr   := term (('+'|'-') term)*
        term   := factor (('*'|'/') factor)*     # "2t", "3(t+1)": implicit '*'
        factor := ['-'] atom ['^' ['-'] integer]
        atom   := integer | identifier | '(' expr ')'

    Unary minus binds looser than ``^``: ``-t^2`` is ``-(t^2)``.  Pass
    ``allowed_indeterminates=None`` to accept any identifier.
    """
    return _Parser(str(text), allowed_indeterminates).parse()
