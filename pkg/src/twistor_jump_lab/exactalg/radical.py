"""One-level quadratic extensions a + b*w with w**2 = base, and substitution.

Only a single radical per expression is supported: combining two elements
whose radicals have different bases raises NestedRadicalError.
"""

from __future__ import annotations

import decimal
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from sympy.polys.domains import QQ

from .algebra import (
    IMAG,
    GaussRational,
    MultiPoly,
    RatFunc,
    as_ratfunc,
    is_scalar,
    merge_variables,
    poly_ring,
    qq,
    to_fraction,
    _lift,
    _reduce_imag,
)

RADICAL = "__w__"


class NestedRadicalError(ArithmeticError):
    """Raised when an expression would need a second square-root level."""


class NegativeRadicandError(ArithmeticError):
    """Raised when a real square root of a negative number is requested."""


def rational_sqrt(c: Fraction) -> Fraction | None:
    if c < 0:
        return None
    n, d = c.numerator, c.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _poly_sqrt(p: MultiPoly) -> MultiPoly | None:
    raw = p.raw
    if not raw:
        return p
    if raw.is_ground:
        root = rational_sqrt(to_fraction(raw.LC))
        return None if root is None else MultiPoly.constant(root, p.variables)
    # a square has a leading monomial with even exponents
    if any(e % 2 for e in raw.LM):
        return None
    coeff, factors = raw.sqf_list()
    if any(e % 2 for _, e in factors):
        return None
    root_c = rational_sqrt(to_fraction(coeff))
    if root_c is None:
        return None
    root = raw.ring(qq(root_c))
    for f, e in factors:
        root *= f ** (e // 2)
    if root.LC < 0:
        root = -root
    return MultiPoly(root, p.variables)


def ratfunc_sqrt(r: RatFunc) -> RatFunc | None:
    """Square root with positive leading coefficients, or None if r is not a square."""
    if r.has_imag():
        return None
    n = _poly_sqrt(r.num)
    if n is None:
        return None
    d = _poly_sqrt(r.den)
    if d is None:
        return None
    return RatFunc(n, d)


@dataclass(frozen=True)
class ExtValue:
    """Exact evaluation a + b*sqrt(base) of an ExtFunc at a point."""

    a: object
    b: object
    base: Fraction | None

    def is_rational(self) -> bool:
        return self.b == 0 or self.base is None

    def exact(self):
        if self.is_rational():
            return self.a
        root = rational_sqrt(self.base)
        if root is None:
            raise ValueError("value is irrational")
        return self.a + self.b * root

    def __float__(self) -> float:
        if isinstance(self.a, GaussRational) or isinstance(self.b, GaussRational):
            raise TypeError("complex value; use complex()")
        if self.is_rational():
            return float(self.a)
        if self.base < 0:
            raise NegativeRadicandError(f"negative radicand {self.base}")
        # 50 digits so the final conversion is the only rounding that matters
        with decimal.localcontext() as ctx:
            ctx.prec = 50
            dec = lambda q: decimal.Decimal(q.numerator) / q.denominator
            return float(dec(self.a) + dec(self.b) * dec(self.base).sqrt())

    def __complex__(self) -> complex:
        a = complex(self.a)
        if self.is_rational():
            return a
        import cmath

        return a + complex(self.b) * cmath.sqrt(float(self.base))


class ExtFunc:
    """Element a + b*w of RatFunc(base) where w = sqrt(base)."""

    __slots__ = ("a", "b", "base")

    def __init__(self, a=0, b=0, base=None):
        a = as_ratfunc(a)
        b = as_ratfunc(b)
        if b.is_zero():
            base = None
        else:
            if base is None:
                raise ValueError("a radical part needs a base")
            base = as_ratfunc(base)
            root = ratfunc_sqrt(base)
            if root is not None:
                a, b, base = a + b * root, as_ratfunc(0), None
        self.a, self.b, self.base = a, b, base

    @classmethod
    def _make(cls, a, b, base) -> "ExtFunc":
        obj = object.__new__(cls)
        if b.is_zero():
            base = None
        obj.a, obj.b, obj.base = a, b, base
        return obj

    @classmethod
    def sqrt(cls, base) -> "ExtFunc":
        return cls(0, 1, base)

    @property
    def variables(self) -> tuple[str, ...]:
        out = self.a.variables
        for part in (self.b, self.base):
            if part is not None:
                out = merge_variables(out, part.variables)
        return out

    def is_rational(self) -> bool:
        return self.b.is_zero()

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def rational_part(self) -> RatFunc:
        if not self.is_rational():
            raise ValueError("element has a radical part")
        return self.a

    def _pair(self, other):
        if isinstance(other, ExtFunc):
            if self.base is None:
                base = other.base
            elif other.base is None or self.base == other.base:
                base = self.base
            else:
                raise NestedRadicalError(f"radicals with different bases: {self.base} and {other.base}")
            return other.a, other.b, base
        if isinstance(other, (RatFunc, MultiPoly)) or is_scalar(other):
            return as_ratfunc(other), as_ratfunc(0), self.base
        return None

    def __add__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        return ExtFunc._make(self.a + p[0], self.b + p[1], p[2])

    __radd__ = __add__

    def __sub__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        return ExtFunc._make(self.a - p[0], self.b - p[1], p[2])

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return ExtFunc._make(-self.a, -self.b, self.base)

    def __pos__(self):
        return self

    def __mul__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        c, d, base = p
        if d.is_zero():
            return ExtFunc._make(self.a * c, self.b * c, base)
        if self.b.is_zero():
            return ExtFunc._make(self.a * c, self.a * d, base)
        return ExtFunc._make(self.a * c + self.b * d * base, self.a * d + self.b * c, base)

    __rmul__ = __mul__

    def inverse(self) -> "ExtFunc":
        if self.b.is_zero():
            return ExtFunc._make(1 / self.a, self.b, None)
        norm = self.a * self.a - self.b * self.b * self.base
        if norm.is_zero():
            raise ZeroDivisionError("zero divisor in the radical extension")
        return ExtFunc._make(self.a / norm, -self.b / norm, self.base)

    def __truediv__(self, other):
        if isinstance(other, ExtFunc):
            return self * other.inverse()
        if isinstance(other, (RatFunc, MultiPoly)) or is_scalar(other):
            r = as_ratfunc(other)
            return ExtFunc._make(self.a / r, self.b / r, self.base)
        return NotImplemented

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ExtFunc._make(as_ratfunc(1), as_ratfunc(0), None)
        square = self
        while n:
            if n & 1:
                result = result * square
            n >>= 1
            if n:
                square = square * square
        return result

    def conjugate_radical(self) -> "ExtFunc":
        return ExtFunc._make(self.a, -self.b, self.base)

    def diff(self, var: str) -> "ExtFunc":
        a = self.a.diff(var)
        if self.b.is_zero():
            return ExtFunc._make(a, self.b, None)
        # w' = base' / (2 w) = base' w / (2 base)
        b = self.b.diff(var) + self.b * self.base.diff(var) / (2 * self.base)
        return ExtFunc._make(a, b, self.base)

    def evaluate(self, point: Mapping[str, object]) -> ExtValue:
        a = self.a.evaluate(point)
        if self.b.is_zero():
            return ExtValue(a, Fraction(0), None)
        b = self.b.evaluate(point)
        base = self.base.evaluate(point)
        if isinstance(base, GaussRational):
            raise ValueError("radical base must be real")
        return ExtValue(a, b, base)

    def subs(self, mapping: Mapping[str, object]) -> "ExtFunc":
        return compose(self, mapping)

    def __eq__(self, other):
        try:
            p = self._pair(other)
        except NestedRadicalError:
            return False
        if p is None:
            return NotImplemented
        return self.a == p[0] and self.b == p[1]

    def __hash__(self):
        if self.b.is_zero():
            return hash(self.a)
        return hash((self.a, self.b, self.base))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        if self.b.is_zero():
            return f"ExtFunc({self.a})"
        return f"ExtFunc({self.a} + ({self.b})*sqrt({self.base}))"

    __str__ = __repr__


def as_ext(x) -> ExtFunc:
    if isinstance(x, ExtFunc):
        return x
    return ExtFunc._make(as_ratfunc(x), as_ratfunc(0), None)


def simplify_value(x):
    """Demote an ExtFunc without radical part to a RatFunc."""
    if isinstance(x, ExtFunc) and x.b.is_zero():
        return x.a
    return x


def _homogenized(p, values, target):
    """Evaluate polynomial p at values (n_j, d_j) as a pair (P, D) with p(n/d) = P/D."""
    ring = poly_ring(target)
    nvars = len(values)
    degrees = [p.degree(j) for j in range(nvars)]
    num_pows = [[ring.one] for _ in range(nvars)]
    den_pows = [[ring.one] for _ in range(nvars)]

    def power(cache, base, e):
        while len(cache) <= e:
            cache.append(_reduce_imag(cache[-1] * base, target))
        return cache[e]

    total = ring.zero
    for m, c in p.items():
        term = ring(c)
        for j, e in enumerate(m):
            n, d = values[j]
            if e:
                term = term * power(num_pows[j], n, e)
            if d != 1 and degrees[j] - e:
                term = term * power(den_pows[j], d, degrees[j] - e)
        total += _reduce_imag(term, target)
    common = ring.one
    for j in range(nvars):
        d = values[j][1]
        if d != 1 and degrees[j] > 0:
            common *= power(den_pows[j], d, degrees[j])
    return _reduce_imag(total, target), common


def compose(f, mapping: Mapping[str, object]):
    """Substitute mapping (name -> scalar/MultiPoly/RatFunc/ExtFunc) into f simultaneously.

    Returns a RatFunc when no radical survives, else an ExtFunc.
    """
    if isinstance(f, ExtFunc):
        a = compose(f.a, mapping)
        if f.b.is_zero():
            return a
        b = compose(f.b, mapping)
        base = compose(f.base, mapping)
        if isinstance(base, ExtFunc):
            if not base.b.is_zero():
                raise NestedRadicalError("substituted radicand itself contains a radical")
            base = base.a
        return as_ext(a) + as_ext(b) * ExtFunc.sqrt(base)
    f = as_ratfunc(f)
    src = f.variables
    values = {}
    radical_base = None
    for name in src:
        if name in mapping:
            v = mapping[name]
        elif name == IMAG:
            v = MultiPoly.gen(IMAG)
        else:
            v = MultiPoly.gen(name)
        if isinstance(v, ExtFunc) and not v.b.is_zero():
            if radical_base is None:
                radical_base = v.base
            elif radical_base != v.base:
                raise NestedRadicalError(f"radicals with different bases: {radical_base} and {v.base}")
        values[name] = v
    target: tuple[str, ...] = ()
    for v in values.values():
        if isinstance(v, ExtFunc):
            target = merge_variables(target, v.variables)
        elif not is_scalar(v):
            target = merge_variables(target, v.variables)
    if radical_base is not None:
        target = merge_variables(target, radical_base.variables)
        target = merge_variables(target, (RADICAL,))
    ring = poly_ring(target)
    w = ring.gens[target.index(RADICAL)] if radical_base is not None else None

    def as_pair(v):
        if is_scalar(v):
            return ring(qq(v)), ring.one
        if isinstance(v, MultiPoly):
            return _lift(v.raw, target), ring.one
        if isinstance(v, RatFunc):
            return _lift(v._num, target), _lift(v._den, target)
        # a + b w = (na db + nb da w) / (da db)
        an, ad = _lift(v.a._num, target), _lift(v.a._den, target)
        if v.b.is_zero():
            return an, ad
        bn, bd = _lift(v.b._num, target), _lift(v.b._den, target)
        return an * bd + bn * ad * w, ad * bd

    pairs = [as_pair(values[name]) for name in src]
    pn, dn = _homogenized(f._num, pairs, target)
    pd, dd = _homogenized(f._den, pairs, target)
    num, den = pn * dd, pd * dn
    if radical_base is None:
        return RatFunc._make(num, den, target)
    return _fold_radical(num, den, target, radical_base)


def _fold_radical(num, den, target, base: RatFunc) -> ExtFunc:
    """Reduce powers of the radical symbol in num/den and divide in the extension."""
    i = target.index(RADICAL)
    bn, bd = _lift(base._num, target), _lift(base._den, target)
    ring = poly_ring(target)

    def split(p):
        groups: dict[int, dict] = {}
        for m, c in p.items():
            groups.setdefault(m[i], {})[m[:i] + (0,) + m[i + 1:]] = c
        if not groups:
            return as_ratfunc(0), as_ratfunc(0)
        top = max(groups) // 2
        even, odd = ring.zero, ring.zero
        for e, d in groups.items():
            part = ring.from_dict(d) * bn ** (e // 2) * bd ** (top - e // 2)
            if e % 2:
                odd += part
            else:
                even += part
        scale = bd ** top
        keep = tuple(v for v in target if v != RADICAL)
        return (RatFunc._make(_lift(even, keep), _lift(scale, keep), keep),
                RatFunc._make(_lift(odd, keep), _lift(scale, keep), keep))

    keep = tuple(v for v in target if v != RADICAL)
    base = base.with_variables(merge_variables(keep, base.variables))
    na, nb = split(num)
    da, db = split(den)
    return ExtFunc._make(na, nb, base) / ExtFunc._make(da, db, base)
