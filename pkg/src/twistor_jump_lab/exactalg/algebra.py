"""Multivariate polynomials and rational functions over the rationals.

Both types wrap sympy's sparse distributed polynomials (graded lex order,
gmpy2 rationals).  Operands declared over different variable lists are lifted
to the union of their variables, the left operand's order first.

The variable name ``I`` is reserved for the imaginary unit: products reduce
``I**2`` to ``-1`` and rational-function denominators are kept free of ``I``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from sympy import Symbol
from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.polyerrors import ExactQuotientFailed
from sympy.polys.rings import PolyElement, PolyRing

IMAG = "I"


@lru_cache(maxsize=None)
def poly_ring(variables: tuple[str, ...]) -> PolyRing:
    return PolyRing([Symbol(v) for v in variables], QQ, grlex)


@lru_cache(maxsize=8192)
def merge_variables(left: tuple[str, ...], right: tuple[str, ...]) -> tuple[str, ...]:
    if left == right:
        return left
    return left + tuple(v for v in right if v not in left)


def to_fraction(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def qq(c):
    """Convert an int, Fraction or gmpy2 rational to the ground domain."""
    if isinstance(c, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(c, int):
        return QQ(c)
    if isinstance(c, Fraction):
        return QQ(c.numerator, c.denominator)
    if type(c) is QQ.dtype:
        return c
    raise TypeError(f"not an exact rational: {c!r}")


def is_scalar(c) -> bool:
    return isinstance(c, (int, Fraction)) and not isinstance(c, bool)


def _lift(p: PolyElement, target: tuple[str, ...]) -> PolyElement:
    ring = poly_ring(target)
    return p if p.ring is ring else p.set_ring(ring)


def _reduce_imag(p: PolyElement, variables: tuple[str, ...]) -> PolyElement:
    if IMAG not in variables:
        return p
    i = variables.index(IMAG)
    if p.degree(i) < 2:
        return p
    out: dict = {}
    for m, c in p.items():
        e = m[i]
        if e >= 2:
            if (e // 2) % 2:
                c = -c
            m = m[:i] + (e % 2,) + m[i + 1:]
        out[m] = out.get(m, QQ(0)) + c
    return p.ring.from_dict({m: c for m, c in out.items() if c})


def _conjugate(p: PolyElement, variables: tuple[str, ...]) -> PolyElement:
    if IMAG not in variables:
        return p
    i = variables.index(IMAG)
    return p.ring.from_dict({m: (-c if m[i] % 2 else c) for m, c in p.items()})


def _has_imag(p: PolyElement, variables: tuple[str, ...]) -> bool:
    return IMAG in variables and p.degree(variables.index(IMAG)) > 0


@dataclass(frozen=True)
class GaussRational:
    """Exact value re + im*i with rational parts."""

    re: Fraction
    im: Fraction

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __str__(self) -> str:
        return f"{self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}*I"


def _split_value(p: PolyElement, variables: tuple[str, ...], point: Mapping[str, Fraction]):
    """Evaluate p at point, returning (real, imaginary) ground values."""
    subs = []
    for idx, name in enumerate(variables):
        if name == IMAG or p.degree(idx) <= 0:
            continue
        if name not in point:
            raise KeyError(f"point does not assign variable {name!r}")
        subs.append((idx, qq(point[name])))
    if IMAG in variables and p.degree(variables.index(IMAG)) > 0:
        i = variables.index(IMAG)
        re = QQ(0)
        im = QQ(0)
        values = dict(subs)
        for m, c in p.items():
            term = c
            for idx, e in enumerate(m):
                if e and idx != i:
                    term *= values[idx] ** e
            if m[i]:
                im += term
            else:
                re += term
        return re, im
    if not subs:
        return (p.LC if p else QQ(0)), QQ(0)
    gens = p.ring.gens
    value = p.evaluate([(gens[idx], v) for idx, v in subs])
    if isinstance(value, PolyElement):
        value = value.LC if value else QQ(0)
    return value, QQ(0)


def _pack(re, im):
    if im:
        return GaussRational(to_fraction(re), to_fraction(im))
    return to_fraction(re)


class MultiPoly:
    """Polynomial with rational coefficients in named variables."""

    __slots__ = ("_p", "_vars")

    def __init__(self, p: PolyElement, variables: tuple[str, ...]):
        self._p = p
        self._vars = variables

    # construction -------------------------------------------------------
    @classmethod
    def from_terms(cls, variables: Iterable[str], terms: Mapping[tuple[int, ...], object]) -> "MultiPoly":
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable names in {variables}")
        ring = poly_ring(variables)
        data = {}
        for exps, c in terms.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(variables) or min(exps, default=0) < 0:
                raise ValueError(f"bad exponent vector {exps} for {variables}")
            c = qq(c)
            if c:
                data[exps] = data.get(exps, QQ(0)) + c
        p = ring.from_dict({m: c for m, c in data.items() if c})
        return cls(_reduce_imag(p, variables), variables)

    @classmethod
    def constant(cls, value, variables: Iterable[str] = ()) -> "MultiPoly":
        variables = tuple(variables)
        return cls(poly_ring(variables)(qq(value)), variables)

    @classmethod
    def gen(cls, name: str, variables: Iterable[str] | None = None) -> "MultiPoly":
        variables = (name,) if variables is None else tuple(variables)
        ring = poly_ring(variables)
        return cls(ring.gens[variables.index(name)], variables)

    @classmethod
    def gens(cls, *names: str) -> tuple["MultiPoly", ...]:
        return tuple(cls.gen(n, names) for n in names)

    # inspection -------------------------------------------------------------
    @property
    def variables(self) -> tuple[str, ...]:
        return self._vars

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return {m: to_fraction(c) for m, c in self._p.items()}

    @property
    def raw(self) -> PolyElement:
        return self._p

    def is_zero(self) -> bool:
        return not self._p

    def is_constant(self) -> bool:
        return self._p.is_ground

    def constant_value(self) -> Fraction:
        if not self._p.is_ground:
            raise ValueError("polynomial is not constant")
        return to_fraction(self._p.LC) if self._p else Fraction(0)

    def degree(self, var: str) -> int:
        if var not in self._vars:
            return 0 if self._p else -1
        return max(self._p.degree(self._vars.index(var)), -1)

    def total_degree(self) -> int:
        return max((sum(m) for m in self._p.keys()), default=-1)

    def occurring(self) -> tuple[str, ...]:
        return tuple(v for i, v in enumerate(self._vars) if self._p.degree(i) > 0)

    def leading_coefficient(self) -> Fraction:
        return to_fraction(self._p.LC)

    def coefficients_in(self, var: str) -> dict[int, "MultiPoly"]:
        """Group terms by the power of var; the coefficients keep all variables."""
        if var not in self._vars:
            return {0: self} if self._p else {}
        i = self._vars.index(var)
        groups: dict[int, dict] = {}
        for m, c in self._p.items():
            groups.setdefault(m[i], {})[m[:i] + (0,) + m[i + 1:]] = c
        ring = self._p.ring
        return {e: MultiPoly(ring.from_dict(d), self._vars) for e, d in groups.items()}

    def with_variables(self, variables: Iterable[str]) -> "MultiPoly":
        variables = tuple(variables)
        missing = set(self.occurring()) - set(variables)
        if missing:
            raise ValueError(f"cannot drop occurring variables {sorted(missing)}")
        return MultiPoly(_lift(self._p, variables), variables)

    # arithmetic --------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            target = merge_variables(self._vars, other._vars)
            return _lift(self._p, target), _lift(other._p, target), target
        if is_scalar(other):
            return self._p, self._p.ring(qq(other)), self._vars
        return None

    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return MultiPoly(c[0] + c[1], c[2])

    __radd__ = __add__

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return MultiPoly(c[0] - c[1], c[2])

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return MultiPoly(c[1] - c[0], c[2])

    def __neg__(self):
        return MultiPoly(-self._p, self._vars)

    def __pos__(self):
        return self

    def __mul__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return MultiPoly(_reduce_imag(c[0] * c[1], c[2]), c[2])

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        return MultiPoly(_reduce_imag(self._p ** n, self._vars), self._vars)

    def __truediv__(self, other):
        if is_scalar(other):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return MultiPoly(self._p.quo_ground(qq(other)), self._vars)
        if isinstance(other, MultiPoly):
            return RatFunc(self, other)
        return NotImplemented

    def __rtruediv__(self, other):
        if is_scalar(other):
            return RatFunc(MultiPoly.constant(other, self._vars), self)
        return NotImplemented

    def exquo(self, other: "MultiPoly | int | Fraction") -> "MultiPoly":
        """Exact quotient; raises ArithmeticError when other does not divide self."""
        if is_scalar(other):
            return self / other
        p, q, target = self._coerce(other)
        try:
            return MultiPoly(p.exquo(q), target)
        except ExactQuotientFailed as exc:
            raise ArithmeticError("inexact polynomial division") from exc

    def conjugate(self) -> "MultiPoly":
        return MultiPoly(_conjugate(self._p, self._vars), self._vars)

    def diff(self, var: str) -> "MultiPoly":
        if var not in self._vars:
            return MultiPoly(self._p.ring.zero, self._vars)
        return MultiPoly(self._p.diff(self._vars.index(var)), self._vars)

    def evaluate(self, point: Mapping[str, object]):
        return _pack(*_split_value(self._p, self._vars, point))

    def subs(self, mapping: Mapping[str, object]):
        from .radical import compose

        return compose(RatFunc(self), mapping)

    # comparison ----------------------------------------------------------------
    def __eq__(self, other):
        c = self._coerce(other) if isinstance(other, MultiPoly) or is_scalar(other) else None
        if c is None:
            if isinstance(other, (RatFunc,)):
                return other == self
            return NotImplemented
        return c[0] == c[1]

    def __hash__(self):
        return hash(frozenset(
            (tuple((v, e) for v, e in zip(self._vars, m) if e), c) for m, c in self._p.items()
        ))

    def __bool__(self):
        return bool(self._p)

    def as_expr(self):
        return self._p.as_expr()

    def __repr__(self):
        return f"MultiPoly({self._p.as_expr()})"

    def __str__(self):
        return str(self._p.as_expr())


def _canonical(p: PolyElement, q: PolyElement, variables: tuple[str, ...]):
    if not q:
        raise ZeroDivisionError("rational function with zero denominator")
    ring = p.ring
    if not p:
        return ring.zero, ring.one
    if _has_imag(q, variables):
        qc = _conjugate(q, variables)
        p = _reduce_imag(p * qc, variables)
        q = _reduce_imag(q * qc, variables)
    if q.is_ground:
        return p.quo_ground(q.LC), ring.one
    p, q = p.cancel(q)
    lc = q.LC
    if lc != 1:
        p = p.quo_ground(lc)
        q = q.quo_ground(lc)
    return p, q


class RatFunc:
    """Quotient of polynomials in lowest terms with a monic denominator."""

    __slots__ = ("_num", "_den", "_vars")

    def __init__(self, num, den=1):
        if isinstance(num, RatFunc) and den == 1:
            self._num, self._den, self._vars = num._num, num._den, num._vars
            return
        n = _as_poly(num)
        d = _as_poly(den)
        if isinstance(num, RatFunc) or isinstance(den, RatFunc):
            quotient = as_ratfunc(num) / as_ratfunc(den)
            self._num, self._den, self._vars = quotient._num, quotient._den, quotient._vars
            return
        target = merge_variables(n._vars, d._vars)
        p, q = _canonical(_lift(n._p, target), _lift(d._p, target), target)
        self._num, self._den, self._vars = p, q, target

    @classmethod
    def _make(cls, p, q, variables, normalize=True) -> "RatFunc":
        obj = object.__new__(cls)
        if normalize:
            p, q = _canonical(p, q, variables)
        obj._num, obj._den, obj._vars = p, q, variables
        return obj

    @property
    def variables(self) -> tuple[str, ...]:
        return self._vars

    @property
    def num(self) -> MultiPoly:
        return MultiPoly(self._num, self._vars)

    @property
    def den(self) -> MultiPoly:
        return MultiPoly(self._den, self._vars)

    def is_zero(self) -> bool:
        return not self._num

    def is_polynomial(self) -> bool:
        return self._den.is_ground

    def is_constant(self) -> bool:
        return self._num.is_ground and self._den.is_ground

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("rational function is not constant")
        return to_fraction(self._num.LC) if self._num else Fraction(0)

    def occurring(self) -> tuple[str, ...]:
        return tuple(v for i, v in enumerate(self._vars)
                     if self._num.degree(i) > 0 or self._den.degree(i) > 0)

    def has_imag(self) -> bool:
        return _has_imag(self._num, self._vars)

    def with_variables(self, variables: Iterable[str]) -> "RatFunc":
        variables = tuple(variables)
        missing = set(self.occurring()) - set(variables)
        if missing:
            raise ValueError(f"cannot drop occurring variables {sorted(missing)}")
        return RatFunc._make(_lift(self._num, variables), _lift(self._den, variables), variables, False)

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            target = merge_variables(self._vars, other._vars)
            if target == self._vars == other._vars:
                return self._num, self._den, other._num, other._den, target
            return (_lift(self._num, target), _lift(self._den, target),
                    _lift(other._num, target), _lift(other._den, target), target)
        if isinstance(other, MultiPoly):
            target = merge_variables(self._vars, other._vars)
            return (_lift(self._num, target), _lift(self._den, target),
                    _lift(other._p, target), poly_ring(target).one, target)
        if is_scalar(other):
            ring = self._num.ring
            return self._num, self._den, ring(qq(other)), ring.one, self._vars
        return None

    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        n1, d1, n2, d2, v = c
        if d1 == d2:
            return RatFunc._make(n1 + n2, d1, v)
        return RatFunc._make(n1 * d2 + n2 * d1, d1 * d2, v)

    __radd__ = __add__

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        n1, d1, n2, d2, v = c
        if d1 == d2:
            return RatFunc._make(n1 - n2, d1, v)
        return RatFunc._make(n1 * d2 - n2 * d1, d1 * d2, v)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return RatFunc._make(-self._num, self._den, self._vars, False)

    def __pos__(self):
        return self

    def __mul__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        n1, d1, n2, d2, v = c
        return RatFunc._make(_reduce_imag(n1 * n2, v), d1 * d2, v)

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        n1, d1, n2, d2, v = c
        if not n2:
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc._make(n1 * d2, d1 * n2, v)

    def __rtruediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        n1, d1, n2, d2, v = c
        if not n1:
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc._make(n2 * d1, d2 * n1, v)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n >= 0:
            return RatFunc._make(_reduce_imag(self._num ** n, self._vars), self._den ** n, self._vars,
                                 normalize=self.has_imag())
        if not self._num:
            raise ZeroDivisionError("zero to a negative power")
        return RatFunc._make(self._den ** -n, self._num ** -n, self._vars)

    def conjugate(self) -> "RatFunc":
        return RatFunc._make(_conjugate(self._num, self._vars), self._den, self._vars, False)

    def real_imag(self) -> tuple["RatFunc", "RatFunc"]:
        """Split into parts free of I (the denominator is already real)."""
        if IMAG not in self._vars:
            return self, RatFunc._make(self._num.ring.zero, self._num.ring.one, self._vars, False)
        i = self._vars.index(IMAG)
        re, im = {}, {}
        for m, c in self._num.items():
            if m[i]:
                im[m[:i] + (0,) + m[i + 1:]] = c
            else:
                re[m] = c
        ring = self._num.ring
        return (RatFunc._make(ring.from_dict(re), self._den, self._vars),
                RatFunc._make(ring.from_dict(im), self._den, self._vars))

    def diff(self, var: str) -> "RatFunc":
        if var not in self._vars:
            return RatFunc._make(self._num.ring.zero, self._num.ring.one, self._vars, False)
        i = self._vars.index(var)
        n, d = self._num, self._den
        if d.is_ground:
            return RatFunc._make(n.diff(i), d, self._vars, False)
        dd = d.diff(i)
        if not dd:
            return RatFunc._make(n.diff(i), d, self._vars)
        # d/dv (n/d) = (n' d - n d') / d^2; cancel d once up front.
        g = d.gcd(dd)
        dq = d.exquo(g)
        return RatFunc._make(n.diff(i) * dq - n * dd.exquo(g), d * dq, self._vars)

    def evaluate(self, point: Mapping[str, object]):
        den_re, _ = _split_value(self._den, self._vars, point)
        if not den_re:
            raise ZeroDivisionError("denominator vanishes at the evaluation point")
        re, im = _split_value(self._num, self._vars, point)
        return _pack(re / den_re, im / den_re)

    def subs(self, mapping: Mapping[str, object]):
        from .radical import compose

        return compose(self, mapping)

    def __eq__(self, other):
        if isinstance(other, (RatFunc, MultiPoly)) or is_scalar(other):
            c = self._coerce(other)
            return c[0] == c[2] and c[1] == c[3]
        return NotImplemented

    def __hash__(self):
        if self._den.is_ground:
            return hash(MultiPoly(self._num, self._vars))
        return hash((MultiPoly(self._num, self._vars), MultiPoly(self._den, self._vars)))

    def __bool__(self):
        return bool(self._num)

    def as_expr(self):
        return self._num.as_expr() / self._den.as_expr()

    def __repr__(self):
        return f"RatFunc({self.as_expr()})"

    def __str__(self):
        if self._den.is_ground:
            return str(self._num.as_expr())
        return f"({self._num.as_expr()})/({self._den.as_expr()})"


def _as_poly(x) -> MultiPoly:
    if isinstance(x, MultiPoly):
        return x
    if is_scalar(x):
        return MultiPoly.constant(x)
    if isinstance(x, RatFunc):
        return MultiPoly(x._num, x._vars)
    raise TypeError(f"cannot interpret {x!r} as a polynomial")


def as_ratfunc(x) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, MultiPoly):
        return RatFunc._make(x._p, x._p.ring.one, x._vars, False)
    if is_scalar(x):
        ring = poly_ring(())
        return RatFunc._make(ring(qq(x)), ring.one, (), False)
    raise TypeError(f"cannot interpret {x!r} as a rational function")


def variables_function(*names: str) -> tuple[RatFunc, ...]:
    """Coordinate functions for the given names, all declared over the same list."""
    return tuple(as_ratfunc(g) for g in MultiPoly.gens(*names))
