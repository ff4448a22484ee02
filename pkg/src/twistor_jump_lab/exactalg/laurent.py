"""Finite Laurent polynomials in the twistor coordinate lambda."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping


def _is_zero(c) -> bool:
    return c == 0


class LaurentPoly:
    """Sum of c_m * lambda**m over finitely many integers m.

    Coefficients may be Fractions or any exact ring element (MultiPoly,
    RatFunc, ExtFunc) supporting +, -, * and comparison with 0.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, object] | None = None):
        self._coeffs = {int(m): c for m, c in (coeffs or {}).items() if not _is_zero(c)}

    @classmethod
    def monomial(cls, c, power: int) -> "LaurentPoly":
        return cls({power: c})

    @classmethod
    def from_list(cls, coeffs: Iterable, start: int = 0) -> "LaurentPoly":
        """Coefficients listed from lambda**start upward."""
        return cls({start + i: c for i, c in enumerate(coeffs)})

    @property
    def coeffs(self) -> dict[int, object]:
        return dict(self._coeffs)

    def coeff(self, power: int):
        return self._coeffs.get(power, 0)

    def is_zero(self) -> bool:
        return not self._coeffs

    def min_power(self) -> int:
        if not self._coeffs:
            raise ValueError("zero Laurent polynomial has no powers")
        return min(self._coeffs)

    def max_power(self) -> int:
        if not self._coeffs:
            raise ValueError("zero Laurent polynomial has no powers")
        return max(self._coeffs)

    def powers(self) -> list[int]:
        return sorted(self._coeffs)

    def is_monomial(self) -> bool:
        return len(self._coeffs) == 1

    def shift(self, m: int) -> "LaurentPoly":
        return LaurentPoly({p + m: c for p, c in self._coeffs.items()})

    def map_coeffs(self, fn: Callable) -> "LaurentPoly":
        return LaurentPoly({p: fn(c) for p, c in self._coeffs.items()})

    def truncate(self, lo: int | None = None, hi: int | None = None) -> "LaurentPoly":
        """Keep the powers in [lo, hi]."""
        return LaurentPoly({
            p: c for p, c in self._coeffs.items()
            if (lo is None or p >= lo) and (hi is None or p <= hi)
        })

    def diff_lambda(self) -> "LaurentPoly":
        return LaurentPoly({p - 1: c * p for p, c in self._coeffs.items() if p})

    def invert_lambda(self) -> "LaurentPoly":
        """Substitute lambda -> 1/lambda."""
        return LaurentPoly({-p: c for p, c in self._coeffs.items()})

    def evaluate(self, lam):
        total = 0
        for p, c in self._coeffs.items():
            total = total + c * (Fraction(lam) ** p if isinstance(lam, int) else lam ** p)
        return total

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            return other
        return LaurentPoly({0: other})

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._coeffs)
        for p, c in other._coeffs.items():
            out[p] = out[p] + c if p in out else c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({p: -c for p, c in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            return LaurentPoly({p: c * other for p, c in self._coeffs.items()})
        out: dict[int, object] = {}
        for p, c in self._coeffs.items():
            for q, d in other._coeffs.items():
                term = c * d
                out[p + q] = out[p + q] + term if p + q in out else term
        return LaurentPoly(out)

    def __rmul__(self, other):
        return LaurentPoly({p: other * c for p, c in self._coeffs.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            if isinstance(n, int) and self.is_monomial():
                (p, c), = self._coeffs.items()
                return LaurentPoly({p * n: Fraction(c) ** n if isinstance(c, (int, Fraction)) else (1 / c) ** -n})
            return NotImplemented
        result = LaurentPoly({0: 1})
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly({0: other})
        keys = set(self._coeffs) | set(other._coeffs)
        return all(self.coeff(k) == other.coeff(k) for k in keys)

    def __hash__(self):
        return hash(tuple(sorted((p, hash(c)) for p, c in self._coeffs.items())))

    def __repr__(self):
        if not self._coeffs:
            return "LaurentPoly(0)"
        body = " + ".join(f"({self._coeffs[p]})*lam^{p}" for p in sorted(self._coeffs))
        return f"LaurentPoly({body})"


LAMBDA = LaurentPoly({1: 1})
