"""Gibbons-Hawking potentials for general k and the reduction of the k = 3, 4 metrics.

For the cone models the potential is

    V = a**-k / (2 (k-1)!) * d^(k-1)/d lam^(k-1) q**(-1/2) at lam = 0,
    q = lam**2 (X - Y) + 2 lam Z + (X + Y),

which lives in the extension of Q(X, Y, Z) by sqrt(X + Y).  The ultrahyperbolic
wave equation V_XX - V_YY - V_ZZ = 0 holds exactly there.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, lcm

from ..exactalg import ExtFunc, MultiPoly, RatFunc, as_ext, as_ratfunc, compose
from ..forms import ChartMap, Metric4, VectorField, pullback
from ..twistor import ModelError
from .reference import TXYZ, XYZT, _scale, ricci_flat_representative

ULTRAHYPERBOLIC = "ultrahyperbolic"  # h_flat = dX^2 - dY^2 - dZ^2
EUCLIDEAN = "euclidean"  # h_flat = dX^2 + dY^2 + dZ^2

_SIGNS = {ULTRAHYPERBOLIC: (1, -1, -1), EUCLIDEAN: (1, 1, 1)}
_LAMBDA = "lam"


@dataclass(frozen=True)
class GHData:
    """A potential V(X, Y, Z), the signature of h_flat it is harmonic for, and the scale a."""

    V: ExtFunc
    signature: str
    a: object
    k: int | None = None

    def wave_residual(self) -> ExtFunc:
        """V_XX -+ V_YY -+ V_ZZ in the stated signature."""
        total = as_ext(0)
        for name, sign in zip("XYZ", _SIGNS[self.signature]):
            second = self.V.diff(name).diff(name)
            total = total + second if sign > 0 else total - second
        return total

    def is_harmonic(self) -> bool:
        return self.wave_residual().is_zero()

    def value(self, X, Y, Z):
        """Exact value at a point; needs X + Y > 0 and a fixed numerically."""
        if Fraction(X) + Fraction(Y) <= 0:
            raise ValueError("the potential is real only for X + Y > 0")
        return self.V.evaluate({"X": Fraction(X), "Y": Fraction(Y), "Z": Fraction(Z)})


def _gh_generators():
    return (as_ratfunc(MultiPoly.gen(n)) for n in ("X", "Y", "Z"))


def gh_potential(k: int, a=1) -> GHData:
    """V_k by exact lambda-differentiation of q**(-1/2); a=None keeps a symbolic."""
    if k < 2:
        raise ModelError("the potential formula needs k >= 2")
    X, Y, Z = _gh_generators()
    lam = as_ratfunc(MultiPoly.gen(_LAMBDA))
    q = lam**2 * (X - Y) + 2 * lam * Z + (X + Y)
    f = ExtFunc(0, 1 / q, q)  # q**(-1/2) = sqrt(q) / q
    for _ in range(k - 1):
        f = f.diff(_LAMBDA)
    at_zero = as_ext(compose(f, {_LAMBDA: 0}))
    scale = _scale(a) ** (-k) / (2 * factorial(k - 1))
    return GHData(at_zero * scale, ULTRAHYPERBOLIC, a, k)


def _render(p: MultiPoly) -> str:
    return str(p).replace("**", "^").replace("*", "").replace(" ", "")


@dataclass(frozen=True)
class ClosedForm:
    """V = numerator / (constant * a^k * (X+Y)^((2k-1)/2)) with integer numerator coefficients."""

    numerator: MultiPoly
    constant: int
    k: int

    @property
    def denominator(self) -> str:
        c = "" if self.constant == 1 else str(self.constant)
        return f"{c}a^{self.k}(X+Y)^{{{2 * self.k - 1}/2}}"

    def render(self) -> dict[str, str]:
        return {"numerator": _render(self.numerator), "denominator": self.denominator}


def closed_form(k: int) -> ClosedForm:
    """Split V_k (a = 1) as an integer polynomial over c (X+Y)^((2k-1)/2)."""
    V = gh_potential(k).V
    X, Y, _ = _gh_generators()
    # V = b sqrt(X+Y) = P / (c (X+Y)^(k - 1/2)) with P / c = b (X+Y)^k
    poly = V.b * (X + Y) ** k
    if not poly.den.is_constant():
        raise ModelError("unexpected denominator in the potential")
    num = poly.num * (1 / poly.den.constant_value())
    common = lcm(*(c.denominator for c in num.terms.values()))
    return ClosedForm(num * common, common, k)


def printed_potential(k: int, a=None) -> ExtFunc:
    """The tabulated closed forms for k = 3, 4 as b sqrt(X+Y) with b rational."""
    X, Y, Z = _gh_generators()
    s = X + Y
    if k == 3:
        b = (X**2 - Y**2 - 3 * Z**2) / (4 * _scale(a) ** 3 * s**3)
    elif k == 4:
        b = Z * (3 * X**2 - 3 * Y**2 - 5 * Z**2) / (4 * _scale(a) ** 4 * s**4)
    else:
        raise ModelError(f"no tabulated potential for k={k}")
    return ExtFunc(0, b, s)


def old_coordinates() -> ChartMap:
    """(x, y, z, t) on (T, X, Y, Z): x = T, t = s^(1/2), z = Z s^(-1/2), y = (X^2-Y^2-Z^2)/(2 s^(3/2)), s = X+Y."""
    T, X, Y, Z = TXYZ.functions()
    s = X + Y
    return ChartMap(TXYZ, XYZT, {
        "x": T,
        "y": ExtFunc(0, (X**2 - Y**2 - Z**2) / (2 * s**2), s),
        "z": ExtFunc(0, Z / s, s),
        "t": ExtFunc(0, 1, s),
    })


@dataclass(frozen=True)
class GHReduction:
    k: int
    h_flat: Metric4
    V: ExtFunc
    V_cone: RatFunc
    checks: dict[str, bool] = field(default_factory=dict)
    first_failure: str | None = None


def expected_h_flat(k: int, a=None) -> Metric4:
    """a^(2k) (dX^2 - dY^2 - dZ^2) on (T, X, Y, Z)."""
    c = _scale(a) ** (2 * k)
    return Metric4(TXYZ, [[0, 0, 0, 0], [0, c, 0, 0], [0, 0, -c, 0], [0, 0, 0, -c]])


def gh_reduce(k: int, a=None) -> GHReduction:
    """Split g = V h + V^-1 (dx + A)^2 along K = d/dx and pull h, V back to (T, X, Y, Z)."""
    if k not in (3, 4):
        raise ModelError(f"no Ricci-flat metric known for the reduction at k={k}")
    g = ricci_flat_representative(k, a)
    K = VectorField.coordinate(XYZT, "x")
    V_cone = 1 / as_ratfunc(g.apply(K, K))
    K_flat = g.flat(K)
    h = (g - Metric4.symmetric_product(K_flat, K_flat) * V_cone) / V_cone
    phi = old_coordinates()
    h_flat = pullback(phi, h)
    V = as_ext(phi.pull_function(V_cone))
    expected = expected_h_flat(k, a)
    checks = {
        "h_flat": h_flat == expected,
        "V_matches_formula": V == gh_potential(k, a).V,
    }
    first = None
    if not checks["h_flat"]:
        got, want = h_flat.quadratic_form(), expected.quadratic_form()
        for key in sorted(set(got) | set(want)):
            if got.get(key, 0) != want.get(key, 0):
                first = f"h_flat[{key[0]},{key[1]}] = {got.get(key, 0)}"
                break
    return GHReduction(k, h_flat, V, V_cone, checks, first)


__all__ = [
    "ClosedForm", "EUCLIDEAN", "GHData", "GHReduction", "ULTRAHYPERBOLIC", "closed_form",
    "expected_h_flat", "gh_potential", "gh_reduce", "old_coordinates", "printed_potential",
]
