"""The Sparling-Tod metric, its tri-holomorphic Killing pencil and the Eguchi-Hanson potential.

g = 4 du dv - 4 dx dy - 8 rho D**-3 (u dv - x dy)**2 with D = uv - xy.  In
Gibbons-Hawking form the potential is V = D**3 / (2 rho Z**2 + bc D**4), where
D**2 solves a quadratic in the moment maps.  For bc < 0 this equals the
two-centre potential (1/|R+a| - eps/|R-a|) / (2 sqrt(-bc)) with a = (0, 0, sqrt(-2 bc rho)).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from ..exactalg import ExtFunc, IMAG, MultiPoly, RationalSampler, as_ratfunc, rational_sqrt
from ..forms import Chart, DiffForm, Metric4, VectorField

UVXY = Chart(("u", "v", "x", "y"), "Sparling-Tod chart")
PRECISION_DIGITS = 40
RELATIVE_TOLERANCE = Fraction(1, 10**12)


def st_metric(rho) -> Metric4:
    """4 du dv - 4 dx dy - 8 rho D^-3 (u dv - x dy)^2 on (u, v, x, y)."""
    u, v, x, y = UVXY.functions()
    delta = u * v - x * y
    one_form = DiffForm(UVXY, 1, {(1,): u, (3,): -x})
    flat = Metric4.from_quadratic(UVXY, {("u", "v"): 4, ("x", "y"): -4})
    return flat - Metric4.symmetric_product(one_form, one_form) * (8 * Fraction(rho) / delta**3)


def st_killing(b, c) -> VectorField:
    """K = (b/2)(v d_y + x d_u) - (c/2)(y d_v + u d_x)."""
    u, v, x, y = UVXY.functions()
    b, c = Fraction(b), Fraction(c)
    return VectorField(UVXY, [b * x / 2, -c * y / 2, -c * u / 2, b * v / 2])


@dataclass(frozen=True)
class MomentMaps:
    """X, Y, Z on (u, v, x, y); X + iY carries sqrt(2), so all are ExtFunc over Q(i)."""

    X: ExtFunc
    Y: ExtFunc
    Z: ExtFunc
    X_plus_iY: ExtFunc
    X_minus_iY: ExtFunc


def st_moment_maps(b, c, rho) -> MomentMaps:
    """The printed moment maps, with X and Y separated over the i-extension."""
    b, c, rho = Fraction(b), Fraction(c), Fraction(rho)
    if b == 0 and c == 0:
        raise ValueError("the Killing pencil needs (b, c) != (0, 0)")
    u, v, x, y = UVXY.functions()
    i = as_ratfunc(MultiPoly.gen(IMAG))
    delta = u * v - x * y
    p = b * x**2 + c * u**2
    root2 = lambda f: ExtFunc(0, f, 2)  # f * sqrt(2)
    Z = ExtFunc(i * (b * x * v + c * y * u))
    plus = root2(rho * p / delta**2 + p / 2)
    minus = root2(c * y**2 + b * v**2)
    X = (plus + minus) * Fraction(1, 2)
    Y = (plus - minus) * (-i / 2)
    return MomentMaps(X, Y, Z, plus, minus)


@dataclass(frozen=True)
class STData:
    rho: Fraction
    b: Fraction
    c: Fraction
    eps: int

    def __post_init__(self):
        if self.eps not in (1, -1):
            raise ValueError("eps must be +1 or -1")
        if self.b == 0 and self.c == 0:
            raise ValueError("b and c cannot both vanish")

    @property
    def is_dyonic(self) -> bool:
        return self.b == 0 or self.c == 0

    @property
    def a_squared(self) -> Fraction:
        return -2 * self.b * self.c * self.rho

    def delta_squared(self) -> ExtFunc:
        """D^2 = (2 bc rho - R^2 + eps sqrt((R^2 - 2 bc rho)^2 + 8 bc rho Z^2)) / (2 bc)."""
        X, Y, Z = (as_ratfunc(MultiPoly.gen(n)) for n in ("X", "Y", "Z"))
        bc = self.b * self.c
        R2 = X**2 + Y**2 + Z**2
        radicand = (R2 - 2 * bc * self.rho) ** 2 + 8 * bc * self.rho * Z**2
        return ExtFunc((2 * bc * self.rho - R2) / (2 * bc), self.eps / (2 * bc), radicand)


def _sign(z) -> int:
    return (z > 0) - (z < 0)


def delta_branch(eps: int, Z) -> int:
    """Sign of D relative to sqrt(D^2) that matches the two-centre form."""
    if eps == -1 or Z == 0:
        return -1
    return -_sign(Z)


def _mp(q) -> mpmath.mpf:
    if isinstance(q, mpmath.mpf):
        return q
    q = Fraction(q)
    return mpmath.mpf(q.numerator) / q.denominator


def potential_from_delta(data: STData, X, Y, Z):
    """D^3 / (2 rho Z^2 + bc D^4) in mpmath, or None outside the real domain."""
    X, Y, Z = (_mp(v) for v in (X, Y, Z))
    bc = _mp(data.b * data.c)
    rho = _mp(data.rho)
    R2 = X**2 + Y**2 + Z**2
    radicand = (R2 - 2 * bc * rho) ** 2 + 8 * bc * rho * Z**2
    if radicand < 0:
        return None
    d2 = (2 * bc * rho - R2 + data.eps * mpmath.sqrt(radicand)) / (2 * bc)
    if d2 < 0:
        return None
    delta = delta_branch(data.eps, Z) * mpmath.sqrt(d2)
    return delta**3 / (2 * rho * Z**2 + bc * delta**4)


def potential_two_centre(data: STData, X, Y, Z):
    """(1/|R+a| - eps/|R-a|) / (2 sqrt(-bc)) in mpmath; coordinates may be rational or mpf."""
    X, Y, Z = (_mp(v) for v in (X, Y, Z))
    a = mpmath.sqrt(_mp(data.a_squared))
    plus = mpmath.sqrt(X**2 + Y**2 + (Z + a) ** 2)
    minus = mpmath.sqrt(X**2 + Y**2 + (Z - a) ** 2)
    return (1 / plus - data.eps / minus) / (2 * mpmath.sqrt(-_mp(data.b * data.c)))


def _exact_sqrt(q) -> Fraction | None:
    return rational_sqrt(Fraction(q)) if Fraction(q) >= 0 else None


def exact_potentials(data: STData, X, Y, Z) -> tuple[Fraction, Fraction] | None:
    """Both forms of V exactly when every radical involved is rational."""
    X, Y, Z = Fraction(X), Fraction(Y), Fraction(Z)
    bc = data.b * data.c
    R2 = X**2 + Y**2 + Z**2
    root = _exact_sqrt((R2 - 2 * bc * data.rho) ** 2 + 8 * bc * data.rho * Z**2)
    a = _exact_sqrt(data.a_squared)
    s = _exact_sqrt(-bc)
    if None in (root, a, s):
        return None
    d = _exact_sqrt((2 * bc * data.rho - R2 + data.eps * root) / (2 * bc))
    plus = _exact_sqrt(X**2 + Y**2 + (Z + a) ** 2)
    minus = _exact_sqrt(X**2 + Y**2 + (Z - a) ** 2)
    if None in (d, plus, minus) or plus == 0 or minus == 0:
        return None
    d *= delta_branch(data.eps, Z)
    den = 2 * data.rho * Z**2 + bc * d**4
    if den == 0:
        return None
    return d**3 / den, (1 / plus - data.eps / minus) / (2 * s)


@dataclass(frozen=True)
class PointCheck:
    point: tuple[Fraction, Fraction, Fraction]
    status: str  # pass, fail or skip
    detail: str
    delta_form: float | None = None
    two_centre: float | None = None


@dataclass(frozen=True)
class IdentityReport:
    data: STData
    checks: list[PointCheck] = field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(c.status == "pass" for c in self.checks)

    @property
    def failed(self) -> int:
        return sum(c.status == "fail" for c in self.checks)

    @property
    def skipped(self) -> int:
        return sum(c.status == "skip" for c in self.checks)


def _check_point(data: STData, point) -> PointCheck:
    X, Y, Z = (Fraction(v) for v in point)
    exact = exact_potentials(data, X, Y, Z)
    if exact is not None:
        lhs, rhs = exact
        status = "pass" if lhs == rhs else "fail"
        return PointCheck((X, Y, Z), status, "exact", float(lhs), float(rhs))
    with mpmath.workdps(PRECISION_DIGITS):
        lhs = potential_from_delta(data, X, Y, Z)
        if lhs is None:
            return PointCheck((X, Y, Z), "skip", "outside the real domain")
        rhs = potential_two_centre(data, X, Y, Z)
        scale = max(abs(rhs), abs(lhs))
        if scale == 0:
            return PointCheck((X, Y, Z), "pass", "both vanish", 0.0, 0.0)
        rel = abs(lhs - rhs) / scale
        status = "pass" if rel < _mp(RELATIVE_TOLERANCE) else "fail"
        return PointCheck((X, Y, Z), status, f"relative difference {mpmath.nstr(rel, 3)}", float(lhs), float(rhs))


def sample_points(seed: int, count: int) -> list[tuple[Fraction, Fraction, Fraction]]:
    """Seeded points off the two centres and off Z = 0."""
    sampler = RationalSampler(seed)
    pts = sampler.points(("X", "Y", "Z"), count, lambda p: p["Z"] != 0)
    return [(p["X"], p["Y"], p["Z"]) for p in pts]


def st_potential_identity(b, c, rho, points: Iterable[Sequence] | None = None, eps: int = -1,
                          seed: int = 0, count: int = 100) -> IdentityReport:
    """Compare the D-form and two-centre potentials at each sample point."""
    data = STData(Fraction(rho), Fraction(b), Fraction(c), eps)
    points = list(points) if points is not None else sample_points(seed, count)
    if data.is_dyonic:
        return IdentityReport(data, [PointCheck(tuple(map(Fraction, p)), "skip", "dyonic limit b*c = 0")
                                     for p in points])
    if data.b * data.c > 0:
        raise ValueError("the real Eguchi-Hanson slice needs bc < 0")
    return IdentityReport(data, [_check_point(data, p) for p in points])


@dataclass(frozen=True)
class SignReport:
    """Sign behaviour of V along seeded rays from the origin and across the plane Z = 0."""

    eps: int
    across_sphere: bool  # some ray changes sign between |R| = |a|(1 -+ h)
    across_plane: bool  # some point changes sign under Z -> -Z
    positive_everywhere: bool


def sign_changes(b, c, rho, eps: int, seed: int = 0, rays: int = 20, step=Fraction(1, 10)) -> SignReport:
    """Probe V_eps on both sides of the sphere |R| = |a| and of the plane Z = 0."""
    data = STData(Fraction(rho), Fraction(b), Fraction(c), eps)
    sampler = RationalSampler(seed)
    directions = sampler.points(("X", "Y", "Z"), rays, lambda p: p["Z"] != 0)
    a = mpmath.sqrt(_mp(data.a_squared))
    sphere = plane = False
    positive = True
    with mpmath.workdps(PRECISION_DIGITS):
        for d in directions:
            vec = [_mp(d[n]) for n in ("X", "Y", "Z")]
            norm = mpmath.sqrt(sum(x**2 for x in vec))
            values = []
            for r in (a * (1 - _mp(step)), a * (1 + _mp(step))):
                X, Y, Z = (x * r / norm for x in vec)
                v = potential_two_centre(data, X, Y, Z)
                values.append(v)
                mirrored = potential_two_centre(data, X, Y, -Z)
                plane = plane or v * mirrored < 0
                positive = positive and v > 0 and mirrored > 0
            sphere = sphere or values[0] * values[1] < 0
    return SignReport(eps, sphere, plane, positive)


__all__ = [
    "IdentityReport", "MomentMaps", "PointCheck", "STData", "SignReport", "UVXY", "delta_branch",
    "exact_potentials", "potential_from_delta", "potential_two_centre", "sample_points",
    "sign_changes", "st_killing", "st_metric", "st_moment_maps", "st_potential_identity",
]
