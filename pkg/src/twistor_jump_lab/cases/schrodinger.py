"""Normalisable Schrodinger modes on the folded metric Z (dX^2+dY^2+dZ^2) + Z^-1 (dT + X dY/2 - Y dX/2)^2.

Multiplied by Z the equation reads

    (X^2/4 + Y^2/4 + Z^2) phi_TT - X phi_YT + Y phi_XT + Laplacian(phi) - E Z phi = 0.

Modes phi = P(u) exp(-s u^2 / 2 - s (X^2+Y^2) / 4 + i s T) with u = Z + E/(2 s^2),
P a rescaled Hermite polynomial and E^2 = 8 s^3 (gamma + 1) solve it exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..exactalg import ExtFunc, IMAG, MultiPoly, RatFunc, as_ratfunc, compose, rational_sqrt

ENERGY = "E"  # the energy is kept symbolic until the residual is reduced
T_PERIOD = 2 * math.pi
QUADRATURE_NODES = 16
PANEL_WIDTH = 0.25
TAIL_BOUND = 1e-16


class NotNormalisable(ValueError):
    """s <= 0: no bound states."""


def _gen(name: str) -> RatFunc:
    return as_ratfunc(MultiPoly.gen(name))


@dataclass(frozen=True)
class GaussPoly:
    """poly * exp(exponent) with poly and exponent polynomials; closed under d/dv."""

    poly: RatFunc
    exponent: RatFunc

    def _same(self, other: "GaussPoly"):
        if self.exponent != other.exponent:
            raise ValueError("GaussPoly terms with different exponents")

    def __add__(self, other: "GaussPoly") -> "GaussPoly":
        if isinstance(other, GaussPoly):
            if self.poly.is_zero():
                return other
            if other.poly.is_zero():
                return self
            self._same(other)
            return GaussPoly(self.poly + other.poly, self.exponent)
        return NotImplemented

    def __neg__(self) -> "GaussPoly":
        return GaussPoly(-self.poly, self.exponent)

    def __sub__(self, other: "GaussPoly") -> "GaussPoly":
        return self + (-other)

    def __mul__(self, other) -> "GaussPoly":
        if isinstance(other, GaussPoly):
            return GaussPoly(self.poly * other.poly, self.exponent + other.exponent)
        return GaussPoly(self.poly * other, self.exponent)

    __rmul__ = __mul__

    def diff(self, var: str) -> "GaussPoly":
        return GaussPoly(self.poly.diff(var) + self.poly * self.exponent.diff(var), self.exponent)

    def is_zero(self) -> bool:
        return self.poly.is_zero()


def hermite(n: int) -> list[int]:
    """Coefficients of H_n (index = power) from H_{m+1} = 2 xi H_m - 2 m H_{m-1}."""
    prev, cur = [1], [0, 2]
    if n == 0:
        return prev
    for m in range(1, n):
        nxt = [0] * (m + 2)
        for i, c in enumerate(cur):
            nxt[i + 1] += 2 * c
        for i, c in enumerate(prev):
            nxt[i] -= 2 * m * c
        prev, cur = cur, nxt
    return cur


@dataclass(frozen=True)
class SchrodingerMode:
    s: int
    gamma: int
    E_squared: Fraction
    E: Fraction | None  # None when E is irrational
    kappa: int
    F: GaussPoly  # in Z and the symbol E
    G: GaussPoly  # in X, Y
    phi: GaussPoly


def energy_squared(s: int, gamma: int) -> Fraction:
    return Fraction(8 * s**3 * (gamma + 1))


def gamma_from_energy(s, E_squared, kappa) -> Fraction:
    """gamma = (E^2 / (4 s^2) - (kappa + s)) / (2 s)."""
    return (Fraction(E_squared) / (4 * s**2) - (kappa + s)) / (2 * s)


def _scaled_hermite(gamma: int, s: int, u: RatFunc) -> RatFunc:
    """s^(-gamma/2) H_gamma(sqrt(s) u); only even powers of sqrt(s) survive."""
    total = as_ratfunc(0)
    for m, c in enumerate(hermite(gamma)):
        if c:
            total = total + c * Fraction(s) ** ((m - gamma) // 2) * u**m
    return total


def schrodinger_mode(s: int, gamma: int) -> SchrodingerMode:
    """The mode with kappa = s and E = sqrt(8 s^3 (gamma + 1))."""
    if s == 0:
        raise NotNormalisable("s = 0 gives Airy and free-particle equations with no bound states")
    if gamma < 0:
        raise ValueError("gamma must be a nonnegative integer")
    T, X, Y, Z, E = (_gen(n) for n in ("T", "X", "Y", "Z", ENERGY))
    i = _gen(IMAG)
    u = Z + E / (2 * s**2)
    F = GaussPoly(_scaled_hermite(gamma, s, u), -Fraction(s, 2) * u**2)
    G = GaussPoly(as_ratfunc(1), -Fraction(s, 4) * (X**2 + Y**2))
    phase = GaussPoly(as_ratfunc(1), i * s * T)
    e2 = energy_squared(s, gamma)
    return SchrodingerMode(s, gamma, e2, rational_sqrt(e2), s, F, G, F * G * phase)


def pde_operator(phi: GaussPoly, energy) -> GaussPoly:
    """Z times (left side minus E phi) of the Schrodinger equation on the folded metric."""
    X, Y, Z = (_gen(n) for n in ("X", "Y", "Z"))
    d = lambda f, *vs: _nested(f, vs)
    out = d(phi, "T", "T") * ((X**2 + Y**2) / 4 + Z**2)
    out = out - d(phi, "Y", "T") * X + d(phi, "X", "T") * Y
    out = out + d(phi, "X", "X") + d(phi, "Y", "Y") + d(phi, "Z", "Z")
    return out - phi * (energy * Z)


def _nested(f: GaussPoly, vs) -> GaussPoly:
    for v in vs:
        f = f.diff(v)
    return f


@dataclass(frozen=True)
class ResidualReport:
    residual: object  # polynomial factor of the residual after fixing E
    exact_zero: bool
    energy: object


def schrodinger_residual(mode: SchrodingerMode, energy=None) -> ResidualReport:
    """Polynomial part of Z (H - E) phi with E fixed.

    energy=None uses the mode's own E, adjoining sqrt(E^2) when it is
    irrational; a rational override is for mutation tests.
    """
    E = _gen(ENERGY)
    raw = pde_operator(mode.phi, E).poly
    if energy is not None:
        value = Fraction(energy)
    elif mode.E is not None:
        value = mode.E
    else:
        value = ExtFunc(0, 1, mode.E_squared)
    reduced = compose(raw, {ENERGY: value})
    is_zero = reduced.is_zero() if hasattr(reduced, "is_zero") else reduced == 0
    return ResidualReport(reduced, is_zero, value)


# Ladder operators on functions of (X, Y).

def ladder_a(s, g: GaussPoly) -> GaussPoly:
    """a = Pi_X + i Pi_Y = -i d_X + s Y / 2 + d_Y - i s X / 2."""
    X, Y, i = _gen("X"), _gen("Y"), _gen(IMAG)
    return g.diff("X") * (-i) + g * (Fraction(s, 2) * Y) + g.diff("Y") - g * (i * Fraction(s, 2) * X)


def ladder_a_dagger(s, g: GaussPoly) -> GaussPoly:
    """a^dagger = Pi_X - i Pi_Y = -i d_X + s Y / 2 - d_Y + i s X / 2."""
    X, Y, i = _gen("X"), _gen("Y"), _gen(IMAG)
    return g.diff("X") * (-i) + g * (Fraction(s, 2) * Y) - g.diff("Y") + g * (i * Fraction(s, 2) * X)


def plane_operator(s, g: GaussPoly) -> GaussPoly:
    """-s^2 (X^2+Y^2) G / 4 - i s X G_Y + i s Y G_X + G_XX + G_YY."""
    X, Y, i = _gen("X"), _gen("Y"), _gen(IMAG)
    out = g * (-Fraction(s * s, 4) * (X**2 + Y**2))
    out = out - g.diff("Y") * (i * s * X) + g.diff("X") * (i * s * Y)
    return out + g.diff("X").diff("X") + g.diff("Y").diff("Y")


def ground_state(s) -> GaussPoly:
    X, Y = _gen("X"), _gen("Y")
    return GaussPoly(as_ratfunc(1), -Fraction(s, 4) * (X**2 + Y**2))


@dataclass(frozen=True)
class LadderReport:
    annihilates_ground: bool  # a G0 = 0
    kappa_ground: bool  # (a^dagger a + s - kappa) G0 = 0 with kappa = s
    kappa_excited: bool  # the same for a^dagger G0 with kappa = 3 s
    plane_equation: bool  # the separated plane equation equals -(a^dagger a + s) on both states


def ladder_check(s) -> LadderReport:
    g0 = ground_state(s)
    g1 = ladder_a_dagger(s, g0)
    number = lambda g: ladder_a_dagger(s, ladder_a(s, g))
    ground = ladder_a(s, g0).is_zero()
    k0 = (number(g0) + g0 * (s - s)).is_zero()
    k1 = (number(g1) + g1 * (s - 3 * s)).is_zero()
    plane = all((plane_operator(s, g) + number(g) + g * s).is_zero() for g in (g0, g1))
    return LadderReport(ground, k0, k1, plane)


# Norm of the Z factor with the |Z| measure.

def _float_poly(p: RatFunc, var: str, energy: float):
    """Callable for a polynomial in var and E, vectorised over numpy arrays."""
    num = p.num
    names = num.variables
    terms = [(float(c), e) for e, c in num.terms.items()]
    den = float(p.den.constant_value())

    def f(x):
        total = np.zeros_like(x, dtype=float)
        for c, exps in terms:
            term = c * np.ones_like(x, dtype=float)
            for name, k in zip(names, exps):
                if k:
                    term = term * (x**k if name == var else energy**k)
            total = total + term
        return total / den

    return f


def density(mode: SchrodingerMode):
    """Z -> |F(Z)|^2 |Z| as a numpy function."""
    energy = math.sqrt(float(mode.E_squared))
    poly = _float_poly(mode.F.poly, "Z", energy)
    expo = _float_poly(mode.F.exponent, "Z", energy)
    return lambda z: poly(z) ** 2 * np.exp(2 * expo(z)) * np.abs(z)


def gauss_legendre(f, a: float, b: float, panel: float = PANEL_WIDTH, nodes: int = QUADRATURE_NODES) -> float:
    """Composite Gauss-Legendre on [a, b]."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    count = max(1, math.ceil((b - a) / panel))
    edges = np.linspace(a, b, count + 1)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid, half = (lo + hi) / 2, (hi - lo) / 2
        total += float(half * np.dot(w, f(mid + half * x)))
    return total


def cutoff(mode: SchrodingerMode) -> float:
    """Smallest L (doubling from |centre| + 1) with the density below the tail bound beyond +-L."""
    rho = density(mode)
    centre = abs(math.sqrt(float(mode.E_squared)) / (2 * mode.s**2))
    L = centre + 1.0
    while True:
        probe = np.linspace(L, 2 * L, 64)
        if max(rho(probe).max(), rho(-probe).max()) * L < TAIL_BOUND:
            return float(L)
        L *= 2


def z_integral(mode: SchrodingerMode, L: float) -> float:
    """Integral of |F|^2 |Z| over [-L, L], split at the fold Z = 0."""
    rho = density(mode)
    return gauss_legendre(rho, -L, 0.0) + gauss_legendre(rho, 0.0, L)


@dataclass(frozen=True)
class NormReport:
    z_integral: float
    plane_integral: float
    t_period: float
    total: float
    cutoff: float
    doubling_delta: float

    @property
    def finite(self) -> bool:
        return math.isfinite(self.total)


def schrodinger_norm(mode: SchrodingerMode) -> NormReport:
    """|phi|^2 integrated with the |Z| measure, over one T period and the ground-state plane factor."""
    if mode.s <= 0:
        raise NotNormalisable("the Z factor is normalisable only for s > 0")
    L = cutoff(mode)
    inner = z_integral(mode, L)
    delta = float(abs(z_integral(mode, 2 * L) - inner))
    plane = 2 * math.pi / mode.s
    return NormReport(inner, plane, T_PERIOD, inner * plane * T_PERIOD, L, delta)


__all__ = [
    "GaussPoly", "LadderReport", "NormReport", "NotNormalisable", "ResidualReport", "SchrodingerMode",
    "cutoff", "density", "energy_squared", "gamma_from_energy", "gauss_legendre", "ground_state",
    "hermite", "ladder_a", "ladder_a_dagger", "ladder_check", "pde_operator", "plane_operator",
    "schrodinger_mode", "schrodinger_norm", "schrodinger_residual", "z_integral",
]
