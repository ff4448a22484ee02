"""The generalised Legendre transform for the Riemannian k=4 example, and the spinor two-forms.

Real sections Q = t + lam z + lam^2 y - lam^3 zb + lam^4 tb give
F = residue of Q^3 lam^-4 (1 - lam^-6).  The constraint is phi = F_y = 0,
u = F_z, and the Kahler potential Omega = F - u z - ub zb becomes
-2i (t^3 - tb^3) R^3 in (t, tb, u, ub), where R^2 is rational in those coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping

from ..exactalg import (
    ExtFunc,
    IMAG,
    LaurentPoly,
    MultiPoly,
    RatFunc,
    RationalSampler,
    SamplingExhausted,
    as_ext,
    as_ratfunc,
)
from ..forms import Chart, ChartMap, DiffForm, pullback, wedge
from ..metrics.reference import XYZT, sigma_basis
from ..twistor import K4_DICTIONARY, residue, zrm_field

SECTION_VARIABLES = ("t", "tb", "z", "zb", "y")
POTENTIAL_VARIABLES = ("t", "tb", "u", "ub")
AMBIENT = Chart(("t", "z", "y", "w", "x"), "sections of O(4)")
NUMERIC_TOLERANCE = 1e-10


def _gens(names):
    return tuple(as_ratfunc(MultiPoly.gen(n)) for n in names)


def printed_F() -> RatFunc:
    t, tb, z, zb, y = _gens(SECTION_VARIABLES)
    return 6 * y * t * z + 6 * y * tb * zb + z**3 + zb**3 - 3 * z * tb**2 - 3 * zb * t**2


def residue_F() -> RatFunc:
    """Coefficient of lam^-1 in Q^3 lam^-4 (1 - lam^-6) on the real section."""
    t, tb, z, zb, y = _gens(SECTION_VARIABLES)
    Q = LaurentPoly({0: t, 1: z, 2: y, 3: -zb, 4: tb})
    G = Q**3 * LaurentPoly({-4: 1, -10: -1})
    return as_ratfunc(residue(G, -1))


def r_squared() -> RatFunc:
    """R^2 = -1 - (ub t - u tb) / (3 (t^3 - tb^3))."""
    t, tb, u, ub = _gens(POTENTIAL_VARIABLES)
    return -1 - (ub * t - u * tb) / (3 * (t**3 - tb**3))


def potential_omega() -> ExtFunc:
    """Omega = -2i (t^3 - tb^3) R^3 with R^3 = R^2 sqrt(R^2)."""
    t, tb, _, _ = _gens(POTENTIAL_VARIABLES)
    i = as_ratfunc(MultiPoly.gen(IMAG))
    R2 = r_squared()
    return ExtFunc(0, -2 * i * (t**3 - tb**3) * R2, R2)


@dataclass(frozen=True)
class LegendreData:
    F: RatFunc
    phi: RatFunc
    u: RatFunc
    ubar: RatFunc
    omega: ExtFunc
    checks: dict[str, bool] = field(default_factory=dict)


def legendre_build() -> LegendreData:
    """F from the residue, the constraint, the Legendre coordinates and Omega, with consistency checks."""
    F = residue_F()
    t, tb, z, zb, y = _gens(SECTION_VARIABLES)
    phi, u, ubar = F.diff("y"), F.diff("z"), F.diff("zb")
    checks = {
        "F_matches_printed": F == printed_F(),
        "phi": phi == 6 * (t * z + tb * zb),
        "u": u == 6 * y * t + 3 * z**2 - 3 * tb**2,
        "legendre_potential": F - u * z - ubar * zb == -2 * (z**3 + zb**3),
    }
    checks["omega_on_constraint"] = _omega_on_constraint(u, ubar)
    return LegendreData(F, phi, u, ubar, potential_omega(), checks)


def _omega_on_constraint(u: RatFunc, ubar: RatFunc) -> bool:
    """On zb = -t z / tb, R^2 = (-i z / tb)^2 and -2i (t^3 - tb^3) R^3 = -2 (z^3 + zb^3) for R = -i z / tb."""
    t, tb, z, _, y = _gens(SECTION_VARIABLES)
    i = as_ratfunc(MultiPoly.gen(IMAG))
    zb = -t * z / tb
    on = {"zb": zb}
    R2 = r_squared().subs({"u": u.subs(on), "ub": ubar.subs(on)})
    R = -i * z / tb
    omega = -2 * i * (t**3 - tb**3) * R**3
    return R2 == R**2 and omega == -2 * (z**3 + zb**3)


def heavenly_residual(omega) -> ExtFunc:
    """Omega_{t tb} Omega_{u ub} - Omega_{t ub} Omega_{u tb} - 1."""
    omega = as_ext(omega)
    d = lambda a, b: omega.diff(a).diff(b)
    return d("t", "tb") * d("u", "ub") - d("t", "ub") * d("u", "tb") - 1


@dataclass(frozen=True)
class HeavenlyReport:
    exact_zero: bool
    numeric: list[tuple[dict, float]]

    @property
    def numeric_ok(self) -> bool:
        return all(err < NUMERIC_TOLERANCE for _, err in self.numeric)


def admissible_points(seed: int, count: int) -> list[dict[str, Fraction]]:
    """Rational (t, tb, u, ub), treated as independent, with R^2 > 0 and t^3 != tb^3."""
    R2 = r_squared()

    def ok(p):
        value = R2.evaluate(p)
        return p["t"] ** 3 != p["tb"] ** 3 and value > 0

    try:
        return RationalSampler(seed).points(POTENTIAL_VARIABLES, count, ok)
    except SamplingExhausted as exc:
        raise SamplingExhausted(f"R^2 <= 0 at every candidate point: {exc}") from exc


def heavenly_check(data: LegendreData | None = None, points: Iterable[Mapping] | None = None,
                   omega=None, seed: int = 0, count: int = 3) -> HeavenlyReport:
    """Exact identity in the R^2 extension, plus |LHS - 1| at admissible points."""
    omega = (data.omega if data is not None else potential_omega()) if omega is None else omega
    residual = heavenly_residual(omega)
    pts = list(points) if points is not None else admissible_points(seed, count)
    numeric = [(p, abs(complex(residual.evaluate(p)))) for p in pts]
    return HeavenlyReport(residual.is_zero(), numeric)


# Spinor two-forms on the space of sections of O(4).

_SCALE = {4: Fraction(1), 3: Fraction(1, 4), 2: Fraction(1, 6), 1: Fraction(1, 4), 0: Fraction(1)}
_COORD = {4: "t", 3: "z", 2: "y", 1: "w", 0: "x"}
_EPS = ((0, 1), (-1, 0))  # eps_{01} = 1; v_B = v^A eps_{AB}


def _dx(*indices) -> DiffForm:
    """d x^{ABCD}: t = x^1111, z = 4 x^1110, y = 6 x^1100, w = 4 x^1000, x = x^0000."""
    n = sum(indices)
    return DiffForm.differential(AMBIENT, _COORD[n]) * _SCALE[n]


def _dx_low(low: tuple, up: tuple) -> DiffForm:
    """dx_{low}^{up}, lowering each listed index with eps."""
    out = DiffForm.zero(AMBIENT, 1)
    for raised in product((0, 1), repeat=len(low)):
        sign = 1
        for r, l in zip(raised, low):
            sign *= _EPS[r][l]
        if sign:
            out = out + _dx(*raised, *up) * sign
    return out


def spinor_sigma(psi: Mapping[int, object] | None = None) -> dict[str, DiffForm]:
    """Sigma^{AB} = 1/8 psi^{AB}_{B1C1} dx_{PQR}^{B1} ^ dx^{PQRC1} + 3/2 psi_{B1B2C1C2} dx_P^{B1B2(A} ^ dx^{C1)C2BP}.

    psi maps the number of 1-indices to the component; the default is the
    spin-2 field of f = Q^2 lam^-4 with its residue normalization.
    """
    if psi is None:
        field_ = zrm_field()
        names = {old: MultiPoly.gen(new) for old, new in K4_DICTIONARY.items()}
        psi = {n: as_ratfunc(c).subs(names) for n, c in enumerate(field_.raw())}
    comp = lambda *idx: psi[sum(idx)]
    out = {}
    for A, B in ((0, 0), (0, 1), (1, 1)):
        first = DiffForm.zero(AMBIENT, 2)
        for P, Q, R, B1, C1 in product((0, 1), repeat=5):
            # psi^{AB}_{B1C1} = eps^{A A1} eps^{B B2} psi_{A1 B2 B1 C1}
            up = sum(_EPS[A][A1] * _EPS[B][B2] * comp(A1, B2, B1, C1) for A1 in (0, 1) for B2 in (0, 1))
            if up == 0:
                continue
            first = first + wedge(_dx_low((P, Q, R), (B1,)), _dx(P, Q, R, C1)) * up
        second = DiffForm.zero(AMBIENT, 2)
        for B1, B2, C1, C2, P in product((0, 1), repeat=5):
            c = comp(B1, B2, C1, C2)
            if c == 0:
                continue
            sym = (wedge(_dx_low((P,), (B1, B2, A)), _dx(C1, C2, B, P))
                   + wedge(_dx_low((P,), (B1, B2, C1)), _dx(A, C2, B, P))) * Fraction(1, 2)
            second = second + sym * c
        out[f"{A}{B}"] = first * Fraction(1, 8) + second * Fraction(3, 2)
    return out


def printed_spinor_sigma() -> dict[str, DiffForm]:
    """The explicit k=4 list of Sigma^{AB} on (t, z, y, w, x)."""
    t, z, y, w, x = AMBIENT.functions()
    h = Fraction(1, 2)
    F = lambda terms: DiffForm.from_terms(AMBIENT, terms)
    return {
        "00": F([(2 * z, "xz"), (h * z, "wy"), (2 * y, "xt"), (-h * y, "zw"), (h * w, "wt"), (2 * t, "xy")]),
        "01": F([(z, "xt"), (-z, "zw"), (y, "wt"), (h * y, "yz"), (h * w, "yt"), (t, "xz"), (h * t, "wy")]),
        "11": F([(2 * z, "wt"), (h * z, "yz"), (2 * y, "yt"), (3 * h * w, "zt"), (2 * t, "xt"), (-h * t, "zw")]),
    }


def cone_embedding() -> ChartMap:
    """(x, y, z, t) into the sections with w = -z y / t."""
    x, y, z, t = XYZT.functions()
    return ChartMap(XYZT, AMBIENT, {"t": t, "z": z, "y": y, "w": -z * y / t, "x": x})


@dataclass(frozen=True)
class SpinorForms:
    ambient: dict[str, DiffForm]
    cone: dict[str, DiffForm]
    checks: dict[str, bool]
    mismatches: dict[str, str]


def _mismatch(got: DiffForm, want: DiffForm) -> str:
    diff = got - want
    return "" if diff.is_zero() else f"difference {diff}"


def legendre_sd_forms() -> SpinorForms:
    """Expand the spinor formula, compare with the printed list, pull back to the cone."""
    ambient = spinor_sigma()
    printed = printed_spinor_sigma()
    phi = cone_embedding()
    cone = {k: pullback(phi, f) for k, f in ambient.items()}
    reference = sigma_basis(4)
    checks, mismatches = {}, {}
    for key in ambient:
        for label, got, want in (("printed", ambient[key], printed[key]), ("cone", cone[key], reference[key])):
            name = f"{label}_{key}"
            checks[name] = (got - want).is_zero()
            if not checks[name]:
                mismatches[name] = _mismatch(got, want)
    return SpinorForms(ambient, cone, checks, mismatches)


__all__ = [
    "AMBIENT", "HeavenlyReport", "LegendreData", "SpinorForms", "admissible_points", "cone_embedding",
    "heavenly_check", "heavenly_residual", "legendre_build", "legendre_sd_forms", "potential_omega",
    "printed_F", "printed_spinor_sigma", "r_squared", "residue_F", "spinor_sigma",
]
