"""Reference metrics, conformal factors and self-dual two-form bases in closed form."""

from __future__ import annotations

from fractions import Fraction

from ..exactalg import ExtFunc, MultiPoly, RatFunc, as_ratfunc
from ..forms import Chart, ChartMap, DiffForm, Metric4, pullback
from ..twistor import ModelError, patch_2
from .conformal import conformal_from_resultant

XYZT = Chart(("x", "y", "z", "t"), "cone chart")
TXYZ = Chart(("T", "X", "Y", "Z"), "Gibbons-Hawking chart")


def _scale(a) -> RatFunc:
    return as_ratfunc(MultiPoly.gen("a")) if a is None else as_ratfunc(Fraction(a))


def bracket_g2() -> Metric4:
    """The k=3 conformal class in the chart (x, y, z, t)."""
    x, y, z, t = XYZT.functions()
    return Metric4.from_quadratic(XYZT, {
        ("x", "x"): t**3, ("x", "y"): 2 * t**2 * z, ("x", "z"): t * (y * t + z**2),
        ("x", "t"): z * (3 * y * t - z**2), ("y", "y"): t * z**2, ("y", "z"): z * (y * t + z**2),
        ("y", "t"): y * (y * t + z**2), ("z", "z"): y * z**2, ("z", "t"): 2 * y**2 * z,
        ("t", "t"): y**3,
    })


def bracket_g4() -> Metric4:
    """The k=4 conformal class on the cone tw + zy = 0, chart (x, y, z, t)."""
    x, y, z, t = XYZT.functions()
    return Metric4.from_quadratic(XYZT, {
        ("x", "x"): t**6,
        ("x", "z"): -t**3 * z * (t * y + z**2),
        ("x", "y"): 2 * t**4 * (t * y - z**2),
        ("x", "t"): t**2 * (2 * t**2 * y**2 - 5 * t * y * z**2 + z**4),
        ("z", "z"): -2 * t * y * z**2 * (t * y - z**2),
        ("z", "y"): -t * z * (t**2 * y**2 - z**4),
        ("z", "t"): -y * z * (t**2 * y**2 - 6 * t * y * z**2 + z**4),
        ("y", "y"): t**2 * (t * y - z**2)**2,
        ("y", "t"): 2 * t**2 * y**2 * (t * y + z**2),
        ("t", "t"): y**2 * (t**2 * y**2 + 4 * t * y * z**2 - z**4),
    })


def conformal_factor(k: int, a=1) -> RatFunc:
    """Omega**2 turning the bracket into a Ricci-flat metric (k = 3, 4)."""
    x, y, z, t = XYZT.functions()
    a = _scale(a)
    if k == 3:
        return 2 * a**3 / (z**2 - y * t)
    if k == 4:
        return 2 * a**4 / (t**2 * z * (3 * t * y - z**2))
    raise ModelError(f"no conformal factor known for k={k}")


def folded_gg() -> Metric4:
    """Z (dX^2 + dY^2 + dZ^2) + Z^-1 (dT + X dY / 2 - Y dX / 2)^2."""
    T, X, Y, Z = TXYZ.functions()
    one_form = DiffForm(TXYZ, 1, {(0,): 1, (1,): -Y / 2, (2,): X / 2})
    flat = Metric4(TXYZ, [[0, 0, 0, 0], [0, Z, 0, 0], [0, 0, Z, 0], [0, 0, 0, Z]])
    return flat + Metric4.symmetric_product(one_form, one_form) / Z


def ricci_flat_representative(k: int, a=1) -> Metric4:
    """Omega**2 [g] for k = 3, 4; the folded metric for k = 2 (a = 1 there)."""
    if k == 2:
        return folded_gg()
    if k == 3:
        return bracket_g2() * conformal_factor(3, a)
    if k == 4:
        return bracket_g4() * conformal_factor(4, a)
    raise ModelError(f"no conformal factor known for k={k}")


def folded_substitution() -> ChartMap:
    """(xm, x0, x1, x2) in terms of (T, X, Y, Z) with i and sqrt(2) adjoined."""
    T, X, Y, Z = TXYZ.functions()
    i = as_ratfunc(MultiPoly.gen("I"))
    half_root2 = lambda f: ExtFunc(0, f / 2, 2)  # f / sqrt(2)
    source = Chart(("xm", "x0", "x1", "x2"))
    return ChartMap(TXYZ, source, {
        "xm": -2 * i * T + (X**2 + Y**2) / 2 - Z**2,
        "x0": half_root2(X + i * Y),
        "x1": ExtFunc(0, i * Z, 2),
        "x2": half_root2(X - i * Y),
    })


def folded_metric() -> Metric4:
    """The k=2 resultant structure pulled back to (T, X, Y, Z), scaled so dZ^2 has coefficient Z."""
    cs = conformal_from_resultant(patch_2(2, 1))
    pulled = pullback(folded_substitution(), cs.metric)
    scale = as_ratfunc(MultiPoly.gen("Z")) / pulled["Z", "Z"]
    out = pulled * scale
    if any(c.has_imag() if isinstance(c, RatFunc) else True for row in out.components for c in row):
        raise ModelError("folded metric is not real after the substitution")
    return out


def sigma_basis(k: int) -> dict[str, DiffForm]:
    """Covariantly constant self-dual two-forms Sigma^00, Sigma^01, Sigma^11 (k = 3, 4)."""
    x, y, z, t = XYZT.functions()
    F = lambda terms: DiffForm.from_terms(XYZT, terms)
    s00 = F([(2 * t, "xy"), (2 * y, "xt"), (2 * z, "xz")])
    if k == 3:
        s01 = F([(t, "xz"), (z, "xt"), (z, "yz"), (y, "yt")])
        s11 = F([(2 * t, "xt"), (2 * y, "zt"), (2 * z, "yt")])
    elif k == 4:
        s01 = F([(t, "xz"), (z, "xt"), (-(y * t - z**2) / t, "zy"),
                 (-y * (y * t + z**2) / t**2, "zt"), (-2 * y * z / t, "yt")])
        s11 = F([(4 * y * z / t, "tz"), (-2 * t, "tx"), (-2 * (y * t - z**2) / t, "ty")])
    else:
        raise ModelError(f"no two-form basis recorded for k={k}")
    return {"00": s00, "01": s01, "11": s11}


__all__ = [
    "TXYZ", "XYZT", "bracket_g2", "bracket_g4", "conformal_factor", "folded_gg", "folded_metric",
    "folded_substitution", "ricci_flat_representative", "sigma_basis",
]


