"""Conformal structures from the resultant of the twistor line equations.

For a model tau~ = lambda**(k-2) tau + f(Q, lambda) the tangent directions at a
section are the pairs (delta tau~, delta Q).  The null directions of [g] are the
sections that vanish at a common lambda, so [g] is the Sylvester resultant of
lambda**N * delta tau~ (N clears the poles) and delta Q, with the trivial factor
(delta x0)**m removed.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..exactalg import LaurentPoly, MultiPoly, RatFunc, as_ratfunc, compose, resultant
from ..forms import Chart, Metric4
from ..twistor import (
    ModelError,
    TwistorModel,
    chart_solve,
    constraints,
    differential_names,
    flat_tau,
    restrict,
    section_names,
)

FOLDED_MODULUS = "xm"  # the extra modulus x_{-1} of the k=2 model
FOLDED_DIFFERENTIAL = "dm"


@dataclass(frozen=True)
class ConformalStructure:
    """A quadratic form in coordinate differentials, defined up to scale."""

    chart: Chart
    metric: Metric4
    common_factor: RatFunc

    def quadratic_form(self) -> dict[tuple[str, str], object]:
        return self.metric.quadratic_form()

    def proportional_to(self, other: Metric4):
        """The factor f with other = f * self, or None."""
        return other.proportionality_factor(self.metric)


def chart_names(k: int) -> dict[str, str]:
    """Section coordinates to the (x, y, z, t) chart used for k = 3, 4."""
    return {"x0": "t", "x1": "z", "x2": "y", f"x{k}": "x"}


def _variation(c, names: dict[str, str]):
    """delta c = sum over coordinates of dc/dv * dv."""
    c = as_ratfunc(c)
    total = as_ratfunc(0)
    for v, dv in names.items():
        partial = c.diff(v)
        if not partial.is_zero():
            total = total + partial * MultiPoly.gen(dv)
    return total


def _strip_factor(p: MultiPoly, var: str) -> tuple[MultiPoly, int]:
    """Divide p by the largest power of var that divides it."""
    m = min(exps[p.variables.index(var)] for exps in p.terms) if var in p.variables else 0
    if m == 0:
        return p, 0
    return p.exquo(MultiPoly.gen(var) ** m), m


def _content(p: MultiPoly, differentials: tuple[str, ...]) -> MultiPoly:
    """gcd of the coefficients of p viewed as a polynomial in the differentials."""
    idx = [i for i, v in enumerate(p.variables) if v in differentials]
    content = None
    groups: dict[tuple, dict] = {}
    for m, c in p.terms.items():
        groups.setdefault(tuple(m[i] for i in idx), {})[m] = c
    for terms in groups.values():
        coeff = MultiPoly.from_terms(p.variables, {
            tuple(0 if i in idx else e for i, e in enumerate(m)): c for m, c in terms.items()
        })
        content = coeff.raw if content is None else content.gcd(coeff.raw)
    out = MultiPoly(content, p.variables)
    lc = p.leading_coefficient() / out.leading_coefficient()
    return out * lc


def _quadratic_metric(q: RatFunc, chart: Chart, dnames: dict[str, str]) -> Metric4:
    """Read off a Metric4 from a quadratic polynomial in the differentials."""
    dvars = tuple(dnames[c] for c in chart.coordinates)
    num, den = q.num, q.den
    coeffs: dict[tuple[str, str], RatFunc] = {}
    idx = {v: i for i, v in enumerate(num.variables)}
    for exps, c in num.terms.items():
        degs = {d: exps[idx[d]] for d in dvars if d in idx and exps[idx[d]]}
        if sum(degs.values()) != 2:
            raise ModelError("resultant is not quadratic in the differentials")
        pair = [d for d, e in degs.items() for _ in range(e)]
        a, b = (chart.coordinates[dvars.index(d)] for d in pair)
        key = (a, b) if chart.index(a) <= chart.index(b) else (b, a)
        mono = MultiPoly.from_terms(num.variables, {
            tuple(0 if v in dvars else e for v, e in zip(num.variables, exps)): c
        })
        coeffs[key] = coeffs.get(key, as_ratfunc(0)) + as_ratfunc(mono) / den
    return Metric4.from_quadratic(chart, coeffs)


def _tilde_polynomial(model: TwistorModel) -> tuple[LaurentPoly, dict[str, str]]:
    """lambda**N * tau~ as a polynomial, and the coordinates it depends on with their differentials."""
    k = model.k
    g = restrict(model)
    names = dict(zip(section_names(k), differential_names(k)))
    tilde = g.truncate(None, 0)
    if model.name != "patch_flat" and k == 2:
        # both sides of the splitting are constant: x_{-1} is a new modulus
        tilde = tilde.truncate(None, -1) + LaurentPoly({0: MultiPoly.gen(FOLDED_MODULUS)})
        names = {FOLDED_MODULUS: FOLDED_DIFFERENTIAL, **names}
    if tilde.is_zero():
        raise ModelError("the cocycle has no polar part: the structure is degenerate")
    return tilde.shift(-tilde.min_power()), names


def conformal_from_resultant(model: TwistorModel) -> ConformalStructure:
    """[g] from Res(lambda**N delta tau~, delta Q) with the (delta x0)**m factor removed.

    patch_2 models use the cone chart from chart_solve (k >= 4) and the chart
    (x, y, z, t) = (x_k, x2, x1, x0).  The flat model imposes x2 = .. = x(k-2) = 0
    and keeps the chart (x0, x1, x(k-1), xk).  k = 2 keeps (xm, x0, x1, x2).
    """
    k = model.k
    if k < 2:
        raise ModelError("the resultant construction needs k >= 2")
    tilde, names = _tilde_polynomial(model)
    subs: dict[str, object] = {}
    dsubs: dict[str, object] = {}
    xs = section_names(k)
    if model.name == "patch_flat":
        _, conditions = flat_tau(model)
        for c in conditions:
            (v,) = c.occurring()
            subs[v] = 0
            dsubs[names[v]] = 0
        chart_vars = tuple(v for v in xs if v not in subs)
        rename = {}
    elif k >= 4:
        sol = chart_solve(constraints(model), k)
        subs.update(sol.solved)
        dsubs.update(sol.differentials)
        chart_vars = sol.chart
        rename = chart_names(k)
    elif k == 3:
        chart_vars = xs
        rename = chart_names(k)
    else:
        chart_vars = (FOLDED_MODULUS,) + xs
        rename = {}

    def reduce(c):
        c = as_ratfunc(c)
        return as_ratfunc(compose(c, {**subs, **dsubs})) if subs or dsubs else c

    dtilde = LaurentPoly({m: reduce(_variation(c, names)) for m, c in tilde.coeffs.items()})
    dq = LaurentPoly({i: reduce(MultiPoly.gen(names[x])) for i, x in enumerate(xs)})
    res = as_ratfunc(resultant(dtilde, dq))
    if res.is_zero():
        raise ModelError("resultant vanishes identically")

    d0 = names["x0"]
    num, power = _strip_factor(res.num, d0)
    dvars = tuple(names[v] for v in chart_vars)
    content = _content(num, dvars)
    num = num.exquo(content)
    common = as_ratfunc(MultiPoly.gen(d0) ** power * content) / res.den
    if power < (k if model.name != "patch_flat" else k - 1):
        raise ModelError(f"only (d x0)^{power} divides the resultant")

    chart = Chart(chart_vars, f"{model.name} k={k}")
    metric = _quadratic_metric(as_ratfunc(num), chart, {v: names[v] for v in chart_vars})
    if rename:
        metric = rename_metric(metric, rename)
    return ConformalStructure(metric.chart, metric, common)


def rename_metric(metric: Metric4, rename: dict[str, str]) -> Metric4:
    """Rename chart coordinates; the new chart is ordered (x, y, z, t) when those names appear."""
    new_names = [rename.get(c, c) for c in metric.chart.coordinates]
    order = ("x", "y", "z", "t")
    if set(order) == set(new_names):
        new_names_sorted = list(order)
    else:
        new_names_sorted = new_names
    chart = Chart(tuple(new_names_sorted), metric.chart.label)
    mapping = {old: MultiPoly.gen(rename[old]) for old in rename}
    coeffs = {}
    for (a, b), c in metric.quadratic_form().items():
        coeffs[(rename.get(a, a), rename.get(b, b))] = as_ratfunc(compose(c, mapping))
    return Metric4.from_quadratic(chart, coeffs)


def flat_expected(k: int) -> Metric4:
    """d x_k d x0 - d x(k-1) d x1 on the chart (x0, x1, x(k-1), xk)."""
    chart = Chart(("x0", "x1", f"x{k - 1}", f"x{k}"))
    return Metric4.from_quadratic(chart, {("x0", f"x{k}"): 1, ("x1", f"x{k - 1}"): -1})


__all__ = [
    "ConformalStructure", "FOLDED_MODULUS", "conformal_from_resultant", "flat_expected",
    "chart_names", "rename_metric",
]
