"""Killing, homothety and tri-holomorphy checks for vector fields."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from ..exactalg import RatFunc, as_ratfunc
from ..forms import DiffForm, Metric4, VectorField, lie_derivative


@dataclass(frozen=True)
class KillingReport:
    lie_g: Metric4
    is_killing: bool
    homothety_constant: Fraction | None
    triholomorphic: bool | None
    sigma_lie: dict[str, DiffForm] | None = None


def killing_report(metric: Metric4, v: VectorField, sigma: Mapping[str, DiffForm] | None = None) -> KillingReport:
    """L_v g, whether it vanishes or is a constant multiple of g, and L_v Sigma when a basis is given."""
    lie_g = lie_derivative(v, metric)
    is_killing = lie_g.is_zero()
    constant = Fraction(0) if is_killing else None
    if not is_killing:
        factor = lie_g.proportionality_factor(metric)
        if isinstance(factor, RatFunc) and factor.is_constant():
            constant = factor.constant_value()
    tri = None
    sigma_lie = None
    if sigma is not None:
        sigma_lie = {name: lie_derivative(v, form) for name, form in sigma.items()}
        tri = all(f.is_zero() for f in sigma_lie.values())
    return KillingReport(lie_g, is_killing, constant, tri, sigma_lie)


def _monomial_weight(exps, variables, weights) -> Fraction:
    return sum((Fraction(weights.get(v, 0)) * e for v, e in zip(variables, exps)), Fraction(0))


def _homogeneous_weight(f: RatFunc, weights: Mapping[str, object]) -> Fraction | None:
    f = as_ratfunc(f)
    total = Fraction(0)
    for p, sign in ((f.num, 1), (f.den, -1)):
        ws = {_monomial_weight(e, p.variables, weights) for e in p.terms}
        if len(ws) != 1:
            return None
        total += sign * ws.pop()
    return total


def scaling_weight(metric: Metric4, weights: Mapping[str, object]) -> Fraction | None:
    """Constant c with L_V g = c g for V = sum w_i x_i d/dx_i, read off from monomial weights.

    A coefficient g_ij of weight m contributes m + w_i + w_j; returns None unless
    every nonzero entry gives the same number.
    """
    names = metric.chart.coordinates
    total = None
    for i, a in enumerate(names):
        for j, b in enumerate(names):
            c = metric[i, j]
            if c == 0:
                continue
            f = as_ratfunc(c)
            num_w = _homogeneous_weight(f, weights)
            if num_w is None:
                return None
            w = num_w + Fraction(weights.get(a, 0)) + Fraction(weights.get(b, 0))
            if total is None:
                total = w
            elif total != w:
                return None
    return total


def linear_field(chart, weights: Mapping[str, object]) -> VectorField:
    """V = sum w_i x_i d/dx_i."""
    funcs = dict(zip(chart.coordinates, chart.functions()))
    return VectorField(chart, [funcs[c] * Fraction(weights.get(c, 0)) for c in chart.coordinates])


__all__ = ["KillingReport", "killing_report", "linear_field", "scaling_weight"]
