"""Christoffel symbols, Riemann, Ricci and scalar curvature at exact points.

Metric components are differentiated symbolically once per metric and then
evaluated, so every tensor entry is an exact rational.  A second route
estimates the derivatives by central differences on exact rational points.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from ..exactalg import ExtFunc
from ..forms import Metric4


class DegenerateMetricError(ArithmeticError):
    pass


class SingularPointError(ArithmeticError):
    pass


@dataclass(frozen=True)
class CurvatureReport:
    """Gamma^a_bc, R^a_bcd, R_bd and R at one point; entries indexed in chart order."""

    coordinates: tuple[str, ...]
    christoffels: tuple
    riemann: tuple
    ricci: tuple
    scalar: object

    def ricci_max(self) -> float:
        return max(abs(float(c)) for row in self.ricci for c in row)

    def is_ricci_flat(self) -> bool:
        return all(c == 0 for row in self.ricci for c in row)

    def is_flat(self) -> bool:
        return all(c == 0 for a in self.riemann for b in a for c in b for d in c)


def _value(f, point: Mapping[str, Fraction]) -> Fraction:
    try:
        v = f.evaluate(point)
    except ZeroDivisionError as exc:
        raise SingularPointError(f"metric has a pole at {dict(point)}") from exc
    if isinstance(f, ExtFunc):
        if not v.is_rational():
            v = v.exact()
        else:
            v = v.a
    if not isinstance(v, Fraction):
        raise TypeError(f"curvature needs real rational values, got {v!r}")
    return v


def _derivatives(metric: Metric4):
    """(first, second) symbolic derivatives of the components, cached on the metric."""
    if metric._derivatives is None:
        names = metric.chart.coordinates
        n = len(names)
        g = metric.components
        first = [[[g[i][j].diff(names[c]) for c in range(n)] if j >= i else None for j in range(n)]
                 for i in range(n)]
        second = [[[[first[i][j][c].diff(names[e]) if e >= c else None for e in range(n)]
                    for c in range(n)] if j >= i else None for j in range(n)] for i in range(n)]
        metric._derivatives = (first, second)
    return metric._derivatives


def _inverse(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    a = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise DegenerateMetricError("metric is degenerate at the point")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def assemble(coordinates, g, dg, ddg) -> CurvatureReport:
    """Curvature from g_ij, d_c g_ij and d_c d_e g_ij (full symmetric arrays)."""
    n = len(g)
    r = range(n)
    gi = _inverse(g)
    # Gamma_{d,bc} with the first index lowered
    low = [[[(dg[d][c][b] + dg[d][b][c] - dg[b][c][d]) / 2 for c in r] for b in r] for d in r]
    gam = [[[sum(gi[a][d] * low[d][b][c] for d in r) for c in r] for b in r] for a in r]
    dlow = [[[[(ddg[d][c][b][e] + ddg[d][b][c][e] - ddg[b][c][d][e]) / 2 for e in r] for c in r]
             for b in r] for d in r]
    dgi = [[[-sum(gi[a][p] * dg[p][q][e] * gi[q][d] for p in r for q in r) for e in r] for d in r] for a in r]
    dgam = [[[[sum(dgi[a][d][e] * low[d][b][c] + gi[a][d] * dlow[d][b][c][e] for d in r) for e in r]
              for c in r] for b in r] for a in r]
    # R^a_{bcd} = d_c Gamma^a_{db} - d_d Gamma^a_{cb} + Gamma^a_{ce} Gamma^e_{db} - Gamma^a_{de} Gamma^e_{cb}
    riem = [[[[dgam[a][d][b][c] - dgam[a][c][b][d]
               + sum(gam[a][c][e] * gam[e][d][b] - gam[a][d][e] * gam[e][c][b] for e in r)
               for d in r] for c in r] for b in r] for a in r]
    ricci = [[sum(riem[a][b][a][d] for a in r) for d in r] for b in r]
    scalar = sum(gi[b][d] * ricci[b][d] for b in r for d in r)

    def freeze(x):
        return tuple(freeze(y) for y in x) if isinstance(x, list) else x

    return CurvatureReport(tuple(coordinates), freeze(gam), freeze(riem), freeze(ricci), scalar)


def _symmetrize(first, second, n):
    dg = [[first[min(i, j)][max(i, j)] for j in range(n)] for i in range(n)]
    ddg = [[[[second[min(i, j)][max(i, j)][min(c, e)][max(c, e)] for e in range(n)] for c in range(n)]
            for j in range(n)] for i in range(n)]
    return dg, ddg


def curvature(metric: Metric4, point: Mapping[str, object]) -> CurvatureReport:
    """Exact curvature at a rational point (extra names such as 'a' may be included)."""
    point = {k: Fraction(v) for k, v in point.items()}
    missing = set(metric.chart.coordinates) - set(point)
    if missing:
        raise KeyError(f"point lacks coordinates {sorted(missing)}")
    n = metric.chart.dim
    first, second = _derivatives(metric)
    g = [[_value(metric.components[i][j], point) for j in range(n)] for i in range(n)]
    d1 = [[[_value(first[i][j][c], point) for c in range(n)] if j >= i else None for j in range(n)]
          for i in range(n)]
    d2 = [[[[_value(second[i][j][c][e], point) if e >= c else None for e in range(n)] for c in range(n)]
           if j >= i else None for j in range(n)] for i in range(n)]
    dg, ddg = _symmetrize(d1, d2, n)
    return assemble(metric.chart.coordinates, g, dg, ddg)


def curvature_finite_difference(metric: Metric4, point: Mapping[str, object],
                                step: Fraction = Fraction(1, 10**6)) -> CurvatureReport:
    """Curvature with derivatives from central differences on exact rational points.

    Truncation error is O(step**2); no symbolic differentiation is used.
    """
    point = {k: Fraction(v) for k, v in point.items()}
    names = metric.chart.coordinates
    n = len(names)
    h = Fraction(step)
    cache: dict[tuple, list[list[Fraction]]] = {}

    def g_at(offsets: tuple[int, ...]):
        if offsets not in cache:
            p = dict(point)
            for name, o in zip(names, offsets):
                p[name] = p[name] + o * h
            cache[offsets] = [[_value(metric.components[i][j], p) for j in range(n)] for i in range(n)]
        return cache[offsets]

    def shift(**moves):
        return tuple(moves.get(str(c), 0) for c in range(n))

    zero = shift()
    g = g_at(zero)
    plus = [g_at(shift(**{str(c): 1})) for c in range(n)]
    minus = [g_at(shift(**{str(c): -1})) for c in range(n)]
    dg = [[[(plus[c][i][j] - minus[c][i][j]) / (2 * h) for c in range(n)] for j in range(n)] for i in range(n)]
    ddg = [[[[None] * n for _ in range(n)] for _ in range(n)] for _ in range(n)]
    for c in range(n):
        for e in range(c, n):
            if c == e:
                vals = [[(plus[c][i][j] - 2 * g[i][j] + minus[c][i][j]) / h**2 for j in range(n)] for i in range(n)]
            else:
                pp = g_at(shift(**{str(c): 1, str(e): 1}))
                pm = g_at(shift(**{str(c): 1, str(e): -1}))
                mp = g_at(shift(**{str(c): -1, str(e): 1}))
                mm = g_at(shift(**{str(c): -1, str(e): -1}))
                vals = [[(pp[i][j] - pm[i][j] - mp[i][j] + mm[i][j]) / (4 * h**2) for j in range(n)] for i in range(n)]
            for i in range(n):
                for j in range(n):
                    ddg[i][j][c][e] = ddg[i][j][e][c] = vals[i][j]
    return assemble(names, g, dg, ddg)


__all__ = [
    "CurvatureReport", "DegenerateMetricError", "SingularPointError", "assemble", "curvature",
    "curvature_finite_difference",
]
