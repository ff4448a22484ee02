"""Independent sympy oracles shared by the tests."""

from __future__ import annotations

from fractions import Fraction

import sympy

from twistor_jump_lab.exactalg import ExtFunc, MultiPoly, RatFunc


def to_sympy(x):
    """sympy expression for a Fraction, MultiPoly, RatFunc or ExtFunc."""
    if isinstance(x, (int, Fraction)):
        return sympy.Rational(Fraction(x).numerator, Fraction(x).denominator)
    if isinstance(x, MultiPoly):
        return x.as_expr()
    if isinstance(x, RatFunc):
        return x.num.as_expr() / x.den.as_expr()
    if isinstance(x, ExtFunc):
        out = to_sympy(x.a)
        if not x.b.is_zero():
            out += to_sympy(x.b) * sympy.sqrt(to_sympy(x.base))
        return out
    raise TypeError(type(x))


def sympy_equal(a, b) -> bool:
    return sympy.simplify(sympy.expand(a - b)) == 0


def metric_matrix(metric) -> sympy.Matrix:
    n = metric.chart.dim
    return sympy.Matrix(n, n, lambda i, j: to_sympy(metric.components[i][j]))


def ricci_at(G: sympy.Matrix, coords, point) -> sympy.Matrix:
    """Ricci tensor R_bd = d_a Gamma^a_db - d_d Gamma^a_ab + Gamma^a_ae Gamma^e_db - Gamma^a_de Gamma^e_ab."""
    n = len(coords)
    sub = dict(zip(coords, point))
    d1 = [[[sympy.diff(G[i, j], coords[c]) for c in range(n)] for j in range(n)] for i in range(n)]
    d2 = [[[[sympy.diff(d1[i][j][c], coords[e]).subs(sub) for e in range(n)] for c in range(n)]
           for j in range(n)] for i in range(n)]
    D1 = [[[d1[i][j][c].subs(sub) for c in range(n)] for j in range(n)] for i in range(n)]
    g = G.subs(sub)
    gi = g.inv()
    low = [[[(D1[d][c][b] + D1[d][b][c] - D1[b][c][d]) / 2 for c in range(n)] for b in range(n)] for d in range(n)]
    gam = [[[sum(gi[a, d] * low[d][b][c] for d in range(n)) for c in range(n)] for b in range(n)] for a in range(n)]
    dlow = [[[[(d2[d][c][b][e] + d2[d][b][c][e] - d2[b][c][d][e]) / 2 for e in range(n)] for c in range(n)]
             for b in range(n)] for d in range(n)]
    dgi = [[[-sum(gi[a, p] * D1[p][q][e] * gi[q, d] for p in range(n) for q in range(n)) for e in range(n)]
            for d in range(n)] for a in range(n)]
    dgam = [[[[sum(dgi[a][d][e] * low[d][b][c] + gi[a, d] * dlow[d][b][c][e] for d in range(n))
               for e in range(n)] for c in range(n)] for b in range(n)] for a in range(n)]
    ric = sympy.zeros(n)
    for b in range(n):
        for d in range(n):
            v = 0
            for a in range(n):
                v += dgam[a][d][b][a] - dgam[a][a][b][d]
                for e in range(n):
                    v += gam[a][a][e] * gam[e][d][b] - gam[a][d][e] * gam[e][a][b]
            ric[b, d] = sympy.nsimplify(sympy.simplify(v))
    return ric


def gh_series_potential(k: int):
    """V_k by sympy differentiation of q^(-1/2) with a = 1, over positive X, Y, Z."""
    X, Y, Z, lam = sympy.symbols("X Y Z lam", positive=True)
    q = lam**2 * (X - Y) + 2 * lam * Z + (X + Y)
    V = sympy.diff(q ** sympy.Rational(-1, 2), lam, k - 1).subs(lam, 0) / (2 * sympy.factorial(k - 1))
    return sympy.simplify(V), (X, Y, Z)
