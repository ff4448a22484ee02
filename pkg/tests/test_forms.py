from fractions import Fraction
from itertools import combinations

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from oracles import metric_matrix, to_sympy
from twistor_jump_lab.exactalg import ExtFunc, MultiPoly
from twistor_jump_lab.forms import (
    Chart,
    ChartMap,
    ChartMismatch,
    DiffForm,
    Metric4,
    VectorField,
    exterior_d,
    interior,
    lie_derivative,
    pullback,
    wedge,
)

C = Chart(("x", "y", "z", "t"))
NAMES = C.coordinates
rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)
monomials = st.tuples(*(st.integers(0, 2) for _ in NAMES))
polys = st.dictionaries(monomials, rationals, max_size=3).map(lambda t: MultiPoly.from_terms(NAMES, t))


@st.composite
def forms(draw, degree=None):
    p = draw(st.integers(0, 2)) if degree is None else degree
    keys = list(combinations(range(4), p))
    comps = {k: draw(polys) for k in keys if draw(st.booleans())}
    return DiffForm(C, p, comps)


vectors = st.lists(polys, min_size=4, max_size=4).map(lambda cs: VectorField(C, cs))


@settings(max_examples=40)
@given(forms())
def test_d_squared_vanishes(a):
    assert exterior_d(exterior_d(a)).is_zero()


@settings(max_examples=40)
@given(forms(), forms())
def test_wedge_is_graded_commutative(a, b):
    if a.degree + b.degree > 4:
        return
    assert wedge(a, b) == wedge(b, a) * (-1) ** (a.degree * b.degree)


@settings(max_examples=30)
@given(forms(1), forms())
def test_leibniz_rule(a, b):
    if a.degree + b.degree + 1 > 4:
        return
    lhs = exterior_d(wedge(a, b))
    rhs = wedge(exterior_d(a), b) - wedge(a, exterior_d(b))
    assert lhs == rhs


@settings(max_examples=30)
@given(vectors, forms(1), forms(1))
def test_interior_is_an_antiderivation(v, a, b):
    lhs = interior(v, wedge(a, b))
    rhs = wedge(interior(v, a), b) - wedge(a, interior(v, b))
    assert lhs == rhs


@settings(max_examples=30)
@given(vectors, forms())
def test_lie_derivative_commutes_with_d(v, a):
    if a.degree == 4:
        return
    assert lie_derivative(v, exterior_d(a)) == exterior_d(lie_derivative(v, a))


@settings(max_examples=25)
@given(vectors, forms(1))
def test_lie_derivative_of_metric_is_a_derivation(v, a):
    g = Metric4.symmetric_product(a, a)
    la = lie_derivative(v, a)
    assert lie_derivative(v, g) == Metric4.symmetric_product(la, a) * 2


def test_lie_derivative_of_function_is_directional_derivative():
    x, y, z, t = C.functions()
    f = DiffForm.function(C, x**2 * y)
    v = VectorField(C, [y, 0, 0, 1])
    assert lie_derivative(v, f) == DiffForm.function(C, 2 * x * y**2)


def test_quadratic_form_convention():
    g = Metric4.from_quadratic(C, {("x", "y"): 2, ("t", "t"): 3})
    assert g["x", "y"] == 1 and g["y", "x"] == 1 and g["t", "t"] == 3
    assert g.quadratic_form()[("x", "y")] == 2


def test_symmetric_product_convention():
    dx, dy = DiffForm.differential(C, "x"), DiffForm.differential(C, "y")
    g = Metric4.symmetric_product(dx, dy)
    assert g["x", "y"] == Fraction(1, 2)
    assert g.quadratic_form() == {("x", "y"): 1}


def test_metric_must_be_symmetric():
    with pytest.raises(ValueError):
        Metric4(C, [[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])


def test_chart_mismatch():
    other = Chart(("a", "b", "c", "d"))
    with pytest.raises(ChartMismatch):
        wedge(DiffForm.differential(C, "x"), DiffForm.differential(other, "a"))


def test_pullback_of_metric_matches_sympy_jacobian():
    src = Chart(("u", "v", "p", "q"))
    u, v, p, q = src.functions()
    phi = ChartMap(src, C, {"x": u * v, "y": u + q, "z": p**2, "t": v - p * q})
    x, y, z, t = C.functions()
    g = Metric4.from_quadratic(C, {("x", "x"): y, ("x", "t"): 1, ("z", "z"): x + 1, ("y", "y"): 1})
    got = metric_matrix(pullback(phi, g))
    U = sympy.symbols("u v p q")
    X = sympy.symbols("x y z t")
    images = [to_sympy(phi.components[n]) for n in NAMES]
    J = sympy.Matrix(4, 4, lambda i, a: sympy.diff(images[i], U[a]))
    G = metric_matrix(g).subs(dict(zip(X, images)), simultaneous=True)
    assert sympy.simplify(got - J.T * G * J) == sympy.zeros(4)


@settings(max_examples=15)
@given(forms())
def test_pullback_commutes_with_d(a):
    src = Chart(("u", "v", "p", "q"))
    u, v, p, q = src.functions()
    phi = ChartMap(src, C, {"x": u + v * p, "y": v, "z": p * q, "t": q + u})
    assert pullback(phi, exterior_d(a)) == exterior_d(pullback(phi, a))


def test_pullback_through_a_radical_map():
    src = Chart(("s", "v", "p", "q"))
    s, v, p, q = src.functions()
    phi = ChartMap(src, C, {"x": ExtFunc(0, 1, s), "y": v, "z": p, "t": q})
    g = Metric4.from_quadratic(C, {("x", "x"): 4, ("y", "y"): 1, ("z", "z"): 1, ("t", "t"): 1})
    # x = sqrt(s) gives dx = ds / (2 sqrt(s)) so 4 dx^2 = ds^2 / s
    assert pullback(phi, g)["s", "s"] == 1 / s
