"""Exact arithmetic: rationals, polynomials, rational functions, one radical, Laurent series in lambda."""

from fractions import Fraction as Rational

from .algebra import IMAG, GaussRational, MultiPoly, RatFunc, as_ratfunc, variables_function
from .laurent import LAMBDA, LaurentPoly
from .linalg import bareiss_det, matrix_rank, nullspace_dim, resultant, sylvester_matrix
from .radical import (
    ExtFunc,
    ExtValue,
    NegativeRadicandError,
    NestedRadicalError,
    as_ext,
    compose,
    rational_sqrt,
    ratfunc_sqrt,
    simplify_value,
)
from .sampling import RationalSampler, SamplingExhausted, denominators_nonzero
from .serialize import (
    exact_to_json,
    float_to_str,
    multipoly_from_json,
    multipoly_to_json,
    rational_from_str,
    rational_to_str,
)


def _declared(f) -> tuple[str, ...]:
    if isinstance(f, ExtFunc):
        return f.variables
    return f.variables


def derivative(f, var: str):
    """Partial derivative; unlike the .diff methods, var must be declared on f."""
    if var not in _declared(f):
        raise KeyError(f"unknown variable {var!r}; declared: {_declared(f)}")
    return f.diff(var)


def evaluate(f, point):
    """Exact value of f at point; ExtFunc yields an ExtValue."""
    if isinstance(f, (int, Rational)):
        return Rational(f)
    return f.evaluate(point)


__all__ = [
    "IMAG", "LAMBDA", "ExtFunc", "ExtValue", "GaussRational", "LaurentPoly", "MultiPoly",
    "NegativeRadicandError", "NestedRadicalError", "RatFunc", "Rational", "RationalSampler",
    "SamplingExhausted", "as_ext", "as_ratfunc", "bareiss_det", "compose", "denominators_nonzero",
    "derivative", "evaluate", "exact_to_json", "float_to_str", "matrix_rank", "multipoly_from_json",
    "multipoly_to_json", "nullspace_dim", "ratfunc_sqrt", "rational_from_str", "rational_sqrt",
    "rational_to_str", "resultant", "simplify_value", "sylvester_matrix", "variables_function",
]
