"""JSON-friendly encodings of exact values."""

from __future__ import annotations

from fractions import Fraction

from .algebra import GaussRational, MultiPoly, RatFunc
from .radical import ExtFunc, ExtValue


def rational_to_str(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def rational_from_str(text: str) -> Fraction:
    text = text.strip()
    if not text or any(ch.isspace() for ch in text):
        raise ValueError(f"malformed rational {text!r}")
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed rational {text!r}") from exc
    if "." in text or "e" in text.lower():
        raise ValueError(f"rationals are written p/q, got {text!r}")
    return value


def float_to_str(x: float) -> str:
    return format(float(x), ".17g")


def multipoly_to_json(p: MultiPoly) -> dict:
    return {
        "variables": list(p.variables),
        "terms": [
            {"exponents": list(m), "coeff": rational_to_str(c)}
            for m, c in sorted(p.terms.items(), reverse=True)
        ],
    }


def multipoly_from_json(data: dict) -> MultiPoly:
    return MultiPoly.from_terms(
        data["variables"],
        {tuple(t["exponents"]): rational_from_str(t["coeff"]) for t in data["terms"]},
    )


def ratfunc_to_json(r: RatFunc) -> dict:
    return {"num": multipoly_to_json(r.num), "den": multipoly_to_json(r.den)}


def exact_to_json(value):
    """Exact scalar values as strings; symbolic values as text plus structure."""
    if isinstance(value, bool):
        return value
    if isinstance(value, (int, Fraction)):
        return rational_to_str(value)
    if isinstance(value, GaussRational):
        return {"re": rational_to_str(value.re), "im": rational_to_str(value.im)}
    if isinstance(value, ExtValue):
        if value.is_rational():
            return exact_to_json(value.a)
        return {"a": exact_to_json(value.a), "b": exact_to_json(value.b), "radicand": exact_to_json(value.base)}
    if isinstance(value, MultiPoly):
        return multipoly_to_json(value)
    if isinstance(value, RatFunc):
        return ratfunc_to_json(value)
    if isinstance(value, ExtFunc):
        out = {"a": ratfunc_to_json(value.a)}
        if not value.is_rational():
            out["b"] = ratfunc_to_json(value.b)
            out["radicand"] = ratfunc_to_json(value.base)
        return out
    if isinstance(value, float):
        return float(value)
    raise TypeError(f"no JSON encoding for {type(value).__name__}")
