"""Twistor patching models, holomorphic sections, cones and zero-rest-mass fields.

A model is an affine line bundle over O(k) patched by

    tau~ = lambda**(k-2) * tau + f(Q, lambda),   f = sum c * lambda**m * Q**j.

Sections are Q(lambda) = x0 + x1*lambda + ... + xk*lambda**k.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .exactalg import LaurentPoly, MultiPoly, RatFunc, as_ratfunc, rational_from_str, rational_to_str


class ModelError(ValueError):
    pass


class NonTriangularSystem(ValueError):
    pass


@dataclass(frozen=True)
class CocycleTerm:
    """c * lambda**m * Q**j with c = scale * param (param may be None)."""

    scale: Fraction
    m: int
    j: int
    param: str | None = None

    def coefficient(self, params: Mapping[str, Fraction | None]):
        if self.param is None:
            return self.scale
        value = params.get(self.param)
        if value is None:
            return MultiPoly.gen(self.param) * self.scale
        return self.scale * value


@dataclass(frozen=True)
class TwistorModel:
    k: int
    terms: tuple[CocycleTerm, ...]
    params: Mapping[str, Fraction | None] = field(default_factory=dict)
    name: str = "custom"

    def __post_init__(self):
        if self.k < 1:
            raise ModelError("k must be at least 1")
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "params", dict(self.params))
        for t in self.terms:
            if t.j < 0:
                raise ModelError("cocycle must be polynomial in Q")
            if t.param is not None and t.param not in self.params:
                raise ModelError(f"cocycle uses undeclared parameter {t.param!r}")

    def with_params(self, **values) -> "TwistorModel":
        params = dict(self.params)
        for key, value in values.items():
            if key not in params:
                raise ModelError(f"unknown parameter {key!r}")
            params[key] = None if value is None else Fraction(value)
        return TwistorModel(self.k, self.terms, params, self.name)

    def is_zero(self) -> bool:
        return all(t.scale == 0 for t in self.terms) or all(
            t.param is not None and self.params.get(t.param) == 0 for t in self.terms
        )

    def to_json(self) -> dict:
        terms = []
        for t in self.terms:
            c = rational_to_str(t.scale)
            if t.param is not None:
                c = t.param if t.scale == 1 else f"{c}*{t.param}"
            terms.append({"c": c, "m": t.m, "j": t.j})
        return {
            "k": self.k,
            "terms": terms,
            "params": {p: (None if v is None else rational_to_str(v)) for p, v in self.params.items()},
        }


_COEFF = re.compile(r"^\s*(?:(?P<num>[-+]?\d+(?:/\d+)?)\s*\*?\s*)?(?P<name>[A-Za-z_]\w*)?\s*$")


def model_from_json(data: Mapping) -> TwistorModel:
    """Parse {k, terms:[{c, m, j}], params}; c is a rational, a parameter name, or 'p/q*name'."""
    try:
        k = int(data["k"])
        raw_terms = data["terms"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"model needs integer k and a terms list: {exc}") from None
    params = {}
    for name, value in (data.get("params") or {}).items():
        params[name] = None if value is None else rational_from_str(str(value))
    terms = []
    for t in raw_terms:
        c = str(t["c"])
        match = _COEFF.match(c)
        if not match or (match.group("num") is None and match.group("name") is None):
            raise ModelError(f"cannot parse cocycle coefficient {c!r}")
        scale = rational_from_str(match.group("num")) if match.group("num") else Fraction(1)
        name = match.group("name")
        if name is not None and name not in params:
            params[name] = None
        terms.append(CocycleTerm(scale, int(t["m"]), int(t["j"]), name))
    return TwistorModel(k, tuple(terms), params)


def patch_2(k: int, a=None) -> TwistorModel:
    """f = a * lambda**-2 * Q**2 (a symbolic when None)."""
    return TwistorModel(k, (CocycleTerm(Fraction(1), -2, 2, "a"),),
                        {"a": None if a is None else Fraction(a)}, "patch_2")


def patch_flat(k: int, b=None) -> TwistorModel:
    """f = b * lambda**-1 * Q."""
    return TwistorModel(k, (CocycleTerm(Fraction(1), -1, 1, "b"),),
                        {"b": None if b is None else Fraction(b)}, "patch_flat")


def combined_model(k: int, a=None, b=None) -> TwistorModel:
    """f = b * lambda**-1 * Q + a * lambda**-2 * Q**2."""
    return TwistorModel(
        k,
        (CocycleTerm(Fraction(1), -1, 1, "b"), CocycleTerm(Fraction(1), -2, 2, "a")),
        {"a": None if a is None else Fraction(a), "b": None if b is None else Fraction(b)},
        "combined",
    )


def shift_z_for_b(a, b) -> Fraction:
    """Translation z -> z + b/(2a) that removes the linear term from the combined model."""
    if a == 0:
        raise ModelError("the linear term can only be absorbed when a != 0")
    return Fraction(b) / (2 * Fraction(a))


def field_model(k: int = 4) -> TwistorModel:
    """f = Q**2 * lambda**-k, the class used for the spin-2 field and the cone."""
    return TwistorModel(k, (CocycleTerm(Fraction(1), -k, 2),), {}, "field")


def section_names(k: int) -> tuple[str, ...]:
    return tuple(f"x{i}" for i in range(k + 1))


def differential_names(k: int) -> tuple[str, ...]:
    return tuple(f"d{i}" for i in range(k + 1))


@dataclass(frozen=True)
class Section:
    """Coefficients x0..xk of Q(lambda); entries are names or exact values."""

    coefficients: tuple

    @classmethod
    def symbolic(cls, k: int) -> "Section":
        return cls(section_names(k))

    @classmethod
    def at(cls, values: Sequence) -> "Section":
        return cls(tuple(Fraction(v) for v in values))

    @property
    def k(self) -> int:
        return len(self.coefficients) - 1

    def values(self):
        names = section_names(self.k)
        out = []
        for name, c in zip(names, self.coefficients):
            out.append(MultiPoly.gen(c, names if c in names else None) if isinstance(c, str) else Fraction(c))
        return out

    def polynomial(self) -> LaurentPoly:
        return LaurentPoly({i: c for i, c in enumerate(self.values())})


def _check_section(model: TwistorModel, section: Section):
    if section.k != model.k:
        raise ModelError(f"section has {section.k + 1} coefficients, model needs {model.k + 1}")


def restrict(model: TwistorModel, section: Section | None = None) -> LaurentPoly:
    """The cocycle with Q replaced by the section, expanded in lambda."""
    section = Section.symbolic(model.k) if section is None else section
    _check_section(model, section)
    q = section.polynomial()
    powers = {0: LaurentPoly({0: 1})}
    total = LaurentPoly()
    for term in model.terms:
        c = term.coefficient(model.params)
        if c == 0:
            continue
        while max(powers) < term.j:
            powers[max(powers) + 1] = powers[max(powers)] * q
        total = total + (powers[term.j] * c).shift(term.m)
    return total


def cocycle_dQ(model: TwistorModel, section: Section) -> LaurentPoly:
    """d f / d Q restricted to the section."""
    _check_section(model, section)
    q = section.polynomial()
    total = LaurentPoly()
    for term in model.terms:
        c = term.coefficient(model.params)
        if c == 0 or term.j == 0:
            continue
        total = total + ((q ** (term.j - 1)) * (c * term.j)).shift(term.m)
    return total


def residue(g: LaurentPoly, power: int = -1):
    """Coefficient of lambda**power; power -1 is the contour integral (1/2 pi i) of g dlambda."""
    return g.coeff(power)


@dataclass(frozen=True)
class ConstraintSet:
    constraints: tuple[MultiPoly, ...]

    def __len__(self):
        return len(self.constraints)

    def __iter__(self):
        return iter(self.constraints)

    def __getitem__(self, i):
        return self.constraints[i]


def _strip_parameter_content(p: MultiPoly, section_vars: Sequence[str]) -> MultiPoly:
    """Divide out the gcd of the coefficients of p viewed as a polynomial in the section variables."""
    params = [v for v in p.occurring() if v not in section_vars]
    if not params:
        return p
    idx = [i for i, v in enumerate(p.variables) if v in section_vars]
    groups: dict[tuple, dict] = {}
    for m, c in p.terms.items():
        key = tuple(m[i] for i in idx)
        groups.setdefault(key, {})[m] = c
    content = None
    for terms in groups.values():
        coeff = MultiPoly.from_terms(p.variables, {
            tuple(0 if i in idx else e for i, e in enumerate(m)): c for m, c in terms.items()
        })
        content = coeff.raw if content is None else content.gcd(coeff.raw)
    return p.exquo(MultiPoly(content, p.variables))


def _monic(p: MultiPoly) -> MultiPoly:
    lc = p.leading_coefficient()
    return p / lc if lc != 1 else p


def constraints(model: TwistorModel) -> ConstraintSet:
    """Vanishing of the lambda**1 .. lambda**(k-3) coefficients, each monic.

    For Q**2 cocycles the leading monomial is x0*x_n, so monic means the x0*x_n
    term has coefficient 1.
    """
    if model.k < 3:
        raise ModelError("constraints are defined for k >= 3")
    g = restrict(model)
    out = []
    for m in range(1, model.k - 2):
        c = g.coeff(m)
        if isinstance(c, MultiPoly) and not c.is_zero():
            out.append(_monic(_strip_parameter_content(c, section_names(model.k))))
        elif c != 0:
            raise ModelError(f"constant obstruction {c} at lambda^{m}: no sections exist")
    return ConstraintSet(tuple(out))


def field_constraints(model: TwistorModel) -> ConstraintSet:
    """Residues of pi_A1..pi_A(k-4) f pi.dpi: one per index pattern with n ones.

    In the affine chart the pattern with n ones contributes lambda**(k-4-n).
    """
    if model.k < 4:
        return ConstraintSet(())
    g = restrict(model)
    out = []
    for n in range(model.k - 3):
        c = residue(g.shift(model.k - 4 - n))
        if isinstance(c, MultiPoly) and not c.is_zero():
            out.append(_monic(c))
    return ConstraintSet(tuple(out))


@dataclass(frozen=True)
class ChartSolution:
    solved: dict[str, RatFunc]
    differentials: dict[str, RatFunc]
    chart: tuple[str, ...]


def chart_solve(cset: ConstraintSet, k: int) -> ChartSolution:
    """Solve each constraint for its highest-index unknown among x1..x(k-1).

    Returns explicit RatFunc solutions (denominators are powers of x0 for the
    quadratic cones) and the pulled-back differentials d_n as linear forms in
    the remaining differentials.
    """
    names = section_names(k)
    dnames = differential_names(k)
    solved: dict[str, RatFunc] = {}
    for c in cset:
        rf = as_ratfunc(c)
        if solved:
            rf = as_ratfunc(rf.subs(solved))
        num = rf.num
        candidates = [n for n in names[1:k] if num.degree(n) > 0]
        if not candidates:
            raise NonTriangularSystem(f"constraint {c} has no unknown to solve for")
        target = max(candidates, key=lambda n: int(n[1:]))
        if num.degree(target) != 1:
            raise NonTriangularSystem(f"constraint is not linear in {target}")
        parts = num.coefficients_in(target)
        lead, rest = parts[1], parts.get(0, num * 0)
        if any(lead.degree(s) > 0 for s in solved):
            raise NonTriangularSystem("leading coefficient depends on solved unknowns")
        value = as_ratfunc(-rest) / lead
        solved = {n: as_ratfunc(v.subs({target: value})) for n, v in solved.items()}
        solved[target] = value
    chart = tuple(n for n in names if n not in solved)
    differentials = {}
    for n, v in solved.items():
        total = as_ratfunc(0)
        for c in chart:
            partial = v.diff(c)
            if not partial.is_zero():
                total = total + partial * MultiPoly.gen(dnames[names.index(c)])
        differentials[dnames[names.index(n)]] = total
    return ChartSolution(solved, differentials, chart)


def flat_tau(model: TwistorModel, section: Section | None = None) -> tuple[LaurentPoly, ConstraintSet]:
    """tau = -b * (lambda*xk + x(k-1) + lambda**-1 * x(k-2) + ... + lambda**(3-k) * x2).

    Obtained by moving the positive powers of b*Q/lambda across the splitting;
    tau is holomorphic exactly when x2 = ... = x(k-2) = 0.
    """
    if model.name != "patch_flat":
        raise ModelError("flat_tau needs the b*Q/lambda model")
    section = Section.symbolic(model.k) if section is None else section
    _check_section(model, section)
    b = model.terms[0].coefficient(model.params)
    k = model.k
    xs = section.values()
    tau = LaurentPoly({i - k + 1: xs[i] * b * -1 for i in range(2, k + 1)})
    conditions = tuple(MultiPoly.gen(n, section_names(k)) for n in section_names(k)[2:k - 1])
    return tau, ConstraintSet(conditions)


@dataclass(frozen=True)
class ZrmField:
    """Totally symmetric spinor indexed by its number of 1-indices."""

    components: tuple
    normalization: Fraction

    def raw(self) -> tuple:
        return tuple(c * self.normalization for c in self.components)


def zrm_field(model: TwistorModel | None = None) -> ZrmField:
    """psi with n ones = residue of lambda**(2k-4-n) * df/dQ, for n = 0 .. 2k-4.

    The components are divided by the leading coefficient of the first
    nonzero one; that factor is kept as the normalization.
    """
    model = field_model(4) if model is None else model
    if model.k != 4:
        raise ModelError("the spin-2 field is implemented for k = 4")
    k = model.k
    dfdq = cocycle_dQ(model, Section.symbolic(k))
    comps = [residue(dfdq.shift(2 * k - 4 - n)) for n in range(2 * k - 3)]
    comps = [MultiPoly.constant(c) if not isinstance(c, MultiPoly) else c for c in comps]
    first = next((c for c in comps if not c.is_zero()), None)
    norm = Fraction(1) if first is None else first.leading_coefficient()
    return ZrmField(tuple(c / norm for c in comps), norm)


K4_DICTIONARY = {"x0": "t", "x1": "z", "x2": "y", "x3": "w", "x4": "x"}


def rename(p, mapping: Mapping[str, str]):
    """Rename variables of a MultiPoly/RatFunc."""
    return as_ratfunc(p).subs({old: MultiPoly.gen(new) for old, new in mapping.items()})


def field_equations(phi) -> list:
    """The six second-order equations on a function of (t, z, y, w, x)."""
    d = lambda f, a, b: f.diff(a).diff(b)
    phi = as_ratfunc(phi)
    return [
        d(phi, "y", "t") - d(phi, "z", "z"),
        d(phi, "t", "w") - d(phi, "y", "z"),
        d(phi, "t", "x") - d(phi, "w", "z"),
        d(phi, "w", "z") - d(phi, "y", "y"),
        d(phi, "x", "z") - d(phi, "w", "y"),
        d(phi, "x", "y") - d(phi, "w", "w"),
    ]
