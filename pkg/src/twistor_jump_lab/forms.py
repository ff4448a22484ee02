"""Exterior calculus and symmetric 2-tensors in coordinates.

Coefficients are RatFunc or ExtFunc values.  Forms store only strictly
increasing index tuples; the orientation is dx^0 ^ ... ^ dx^(n-1) in chart order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .exactalg import ExtFunc, RatFunc, as_ratfunc, compose, simplify_value
from .exactalg.algebra import MultiPoly, is_scalar


class ChartMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Chart:
    coordinates: tuple[str, ...]
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "coordinates", tuple(self.coordinates))
        if len(set(self.coordinates)) != len(self.coordinates) or not self.coordinates:
            raise ValueError(f"chart needs distinct coordinate names, got {self.coordinates}")

    @property
    def dim(self) -> int:
        return len(self.coordinates)

    def index(self, name: str) -> int:
        try:
            return self.coordinates.index(name)
        except ValueError:
            raise KeyError(f"{name!r} is not a coordinate of chart {self.coordinates}") from None

    def functions(self) -> tuple[RatFunc, ...]:
        gens = MultiPoly.gens(*self.coordinates)
        return tuple(as_ratfunc(g) for g in gens)


def coefficient(value):
    """Normalize a scalar, polynomial or extension element into a coefficient."""
    if isinstance(value, ExtFunc):
        return simplify_value(value)
    if isinstance(value, RatFunc):
        return value
    if isinstance(value, MultiPoly) or is_scalar(value):
        return as_ratfunc(value)
    raise TypeError(f"unsupported coefficient {value!r}")


def _is_zero(c) -> bool:
    return c == 0


def _sort_sign(indices: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the permutation sorting indices, 0 if an index repeats."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, ()
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return sign, tuple(idx)


class DiffForm:
    __slots__ = ("chart", "degree", "_comps")

    def __init__(self, chart: Chart, degree: int, components: Mapping[tuple[int, ...], object] | None = None):
        if not 0 <= degree <= chart.dim:
            raise ValueError(f"degree {degree} out of range for a {chart.dim}-dimensional chart")
        comps = {}
        for key, value in (components or {}).items():
            key = tuple(key)
            if len(key) != degree or list(key) != sorted(set(key)) or any(not 0 <= k < chart.dim for k in key):
                raise ValueError(f"component index {key} is not strictly increasing")
            value = coefficient(value)
            if not _is_zero(value):
                comps[key] = value
        self.chart = chart
        self.degree = degree
        self._comps = comps

    # construction ------------------------------------------------------------
    @classmethod
    def zero(cls, chart: Chart, degree: int) -> "DiffForm":
        return cls(chart, degree)

    @classmethod
    def function(cls, chart: Chart, f) -> "DiffForm":
        return cls(chart, 0, {(): f})

    @classmethod
    def differential(cls, chart: Chart, name: str) -> "DiffForm":
        return cls(chart, 1, {(chart.index(name),): 1})

    @classmethod
    def from_terms(cls, chart: Chart, terms: Iterable[tuple[object, Sequence[str]]]) -> "DiffForm":
        """Build sum of c * dx^a ^ dx^b ^ ... from (c, (a, b, ...)) pairs in any index order."""
        terms = list(terms)
        if not terms:
            raise ValueError("need at least one term to fix the degree")
        degree = len(terms[0][1])
        comps: dict[tuple[int, ...], object] = {}
        for c, names in terms:
            if len(names) != degree:
                raise ValueError("mixed degrees in from_terms")
            sign, key = _sort_sign([chart.index(n) for n in names])
            if sign == 0:
                continue
            c = coefficient(c) * sign
            comps[key] = comps[key] + c if key in comps else c
        return cls(chart, degree, comps)

    # access ------------------------------------------------------------------
    @property
    def components(self) -> dict[tuple[int, ...], object]:
        return dict(self._comps)

    def component(self, names: Sequence[str]):
        sign, key = _sort_sign([self.chart.index(n) for n in names])
        if sign == 0:
            return as_ratfunc(0)
        return self._comps.get(key, as_ratfunc(0)) * sign

    def scalar(self):
        if self.degree:
            raise ValueError("not a 0-form")
        return self._comps.get((), as_ratfunc(0))

    def is_zero(self) -> bool:
        return not self._comps

    def map(self, fn) -> "DiffForm":
        return DiffForm(self.chart, self.degree, {k: fn(v) for k, v in self._comps.items()})

    # algebra -------------------------------------------------------------------
    def _check(self, other: "DiffForm"):
        if not isinstance(other, DiffForm):
            raise TypeError("expected a DiffForm")
        if other.chart.coordinates != self.chart.coordinates:
            raise ChartMismatch("forms live on different charts")
        if other.degree != self.degree:
            raise ValueError("adding forms of different degree")

    def __add__(self, other: "DiffForm") -> "DiffForm":
        self._check(other)
        comps = dict(self._comps)
        for k, v in other._comps.items():
            comps[k] = comps[k] + v if k in comps else v
        return DiffForm(self.chart, self.degree, comps)

    def __neg__(self) -> "DiffForm":
        return self.map(lambda v: -v)

    def __sub__(self, other: "DiffForm") -> "DiffForm":
        return self + (-other)

    def __mul__(self, scalar) -> "DiffForm":
        if isinstance(scalar, DiffForm):
            return NotImplemented
        return self.map(lambda v: v * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "DiffForm":
        return self.map(lambda v: v / scalar)

    def __xor__(self, other: "DiffForm") -> "DiffForm":
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, DiffForm):
            return NotImplemented
        if other.chart.coordinates != self.chart.coordinates or other.degree != self.degree:
            return False
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        if not self._comps:
            return f"DiffForm(0, degree={self.degree})"
        names = self.chart.coordinates
        parts = [f"({v})*{'^'.join('d' + names[i] for i in k) or '1'}" for k, v in sorted(self._comps.items())]
        return " + ".join(parts)


def wedge(a: DiffForm, b: DiffForm) -> DiffForm:
    if a.chart.coordinates != b.chart.coordinates:
        raise ChartMismatch("wedge of forms on different charts")
    if a.degree + b.degree > a.chart.dim:
        raise ValueError(f"degree {a.degree + b.degree} exceeds dimension {a.chart.dim}")
    comps: dict[tuple[int, ...], object] = {}
    for ka, va in a._comps.items():
        for kb, vb in b._comps.items():
            sign, key = _sort_sign(ka + kb)
            if sign == 0:
                continue
            term = va * vb * sign
            comps[key] = comps[key] + term if key in comps else term
    return DiffForm(a.chart, a.degree + b.degree, comps)


def exterior_d(a: DiffForm) -> DiffForm:
    if a.degree >= a.chart.dim:
        return DiffForm.zero(a.chart, a.degree)
    comps: dict[tuple[int, ...], object] = {}
    for key, value in a._comps.items():
        for j, name in enumerate(a.chart.coordinates):
            if j in key:
                continue
            partial = value.diff(name)
            if _is_zero(partial):
                continue
            sign, new = _sort_sign((j,) + key)
            term = partial * sign
            comps[new] = comps[new] + term if new in comps else term
    return DiffForm(a.chart, a.degree + 1, comps)


class VectorField:
    __slots__ = ("chart", "components")

    def __init__(self, chart: Chart, components: Sequence[object]):
        if len(components) != chart.dim:
            raise ValueError(f"vector field needs {chart.dim} components")
        self.chart = chart
        self.components = tuple(coefficient(c) for c in components)

    @classmethod
    def from_dict(cls, chart: Chart, comps: Mapping[str, object]) -> "VectorField":
        unknown = set(comps) - set(chart.coordinates)
        if unknown:
            raise KeyError(f"unknown coordinates {sorted(unknown)}")
        return cls(chart, [comps.get(n, 0) for n in chart.coordinates])

    @classmethod
    def coordinate(cls, chart: Chart, name: str) -> "VectorField":
        return cls.from_dict(chart, {name: 1})

    def __repr__(self):
        return "VectorField(" + ", ".join(f"{n}: {c}" for n, c in zip(self.chart.coordinates, self.components)) + ")"


def interior(v: VectorField, a: DiffForm) -> DiffForm:
    if v.chart.coordinates != a.chart.coordinates:
        raise ChartMismatch("interior product across charts")
    if a.degree == 0:
        return DiffForm.zero(a.chart, 0)
    comps: dict[tuple[int, ...], object] = {}
    for key, value in a._comps.items():
        for pos, idx in enumerate(key):
            vc = v.components[idx]
            if _is_zero(vc):
                continue
            rest = key[:pos] + key[pos + 1:]
            term = value * vc * (-1 if pos % 2 else 1)
            comps[rest] = comps[rest] + term if rest in comps else term
    return DiffForm(a.chart, a.degree - 1, comps)


class Metric4:
    """Symmetric covariant 2-tensor g_ij dx^i dx^j."""

    __slots__ = ("chart", "_g", "_derivatives")

    def __init__(self, chart: Chart, components: Sequence[Sequence[object]]):
        n = chart.dim
        if len(components) != n or any(len(row) != n for row in components):
            raise ValueError(f"metric needs a {n}x{n} component array")
        g = [[coefficient(components[i][j]) for j in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                if g[i][j] != g[j][i]:
                    raise ValueError(f"metric components ({i},{j}) and ({j},{i}) differ")
        self.chart = chart
        self._g = tuple(tuple(row) for row in g)
        self._derivatives = None  # filled lazily by metrics.curvature

    @classmethod
    def from_quadratic(cls, chart: Chart, coeffs: Mapping[tuple[str, str], object]) -> "Metric4":
        """From the quadratic form: key (a, b) holds the full coefficient of da*db."""
        n = chart.dim
        g = [[as_ratfunc(0)] * n for _ in range(n)]
        for (a, b), c in coeffs.items():
            i, j = chart.index(a), chart.index(b)
            c = coefficient(c)
            if i == j:
                g[i][i] = g[i][i] + c
            else:
                half = c * Fraction(1, 2)
                g[i][j] = g[i][j] + half
                g[j][i] = g[j][i] + half
        return cls(chart, g)

    @classmethod
    def symmetric_product(cls, a: DiffForm, b: DiffForm) -> "Metric4":
        """The symmetrized product (a*b + b*a)/2 of two 1-forms."""
        if a.degree != 1 or b.degree != 1:
            raise ValueError("symmetric product of 1-forms only")
        n = a.chart.dim
        av = [a._comps.get((i,), as_ratfunc(0)) for i in range(n)]
        bv = [b._comps.get((i,), as_ratfunc(0)) for i in range(n)]
        return cls(a.chart, [[(av[i] * bv[j] + av[j] * bv[i]) * Fraction(1, 2) for j in range(n)] for i in range(n)])

    @property
    def components(self) -> tuple[tuple[object, ...], ...]:
        return self._g

    def __getitem__(self, ij):
        i, j = ij
        if isinstance(i, str):
            i = self.chart.index(i)
        if isinstance(j, str):
            j = self.chart.index(j)
        return self._g[i][j]

    def quadratic_coefficient(self, a: str, b: str):
        """Full coefficient of da*db in the quadratic form."""
        i, j = self.chart.index(a), self.chart.index(b)
        return self._g[i][i] if i == j else self._g[i][j] * 2

    def quadratic_form(self) -> dict[tuple[str, str], object]:
        names = self.chart.coordinates
        out = {}
        for i in range(len(names)):
            for j in range(i, len(names)):
                c = self.quadratic_coefficient(names[i], names[j])
                if not _is_zero(c):
                    out[(names[i], names[j])] = c
        return out

    def map(self, fn) -> "Metric4":
        return Metric4(self.chart, [[fn(c) for c in row] for row in self._g])

    def __add__(self, other: "Metric4") -> "Metric4":
        if other.chart.coordinates != self.chart.coordinates:
            raise ChartMismatch("adding metrics on different charts")
        n = self.chart.dim
        return Metric4(self.chart, [[self._g[i][j] + other._g[i][j] for j in range(n)] for i in range(n)])

    def __neg__(self):
        return self.map(lambda c: -c)

    def __sub__(self, other: "Metric4") -> "Metric4":
        return self + (-other)

    def __mul__(self, scalar) -> "Metric4":
        return self.map(lambda c: c * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "Metric4":
        return self.map(lambda c: c / scalar)

    def __eq__(self, other):
        if not isinstance(other, Metric4):
            return NotImplemented
        return other.chart.coordinates == self.chart.coordinates and (self - other).is_zero()

    __hash__ = None

    def is_zero(self) -> bool:
        return all(_is_zero(c) for row in self._g for c in row)

    def apply(self, v: VectorField, w: VectorField):
        n = self.chart.dim
        total = as_ratfunc(0)
        for i in range(n):
            if _is_zero(v.components[i]):
                continue
            for j in range(n):
                if not _is_zero(w.components[j]):
                    total = total + self._g[i][j] * v.components[i] * w.components[j]
        return coefficient(total)

    def flat(self, v: VectorField) -> DiffForm:
        """The 1-form g(v, .)."""
        n = self.chart.dim
        comps = {}
        for j in range(n):
            total = as_ratfunc(0)
            for i in range(n):
                if not _is_zero(v.components[i]):
                    total = total + self._g[i][j] * v.components[i]
            comps[(j,)] = total
        return DiffForm(self.chart, 1, comps)

    def determinant(self):
        from .exactalg import bareiss_det

        return bareiss_det([list(row) for row in self._g])

    def proportionality_factor(self, other: "Metric4"):
        """The function f with self = f * other, or None when the two are not proportional."""
        if other.chart.coordinates != self.chart.coordinates:
            raise ChartMismatch("comparing metrics on different charts")
        ratio = None
        for row_a, row_b in zip(self._g, other._g):
            for a, b in zip(row_a, row_b):
                if _is_zero(b):
                    if not _is_zero(a):
                        return None
                    continue
                r = coefficient(a / b)
                if ratio is None:
                    ratio = r
                elif r != ratio:
                    return None
        return ratio

    def __repr__(self):
        return "Metric4(" + " + ".join(f"({c})*d{a}*d{b}" for (a, b), c in self.quadratic_form().items()) + ")"


def lie_derivative(v: VectorField, a):
    if v.chart.coordinates != a.chart.coordinates:
        raise ChartMismatch("Lie derivative across charts")
    if isinstance(a, DiffForm):
        # Cartan: L_v = i_v d + d i_v
        out = interior(v, exterior_d(a))
        if a.degree:
            out = out + exterior_d(interior(v, a))
        return out
    if isinstance(a, Metric4):
        names = a.chart.coordinates
        n = len(names)
        dv = [[v.components[k].diff(names[i]) for k in range(n)] for i in range(n)]
        g = a.components
        comps = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                total = as_ratfunc(0)
                for k in range(n):
                    vk = v.components[k]
                    if not _is_zero(vk):
                        total = total + vk * g[i][j].diff(names[k])
                    if not _is_zero(dv[i][k]):
                        total = total + g[k][j] * dv[i][k]
                    if not _is_zero(dv[j][k]):
                        total = total + g[i][k] * dv[j][k]
                comps[i][j] = comps[j][i] = total
        return Metric4(a.chart, comps)
    raise TypeError(f"cannot Lie-differentiate {type(a).__name__}")


class ChartMap:
    """A map source -> target given by target coordinates as functions on the source."""

    def __init__(self, source: Chart, target: Chart, components: Mapping[str, object]):
        missing = set(target.coordinates) - set(components)
        if missing:
            raise ValueError(f"map does not define target coordinates {sorted(missing)}")
        self.source = source
        self.target = target
        self.components = {name: coefficient(components[name]) for name in target.coordinates}
        self._jacobian = None

    @property
    def jacobian(self):
        """jacobian[i][a] = d(target_i)/d(source_a)."""
        if self._jacobian is None:
            self._jacobian = [[coefficient(self.components[t].diff(s)) for s in self.source.coordinates]
                              for t in self.target.coordinates]
        return self._jacobian

    def pull_function(self, f):
        return coefficient(compose(f, self.components))

    def pull_differential(self, name: str) -> DiffForm:
        row = self.jacobian[self.target.index(name)]
        return DiffForm(self.source, 1, {(a,): c for a, c in enumerate(row)})


def pullback(phi: ChartMap, a):
    if a.chart.coordinates != phi.target.coordinates:
        raise ChartMismatch("pullback of an object not on the map's target chart")
    if isinstance(a, DiffForm):
        if a.degree == 0:
            return DiffForm.function(phi.source, phi.pull_function(a.scalar())) if not a.is_zero() \
                else DiffForm.zero(phi.source, 0)
        diffs = [phi.pull_differential(n) for n in phi.target.coordinates]
        out = DiffForm.zero(phi.source, a.degree)
        for key, value in a._comps.items():
            piece = diffs[key[0]]
            for idx in key[1:]:
                piece = wedge(piece, diffs[idx])
            out = out + piece * phi.pull_function(value)
        return out
    if isinstance(a, Metric4):
        n_t, n_s = phi.target.dim, phi.source.dim
        jac = phi.jacobian
        pulled = [[phi.pull_function(a.components[i][j]) if j >= i else None for j in range(n_t)] for i in range(n_t)]
        for i in range(n_t):
            for j in range(i):
                pulled[i][j] = pulled[j][i]
        comps = [[None] * n_s for _ in range(n_s)]
        for p in range(n_s):
            for q in range(p, n_s):
                total = as_ratfunc(0)
                for i in range(n_t):
                    if _is_zero(jac[i][p]):
                        continue
                    for j in range(n_t):
                        if _is_zero(jac[j][q]) or _is_zero(pulled[i][j]):
                            continue
                        total = total + pulled[i][j] * jac[i][p] * jac[j][q]
                comps[p][q] = comps[q][p] = total
        return Metric4(phi.source, comps)
    raise TypeError(f"cannot pull back {type(a).__name__}")


def pullback_at(phi: ChartMap, a: DiffForm, point: Mapping[str, Fraction]) -> dict[tuple[int, ...], float]:
    """Float components of the pullback at one source point.

    Fallback for maps whose exact composition would need a second radical:
    the map is evaluated to floats, then fed back as exact binary rationals.
    """
    target_point = {n: Fraction(float(phi.components[n].evaluate(point))) for n in phi.target.coordinates}
    jac = [[float(c.evaluate(point)) if not _is_zero(c) else 0.0 for c in row] for row in phi.jacobian]
    values = {k: float(v.evaluate(target_point)) for k, v in a._comps.items()}
    out: dict[tuple[int, ...], float] = {}
    for key in combinations(range(phi.source.dim), a.degree):
        total = 0.0
        for tkey, val in values.items():
            # determinant of the minor jac[tkey][key]
            m = [[jac[t][s] for s in key] for t in tkey]
            total += val * _float_det(m)
        if total:
            out[key] = total
    return out


def _float_det(m: list[list[float]]) -> float:
    if not m:
        return 1.0
    if len(m) == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * _float_det([row[:j] + row[j + 1:] for row in m[1:]]) for j in range(len(m)))
