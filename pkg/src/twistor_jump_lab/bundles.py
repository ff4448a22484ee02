"""Rank-2 bundles on the Riemann sphere from Laurent transition matrices.

Convention: the patching matrix diag(lambda**-p, lambda**-q) is O(p) + O(q).
A global section of E(n) is a pair (v, v~) of polynomial vectors in lambda and
1/lambda with v~(1/lambda) = lambda**-n * F(lambda) * v(lambda).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactalg import LaurentPoly, matrix_rank
from .twistor import Section, TwistorModel, cocycle_dQ


class NotInvertible(ValueError):
    pass


class BoundNotStable(RuntimeError):
    pass


def _lp(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    return LaurentPoly({0: Fraction(x)})


@dataclass(frozen=True)
class BundleType:
    p: int
    q: int

    def __post_init__(self):
        if self.p < self.q:
            raise ValueError("BundleType needs p >= q")

    @classmethod
    def of(cls, a: int, b: int) -> "BundleType":
        return cls(max(a, b), min(a, b))

    def as_tuple(self) -> tuple[int, int]:
        return (self.p, self.q)

    def __str__(self):
        return f"O({self.p})+O({self.q})"


class LoopMatrix2:
    """2x2 matrix of Laurent polynomials with exact rational coefficients."""

    __slots__ = ("entries",)

    def __init__(self, entries: Sequence[Sequence]):
        if len(entries) != 2 or any(len(r) != 2 for r in entries):
            raise ValueError("LoopMatrix2 needs a 2x2 array")
        self.entries = tuple(tuple(_lp(e) for e in row) for row in entries)

    @classmethod
    def diag(cls, a, b) -> "LoopMatrix2":
        return cls([[a, 0], [0, b]])

    @classmethod
    def identity(cls) -> "LoopMatrix2":
        return cls.diag(1, 1)

    def __getitem__(self, ij):
        return self.entries[ij[0]][ij[1]]

    def __mul__(self, other: "LoopMatrix2") -> "LoopMatrix2":
        a, b = self.entries, other.entries
        return LoopMatrix2([[a[i][0] * b[0][j] + a[i][1] * b[1][j] for j in range(2)] for i in range(2)])

    def __eq__(self, other):
        if not isinstance(other, LoopMatrix2):
            return NotImplemented
        return all(self.entries[i][j] == other.entries[i][j] for i in range(2) for j in range(2))

    __hash__ = None

    def det(self) -> LaurentPoly:
        e = self.entries
        return e[0][0] * e[1][1] - e[0][1] * e[1][0]

    def det_degree(self) -> int:
        d = self.det()
        if not d.is_monomial():
            raise NotInvertible(f"determinant {d} is not a monomial c*lambda^d")
        return d.min_power()

    def adjugate(self) -> "LoopMatrix2":
        e = self.entries
        return LoopMatrix2([[e[1][1], -e[0][1]], [-e[1][0], e[0][0]]])

    def inverse(self) -> "LoopMatrix2":
        d = self.det()
        if not d.is_monomial():
            raise NotInvertible("only matrices with monomial determinant are invertible on C*")
        inv = d ** -1
        adj = self.adjugate()
        return LoopMatrix2([[adj.entries[i][j] * inv for j in range(2)] for i in range(2)])

    def spread(self) -> int:
        """Max power minus min power over all nonzero entries."""
        powers = [p for row in self.entries for e in row for p in e.powers()]
        return max(powers) - min(powers) if powers else 0

    def max_power(self) -> int:
        powers = [p for row in self.entries for e in row for p in e.powers()]
        return max(powers) if powers else 0

    def powers_within(self, lo: int | None, hi: int | None) -> bool:
        return all(
            (lo is None or p >= lo) and (hi is None or p <= hi)
            for row in self.entries for e in row for p in e.powers()
        )

    def __repr__(self):
        return f"LoopMatrix2({[list(r) for r in self.entries]})"


def _section_system(F: LoopMatrix2, n: int, degree: int) -> list[list[Fraction]]:
    """Rows: coefficients of positive powers of lambda**-n F v, unknowns v_{c,i}, i <= degree."""
    ncols = 2 * (degree + 1)
    rows: dict[int, list[Fraction]] = {}
    for r in range(2):
        for c in range(2):
            entry = F.entries[r][c]
            for power, coeff in entry.coeffs.items():
                for i in range(degree + 1):
                    total = power - n + i
                    if total <= 0:
                        continue
                    row = rows.setdefault((r, total), [Fraction(0)] * ncols)
                    row[c * (degree + 1) + i] += coeff
    return list(rows.values())


def _kernel_dim(F: LoopMatrix2, n: int, degree: int) -> int:
    if degree < 0:
        return 0
    rows = _section_system(F, n, degree)
    ncols = 2 * (degree + 1)
    return ncols - (matrix_rank(rows) if rows else 0)


def h0_twist_dim(F: LoopMatrix2, n: int) -> int:
    """Dimension of global sections of E(n).

    Searches polynomial v up to degree D and confirms the count is unchanged
    at D + 2 (then D + 4) before trusting it. D is the larger of n + spread(F)
    and n + maxPower(F) - detDegree(F); the second is a true bound since
    v = adj(F) * lambda**n * v~ / det(F) with v~ free of positive powers.
    """
    d = F.det_degree()
    bound = max(0, n + F.spread(), n + F.max_power() - d)
    base = _kernel_dim(F, n, bound)
    for extra in (2, 4):
        if _kernel_dim(F, n, bound + extra) == base:
            return base
        base = _kernel_dim(F, n, bound + extra)
        bound += extra
    raise BoundNotStable(f"section count did not stabilize for n={n} up to degree {bound}")


def splitting_type(F: LoopMatrix2) -> BundleType:
    """(p, q) with p >= q from the first twist n at which sections appear.

    p + q = -detDegree; h0(E(n)) first becomes positive at n = -p.
    """
    d = F.det_degree()
    start = -(F.spread() + abs(d)) - 1
    while h0_twist_dim(F, start) > 0:
        start -= F.spread() + 1
    n = start
    while True:
        h = h0_twist_dim(F, n)
        if h > 0:
            break
        n += 1
    p = -n
    q = -d - p
    if q > p:
        raise RuntimeError(f"inconsistent splitting p={p}, q={q} for det degree {d}")
    # two positive increments confirm the type
    for m in (n, n + (p - q) + 1):
        expected = max(p + m + 1, 0) + max(q + m + 1, 0)
        if h0_twist_dim(F, m) != expected:
            raise RuntimeError(f"h0 at n={m} is {h0_twist_dim(F, m)}, expected {expected} for {(p, q)}")
    return BundleType(p, q)


def normal_bundle_transition(model: TwistorModel, section: Section) -> LoopMatrix2:
    """[[lambda**(k-2), df/dQ(Q(lambda))], [0, lambda**-k]] at an exact section."""
    if any(isinstance(c, str) for c in section.coefficients):
        raise ValueError("normal_bundle_transition needs an exact section")
    for name, value in model.params.items():
        if value is None:
            raise ValueError(f"parameter {name!r} needs a value")
    k = model.k
    top_right = cocycle_dQ(model, section)
    return LoopMatrix2([[LaurentPoly({k - 2: Fraction(1)}), top_right],
                        [0, LaurentPoly({-k: Fraction(1)})]])


@dataclass(frozen=True)
class SplittingWitness:
    """F = Htilde * diag(lambda**-p, lambda**-q) * H**-1 with (p, q) kept in diagonal order."""

    H: LoopMatrix2
    Htilde: LoopMatrix2
    diagonal: tuple[int, int]

    @classmethod
    def from_inverse(cls, H_inv: LoopMatrix2, Htilde: LoopMatrix2, p: int, q: int) -> "SplittingWitness":
        return cls(H_inv.inverse(), Htilde, (p, q))

    @property
    def type(self) -> BundleType:
        return BundleType.of(*self.diagonal)


@dataclass(frozen=True)
class WitnessCheck:
    ok: bool
    detail: str

    def __bool__(self):
        return self.ok


def verify_witness(F: LoopMatrix2, w: SplittingWitness) -> WitnessCheck:
    """Check Htilde * diag(lambda**-p, lambda**-q) * H**-1 == F and the holomorphy constraints."""
    if not w.H.powers_within(0, None):
        return WitnessCheck(False, "H has negative powers of lambda")
    if not w.Htilde.powers_within(None, 0):
        return WitnessCheck(False, "Htilde has positive powers of lambda")
    for name, m in (("H", w.H), ("Htilde", w.Htilde)):
        det = m.det()
        if not (det.is_monomial() and det.min_power() == 0):
            return WitnessCheck(False, f"det {name} = {det} is not a nonzero constant")
    p, q = w.diagonal
    middle = LoopMatrix2.diag(LaurentPoly({-p: Fraction(1)}), LaurentPoly({-q: Fraction(1)}))
    product = w.Htilde * middle * w.H.inverse()
    for i in range(2):
        for j in range(2):
            got, want = product.entries[i][j], F.entries[i][j]
            if got != want:
                diff = got - want
                power = diff.powers()[0]
                return WitnessCheck(False, f"entry ({i},{j}) differs at lambda^{power}: "
                                           f"{got.coeff(power)} vs {want.coeff(power)}")
    return WitnessCheck(True, "factorization holds")


@dataclass(frozen=True)
class ScalarSplit:
    h: LaurentPoly
    htilde: LaurentPoly
    survivors: LaurentPoly


def scalar_split(g: LaurentPoly, lo: int, hi: int) -> ScalarSplit:
    """g = h - htilde + survivors with survivors in powers lo..hi, h above, htilde below."""
    return ScalarSplit(g.truncate(hi + 1, None), -g.truncate(None, lo - 1), g.truncate(lo, hi))


def cone_window(k: int) -> tuple[int, int]:
    """Powers of the top-right entry that no upper-triangular gauge can remove."""
    return 1 - k, k - 3


def flat_transition(k: int, b) -> LoopMatrix2:
    """[[lambda**(k-2), b/lambda], [0, lambda**-k]]."""
    return LoopMatrix2([[LaurentPoly({k - 2: Fraction(1)}), LaurentPoly({-1: Fraction(b)})],
                        [0, LaurentPoly({-k: Fraction(1)})]])


# Explicit factorizations on the jump loci of the k=4 model f = a * lambda**-2 * Q**2.
# Points are (t, z, y, w, x) = (x0, x1, x2, x3, x4).

@dataclass(frozen=True)
class CascadeLocus:
    name: str
    description: str
    point: tuple[Fraction, ...]
    expected: BundleType


def _pt(*values) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in values)


CASCADE_LOCI = (
    CascadeLocus("S1", "t=z=y=w=0", _pt(0, 0, 0, 0, 1), BundleType(4, -2)),
    CascadeLocus("S2", "w=y=z=0, t!=0", _pt(1, 0, 0, 0, 0), BundleType(2, 0)),
    CascadeLocus("S3", "t=z=y=0, w!=0", _pt(0, 0, 0, 1, 0), BundleType(3, -1)),
    CascadeLocus("S4", "t=z=0, y!=0", _pt(0, 0, 1, 5, 0), BundleType(2, 0)),
    CascadeLocus("S5", "z=w=0, t,y!=0", _pt(1, 0, 2, 0, 0), BundleType(2, 0)),
    CascadeLocus("S6", "z**2=3ty, tw+zy=0, tyz!=0", _pt(1, 3, 3, -9, 0), BundleType(2, 0)),
)


def _L(coeffs: dict) -> LaurentPoly:
    return LaurentPoly({m: Fraction(c) for m, c in coeffs.items()})


def cascade_witness(name: str, a, point: Sequence) -> SplittingWitness:
    """Hand-built factorization of F_N at a point of locus S2..S6."""
    a = Fraction(a)
    t, z, y, w = (Fraction(v) for v in point[:4])
    if name == "S2":
        beta = 2 * a * t
        h_inv = LoopMatrix2([[_L({0: 1 / beta}), 0], [_L({4: 1}), _L({0: beta})]])
        htilde = LoopMatrix2([[0, 1], [-1, _L({-2: 1 / beta})]])
        return SplittingWitness.from_inverse(h_inv, htilde, 0, 2)
    if name == "S3":
        beta = 2 * a * w
        h_inv = LoopMatrix2([[_L({1: 1 / beta}), 1], [-1, 0]])
        htilde = LoopMatrix2([[_L({0: beta}), 0], [_L({-5: 1}), _L({0: 1 / beta})]])
        return SplittingWitness.from_inverse(h_inv, htilde, -1, 3)
    if name == "S4":
        alpha, beta = 2 * a * y, 2 * a * w
        h_inv = LoopMatrix2([[_L({2: 1}), _L({0: alpha, 1: beta})],
                             [_L({0: -1 / alpha, 1: beta / alpha**2}), _L({0: beta**2 / alpha**2})]])
        htilde = LoopMatrix2([[1, 0], [_L({-4: 1 / alpha, -3: -beta / alpha**2}), 1]])
        return SplittingWitness.from_inverse(h_inv, htilde, 0, 2)
    if name == "S5":
        alpha, beta = 2 * a * y, 2 * a * t
        h_inv = LoopMatrix2([[_L({0: beta / alpha**2, 2: -1 / alpha}), -1], [1, 0]])
        htilde = LoopMatrix2([[_L({0: -alpha, -2: -beta}), _L({0: beta**2 / alpha**2})],
                              [_L({-4: -1}), _L({0: -1 / alpha, -2: beta / alpha**2})]])
        return SplittingWitness.from_inverse(h_inv, htilde, 0, 2)
    if name == "S6":
        beta = 2 * a * t
        if beta == 0 or z == 0:
            raise ValueError("S6 needs t != 0 and z != 0")
        alpha = 2 * a * z / (3 * beta)
        chi_scaled = _L({0: 1, 1: 3 * alpha, 2: 3 * alpha**2, 3: -9 * alpha**3})
        h_inv = LoopMatrix2([[_L({0: 1, 1: -3 * alpha, 2: 6 * alpha**2}),
                              _L({0: 45 * alpha**4 * beta, 1: -54 * alpha**5 * beta})],
                             [_L({4: 1 / beta}), chi_scaled]])
        htilde = LoopMatrix2([[0, _L({0: beta})], [_L({0: -1 / beta}), _L({-2: 1, -1: -3 * alpha, 0: 6 * alpha**2})]])
        return SplittingWitness.from_inverse(h_inv, htilde, 0, 2)
    raise KeyError(f"no witness for locus {name!r}")
