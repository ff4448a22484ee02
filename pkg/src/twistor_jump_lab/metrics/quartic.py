"""Jump prediction from the classical invariants of the binary quartic Q(d phi).

On the k=4 cone the gradient of phi is read as

    Q(d phi) = phi_x s^4 - 4 phi_w s^3 + 6 phi_y s^2 - 4 phi_z s + phi_t,

so (alpha, beta, gamma, delta, epsilon) = (phi_x, -phi_w, phi_y, -phi_z, phi_t).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from ..bundles import BundleType, normal_bundle_transition, splitting_type
from ..exactalg import MultiPoly, as_ratfunc
from ..twistor import Section, patch_2

CONE_COORDINATES = ("t", "z", "y", "w", "x")
DOCUMENTED_DEVIATION = "documented-deviation"


@dataclass(frozen=True)
class QuarticInvariants:
    alpha: object
    beta: object
    gamma: object
    delta: object
    epsilon: object
    I: object
    J: object

    @classmethod
    def from_coefficients(cls, alpha, beta, gamma, delta, epsilon) -> "QuarticInvariants":
        I = alpha * epsilon - 4 * beta * delta + 3 * gamma**2
        # det [[alpha, beta, gamma], [beta, gamma, delta], [gamma, delta, epsilon]]
        J = (alpha * (gamma * epsilon - delta**2) - beta * (beta * epsilon - delta * gamma)
             + gamma * (beta * delta - gamma**2))
        return cls(alpha, beta, gamma, delta, epsilon, I, J)

    def is_zero_gradient(self) -> bool:
        return all(c == 0 for c in (self.alpha, self.beta, self.gamma, self.delta, self.epsilon))


def quartic_invariants(gradient: Mapping[str, object]) -> QuarticInvariants:
    """I and J of Q(d phi) from the partial derivatives phi_t, phi_z, phi_y, phi_w, phi_x."""
    g = {name: gradient.get(name, 0) for name in CONE_COORDINATES}
    return QuarticInvariants.from_coefficients(g["x"], -g["w"], g["y"], -g["z"], g["t"])


def cone_phi():
    """phi = tw + zy, whose zero set is the k=4 cone."""
    t, z, y, w = (as_ratfunc(MultiPoly.gen(n)) for n in ("t", "z", "y", "w"))
    return t * w + z * y


def cone_gradient(point: Sequence | None = None) -> dict[str, object]:
    """d phi for the cone, symbolic or at (t, z, y, w[, x])."""
    phi = cone_phi()
    grad = {name: phi.diff(name) for name in CONE_COORDINATES}
    if point is None:
        return grad
    values = dict(zip(CONE_COORDINATES, (Fraction(v) for v in point)))
    values.setdefault("x", Fraction(0))
    return {name: Fraction(f.evaluate(values)) if not f.is_zero() else Fraction(0) for name, f in grad.items()}


def symbolic_invariants() -> QuarticInvariants:
    """I and J of the cone as functions of (t, z, y, w)."""
    return quartic_invariants(cone_gradient())


@dataclass(frozen=True)
class QuarticClassification:
    invariants: QuarticInvariants
    predicted: BundleType
    rule: str


def quartic_classify(gradient: Mapping[str, object]) -> QuarticClassification:
    """Predicted splitting type from the vanishing pattern of d phi, I and J."""
    inv = quartic_invariants(gradient)
    if inv.is_zero_gradient():
        return QuarticClassification(inv, BundleType(4, -2), "d phi = 0")
    if inv.I == 0 and inv.J == 0:
        return QuarticClassification(inv, BundleType(3, -1), "I = J = 0")
    if inv.J == 0:
        return QuarticClassification(inv, BundleType(2, 0), "I != 0, J = 0")
    if inv.I == 0:
        # not covered by the classical rules; J != 0 is read as generic
        return QuarticClassification(inv, BundleType(1, 1), "I = 0, J != 0")
    return QuarticClassification(inv, BundleType(1, 1), "I != 0, J != 0")


def on_documented_locus(point: Sequence) -> bool:
    """The loci w=y=z=0, t!=0 and z=t=0, y!=0, where I = J = 0 but the bundle is O + O(2)."""
    t, z, y, w = (Fraction(v) for v in point[:4])
    return (w == y == z == 0 and t != 0) or (z == t == 0 and y != 0)


@dataclass(frozen=True)
class OracleComparison:
    point: tuple
    classification: QuarticClassification
    oracle: BundleType
    status: str  # "agree", "disagree" or DOCUMENTED_DEVIATION


def compare_with_oracle(point: Sequence, a=1) -> OracleComparison:
    """Quartic prediction against the Birkhoff splitting type at a point (t, z, y, w, x) of the k=4 cone."""
    values = tuple(Fraction(v) for v in point)
    if len(values) == 4:
        values += (Fraction(0),)
    cls = quartic_classify(cone_gradient(values))
    oracle = splitting_type(normal_bundle_transition(patch_2(4, a), Section.at(values)))
    if on_documented_locus(values):
        status = DOCUMENTED_DEVIATION
    else:
        status = "agree" if cls.predicted == oracle else "disagree"
    return OracleComparison(values, cls, oracle, status)


__all__ = [
    "CONE_COORDINATES", "DOCUMENTED_DEVIATION", "OracleComparison", "QuarticClassification",
    "QuarticInvariants", "compare_with_oracle", "cone_gradient", "cone_phi", "on_documented_locus",
    "quartic_classify", "quartic_invariants", "symbolic_invariants",
]
