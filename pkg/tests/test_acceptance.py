"""The twelve acceptance criteria, one test each, at their stated tolerances and time budgets.

Each test prints one line "criterion N: PASS|FAIL (seconds) detail"; the lines
are repeated in the terminal summary.
"""

import time
from fractions import Fraction

import pytest
import sympy

from twistor_jump_lab.bundles import (
    CASCADE_LOCI,
    BundleType,
    cascade_witness,
    flat_transition,
    normal_bundle_transition,
    splitting_type,
    verify_witness,
)
from twistor_jump_lab.cases.legendre import admissible_points, heavenly_check, legendre_sd_forms, printed_F, residue_F
from twistor_jump_lab.cases.schrodinger import ladder_check, schrodinger_mode, schrodinger_norm, schrodinger_residual
from twistor_jump_lab.cases.sparling_tod import sign_changes, st_metric, st_potential_identity
from twistor_jump_lab.exactalg import MultiPoly, RationalSampler, as_ratfunc, denominators_nonzero
from twistor_jump_lab.forms import VectorField, exterior_d, lie_derivative, wedge
from twistor_jump_lab.metrics import (
    DOCUMENTED_DEVIATION,
    XYZT,
    bracket_g2,
    bracket_g4,
    compare_with_oracle,
    conformal_from_resultant,
    curvature,
    curvature_finite_difference,
    flat_expected,
    folded_gg,
    folded_metric,
    gh_potential,
    gh_reduce,
    printed_potential,
    ricci_flat_representative,
    sigma_basis,
    symbolic_invariants,
)
from twistor_jump_lab.suites import generic_cone_points
from twistor_jump_lab.twistor import (
    K4_DICTIONARY,
    Section,
    constraints,
    field_equations,
    patch_2,
    patch_flat,
    rename,
    zrm_field,
)

pytestmark = pytest.mark.acceptance

SEED = 0
LINES = []


class Criterion:
    """Collects named sub-checks, prints the verdict line and asserts."""

    def __init__(self, number: int, budget: float):
        self.number, self.budget = number, budget
        self.failures: list[str] = []
        self.passed = 0
        self.start = time.perf_counter()

    def expect(self, name: str, ok: bool, detail: str = ""):
        if ok:
            self.passed += 1
        else:
            self.failures.append(f"{name}" + (f" ({detail})" if detail else ""))

    def finish(self):
        elapsed = time.perf_counter() - self.start
        if elapsed >= self.budget:
            self.failures.append(f"took {elapsed:.1f} s, budget {self.budget:g} s")
        status = "FAIL" if self.failures else "PASS"
        detail = "; ".join(self.failures) if self.failures else f"{self.passed} checks"
        line = f"criterion {self.number}: {status} ({elapsed:.2f} s) {detail}"
        LINES.append(line)
        print(line)
        assert not self.failures, line


@pytest.fixture
def criterion():
    return Criterion


def _nonzero_factor(reference, metric) -> bool:
    factor = reference.proportionality_factor(metric)
    return factor is not None and not factor.is_zero()


def test_criterion_01_flat_splitting(criterion):
    c = criterion(1, 1.0)
    for k in range(3, 7):
        for b in (1, Fraction(-3, 7)):
            found = splitting_type(flat_transition(k, b))
            c.expect(f"k={k} b={b}", found == BundleType(1, 1), str(found))
        found = splitting_type(flat_transition(k, 0))
        c.expect(f"k={k} b=0", found == BundleType(k, 2 - k), str(found))
    c.finish()


def test_criterion_02_cascade_table(criterion):
    c = criterion(2, 5.0)
    expected = {"S1": (4, -2), "S2": (2, 0), "S3": (3, -1), "S4": (2, 0), "S5": (2, 0), "S6": (2, 0)}
    witnesses = 0
    for locus in CASCADE_LOCI:
        F = normal_bundle_transition(patch_2(4, 1), Section.at(locus.point))
        found = splitting_type(F)
        c.expect(f"{locus.name} type", found.as_tuple() == expected[locus.name], str(found))
        if locus.name != "S1":
            verdict = verify_witness(F, cascade_witness(locus.name, 1, locus.point))
            c.expect(f"{locus.name} witness", verdict.ok, verdict.detail)
            witnesses += 1
    c.expect("five witnesses", witnesses == 5)
    c.finish()


def test_criterion_03_resultant_metrics(criterion):
    c = criterion(3, 30.0)
    c.expect("k=3 ~ bracket g2", _nonzero_factor(bracket_g2(), conformal_from_resultant(patch_2(3, 1)).metric))
    c.expect("k=4 ~ bracket g4", _nonzero_factor(bracket_g4(), conformal_from_resultant(patch_2(4, 1)).metric))
    for k in (3, 4, 5, 6):
        flat = conformal_from_resultant(patch_flat(k, 1)).metric
        c.expect(f"flat k={k}", _nonzero_factor(flat_expected(k), flat))
    c.expect("k=2 folded", folded_metric() == folded_gg(), "pipeline metric differs from the folded form by T -> -T")
    c.finish()


def _ricci(c, label, metric):
    guard = denominators_nonzero(*(e for row in metric.components for e in row))
    points = RationalSampler(SEED).points(metric.chart.coordinates, 10, guard)
    worst = 0.0
    for p in points:
        exact = curvature(metric, p)
        c.expect(f"{label} Ricci at {p}", exact.is_ricci_flat())
        fd = curvature_finite_difference(metric, p, Fraction(1, 10**9))
        worst = max(worst, max(abs(float(a - b)) for ra, rb in zip(exact.ricci, fd.ricci) for a, b in zip(ra, rb)))
    c.expect(f"{label} finite difference", worst < 1e-6, f"max difference {worst:.3e}")


def test_criterion_04_ricci_flat(criterion):
    c = criterion(4, 60.0)
    _ricci(c, "k=3", ricci_flat_representative(3, 1))
    _ricci(c, "k=4", ricci_flat_representative(4, 1))
    _ricci(c, "Sparling-Tod", st_metric(1))
    c.finish()


def test_criterion_05_potentials(criterion):
    c = criterion(5, 10.0)
    for k in (3, 4):
        V = gh_potential(k, None).V
        printed = printed_potential(k)
        c.expect(f"k={k} closed form", V == printed,
                 "computed V is the negative of the tabulated form" if V == -printed else "different")
    for k in range(2, 7):
        c.expect(f"k={k} wave equation", gh_potential(k, None).is_harmonic())
    c.finish()


def test_criterion_06_reduction(criterion):
    c = criterion(6, 30.0)
    for k in (3, 4):
        red = gh_reduce(k)
        c.expect(f"k={k} h_flat = a^{2 * k}(dX^2 - dY^2 - dZ^2)", red.checks["h_flat"], red.first_failure or "")
    c.finish()


def test_criterion_07_two_forms(criterion):
    c = criterion(7, 30.0)
    dx = VectorField.coordinate(XYZT, "x")
    for k in (3, 4):
        s = sigma_basis(k)
        c.expect(f"k={k} closed", all(exterior_d(f).is_zero() for f in s.values()))
        c.expect(f"k={k} wedge relation", (wedge(s["00"], s["11"]) + wedge(s["01"], s["01"]) * 2).is_zero())
        c.expect(f"k={k} invariant", all(lie_derivative(dx, f).is_zero() for f in s.values()))
    forms = legendre_sd_forms()
    for name, ok in sorted(forms.checks.items()):
        c.expect(f"spinor {name}", ok, forms.mismatches.get(name, ""))
    c.finish()


def test_criterion_08_quartic(criterion):
    c = criterion(8, 10.0)
    t, z, y = sympy.symbols("t z y")
    I = sympy.sympify(str(symbolic_invariants().I).replace("^", "**"))
    c.expect("I = 3z^2 - 4ty", sympy.expand(I - (3 * z**2 - 4 * t * y)) == 0, str(I))
    for locus in CASCADE_LOCI:
        cmp = compare_with_oracle(locus.point)
        if locus.name in ("S2", "S4"):
            c.expect(f"{locus.name} documented deviation", cmp.status == DOCUMENTED_DEVIATION, cmp.status)
        else:
            c.expect(f"{locus.name} agrees", cmp.status == "agree",
                     f"rule {cmp.classification.predicted}, oracle {cmp.oracle}")
    generic = [compare_with_oracle(p) for p in generic_cone_points(SEED, 25)]
    c.expect("25 generic cone points", all(g.status == "agree" for g in generic))
    c.finish()


def test_criterion_09_sparling_tod(criterion):
    c = criterion(9, 10.0)
    report = st_potential_identity(1, -2, 1, eps=-1, seed=SEED)
    c.expect("eps=-1 identity", report.passed >= 95 and report.failed == 0,
             f"{report.passed} pass, {report.failed} fail")
    signs = sign_changes(1, -2, 1, 1, seed=SEED)
    c.expect("eps=+1 sign change across |R| = |a|", signs.across_sphere,
             "no sign change on any probed ray; the sign changes across Z = 0 instead" if signs.across_plane else "")
    c.finish()


def test_criterion_10_heavenly(criterion):
    c = criterion(10, 10.0)
    report = heavenly_check(points=admissible_points(SEED, 3))
    c.expect("exact identity", report.exact_zero)
    c.expect("numeric", report.numeric_ok)
    c.expect("residue F", residue_F() == printed_F())
    c.finish()


def test_criterion_11_schrodinger(criterion):
    c = criterion(11, 10.0)
    for s, gamma, E in ((1, 1, 4), (2, 0, 8)):
        mode = schrodinger_mode(s, gamma)
        c.expect(f"E for s={s} gamma={gamma}", mode.E == E, str(mode.E))
        c.expect(f"residual s={s}", schrodinger_residual(mode, E).exact_zero)
        norm = schrodinger_norm(mode)
        c.expect(f"norm s={s}", norm.finite and norm.doubling_delta < 1e-10, f"delta {norm.doubling_delta:.3e}")
    for s in (1, 2):
        c.expect(f"a G0 = 0 for s={s}", ladder_check(s).annihilates_ground)
    c.finish()


def test_criterion_12_zrm_and_cones(criterion):
    c = criterion(12, 5.0)
    components = [rename(f, K4_DICTIONARY) for f in zrm_field().components]
    expected = [as_ratfunc(0)] + [as_ratfunc(MultiPoly.gen(n)) for n in "tzyw"]
    c.expect("components (0, t, z, y, w)", components == expected, str(components))
    phi = rename(constraints(patch_2(4, 1))[0], K4_DICTIONARY)
    for f in [phi, *components]:
        eqs = field_equations(f)
        c.expect(f"six equations on {f}", len(eqs) == 6 and all(e.is_zero() for e in eqs))
    for k in range(4, 8):
        xs = sympy.symbols(f"x0:{k + 1}")
        lam = sympy.Symbol("lam")
        Q2 = sympy.expand(sum(x * lam**i for i, x in enumerate(xs)) ** 2)
        want = [sympy.expand(Q2.coeff(lam, n) / 2) for n in range(3, k)]
        got = [sympy.sympify(str(g).replace("^", "**")) for g in constraints(patch_2(k, 1))]
        c.expect(f"cones k={k}", len(got) == len(want) and all(sympy.expand(g - w) == 0 for g, w in zip(got, want)))
    c.finish()
