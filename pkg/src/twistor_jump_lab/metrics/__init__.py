"""Metrics from twistor data: resultant conformal structures, curvature, symmetries, potentials."""

from .conformal import ConformalStructure, conformal_from_resultant, flat_expected, rename_metric
from .curvature import (
    CurvatureReport,
    DegenerateMetricError,
    SingularPointError,
    curvature,
    curvature_finite_difference,
)
from .gibbons_hawking import (
    GHData,
    GHReduction,
    closed_form,
    gh_potential,
    gh_reduce,
    old_coordinates,
    printed_potential,
)
from .killing import KillingReport, killing_report, linear_field, scaling_weight
from .quartic import (
    DOCUMENTED_DEVIATION,
    QuarticInvariants,
    compare_with_oracle,
    cone_gradient,
    quartic_classify,
    quartic_invariants,
    symbolic_invariants,
)
from .reference import (
    TXYZ,
    XYZT,
    bracket_g2,
    bracket_g4,
    conformal_factor,
    folded_gg,
    folded_metric,
    ricci_flat_representative,
    sigma_basis,
)

__all__ = [
    "DOCUMENTED_DEVIATION", "ConformalStructure", "CurvatureReport", "DegenerateMetricError", "GHData",
    "GHReduction", "KillingReport", "QuarticInvariants", "SingularPointError", "TXYZ", "XYZT",
    "bracket_g2", "bracket_g4", "closed_form", "compare_with_oracle", "cone_gradient",
    "conformal_factor", "conformal_from_resultant", "curvature", "curvature_finite_difference",
    "flat_expected", "folded_gg", "folded_metric", "gh_potential", "gh_reduce", "killing_report",
    "linear_field", "old_coordinates", "printed_potential", "quartic_classify", "quartic_invariants",
    "rename_metric", "ricci_flat_representative", "scaling_weight", "sigma_basis",
    "symbolic_invariants",
]
