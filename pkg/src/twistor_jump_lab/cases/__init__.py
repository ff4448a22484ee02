"""Worked examples: Sparling-Tod to Eguchi-Hanson, the Legendre-transform k=4 metric, Schrodinger modes."""

from .legendre import heavenly_check, legendre_build, legendre_sd_forms
from .schrodinger import ladder_check, schrodinger_mode, schrodinger_norm, schrodinger_residual
from .sparling_tod import sign_changes, st_killing, st_metric, st_moment_maps, st_potential_identity

__all__ = [
    "heavenly_check", "ladder_check", "legendre_build", "legendre_sd_forms", "schrodinger_mode",
    "schrodinger_norm", "schrodinger_residual", "sign_changes", "st_killing", "st_metric",
    "st_moment_maps", "st_potential_identity",
]
