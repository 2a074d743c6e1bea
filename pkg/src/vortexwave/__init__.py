"""Capillary-gravity solitary waves with submerged vortices.

Solver for the flattened free-boundary system (point vortex and frozen
radial-patch modes), half-plane Poisson machinery, and numerical
verification of the far-field, excess-mass, dipole-moment and
angular-momentum identities for localized-vorticity waves.
"""

from .config import GAMMA2, GAMMA3, Cutoff, GridConfig, PhysicalParams
from .vorticity import (
    ImpulseVector,
    VorticityModel,
    biot_savart_2d,
    biot_savart_3d,
    dipole_far_field,
    moment_norm,
    net_vorticity_3d,
    stream_function_2d,
    vortex_impulse,
)

__all__ = [
    "GAMMA2",
    "GAMMA3",
    "Cutoff",
    "GridConfig",
    "PhysicalParams",
    "ImpulseVector",
    "VorticityModel",
    "biot_savart_2d",
    "biot_savart_3d",
    "dipole_far_field",
    "moment_norm",
    "net_vorticity_3d",
    "stream_function_2d",
    "vortex_impulse",
]

__version__ = "0.1.0"
