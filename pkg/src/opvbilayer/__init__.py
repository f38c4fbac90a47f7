"""Bilayer organic solar cell: numerical solver and asymptotic approximations."""

from ._kernels import BACKEND
from .scaling import (PhysicalParams, ScaledParams, build_scaled_params, default_params,
                      default_physical_params, validate)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "PhysicalParams",
    "ScaledParams",
    "build_scaled_params",
    "default_params",
    "default_physical_params",
    "validate",
]
