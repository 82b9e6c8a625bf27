"""Pseudo-spectral 2D Boussinesq solver with vertical-only dissipation,
frequency-shell analysis, and an inequality verification harness."""

from .spectral import (
    Grid,
    Field,
    SpectralField,
    to_spectral,
    to_physical,
    derivative,
    dealias,
    leray_project,
    poisson_solve,
)
from .norms import lq_norm, linf_norm, sobolev_norm, sup_ratio
from .lp import ShellSystem, decompose, besov_norm, tl_norm, split_low_high, bernstein_ratio
from .solver import PhysParams, State, StepperConfig, pressure, rhs, step
from .trajectory import Trajectory, run

__all__ = [
    "Grid",
    "Field",
    "SpectralField",
    "to_spectral",
    "to_physical",
    "derivative",
    "dealias",
    "leray_project",
    "poisson_solve",
    "lq_norm",
    "linf_norm",
    "sobolev_norm",
    "sup_ratio",
    "ShellSystem",
    "decompose",
    "besov_norm",
    "tl_norm",
    "split_low_high",
    "bernstein_ratio",
    "PhysParams",
    "State",
    "StepperConfig",
    "pressure",
    "rhs",
    "step",
    "Trajectory",
    "run",
]

__version__ = "0.1.0"
