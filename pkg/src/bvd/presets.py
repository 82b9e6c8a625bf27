"""Initial-data presets for the solver.

The system fixes no canonical initial data, so runs are built from seeded
families: an exact shear profile (closed-form solution, used for regression),
a layered temperature profile with small perturbations (buoyancy-driven but
well resolved), and band-limited random fields with a prescribed spectrum
slope.
"""

from __future__ import annotations

import numpy as np

from .spectral import Field, Grid, leray_project
from .solver import PhysParams, State
from .synth import random_band_field, solenoidal_noise


def shear_state(grid: Grid, params: PhysParams, amplitude: float = 1.0) -> State:
    """u = amplitude cos y, v = theta = 0.

    All nonlinear, pressure and buoyancy terms vanish identically on this
    state, so u(t) = amplitude cos(y) exp(-nu t) exactly.
    """
    _, Y = grid.mesh()
    return State(
        u=Field(grid, amplitude * np.cos(Y)),
        v=Field.zeros(grid),
        theta=Field.zeros(grid),
        t=0.0,
        params=params,
    )


def stratified_state(
    grid: Grid,
    params: PhysParams,
    seed: int = 0,
    amplitude: float = 0.25,
    noise_amplitude: float = 0.01,
    velocity_amplitude: float = 0.05,
    layers: int = 2,
) -> State:
    """Layered temperature plus small band-limited noise, weak solenoidal flow.

    Amplitudes default to a regime the 256^2 grid keeps fully resolved out to
    t ~ 2 with nu = kappa = 0.01.
    """
    rng = np.random.default_rng(seed)
    _, Y = grid.mesh()
    layer = amplitude * np.cos(layers * Y)
    noise = random_band_field(grid, rng, 1.0, 4.0, -1.0)
    scale = np.abs(noise.values).max()
    if scale > 0:
        noise = Field(grid, noise.values * (noise_amplitude / scale))
    u, v = solenoidal_noise(grid, rng, 1.0, 4.0, -1.0, velocity_amplitude)
    return State(
        u=u,
        v=v,
        theta=Field(grid, layer + noise.values),
        t=0.0,
        params=params,
    )


def random_state(
    grid: Grid,
    params: PhysParams,
    seed: int = 0,
    amplitude: float = 0.1,
    slope: float = -2.0,
    k_lo: float = 1.0,
    k_hi: float = 8.0,
) -> State:
    """Divergence-free random velocity and random temperature, band limited."""
    rng = np.random.default_rng(seed)
    u, v = solenoidal_noise(grid, rng, k_lo, k_hi, slope, amplitude)
    u, v = leray_project(u, v)
    theta = random_band_field(grid, rng, k_lo, k_hi, slope)
    scale = np.abs(theta.values).max()
    if scale > 0:
        theta = Field(grid, theta.values * (amplitude / scale))
    return State(u=u, v=v, theta=theta, t=0.0, params=params)


PRESETS = {
    "shear": shear_state,
    "stratified": stratified_state,
    "random": random_state,
}
