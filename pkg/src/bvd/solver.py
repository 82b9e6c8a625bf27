"""Time integration of the 2D Boussinesq system with vertical-only dissipation.

    u_t + u u_x + v u_y = -p_x + nu u_yy
    v_t + u v_x + v v_y = -p_y + nu v_yy + theta
    u_x + v_y = 0
    theta_t + u theta_x + v theta_y = kappa theta_yy

The stepper is a 4-stage explicit Runge-Kutta scheme in integrating-factor
form: vertical diffusion is applied through exact exponential multipliers
exp(-nu k_y^2 h) (exp(-kappa k_y^2 h) for theta) while advection, buoyancy
and the pressure gradient are advanced explicitly with dealiased products.
The divergence constraint is enforced by projecting the velocity tendency;
buoyancy with nonzero mean feeds the k = 0 mode of v, which is evolved, not
suppressed.  Pressure is a diagnostic, recomputed from the current state.

States are stored in physical space; a step transforms in, works on the
half-plane spectra, and transforms back.  Restarting from a checkpointed
state therefore reproduces the continued run bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .spectral import Field, Grid, _leray_hat, _zero_nyquist
from .norms import _spectral_sum_sq


class SolverError(RuntimeError):
    """Base class for failures that terminate a run."""

    kind = "solver"

    def __init__(self, t: float, detail: str):
        self.t = t
        self.detail = detail
        super().__init__(f"{self.kind} at t={t:.6g}: {detail}")


class CflViolation(SolverError):
    kind = "cfl"


class BlowUpSuspected(SolverError):
    kind = "blow-up-suspected"


class IncompressibilityError(SolverError):
    kind = "incompressibility"


@dataclass(frozen=True)
class PhysParams:
    """Viscosity and thermal diffusivity (vertical directions only)."""

    nu: float
    kappa: float

    def __post_init__(self):
        for name, val in (("nu", self.nu), ("kappa", self.kappa)):
            if not np.isfinite(val) or val < 0:
                raise ValueError(f"{name}={val!r} must be finite and >= 0")


@dataclass(frozen=True)
class State:
    """Velocity pair, temperature, time stamp and physical parameters."""

    u: Field
    v: Field
    theta: Field
    t: float
    params: PhysParams

    def __post_init__(self):
        if not (self.u.grid == self.v.grid == self.theta.grid):
            raise ValueError("state fields live on different grids")

    @property
    def grid(self) -> Grid:
        return self.u.grid

    def divergence_ratio(self) -> float:
        """max|u_x + v_y| over (||u||_H1 + ||v||_H1); zero for a zero state."""
        uh = np.fft.rfft2(self.u.values)
        vh = np.fft.rfft2(self.v.values)
        return _div_ratio_hat(uh, vh, self.grid)


@dataclass(frozen=True)
class StepperConfig:
    """Time step, stability limit and dealiasing switch."""

    dt: float
    cfl_limit: float = 0.8
    dealias: bool = True
    scheme: str = "imex-if-rk"

    def __post_init__(self):
        if not np.isfinite(self.dt) or self.dt <= 0:
            raise ValueError(f"dt={self.dt!r} must be positive")
        if self.scheme != "imex-if-rk":
            raise ValueError(f"unknown scheme {self.scheme!r}")


@lru_cache(maxsize=16)
def _exp_factors(grid: Grid, nu: float, kappa: float, dt: float):
    """Integrating factors for half and full substeps, keyed per grid/dt."""
    ky2 = grid.ky**2
    return (
        np.exp(-nu * ky2 * (0.5 * dt)),
        np.exp(-nu * ky2 * dt),
        np.exp(-kappa * ky2 * (0.5 * dt)),
        np.exp(-kappa * ky2 * dt),
    )


def _product_filter(grid: Grid, dealias_on: bool) -> np.ndarray:
    # without the 2/3 mask the Nyquist modes still have to go, or products
    # would feed an unpaired mode
    if dealias_on:
        return grid.dealias_mask
    mask = np.ones(grid.spectral_shape, dtype=bool)
    mask[grid.nx // 2, :] = False
    mask[:, grid.ny // 2] = False
    return mask


def _tendency(uh, vh, th, grid: Grid, mask) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Projected advection + buoyancy tendency; vertical diffusion excluded."""
    ikx, iky = 1j * grid.kx, 1j * grid.ky
    shape = grid.shape
    u = np.fft.irfft2(uh, s=shape)
    v = np.fft.irfft2(vh, s=shape)
    u_x = np.fft.irfft2(ikx * uh, s=shape)
    u_y = np.fft.irfft2(iky * uh, s=shape)
    v_x = np.fft.irfft2(ikx * vh, s=shape)
    v_y = np.fft.irfft2(iky * vh, s=shape)
    t_x = np.fft.irfft2(ikx * th, s=shape)
    t_y = np.fft.irfft2(iky * th, s=shape)

    adv_u = np.fft.rfft2(u * u_x + v * u_y) * mask
    adv_v = np.fft.rfft2(u * v_x + v * v_y) * mask
    adv_t = np.fft.rfft2(u * t_x + v * t_y) * mask

    nu_, nv_ = _leray_hat(-adv_u, th - adv_v, grid)
    return nu_, nv_, -adv_t


def rhs(state: State, config: StepperConfig | None = None) -> tuple[Field, Field, Field]:
    """Tendencies -(u.grad)u - grad p + (0, theta) and -(u.grad)theta.

    Vertical diffusion is handled separately by the integrating factor and is
    not included here.
    """
    g = state.grid
    mask = _product_filter(g, config.dealias if config is not None else True)
    uh = np.fft.rfft2(state.u.values)
    vh = np.fft.rfft2(state.v.values)
    th = np.fft.rfft2(state.theta.values)
    nu_, nv_, nt_ = _tendency(uh, vh, th, g, mask)
    return (
        Field(g, np.fft.irfft2(nu_, s=g.shape)),
        Field(g, np.fft.irfft2(nv_, s=g.shape)),
        Field(g, np.fft.irfft2(nt_, s=g.shape)),
    )


def pressure(state: State) -> Field:
    """Mean-zero pressure from Lap(p) = -2 (v u_y)_x - 2 (v v_y)_y + theta_y,
    with dealiased products."""
    g = state.grid
    uh = np.fft.rfft2(state.u.values)
    vh = np.fft.rfft2(state.v.values)
    th = np.fft.rfft2(state.theta.values)
    return Field(g, np.fft.irfft2(_pressure_hat(uh, vh, th, state.v.values, g), s=g.shape))


def _pressure_hat(uh, vh, th, v_phys, grid: Grid) -> np.ndarray:
    ikx, iky = 1j * grid.kx, 1j * grid.ky
    u_y = np.fft.irfft2(iky * uh, s=grid.shape)
    v_y = np.fft.irfft2(iky * vh, s=grid.shape)
    p1 = np.fft.rfft2(v_phys * u_y) * grid.dealias_mask
    p2 = np.fft.rfft2(v_phys * v_y) * grid.dealias_mask
    rhs_h = -2.0 * ikx * p1 - 2.0 * iky * p2 + iky * th
    ph = -rhs_h * grid.inv_k2
    _zero_nyquist(ph, grid)
    return ph


def _div_ratio_hat(uh, vh, grid: Grid) -> float:
    d = 1j * (grid.kx * uh + grid.ky * vh)
    _zero_nyquist(d, grid)
    dmax = float(np.abs(np.fft.irfft2(d, s=grid.shape)).max())
    norm = 1.0 / (grid.nx * grid.ny)
    h1 = np.sqrt(grid.area * _spectral_sum_sq(uh, grid, 1.0 + grid.k2)) * norm
    h1 += np.sqrt(grid.area * _spectral_sum_sq(vh, grid, 1.0 + grid.k2)) * norm
    return dmax / h1 if h1 > 0 else dmax


def cfl_number(state: State, dt: float) -> float:
    g = state.grid
    return dt * max(
        float(np.abs(state.u.values).max()) / g.dx,
        float(np.abs(state.v.values).max()) / g.dy,
    )


def step(state: State, config: StepperConfig) -> State:
    """One integrating-factor RK4 step; raises on CFL violation or blow-up."""
    g = state.grid
    dt = config.dt

    cfl = cfl_number(state, dt)
    if cfl > config.cfl_limit:
        raise CflViolation(state.t, f"cfl={cfl:.4g} exceeds limit {config.cfl_limit:.4g}")

    mask = _product_filter(g, config.dealias)
    eu_h, eu_f, et_h, et_f = _exp_factors(g, state.params.nu, state.params.kappa, dt)

    uh = np.fft.rfft2(state.u.values)
    vh = np.fft.rfft2(state.v.values)
    th = np.fft.rfft2(state.theta.values)

    # overflow in a diverging run shows up as inf/nan and is reported below
    with np.errstate(over="ignore", invalid="ignore"):
        h2 = 0.5 * dt
        k1 = _tendency(uh, vh, th, g, mask)
        s2 = (eu_h * (uh + h2 * k1[0]), eu_h * (vh + h2 * k1[1]), et_h * (th + h2 * k1[2]))
        k2 = _tendency(*s2, g, mask)
        s3 = (eu_h * uh + h2 * k2[0], eu_h * vh + h2 * k2[1], et_h * th + h2 * k2[2])
        k3 = _tendency(*s3, g, mask)
        s4 = (eu_f * uh + dt * eu_h * k3[0], eu_f * vh + dt * eu_h * k3[1], et_f * th + dt * et_h * k3[2])
        k4 = _tendency(*s4, g, mask)

        w = dt / 6.0
        un = eu_f * uh + w * (eu_f * k1[0] + 2.0 * eu_h * (k2[0] + k3[0]) + k4[0])
        vn = eu_f * vh + w * (eu_f * k1[1] + 2.0 * eu_h * (k2[1] + k3[1]) + k4[1])
        tn = et_f * th + w * (et_f * k1[2] + 2.0 * et_h * (k2[2] + k3[2]) + k4[2])
        un, vn = _leray_hat(un, vn, g)

    t_new = state.t + dt
    if not (np.isfinite(un).all() and np.isfinite(vn).all() and np.isfinite(tn).all()):
        raise BlowUpSuspected(t_new, "non-finite spectral coefficients")

    ratio = _div_ratio_hat(un, vn, g)
    if ratio > 1e-10:
        raise IncompressibilityError(t_new, f"divergence ratio {ratio:.3e}")

    return State(
        u=Field(g, np.fft.irfft2(un, s=g.shape)),
        v=Field(g, np.fft.irfft2(vn, s=g.shape)),
        theta=Field(g, np.fft.irfft2(tn, s=g.shape)),
        t=t_new,
        params=state.params,
    )


def with_time(state: State, t: float) -> State:
    """Relabel the time stamp (used by the driver's exact timebase)."""
    return replace(state, t=t)
