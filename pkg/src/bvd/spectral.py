"""Periodic grid, FFT transforms, and Fourier-multiplier calculus.

Conventions
-----------
Real fields are sampled on a uniform nx-by-ny grid covering the rectangle
[0, lx) x [0, ly); axis 0 is x, axis 1 is y.  Spectral data is the
half-plane output of a real 2-D FFT (shape nx by ny//2 + 1); wavenumbers
are integer multiples of 2*pi/lx and 2*pi/ly.  On an even grid the Nyquist
row/column has no conjugate partner, so every operator that builds a new
spectrum (derivative, projection, Poisson inverse) zeroes it; this keeps
derivatives real-valued and skew-symmetric.

All the operations here are pure functions of their inputs; Grid, Field
and SpectralField instances are immutable after construction and safe to
share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

TWO_PI = 2.0 * np.pi

# Unit imaginary powers, exact (complex pow would introduce round-off).
_I_POW = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on [0, lx) x [0, ly)."""

    nx: int
    ny: int
    lx: float = TWO_PI
    ly: float = TWO_PI

    def __post_init__(self):
        problems = []
        for name, n in (("nx", self.nx), ("ny", self.ny)):
            if not isinstance(n, (int, np.integer)) or n < 8 or n % 2 != 0:
                problems.append(f"{name}={n!r} must be an even integer >= 8")
        for name, l in (("lx", self.lx), ("ly", self.ly)):
            if not np.isfinite(l) or l <= 0:
                problems.append(f"{name}={l!r} must be finite and positive")
        if problems:
            raise ValueError("; ".join(problems))

    # -- geometry ---------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nx, self.ny)

    @property
    def spectral_shape(self) -> tuple[int, int]:
        return (self.nx, self.ny // 2 + 1)

    @property
    def dx(self) -> float:
        return self.lx / self.nx

    @property
    def dy(self) -> float:
        return self.ly / self.ny

    @property
    def cell_area(self) -> float:
        return self.dx * self.dy

    @property
    def area(self) -> float:
        return self.lx * self.ly

    @cached_property
    def x(self) -> np.ndarray:
        return np.arange(self.nx) * self.dx

    @cached_property
    def y(self) -> np.ndarray:
        return np.arange(self.ny) * self.dy

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Coordinate arrays X, Y of shape (nx, ny)."""
        return np.meshgrid(self.x, self.y, indexing="ij")

    # -- wavenumbers ------------------------------------------------------

    @cached_property
    def kx(self) -> np.ndarray:
        """Physical x-wavenumbers, shape (nx, 1)."""
        modes = np.fft.fftfreq(self.nx) * self.nx
        return (TWO_PI / self.lx) * modes[:, None]

    @cached_property
    def ky(self) -> np.ndarray:
        """Physical y-wavenumbers of the half spectrum, shape (1, ny//2+1)."""
        modes = np.arange(self.ny // 2 + 1, dtype=float)
        return (TWO_PI / self.ly) * modes[None, :]

    @cached_property
    def k2(self) -> np.ndarray:
        return self.kx**2 + self.ky**2

    @cached_property
    def inv_k2(self) -> np.ndarray:
        """1/|k|^2 with the zero mode mapped to 0."""
        k2 = self.k2.copy()
        k2[0, 0] = 1.0
        out = 1.0 / k2
        out[0, 0] = 0.0
        return out

    @cached_property
    def kmag(self) -> np.ndarray:
        return np.sqrt(self.k2)

    @property
    def kmax(self) -> float:
        """Largest representable |k| (corner of the spectral rectangle)."""
        kx_max = (TWO_PI / self.lx) * (self.nx // 2)
        ky_max = (TWO_PI / self.ly) * (self.ny // 2)
        return float(np.hypot(kx_max, ky_max))

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        """2/3-rule mask: True on retained modes (|m| <= n/3 per axis)."""
        mx = np.abs(np.fft.fftfreq(self.nx) * self.nx)[:, None]
        my = np.arange(self.ny // 2 + 1, dtype=float)[None, :]
        return (mx <= self.nx / 3.0) & (my <= self.ny / 3.0)

    @cached_property
    def hermitian_weights(self) -> np.ndarray:
        """Multiplicity of each half-spectrum column in the full spectrum."""
        w = np.full(self.ny // 2 + 1, 2.0)
        w[0] = 1.0
        w[-1] = 1.0
        return w[None, :]


def _zero_nyquist(coeffs: np.ndarray, grid: Grid) -> None:
    coeffs[grid.nx // 2, :] = 0.0
    coeffs[:, grid.ny // 2] = 0.0


@dataclass(frozen=True)
class Field:
    """Real scalar field sampled on a grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != self.grid.shape:
            raise ValueError(
                f"field shape {self.values.shape} does not match grid {self.grid.shape}"
            )
        if not np.isfinite(self.values).all():
            raise ValueError("field contains non-finite values")

    @classmethod
    def zeros(cls, grid: Grid) -> "Field":
        return cls(grid, np.zeros(grid.shape))

    @classmethod
    def from_function(cls, grid: Grid, fn) -> "Field":
        X, Y = grid.mesh()
        return cls(grid, np.asarray(fn(X, Y), dtype=float))

    def __add__(self, other: "Field") -> "Field":
        return Field(self.grid, self.values + other.values)

    def __sub__(self, other: "Field") -> "Field":
        return Field(self.grid, self.values - other.values)

    def __mul__(self, scalar: float) -> "Field":
        return Field(self.grid, self.values * scalar)

    __rmul__ = __mul__


@dataclass(frozen=True)
class SpectralField:
    """Half-plane Fourier coefficients of a real field."""

    grid: Grid
    coeffs: np.ndarray

    def __post_init__(self):
        if self.coeffs.shape != self.grid.spectral_shape:
            raise ValueError(
                f"coefficient shape {self.coeffs.shape} does not match "
                f"grid spectral shape {self.grid.spectral_shape}"
            )


def to_spectral(f: Field) -> SpectralField:
    return SpectralField(f.grid, np.fft.rfft2(f.values))


def to_physical(F: SpectralField) -> Field:
    g = F.grid
    return Field(g, np.fft.irfft2(F.coeffs, s=g.shape))


def derivative(F: SpectralField, axis: str, order: int = 1) -> SpectralField:
    """Spectral derivative along "x" or "y"; Nyquist modes are zeroed."""
    if axis not in ("x", "y"):
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    if order < 1 or int(order) != order:
        raise ValueError(f"order must be a positive integer, got {order!r}")
    g = F.grid
    k = g.kx if axis == "x" else g.ky
    c = F.coeffs * (_I_POW[order % 4] * k**order)
    _zero_nyquist(c, g)
    return SpectralField(g, c)


def dealias(F: SpectralField) -> SpectralField:
    """Zero all modes outside the 2/3 ball (|m_x| > nx/3 or |m_y| > ny/3)."""
    return SpectralField(F.grid, F.coeffs * F.grid.dealias_mask)


def _leray_hat(uh: np.ndarray, vh: np.ndarray, grid: Grid) -> tuple[np.ndarray, np.ndarray]:
    """Project spectral velocity onto divergence-free fields (in place safe)."""
    # div = i(kx u + ky v); subtracting k (k.u)/|k|^2 leaves the mean alone
    # because inv_k2 vanishes at k = 0.
    s = (grid.kx * uh + grid.ky * vh) * grid.inv_k2
    pu = uh - grid.kx * s
    pv = vh - grid.ky * s
    _zero_nyquist(pu, grid)
    _zero_nyquist(pv, grid)
    return pu, pv


def leray_project(u: Field, v: Field) -> tuple[Field, Field]:
    """Remove the gradient part of (u, v); mean modes pass through."""
    if u.grid != v.grid:
        raise ValueError("u and v live on different grids")
    g = u.grid
    uh = np.fft.rfft2(u.values)
    vh = np.fft.rfft2(v.values)
    pu, pv = _leray_hat(uh, vh, g)
    return (
        Field(g, np.fft.irfft2(pu, s=g.shape)),
        Field(g, np.fft.irfft2(pv, s=g.shape)),
    )


def poisson_solve(rhs: Field) -> Field:
    """Mean-zero phi with Lap(phi) = rhs - mean(rhs), by -1/|k|^2 inversion."""
    g = rhs.grid
    c = -np.fft.rfft2(rhs.values) * g.inv_k2
    _zero_nyquist(c, g)
    return Field(g, np.fft.irfft2(c, s=g.shape))


def divergence_max(u: Field, v: Field) -> float:
    """max |u_x + v_y| on the grid, via spectral derivatives."""
    du = derivative(to_spectral(u), "x")
    dv = derivative(to_spectral(v), "y")
    g = u.grid
    d = np.fft.irfft2(du.coeffs + dv.coeffs, s=g.shape)
    return float(np.abs(d).max())
