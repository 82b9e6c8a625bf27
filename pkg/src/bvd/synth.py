"""Synthetic field generators for initial data, ensembles, and stress tests.

Everything is deterministic given an explicit rng (or parameters); the
outputs are Nyquist-free so the spectral operators treat them exactly.
"""

from __future__ import annotations

import numpy as np

from .spectral import Field, Grid, _zero_nyquist
from .norms import lq_norm, sobolev_norm


def random_band_field(
    grid: Grid,
    rng: np.random.Generator,
    k_lo: float = 1.0,
    k_hi: float | None = None,
    slope: float = -2.0,
    mean_zero: bool = True,
) -> Field:
    """Random-phase field with |spectrum| ~ |k|^slope on k_lo <= |k| <= k_hi."""
    if k_hi is None:
        k_hi = grid.kmax / 3.0
    white = rng.standard_normal(grid.shape)
    c = np.fft.rfft2(white)
    kmag = grid.kmag
    envelope = np.zeros_like(kmag)
    band = (kmag >= k_lo) & (kmag <= k_hi)
    envelope[band] = kmag[band] ** slope
    c *= envelope
    if mean_zero:
        c[0, 0] = 0.0
    _zero_nyquist(c, grid)
    return Field(grid, np.fft.irfft2(c, s=grid.shape))


def normalized(f: Field, norm: str = "l2", target: float = 1.0) -> Field:
    """Rescale f so the chosen norm equals target (zero fields pass through)."""
    if norm == "l2":
        n = lq_norm(f, 2)
    elif norm == "h1":
        n = sobolev_norm(f, 1)
    elif norm == "linf":
        n = lq_norm(f, np.inf)
    else:
        raise ValueError(f"unknown norm {norm!r}")
    if n == 0.0:
        return f
    return Field(f.grid, f.values * (target / n))


def solenoidal_noise(
    grid: Grid,
    rng: np.random.Generator,
    k_lo: float = 1.0,
    k_hi: float = 4.0,
    slope: float = -2.0,
    amplitude: float = 1.0,
) -> tuple[Field, Field]:
    """Divergence-free velocity noise from a random stream function."""
    psi = random_band_field(grid, rng, k_lo, k_hi, slope)
    c = np.fft.rfft2(psi.values)
    u = np.fft.irfft2(-1j * grid.ky * c, s=grid.shape)
    v = np.fft.irfft2(1j * grid.kx * c, s=grid.shape)
    scale = max(np.abs(u).max(), np.abs(v).max())
    if scale > 0:
        u *= amplitude / scale
        v *= amplitude / scale
    return Field(grid, u), Field(grid, v)


def bump(
    grid: Grid,
    center: tuple[float, float],
    radii: tuple[float, float],
    amplitude: float = 1.0,
    modulation: tuple[float, float] | None = None,
) -> Field:
    """Smooth bump exp(1 - 1/(1-rho^2)) supported strictly inside its ellipse.

    The profile vanishes with all derivatives at the support boundary, so the
    sampled field is an exactly compactly supported C-infinity function.  An
    optional cosine modulation keeps the support unchanged.
    """
    cx, cy = center
    rx, ry = radii
    if rx <= 0 or ry <= 0:
        raise ValueError("bump radii must be positive")
    X, Y = grid.mesh()
    rho2 = ((X - cx) / rx) ** 2 + ((Y - cy) / ry) ** 2
    vals = np.zeros(grid.shape)
    inside = rho2 < 1.0
    vals[inside] = amplitude * np.exp(1.0 - 1.0 / (1.0 - rho2[inside]))
    if modulation is not None:
        mx, my = modulation
        vals *= np.cos(mx * (X - cx) + my * (Y - cy))
    return Field(grid, vals)


def bump_inside_box(
    grid: Grid,
    rng: np.random.Generator,
    margin_frac: float = 0.12,
    r_frac: tuple[float, float] = (0.06, 0.22),
    modulate: bool = False,
    center: tuple[float, float] | None = None,
    jitter: float = 0.0,
) -> Field:
    """Random bump placed with clearance from the box edge.

    Passing a center (plus optional jitter) groups several bumps around a
    common spot so their supports overlap.
    """
    mx, my = margin_frac * grid.lx, margin_frac * grid.ly
    rx = rng.uniform(*r_frac) * grid.lx
    ry = rng.uniform(*r_frac) * grid.ly
    if center is None:
        cx = rng.uniform(mx + rx, grid.lx - mx - rx)
        cy = rng.uniform(my + ry, grid.ly - my - ry)
    else:
        cx = center[0] + rng.uniform(-jitter, jitter)
        cy = center[1] + rng.uniform(-jitter, jitter)
        cx = float(np.clip(cx, mx + rx, grid.lx - mx - rx))
        cy = float(np.clip(cy, my + ry, grid.ly - my - ry))
    amp = rng.uniform(0.5, 2.0)
    mod = None
    if modulate:
        mod = (rng.uniform(-6, 6), rng.uniform(-6, 6))
    return bump(grid, (cx, cy), (rx, ry), amp, mod)


def wave_packet(
    grid: Grid,
    center: tuple[float, float],
    sigma: float,
    kvec: tuple[float, float],
    amplitude: float = 1.0,
) -> Field:
    """Gaussian envelope times a cosine carrier; tails below round-off for
    sigma a few times smaller than the box."""
    cx, cy = center
    X, Y = grid.mesh()
    env = np.exp(-((X - cx) ** 2 + (Y - cy) ** 2) / (2.0 * sigma**2))
    vals = amplitude * env * np.cos(kvec[0] * (X - cx) + kvec[1] * (Y - cy))
    return Field(grid, vals)


def aligned_band_field(grid: Grid, k_lo: float, k_hi: float, decay: bool = False) -> Field:
    """All-positive spectrum on the band k_lo <= |k| <= k_hi.

    Every mode adds constructively at the origin; spatially this is the
    sharpest peak a field supported in the band can have, which makes it the
    natural near-extremal input for sup-norm, highpass, and shell
    inequalities.  With decay=True the modes carry (1+|k|^2)^(-1) weights,
    the profile that saturates bounds phrased against the H^1 norm.
    """
    c = np.zeros(grid.spectral_shape, dtype=complex)
    mask = (grid.kmag >= k_lo) & (grid.kmag <= k_hi)
    c[mask] = 1.0 / (1.0 + grid.k2[mask]) if decay else 1.0
    c[0, 0] = 0.0
    _zero_nyquist(c, grid)
    return Field(grid, np.fft.irfft2(c, s=grid.shape) * (grid.nx * grid.ny))


def aligned_lowpass_field(grid: Grid, cap: float) -> Field:
    """H^1-critical aligned profile on the ball |k| <= cap."""
    return aligned_band_field(grid, 0.0, cap, decay=True)


def aligned_annulus_field(grid: Grid, k_lo: float, k_hi: float) -> Field:
    """Flat aligned profile on the annulus k_lo <= |k| <= k_hi."""
    return aligned_band_field(grid, k_lo, k_hi, decay=False)


def shell_packet(grid: Grid, rng: np.random.Generator, k_center: float, rel_width: float = 0.125) -> Field:
    """Spatially localized packet with carrier |k| ~ k_center.

    The carrier direction is drawn away from the axes so magnitudes up to the
    spectral corner stay representable.
    """
    angle = rng.uniform(np.pi / 8, 3 * np.pi / 8) * rng.choice([-1.0, 1.0])
    kv = (k_center * np.cos(angle), k_center * np.sin(angle))
    sigma = 1.0 / (rel_width * k_center)
    sigma = min(sigma, 0.12 * min(grid.lx, grid.ly))
    sigma = max(sigma, 3.0 * max(grid.dx, grid.dy))
    cx = rng.uniform(0.3, 0.7) * grid.lx
    cy = rng.uniform(0.3, 0.7) * grid.ly
    return wave_packet(grid, (cx, cy), sigma, kv)


def single_mode(grid: Grid, mx: int, my: int, amplitude: float = 1.0, phase: float = 0.0) -> Field:
    """cos(mx*2pi/lx x + my*2pi/ly y + phase) as a grid field."""
    X, Y = grid.mesh()
    kx = 2 * np.pi * mx / grid.lx
    ky = 2 * np.pi * my / grid.ly
    return Field(grid, amplitude * np.cos(kx * X + ky * Y + phase))
