"""Stress tests of the functional inequalities behind the a priori estimates.

Each check evaluates one inequality on one input: the left-hand side, and the
right-hand side with its unknown constant stripped ("rhs_factor").  The
quotient lhs / rhs_factor is the empirical constant of the trial; ensembles
report its max and spread.  Constant magnitudes are never pass/fail by
themselves, only finiteness and stability under grid refinement are.

Checked inequalities (names describe the content):

* interpolation: ||f||_inf against (max_r ||f||_r / sqrt(r log r)) times
  sqrt(log(e+||f||_{H^s}) loglog(e+||f||_{H^s})), s > 1.
* triple_product: integral |f g h| against
  ||f||_2 ||g||_2^{1-1/q} ||g_y||_2^{1/q} ||h||_{2(q-1)}^{1-1/q} ||h_x||_2^{1/q},
  on smooth compactly supported bumps (sin x with g_y = 0 shows why raw
  periodic fields are excluded).  q = 3 and q = 2 are the classic special
  cases, exposed as presets "thirds" and "halves".
* lowpass_sup: ||lowpass_R f||_inf against sqrt(log R) ||f||_{H^1}.
* highpass_lq: ||highpass_R f||_q against q R^{-2/q} ||f||_{H^1}.
* highpass_stability: ||highpass_R f||_q against ||f||_q.
* bernstein: shell-piece derivative quotients (see lp.bernstein_ratio).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .spectral import Field, Grid, to_spectral, derivative, to_physical
from .norms import lq_norm, linf_norm, sobolev_norm
from .lp import ShellSystem, bernstein_ratio, split_low_high
from .synth import (
    aligned_band_field,
    aligned_lowpass_field,
    bump,
    bump_inside_box,
    normalized,
    random_band_field,
    shell_packet,
    single_mode,
)

RGRID_DEFAULT = (2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0, 32.0)

TRIPLE_PRODUCT_PRESETS = {"thirds": 3.0, "halves": 2.0}


class DegenerateTrial(ValueError):
    """Trial skipped: the inequality is vacuous on this input."""


class TrialRejected(ValueError):
    """Input outside the inequality's hypotheses (e.g. support at the edge)."""


@dataclass(frozen=True)
class LemmaTrial:
    lemma: str
    params: dict = field(default_factory=dict)
    lhs: float = 0.0
    rhs_factor: float = 0.0

    def __post_init__(self):
        if self.lhs > 0 and self.rhs_factor <= 0:
            raise ValueError(f"{self.lemma}: rhs_factor vanished with lhs > 0")

    @property
    def empirical_c(self) -> float:
        if self.lhs == 0.0:
            return 0.0
        return self.lhs / self.rhs_factor

    def params_str(self) -> str:
        return ";".join(f"{k}={v}" for k, v in sorted(self.params.items()))


def log_factor(hs_norm: float) -> float:
    lf = np.log(np.e + hs_norm)
    return float(np.sqrt(lf * np.log(lf)))


def check_interpolation(f: Field, s: float = 2.0, rgrid=RGRID_DEFAULT, **params) -> LemmaTrial:
    """Sup-norm interpolation trial; raises DegenerateTrial on a zero field."""
    if s <= 1:
        raise ValueError(f"s must exceed 1, got {s!r}")
    if not np.any(f.values):
        raise DegenerateTrial("zero field")
    lhs = linf_norm(f)
    ratio = max(lq_norm(f, r) / np.sqrt(r * np.log(r)) for r in rgrid)
    hs = sobolev_norm(f, s)
    return LemmaTrial(
        "interpolation",
        {"s": s, "hs_norm": hs, **params},
        lhs=lhs,
        rhs_factor=ratio * log_factor(hs),
    )


def _support_clear(f: Field, margin_cells: int = 2) -> bool:
    m = margin_cells
    v = f.values
    return (
        np.all(v[:m, :] == 0.0)
        and np.all(v[-m:, :] == 0.0)
        and np.all(v[:, :m] == 0.0)
        and np.all(v[:, -m:] == 0.0)
    )


def check_triple_product(f: Field, g: Field, h: Field, q: float, **params) -> LemmaTrial:
    """Directional triple-product trial on compactly supported bumps."""
    if q < 2:
        raise ValueError(f"q must be >= 2, got {q!r}")
    for name, fld in (("f", f), ("g", g), ("h", h)):
        if not _support_clear(fld):
            raise TrialRejected(f"support of {name} touches the box boundary")
    lhs = float(np.sum(np.abs(f.values * g.values * h.values)) * f.grid.cell_area)
    g_y = to_physical(derivative(to_spectral(g), "y"))
    h_x = to_physical(derivative(to_spectral(h), "x"))
    rhs = (
        lq_norm(f, 2)
        * lq_norm(g, 2) ** (1.0 - 1.0 / q)
        * lq_norm(g_y, 2) ** (1.0 / q)
        * lq_norm(h, 2.0 * (q - 1.0)) ** (1.0 - 1.0 / q)
        * lq_norm(h_x, 2) ** (1.0 / q)
    )
    return LemmaTrial("triple_product", {"q": q, **params}, lhs=lhs, rhs_factor=rhs)


def check_triple_product_preset(f: Field, g: Field, h: Field, preset: str, **params) -> LemmaTrial:
    try:
        q = TRIPLE_PRODUCT_PRESETS[preset]
    except KeyError:
        raise ValueError(f"unknown preset {preset!r}, have {sorted(TRIPLE_PRODUCT_PRESETS)}")
    return check_triple_product(f, g, h, q, preset=preset, **params)


def check_low_high(f: Field, radius: float, q: float, **params) -> tuple[LemmaTrial, LemmaTrial, LemmaTrial]:
    """Low/high frequency trials at one cutoff radius.

    Returns (lowpass_sup, highpass_lq, highpass_stability) trials.  The
    sqrt(log R) factor needs R comfortably above e, hence R >= 4.
    """
    if radius < 4:
        raise ValueError(f"radius must be >= 4, got {radius!r}")
    if not 2 <= q < np.inf:
        raise ValueError(f"q must be in [2, inf), got {q!r}")
    low, high = split_low_high(f, radius)
    h1 = sobolev_norm(f, 1)
    fq = lq_norm(f, q)
    hq = lq_norm(high, q)
    base = {"R": radius, "q": q, **params}
    return (
        LemmaTrial("lowpass_sup", base, lhs=linf_norm(low),
                   rhs_factor=float(np.sqrt(np.log(radius))) * h1),
        LemmaTrial("highpass_lq", base, lhs=hq,
                   rhs_factor=q * radius ** (-2.0 / q) * h1),
        LemmaTrial("highpass_stability", base, lhs=hq, rhs_factor=fq),
    )


# -- ensembles ---------------------------------------------------------------


def interpolation_field(grid: Grid, index: int, rng: np.random.Generator) -> tuple[Field, str]:
    """Deterministic mixed family: oscillations, packets, aligned lowpass,
    bumps wide and narrow, random bands.

    The narrow members concentrate sup norm on a small support, which is
    where the inequality is closest to sharp; including them keeps the
    ensemble constant an honest calibration for trajectory checks.
    """
    sysj = ShellSystem(grid).j_max
    kind = index % 6
    if kind == 0:
        m = 2 ** (index // 6 % (sysj + 1))
        return single_mode(grid, m, 0), f"mode_{m}"
    if kind == 1:
        return aligned_lowpass_field(grid, 2.0 ** (2 + index // 6 % max(1, sysj - 1))), "aligned"
    if kind == 2:
        k = 2.0 ** (2 + index // 6 % max(1, sysj - 2))
        return shell_packet(grid, rng, k), f"packet_{int(k)}"
    if kind == 3:
        return bump_inside_box(grid, rng, modulate=bool(index % 2)), "bump"
    if kind == 4:
        return bump_inside_box(grid, rng, r_frac=(0.015, 0.05)), "narrow_bump"
    slope = (-2.5, -1.5, -1.0)[index // 6 % 3]
    return random_band_field(grid, rng, 1.0, grid.kmax / 2.5, slope), f"random{slope}"


def interpolation_ensemble(
    grid: Grid,
    n_trials: int,
    s: float = 2.0,
    seed: int = 0,
    rgrid=RGRID_DEFAULT,
    hs_floor: float = 10.0,
) -> tuple[list[LemmaTrial], int]:
    """Mixed-family trials; fields are scaled up to keep ||f||_{H^s} away from
    the degenerate loglog range.  Returns (trials, number rescaled)."""
    rng = np.random.default_rng(seed)
    trials = []
    rescaled = 0
    for i in range(n_trials):
        f, kind = interpolation_field(grid, i, rng)
        hs = sobolev_norm(f, s)
        if hs == 0.0:
            continue
        if hs < hs_floor:
            f = Field(grid, f.values * (hs_floor / hs))
            rescaled += 1
        trials.append(check_interpolation(f, s, rgrid, kind=kind, trial=i))
    return trials, rescaled


def oscillation_sweep(grid: Grid, s: float = 2.0, rgrid=RGRID_DEFAULT) -> list[LemmaTrial]:
    """Pure-mode trials cos(2^m x) up to the grid's dyadic ceiling."""
    out = []
    for m in range(ShellSystem(grid).j_max + 1):
        f = single_mode(grid, 2**m, 0)
        out.append(check_interpolation(f, s, rgrid, kind=f"mode_{2**m}", trial=m))
    return out


def triple_bumps(grid: Grid, seed: int, modulate: bool = False) -> tuple[Field, Field, Field]:
    """Three bumps jittered around a common spot so their supports overlap."""
    rng = np.random.default_rng(seed)
    cx = rng.uniform(0.38, 0.62) * grid.lx
    cy = rng.uniform(0.38, 0.62) * grid.ly
    jitter = 0.05 * min(grid.lx, grid.ly)
    return (
        bump_inside_box(grid, rng, modulate=modulate, center=(cx, cy), jitter=jitter),
        bump_inside_box(grid, rng, modulate=False, center=(cx, cy), jitter=jitter),
        bump_inside_box(grid, rng, modulate=modulate, center=(cx, cy), jitter=jitter),
    )


def triple_ensemble(grid: Grid, n_trials: int, qs=(2.0, 3.0, 4.0, 8.0), seed: int = 0) -> list[LemmaTrial]:
    trials = []
    for i in range(n_trials):
        f, g, h = triple_bumps(grid, seed + i, modulate=(i % 4 == 3))
        for q in qs:
            trials.append(check_triple_product(f, g, h, q, trial=i))
    return trials


def triple_degradation(grid: Grid, widths, q: float = 3.0, seed: int = 0) -> list[LemmaTrial]:
    """Stretch g in y so g_y -> 0 within the bump class; the empirical
    constant should grow, showing the sharpness of the ||g_y|| dependence.
    Recorded only, never bounded."""
    center = (grid.lx / 2, grid.ly / 2)
    f = bump(grid, center, (0.12 * grid.lx, 0.12 * grid.ly), 1.0)
    h = bump(grid, center, (0.15 * grid.lx, 0.1 * grid.ly), 1.0)
    out = []
    for w in widths:
        g = bump(grid, center, (0.15 * grid.lx, w * grid.ly), 1.0)
        out.append(check_triple_product(f, g, h, q, width=w))
    return out


def lowhigh_field(grid: Grid, index: int, radii, rng: np.random.Generator) -> tuple[Field, str, bool]:
    """Field family tailored to exercise every cutoff radius in the sweep.

    The highpass members are self-similar across the radius sweep (scaled
    copies of the same spectral shape, all representable on the grid), so
    the per-radius ensemble maxima stay comparable.  Aligned lowpass fields
    nearly saturate the sup bound at their cap but are broadband below it,
    so they feed only the lowpass trial (third return value False).
    """
    radius = radii[(index // 5) % len(radii)]
    kind = index % 5
    if kind == 0:
        return normalized(aligned_lowpass_field(grid, radius), "h1"), f"aligned_{int(radius)}", False
    if kind == 1:
        k_hi = min(2.0 * radius, 0.97 * grid.kmax)
        f = aligned_band_field(grid, 1.02 * radius, k_hi, decay=True)
        return normalized(f, "h1"), f"tail_decay_{int(radius)}", True
    if kind == 2:
        k_hi = min(1.6 * radius, 0.97 * grid.kmax)
        f = aligned_band_field(grid, 1.02 * radius, k_hi, decay=False)
        return normalized(f, "h1"), f"annulus_{int(radius)}", True
    if kind == 3:
        return normalized(
            random_band_field(grid, rng, 1.0, 0.95 * grid.kmax, -1.0), "h1"
        ), "broadband", True
    return normalized(
        random_band_field(grid, rng, max(1.0, 0.8 * radius), 0.95 * grid.kmax, -2.0), "h1"
    ), f"tail_{int(radius)}", True


def lowhigh_ensemble(
    grid: Grid,
    n_trials: int,
    radii=(4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0),
    qs=(2.0, 4.0, 8.0, 16.0),
    seed: int = 0,
) -> list[LemmaTrial]:
    """Sweep the three low/high trials over an ensemble and all radii.

    The per-field spectrum is reused across the radius sweep, which is what
    makes the full acceptance-sized ensemble affordable.
    """
    rng = np.random.default_rng(seed)
    trials = []
    radii = [r for r in radii if r < grid.kmax]
    g = grid
    for i in range(n_trials):
        f, kind, use_high = lowhigh_field(grid, i, radii, rng)
        F = np.fft.rfft2(f.values)
        h1 = sobolev_norm(f, 1)
        fq = {q: lq_norm(f, q) for q in qs} if use_high else {}
        for radius in radii:
            low_vals = np.fft.irfft2(F * (g.kmag <= radius), s=g.shape)
            base = {"R": radius, "kind": kind, "trial": i}
            trials.append(
                LemmaTrial("lowpass_sup", base,
                           lhs=linf_norm(Field(g, low_vals), band_limit=radius),
                           rhs_factor=float(np.sqrt(np.log(radius))) * h1)
            )
            if not use_high:
                continue
            high = Field(g, f.values - low_vals)
            for q in qs:
                hq = lq_norm(high, q)
                p = {"q": q, **base}
                trials.append(
                    LemmaTrial("highpass_lq", p, lhs=hq,
                               rhs_factor=q * radius ** (-2.0 / q) * h1)
                )
                trials.append(LemmaTrial("highpass_stability", p, lhs=hq, rhs_factor=fq[q]))
    return trials


def bernstein_sweep(
    grid: Grid,
    n_trials: int,
    combos=((0.5, 2.0, np.inf), (1.0, 2.0, 2.0), (0.5, 2.0, 4.0), (0.0, 2.0, np.inf)),
    seed: int = 0,
) -> list[LemmaTrial]:
    """Shell-derivative quotients over j in [2, j_max-2], mixed field family."""
    system = ShellSystem(grid)
    rng = np.random.default_rng(seed)
    js = range(2, system.j_max - 1)
    trials = []
    for i in range(n_trials):
        which = i % 3
        if which == 0:
            f = random_band_field(grid, rng, 1.0, 0.95 * grid.kmax, -1.0)
            kind = "random"
        elif which == 1:
            j = list(js)[i // 3 % len(list(js))]
            f = shell_packet(grid, rng, 1.5 * 2.0**j)
            kind = f"packet_j{j}"
        else:
            f = aligned_lowpass_field(grid, 0.95 * grid.kmax)
            kind = "aligned"
        for j in js:
            for alpha, p, q in combos:
                ratio = bernstein_ratio(f, j, p, q, alpha, system)
                if ratio == 0.0:
                    continue
                trials.append(
                    LemmaTrial(
                        "bernstein",
                        {"j": j, "alpha": alpha, "p": p, "q": "inf" if q == np.inf else q,
                         "kind": kind, "trial": i},
                        lhs=ratio,
                        rhs_factor=1.0,
                    )
                )
    return trials


def ensemble_stats(trials: list[LemmaTrial]) -> dict[str, float]:
    """Max and 95th percentile of the empirical constants of an ensemble."""
    cs = np.array([t.empirical_c for t in trials if t.lhs > 0])
    if len(cs) == 0:
        return {"n": 0, "max": 0.0, "p95": 0.0}
    return {
        "n": int(len(cs)),
        "max": float(cs.max()),
        "p95": float(np.percentile(cs, 95)),
    }
