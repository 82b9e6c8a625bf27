"""Per-snapshot diagnostics records and trajectory-level checks.

Each record carries every tracked functional of one snapshot: Lebesgue norms
of v and theta on the configurable q-grid, the growth ratio
max_r ||v||_{2r}/sqrt(r log r), velocity/pressure bound quantities, theta
dissipation integrands, the combined second-order regularity energy

    ||omega||_H1^2 + ||theta||_H2^2 + ||omega^2 + |grad theta|^2||_2^2,

and the energy budget gap.  Running time integrals (pressure gradient,
vertical velocity gradients, theta dissipation) are accumulated by the
trapezoid rule at the diagnostics cadence, carried in an explicit
Accumulators value so that a restarted run reproduces them bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict

import numpy as np

from .spectral import Field, Grid, _zero_nyquist
from .norms import lq_norm, linf_norm, _spectral_sum_sq
from .solver import State, _pressure_hat

QGRID_DEFAULT = (2.0, 4.0, 8.0, 16.0, 32.0, 64.0)
RGRID_DEFAULT = (2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0, 32.0)


@dataclass(frozen=True)
class Accumulators:
    """Trapezoid state for the running integrals, plus initial-norm anchors."""

    t: float
    gradp2_int: float = 0.0
    grady_uv_int: float = 0.0
    theta_diss2_int: float = 0.0
    theta_diss4_int: float = 0.0
    gradp2: float = 0.0
    grady_uv: float = 0.0
    theta_diss2: float = 0.0
    theta_diss4: float = 0.0
    uv0_l2: float = 0.0
    theta0_l2: float = 0.0
    started: bool = False

    def as_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "Accumulators":
        return cls(**d)


@dataclass(frozen=True)
class DiagnosticsRecord:
    """One time sample of every tracked functional, as an ordered mapping."""

    t: float
    data: dict[str, float]

    def __getitem__(self, key: str) -> float:
        return self.data[key]

    def row(self, columns) -> list[float]:
        return [self.t if c == "t" else self.data[c] for c in columns]


def record_columns(qgrid=QGRID_DEFAULT, rgrid=RGRID_DEFAULT) -> list[str]:
    cols = ["t"]
    cols += [f"v_lq_{_fmt(q)}" for q in qgrid]
    cols += [f"v_l2r_{_fmt(2 * r)}" for r in rgrid]
    cols += ["sup_ratio", "l2_uv", "l4_uv", "v8", "uy2", "vinf", "v_h2"]
    cols += ["p2", "p4", "gradp2", "gradp2_int", "grady_uv_int"]
    cols += [f"theta_lq_{_fmt(q)}" for q in qgrid]
    cols += ["theta_linf", "theta_diss2", "theta_diss4",
             "theta_diss2_int", "theta_diss4_int"]
    cols += ["regularity_energy", "energy_gap", "div_ratio"]
    return cols


def _fmt(q: float) -> str:
    return str(int(q)) if float(q).is_integer() else str(q).replace(".", "p")


COLUMN_NOTES = {
    "t": "sample time",
    "v_lq_*": "L^q norm of the vertical velocity v on the q grid",
    "v_l2r_*": "||v||_{2r} for r on the r grid (growth-envelope inputs)",
    "sup_ratio": "max over the r grid of ||v||_{2r} / sqrt(r log r)",
    "l2_uv": "||(u,v)||_2",
    "l4_uv": "||(u,v)||_4 of the speed, (integral (u^2+v^2)^2)^{1/4}",
    "v8": "||v||_8",
    "uy2": "||u_y||_2",
    "vinf": "refined sup norm of v",
    "v_h2": "||v||_{H^2}",
    "p2": "||p||_2 of the diagnostic pressure",
    "p4": "||p||_4",
    "gradp2": "||grad p||_2^2 at this sample",
    "gradp2_int": "trapezoid integral of ||grad p||_2^2 from the run start",
    "grady_uv_int": "trapezoid integral of ||(u_y, v_y)||_2^2",
    "theta_lq_*": "L^q norms of theta on the q grid",
    "theta_linf": "refined sup norm of theta",
    "theta_diss2": "||theta_y||_2^2",
    "theta_diss4": "integral of theta^2 theta_y^2",
    "theta_diss2_int": "trapezoid integral of ||theta_y||_2^2",
    "theta_diss4_int": "trapezoid integral of integral theta^2 theta_y^2",
    "regularity_energy": "||omega||_H1^2 + ||theta||_H2^2 + ||omega^2+|grad theta|^2||_2^2",
    "energy_gap": "(||(u0,v0)||_2 + t ||theta0||_2)^2 minus "
                  "(||(u,v)||_2^2 + 2 nu integral ||(u_y,v_y)||_2^2); nonnegative",
    "div_ratio": "max|u_x+v_y| / (||u||_H1 + ||v||_H1)",
}


def start_accumulators(state: State) -> Accumulators:
    """Fresh accumulators anchored at the state's time and initial norms."""
    u2 = lq_norm(state.u, 2)
    v2 = lq_norm(state.v, 2)
    return Accumulators(
        t=state.t,
        uv0_l2=float(np.hypot(u2, v2)),
        theta0_l2=lq_norm(state.theta, 2),
    )


def record(
    state: State,
    acc: Accumulators,
    qgrid=QGRID_DEFAULT,
    rgrid=RGRID_DEFAULT,
) -> tuple[DiagnosticsRecord, Accumulators]:
    """Compute one diagnostics record and roll the accumulators forward."""
    g = state.grid
    norm = 1.0 / (g.nx * g.ny)

    uh = np.fft.rfft2(state.u.values)
    vh = np.fft.rfft2(state.v.values)
    th = np.fft.rfft2(state.theta.values)

    data: dict[str, float] = {}

    v_norms: dict[float, float] = {}

    def v_lq(q: float) -> float:
        if q not in v_norms:
            v_norms[q] = lq_norm(state.v, q)
        return v_norms[q]

    for q in qgrid:
        data[f"v_lq_{_fmt(q)}"] = v_lq(q)
    for r in rgrid:
        data[f"v_l2r_{_fmt(2 * r)}"] = v_lq(2.0 * r)
    data["sup_ratio"] = max(
        (v_lq(2.0 * r) / np.sqrt(r * np.log(r)) for r in rgrid), default=0.0
    )

    u2 = np.sqrt(g.area * _spectral_sum_sq(uh, g)) * norm
    v2 = np.sqrt(g.area * _spectral_sum_sq(vh, g)) * norm
    data["l2_uv"] = float(np.hypot(u2, v2))
    speed2 = state.u.values**2 + state.v.values**2
    data["l4_uv"] = float(np.sum(speed2**2) * g.cell_area) ** 0.25
    data["v8"] = v_lq(8.0)
    data["uy2"] = np.sqrt(g.area * _spectral_sum_sq(uh, g, g.ky**2)) * norm
    data["vinf"] = linf_norm(state.v)
    data["v_h2"] = np.sqrt(g.area * _spectral_sum_sq(vh, g, (1.0 + g.k2) ** 2)) * norm

    ph = _pressure_hat(uh, vh, th, state.v.values, g)
    p = Field(g, np.fft.irfft2(ph, s=g.shape))
    data["p2"] = np.sqrt(g.area * _spectral_sum_sq(ph, g)) * norm
    data["p4"] = lq_norm(p, 4)
    gradp2 = g.area * _spectral_sum_sq(ph, g, g.k2) * norm**2
    data["gradp2"] = gradp2

    for q in qgrid:
        data[f"theta_lq_{_fmt(q)}"] = lq_norm(state.theta, q)
    data["theta_linf"] = linf_norm(state.theta)

    t_y = np.fft.irfft2(1j * g.ky * th, s=g.shape)
    t_x = np.fft.irfft2(1j * g.kx * th, s=g.shape)
    diss2 = g.area * _spectral_sum_sq(th, g, g.ky**2) * norm**2
    diss4 = float(np.sum(state.theta.values**2 * t_y**2) * g.cell_area)
    data["theta_diss2"] = diss2
    data["theta_diss4"] = diss4

    grady_uv = g.area * (
        _spectral_sum_sq(uh, g, g.ky**2) + _spectral_sum_sq(vh, g, g.ky**2)
    ) * norm**2

    # combined second-order regularity energy
    wh = 1j * (g.kx * vh - g.ky * uh)
    _zero_nyquist(wh, g)
    omega = np.fft.irfft2(wh, s=g.shape)
    om_h1_sq = g.area * _spectral_sum_sq(wh, g, 1.0 + g.k2) * norm**2
    th_h2_sq = g.area * _spectral_sum_sq(th, g, (1.0 + g.k2) ** 2) * norm**2
    mix = Field(g, omega**2 + t_x**2 + t_y**2)
    data["regularity_energy"] = om_h1_sq + th_h2_sq + lq_norm(mix, 2) ** 2

    # roll the running integrals forward (trapezoid at the sampling cadence)
    if acc.started:
        h = state.t - acc.t
        new = Accumulators(
            t=state.t,
            gradp2_int=acc.gradp2_int + 0.5 * h * (acc.gradp2 + gradp2),
            grady_uv_int=acc.grady_uv_int + 0.5 * h * (acc.grady_uv + grady_uv),
            theta_diss2_int=acc.theta_diss2_int + 0.5 * h * (acc.theta_diss2 + diss2),
            theta_diss4_int=acc.theta_diss4_int + 0.5 * h * (acc.theta_diss4 + diss4),
            gradp2=gradp2,
            grady_uv=grady_uv,
            theta_diss2=diss2,
            theta_diss4=diss4,
            uv0_l2=acc.uv0_l2,
            theta0_l2=acc.theta0_l2,
            started=True,
        )
    else:
        new = Accumulators(
            t=state.t,
            gradp2=gradp2,
            grady_uv=grady_uv,
            theta_diss2=diss2,
            theta_diss4=diss4,
            uv0_l2=acc.uv0_l2,
            theta0_l2=acc.theta0_l2,
            started=True,
        )

    data["gradp2_int"] = new.gradp2_int
    data["grady_uv_int"] = new.grady_uv_int
    data["theta_diss2_int"] = new.theta_diss2_int
    data["theta_diss4_int"] = new.theta_diss4_int

    budget = (new.uv0_l2 + state.t * new.theta0_l2) ** 2
    lhs = data["l2_uv"] ** 2 + 2.0 * state.params.nu * new.grady_uv_int
    data["energy_gap"] = budget - lhs

    data["div_ratio"] = _div_ratio(uh, vh, g)

    ordered = {c: data[c] for c in record_columns(qgrid, rgrid) if c != "t"}
    return DiagnosticsRecord(t=state.t, data=ordered), new


def _div_ratio(uh, vh, g: Grid) -> float:
    d = 1j * (g.kx * uh + g.ky * vh)
    _zero_nyquist(d, g)
    dmax = float(np.abs(np.fft.irfft2(d, s=g.shape)).max())
    norm = 1.0 / (g.nx * g.ny)
    h1 = np.sqrt(g.area * _spectral_sum_sq(uh, g, 1.0 + g.k2)) * norm
    h1 += np.sqrt(g.area * _spectral_sum_sq(vh, g, 1.0 + g.k2)) * norm
    return dmax / h1 if h1 > 0 else dmax


# -- trajectory-level checks -------------------------------------------------


@dataclass(frozen=True)
class GrowthReport:
    """Growth envelope of ||v||_{2r} against sqrt(r log r) along a run."""

    ts: np.ndarray
    b_values: np.ndarray          # per-sample max_r (||v||_2r - ||v0||_2r)/sqrt(r log r)
    envelope: np.ndarray          # running max of b_values
    finite: bool
    envelope_violations: int      # samples with b > envelope + 1e-6

    def summary(self) -> str:
        return (
            f"growth envelope: max B = {self.envelope[-1]:.6g}, "
            f"finite={self.finite}, violations={self.envelope_violations}"
        )


def check_growth_bound(records, rgrid=RGRID_DEFAULT) -> GrowthReport:
    """Empirical growth functional along a trajectory of records."""
    if len(records) < 2:
        raise ValueError("trajectory must contain at least 2 samples")
    ts = np.array([r.t for r in records])
    keys = [f"v_l2r_{_fmt(2 * r)}" for r in rgrid]
    base = np.array([records[0][k] for k in keys])
    weights = np.sqrt([r * np.log(r) for r in rgrid])
    b = np.array([
        max((rec[k] - b0) / w for k, b0, w in zip(keys, base, weights))
        for rec in records
    ])
    env = np.maximum.accumulate(b)
    violations = int(np.sum(b > env + 1e-6))
    return GrowthReport(ts, b, env, bool(np.isfinite(b).all()), violations)


@dataclass(frozen=True)
class SupBoundReport:
    """Trajectory check of the sup-norm interpolation chain.

    Compares the measured ||v||_inf with sup_ratio times the double-log
    factor in ||v||_{H^2}, the factor an interpolation ensemble calibrates.
    """

    ts: np.ndarray
    regularity_energy: np.ndarray
    vinf: np.ndarray
    bound_factor: np.ndarray
    ratios: np.ndarray

    def violations(self, c_max: float) -> int:
        return int(np.sum(self.vinf > c_max * self.bound_factor + 1e-12))

    def max_ratio(self) -> float:
        return float(np.nanmax(self.ratios)) if len(self.ratios) else 0.0


def check_sup_bound(records) -> SupBoundReport:
    """Log the regularity energy and the sup-norm bound chain along a run."""
    ts = np.array([r.t for r in records])
    y = np.array([r["regularity_energy"] for r in records])
    vinf = np.array([r["vinf"] for r in records])
    sup = np.array([r["sup_ratio"] for r in records])
    vh2 = np.array([r["v_h2"] for r in records])
    lf = np.log(np.e + vh2)
    factor = sup * np.sqrt(lf * np.log(lf))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(factor > 0, vinf / factor, np.nan)
    return SupBoundReport(ts, y, vinf, factor, ratios)
